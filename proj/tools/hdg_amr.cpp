#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "hdgres/estimator.hpp"
#include "hdgres/postprocess.hpp"
#include "hdgres/study.hpp"

namespace {

int run_solve(const std::string& config_path) {
  using namespace hdgres;
  const StudyConfig config = parse_config_file(config_path);
  const ProblemSpec problem = make_problem(config.problem, config.omega);
  const Mesh mesh = config.problem == "plane_wave" ? generate_unit_square(config.initial_n)
                                                   : generate_l_shape(config.initial_n);
  const HdgSolution sol = solve_hdg(mesh, problem, config.hdg());
  const PostSolution post = postprocess_all(mesh, sol);
  const EstimateField field = estimate_all(mesh, sol, post);

  std::filesystem::create_directories(config.outdir);
  write_mesh_file(mesh, config.outdir + "/mesh.txt");
  std::ofstream out(config.outdir + "/solution.txt");
  if (!out) throw std::runtime_error("cannot write solution.txt in " + config.outdir);
  write_solution(sol, out);

  std::cout << "problem " << config.problem << "  omega " << config.omega << "  degree "
            << config.degree << '\n'
            << "elements " << mesh.n_triangles() << "  skeleton unknowns "
            << static_cast<long>(mesh.n_faces()) * (config.degree + 1) << '\n'
            << "estimator eta = " << field.eta_global << '\n';
  if (problem.has_exact) {
    const ErrorReport err = error_norms(mesh, problem, sol, post, field.eta_global);
    std::cout << "L2 error of u_h  = " << err.err_u_l2 << '\n'
              << "L2 error of nu_h = " << err.err_nu_l2 << '\n'
              << "triple-norm error = " << err.triple << '\n'
              << "effectivity = " << err.effectivity << '\n';
  }
  std::cout << "wrote " << config.outdir << "/mesh.txt and solution.txt\n";
  return 0;
}

int run_study_cmd(const std::string& config_path) {
  using namespace hdgres;
  const StudyConfig config = parse_config_file(config_path);
  const std::vector<StudyRecord> records = run_study(config);
  std::cout << "level      Nel      h_max        ||u-nu||        eta     effectivity\n";
  for (const StudyRecord& r : records) {
    std::printf("%5d %8ld %10.4e %14.6e %10.4e %10.4f\n", r.level, r.nel, r.h_max,
                r.err_nu_l2, r.eta, r.effectivity);
  }
  std::cout << "wrote " << config.outdir << "/study.csv, convergence.svg, effectivity.svg\n";
  return 0;
}

int run_mesh_info(const std::string& mesh_path) {
  using namespace hdgres;
  const Mesh mesh = read_mesh_file(mesh_path);
  mesh.validate();
  const MeshStats stats = mesh_stats(mesh);
  int boundary = 0;
  for (const Face& f : mesh.faces)
    if (f.kind == FaceKind::boundary) ++boundary;
  std::cout << "vertices  " << mesh.n_vertices() << '\n'
            << "triangles " << stats.n_elements << '\n'
            << "faces     " << mesh.n_faces() << " (" << boundary << " boundary)\n"
            << "area      " << mesh.total_area() << '\n'
            << "boundary length " << mesh.boundary_length() << '\n'
            << "h_max     " << stats.h_max << '\n'
            << "min angle " << stats.min_angle << " rad\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive HDG solver for the 2D Helmholtz equation"};
  app.require_subcommand(1);

  std::string solve_config, study_config, mesh_path;
  CLI::App* solve = app.add_subcommand("solve", "solve once on the initial mesh");
  solve->add_option("--config", solve_config, "study configuration file")->required();
  CLI::App* study = app.add_subcommand("study", "run a refinement study");
  study->add_option("--config", study_config, "study configuration file")->required();
  CLI::App* info = app.add_subcommand("mesh-info", "print mesh statistics");
  info->add_option("meshfile", mesh_path, "mesh file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (solve->parsed()) return run_solve(solve_config);
    if (study->parsed()) return run_study_cmd(study_config);
    if (info->parsed()) return run_mesh_info(mesh_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
