#include "hdgres/study.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hdgres/problems.hpp"

namespace hdgres {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad value for key '" + key + "'");
  }
  if (pos != value.size()) throw std::invalid_argument("config: bad value for key '" + key + "'");
  return v;
}

long parse_long(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  if (v != std::floor(v)) throw std::invalid_argument("config: bad value for key '" + key + "'");
  return static_cast<long>(v);
}

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

HdgConfig StudyConfig::hdg() const {
  HdgConfig config;
  config.degree = degree;
  config.tau_mode = tau_mode;
  config.tau_value = tau_value;
  return config;
}

void StudyConfig::validate() const {
  if (problem != "plane_wave" && problem != "lshape_singular")
    throw std::invalid_argument("config: bad value for key 'problem'");
  if (omega <= 0.0) throw std::invalid_argument("config: bad value for key 'omega'");
  if (degree < 0 || degree > 5) throw std::invalid_argument("config: bad value for key 'degree'");
  if (tau_mode == HdgConfig::TauMode::constant && tau_value <= 0.0)
    throw std::invalid_argument("config: bad value for key 'tau'");
  if (refinement != "uniform" && refinement != "adaptive")
    throw std::invalid_argument("config: bad value for key 'refinement'");
  if (marking.theta <= 0.0 || marking.theta >= 1.0)
    throw std::invalid_argument("config: bad value for key 'theta'");
  if (max_levels < 1) throw std::invalid_argument("config: bad value for key 'max_levels'");
  if (max_elements < 1) throw std::invalid_argument("config: bad value for key 'max_elements'");
  if (initial_n < 1) throw std::invalid_argument("config: bad value for key 'initial_n'");
  if (outdir.empty()) throw std::invalid_argument("config: bad value for key 'outdir'");
}

StudyConfig parse_config(std::istream& in) {
  StudyConfig config;
  bool have_problem = false, have_omega = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: missing '=' on line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw std::invalid_argument("config: empty value for key '" + key + "'");

    if (key == "problem") {
      config.problem = value;
      have_problem = true;
    } else if (key == "omega") {
      config.omega = parse_double(key, value);
      have_omega = true;
    } else if (key == "degree") {
      config.degree = static_cast<int>(parse_long(key, value));
    } else if (key == "tau") {
      if (value == "omega") {
        config.tau_mode = HdgConfig::TauMode::omega;
      } else {
        config.tau_mode = HdgConfig::TauMode::constant;
        config.tau_value = parse_double(key, value);
      }
    } else if (key == "refinement") {
      config.refinement = value;
    } else if (key == "theta") {
      config.marking.theta = parse_double(key, value);
    } else if (key == "marking") {
      if (value == "bulk_squared")
        config.marking.strategy = MarkingConfig::Strategy::bulk_squared;
      else if (value == "paper_literal")
        config.marking.strategy = MarkingConfig::Strategy::paper_literal;
      else
        throw std::invalid_argument("config: bad value for key 'marking'");
    } else if (key == "max_levels") {
      config.max_levels = static_cast<int>(parse_long(key, value));
    } else if (key == "max_elements") {
      config.max_elements = parse_long(key, value);
    } else if (key == "outdir") {
      config.outdir = value;
    } else if (key == "initial_n") {
      config.initial_n = static_cast<int>(parse_long(key, value));
    } else if (key == "seed") {
      config.seed = static_cast<unsigned>(parse_long(key, value));
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  if (!have_problem) throw std::invalid_argument("config: missing key 'problem'");
  if (!have_omega) throw std::invalid_argument("config: missing key 'omega'");
  config.validate();
  return config;
}

StudyConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  return parse_config(in);
}

void write_csv(const std::vector<StudyRecord>& records, std::ostream& out) {
  out << "level,nel,skeleton_unknowns,h_max,err_u_l2,err_nu_l2,err_grad_nu,"
         "err_q_l2,triple,eta,effectivity,wall_time_s\n";
  for (const StudyRecord& r : records) {
    out << r.level << ',' << r.nel << ',' << r.skeleton_unknowns << ','
        << format17(r.h_max) << ',' << format17(r.err_u_l2) << ','
        << format17(r.err_nu_l2) << ',' << format17(r.err_grad_nu) << ','
        << format17(r.err_q_l2) << ',' << format17(r.triple) << ','
        << format17(r.eta) << ',' << format17(r.effectivity) << ','
        << format17(r.wall_time_s) << '\n';
  }
}

std::vector<StudyRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: missing header");
  std::vector<StudyRecord> records;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 12) throw std::runtime_error("csv: bad row");
    StudyRecord r;
    r.level = std::stoi(cells[0]);
    r.nel = std::stol(cells[1]);
    r.skeleton_unknowns = std::stol(cells[2]);
    r.h_max = std::stod(cells[3]);
    r.err_u_l2 = std::stod(cells[4]);
    r.err_nu_l2 = std::stod(cells[5]);
    r.err_grad_nu = std::stod(cells[6]);
    r.err_q_l2 = std::stod(cells[7]);
    r.triple = std::stod(cells[8]);
    r.eta = std::stod(cells[9]);
    r.effectivity = std::stod(cells[10]);
    r.wall_time_s = std::stod(cells[11]);
    records.push_back(r);
  }
  return records;
}

double fit_rate(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("fit_rate: need at least two matching points");
  const std::size_t m = std::min<std::size_t>(4, xs.size());
  const std::size_t begin = xs.size() - m;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = begin; i < xs.size(); ++i) {
    if (xs[i] <= 0.0 || ys[i] <= 0.0)
      throw std::invalid_argument("fit_rate: points must be positive");
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(m);
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_rate: degenerate abscissae");
  return (n * sxy - sx * sy) / denom;
}

std::vector<StudyRecord> run_study(const StudyConfig& config) {
  config.validate();
  const ProblemSpec problem = make_problem(config.problem, config.omega);
  const Mesh initial = config.problem == "plane_wave"
                           ? generate_unit_square(config.initial_n)
                           : generate_l_shape(config.initial_n);

  std::filesystem::create_directories(config.outdir);
  const StopRule stop{config.max_levels, config.max_elements};
  const AmrResult result =
      config.refinement == "uniform"
          ? uniform_loop(initial, problem, config.hdg(), stop)
          : amr_loop(initial, problem, config.hdg(), config.marking, stop);

  {
    std::ofstream csv(config.outdir + "/study.csv");
    if (!csv) throw std::runtime_error("cannot write study.csv in " + config.outdir);
    write_csv(result.records, csv);
  }
  write_convergence_svg(result.records, config.outdir + "/convergence.svg");
  write_effectivity_svg(result.records, config.outdir + "/effectivity.svg");
  if (result.aborted) throw std::runtime_error("study aborted: solver failure (partial CSV flushed)");
  return result.records;
}

void write_solution(const HdgSolution& sol, std::ostream& out) {
  const Mesh& mesh = *sol.mesh;
  out << "HDGSOL " << sol.degree << ' ' << mesh.n_triangles() << ' ' << mesh.n_faces()
      << '\n';
  auto emit = [&out](const Eigen::VectorXcd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (i) out << ' ';
      out << format17(v(i).real()) << ' ' << format17(v(i).imag());
    }
    out << '\n';
  };
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    emit(sol.q[t]);
    emit(sol.u[t]);
  }
  for (int f = 0; f < mesh.n_faces(); ++f) emit(sol.uhat[f]);
}

void read_solution(std::istream& in, const Mesh& mesh, HdgSolution& sol) {
  std::string magic;
  int degree = 0, nel = 0, nfaces = 0;
  if (!(in >> magic >> degree >> nel >> nfaces) || magic != "HDGSOL")
    throw std::runtime_error("solution file: bad header");
  if (nel != mesh.n_triangles() || nfaces != mesh.n_faces())
    throw std::runtime_error("solution file: size mismatch with mesh");
  const int nk = (degree + 1) * (degree + 2) / 2;
  sol.degree = degree;
  sol.mesh = &mesh;
  sol.q.assign(nel, Eigen::VectorXcd(2 * nk));
  sol.u.assign(nel, Eigen::VectorXcd(nk));
  sol.uhat.assign(nfaces, Eigen::VectorXcd(degree + 1));
  auto slurp = [&in](Eigen::VectorXcd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im)) throw std::runtime_error("solution file: truncated");
      v(i) = Complex{re, im};
    }
  };
  for (int t = 0; t < nel; ++t) {
    slurp(sol.q[t]);
    slurp(sol.u[t]);
  }
  for (int f = 0; f < nfaces; ++f) slurp(sol.uhat[f]);
}

}  // namespace hdgres
