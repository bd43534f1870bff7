#include "hdgres/adaptivity.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hdgres/postprocess.hpp"

namespace hdgres {

std::vector<int> doerfler_mark(const std::vector<double>& etas, const MarkingConfig& config) {
  if (config.theta <= 0.0 || config.theta >= 1.0)
    throw std::invalid_argument("marking: theta must lie in (0,1)");
  if (etas.empty()) throw std::invalid_argument("marking: empty estimator vector");
  for (double e : etas)
    if (!(e >= 0.0)) throw std::invalid_argument("marking: negative estimator value");

  double total_sq = 0.0;
  for (double e : etas) total_sq += e * e;
  if (total_sq == 0.0) throw std::invalid_argument("estimator identically zero");

  std::vector<int> order(etas.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (etas[a] != etas[b]) return etas[a] > etas[b];
    return a < b;
  });

  std::vector<int> marked;
  if (config.strategy == MarkingConfig::Strategy::bulk_squared) {
    double acc = 0.0;
    for (int idx : order) {
      marked.push_back(idx);
      acc += etas[idx] * etas[idx];
      if (acc >= config.theta * total_sq) break;
    }
  } else {
    const double bound = config.theta * std::sqrt(total_sq);
    double acc = 0.0;
    for (int idx : order) {
      acc += etas[idx];
      if (acc > bound && !marked.empty()) break;
      marked.push_back(idx);
      if (acc > bound) break;  // at-least-one rule
    }
  }
  std::sort(marked.begin(), marked.end());
  return marked;
}

namespace {

StudyRecord make_record(int level, const Mesh& mesh, const ProblemSpec& problem,
                        const HdgSolution& hdg, const PostSolution& post,
                        const EstimateField& field, double seconds) {
  StudyRecord rec;
  rec.level = level;
  rec.nel = mesh.n_triangles();
  rec.skeleton_unknowns = static_cast<long>(mesh.n_faces()) * (hdg.degree + 1);
  rec.h_max = mesh_stats(mesh).h_max;
  rec.eta = field.eta_global;
  rec.wall_time_s = seconds;
  if (problem.has_exact) {
    const ErrorReport err = error_norms(mesh, problem, hdg, post, field.eta_global);
    rec.err_u_l2 = err.err_u_l2;
    rec.err_nu_l2 = err.err_nu_l2;
    rec.err_grad_nu = err.err_grad_nu;
    rec.err_q_l2 = err.err_q_l2;
    rec.triple = err.triple;
    rec.effectivity = err.effectivity;
  }
  return rec;
}

template <typename RefineFn>
AmrResult run_loop(const Mesh& initial, const ProblemSpec& problem, const HdgConfig& config,
                   const StopRule& stop, RefineFn refine) {
  AmrResult result;
  Mesh mesh = initial;
  for (int level = 0;; ++level) {
    const auto t0 = std::chrono::steady_clock::now();
    HdgSolution hdg;
    PostSolution post;
    EstimateField field;
    try {
      hdg = solve_hdg(mesh, problem, config);
      post = postprocess_all(mesh, hdg);
      field = estimate_all(mesh, hdg, post);
    } catch (const std::runtime_error&) {
      result.aborted = true;
      result.final_mesh = std::move(mesh);
      return result;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.records.push_back(make_record(level, mesh, problem, hdg, post, field, seconds));

    if (level + 1 >= stop.max_levels || mesh.n_triangles() >= stop.max_elements) break;
    Mesh next = refine(mesh, field);
    if (next.n_triangles() == mesh.n_triangles()) break;  // nothing refined
    mesh = std::move(next);
  }
  result.final_mesh = std::move(mesh);
  return result;
}

}  // namespace

AmrResult amr_loop(const Mesh& initial, const ProblemSpec& problem, const HdgConfig& config,
                   const MarkingConfig& marking, const StopRule& stop) {
  return run_loop(initial, problem, config, stop,
                  [&marking](const Mesh& mesh, const EstimateField& field) {
                    const std::vector<int> marked = doerfler_mark(field.eta, marking);
                    return bisect(mesh, marked);
                  });
}

AmrResult uniform_loop(const Mesh& initial, const ProblemSpec& problem,
                       const HdgConfig& config, const StopRule& stop) {
  return run_loop(initial, problem, config, stop,
                  [](const Mesh& mesh, const EstimateField&) {
                    std::vector<int> all(mesh.n_triangles());
                    std::iota(all.begin(), all.end(), 0);
                    Mesh once = bisect(mesh, all);
                    all.resize(once.n_triangles());
                    std::iota(all.begin(), all.end(), 0);
                    return bisect(once, all);
                  });
}

}  // namespace hdgres
