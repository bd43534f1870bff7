#ifndef HDGRES_ADAPTIVITY_HPP
#define HDGRES_ADAPTIVITY_HPP

#include <vector>

#include "hdgres/estimator.hpp"
#include "hdgres/hdg.hpp"
#include "hdgres/mesh.hpp"
#include "hdgres/problems.hpp"

namespace hdgres {

struct MarkingConfig {
  enum class Strategy { bulk_squared, paper_literal } strategy = Strategy::bulk_squared;
  double theta = 0.5;  // in (0,1)
};

// Doerfler marking. bulk_squared: smallest prefix (descending eta, ties by
// ascending index) with sum of squares >= theta * total squares.
// paper_literal: largest prefix whose cumulative plain sum stays <= theta *
// global eta, marking at least one element. Throws std::invalid_argument
// ("estimator identically zero") when every indicator vanishes.
std::vector<int> doerfler_mark(const std::vector<double>& etas, const MarkingConfig& config);

struct StopRule {
  int max_levels = 12;
  long max_elements = 200000;
};

/// One refinement level of a study.
struct StudyRecord {
  int level = 0;
  long nel = 0;
  long skeleton_unknowns = 0;
  double h_max = 0.0;
  double err_u_l2 = 0.0;
  double err_nu_l2 = 0.0;
  double err_grad_nu = 0.0;
  double err_q_l2 = 0.0;
  double triple = 0.0;
  double eta = 0.0;
  double effectivity = 0.0;
  double wall_time_s = 0.0;
};

struct AmrResult {
  std::vector<StudyRecord> records;
  Mesh final_mesh;
  bool aborted = false;  // solver failure; records hold completed levels
};

// SOLVE -> ESTIMATE -> MARK -> REFINE until the stop rule triggers. Each
// level appends one StudyRecord (error norms only when the problem carries
// an exact solution).
AmrResult amr_loop(const Mesh& initial, const ProblemSpec& problem, const HdgConfig& config,
                   const MarkingConfig& marking, const StopRule& stop);

// Same driver with uniform refinement: every level marks all elements and
// bisects twice, halving every diameter and quadrupling the element count.
AmrResult uniform_loop(const Mesh& initial, const ProblemSpec& problem,
                       const HdgConfig& config, const StopRule& stop);

}  // namespace hdgres

#endif  // HDGRES_ADAPTIVITY_HPP
