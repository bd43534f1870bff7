#ifndef HDGRES_STUDY_HPP
#define HDGRES_STUDY_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "hdgres/adaptivity.hpp"
#include "hdgres/hdg.hpp"

namespace hdgres {

/// Study configuration, parsed from a flat `key = value` text file with the
/// keys problem, omega, degree, tau, refinement, theta, marking, max_levels,
/// max_elements, outdir (plus optional initial_n and seed). Unknown keys and
/// malformed values are rejected naming the offending key.
struct StudyConfig {
  std::string problem;  // plane_wave | lshape_singular
  double omega = 0.0;
  int degree = 1;
  HdgConfig::TauMode tau_mode = HdgConfig::TauMode::omega;
  double tau_value = 0.0;
  std::string refinement = "adaptive";  // uniform | adaptive
  MarkingConfig marking;
  int max_levels = 12;
  long max_elements = 200000;
  std::string outdir = ".";
  int initial_n = 4;
  unsigned seed = 0;  // property tests only

  HdgConfig hdg() const;
  void validate() const;
};

StudyConfig parse_config(std::istream& in);
StudyConfig parse_config_file(const std::string& path);

// Runs the configured study and writes outdir/study.csv plus the two SVG
// charts (error/estimator vs sqrt(Nel), effectivity vs Nel). On solver
// failure the partial CSV is still flushed and a runtime_error is thrown.
std::vector<StudyRecord> run_study(const StudyConfig& config);

// Least-squares slope of log(y) against log(x) over the last min(4, n)
// points; all inputs must be positive.
double fit_rate(const std::vector<double>& xs, const std::vector<double>& ys);

void write_csv(const std::vector<StudyRecord>& records, std::ostream& out);
std::vector<StudyRecord> read_csv(std::istream& in);

void write_convergence_svg(const std::vector<StudyRecord>& records, const std::string& path);
void write_effectivity_svg(const std::vector<StudyRecord>& records, const std::string& path);

// Plain-text solution dump, header `HDGSOL k Nel Nfaces`, then per element
// the coefficients of qx, qy, u and per face the trace coefficients, one
// "re im" pair per coefficient, 17 significant digits.
void write_solution(const HdgSolution& sol, std::ostream& out);
void read_solution(std::istream& in, const Mesh& mesh, HdgSolution& sol);

}  // namespace hdgres

#endif  // HDGRES_STUDY_HPP
