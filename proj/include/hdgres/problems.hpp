#ifndef HDGRES_PROBLEMS_HPP
#define HDGRES_PROBLEMS_HPP

#include <functional>
#include <string>
#include <vector>

#include "hdgres/geometry.hpp"

namespace hdgres {

/// Manufactured Helmholtz problem: wavenumber plus evaluators for the exact
/// solution, its gradient, the source f = -lap(u) - omega^2 u, and the
/// impedance datum g = -q.n + i omega u with q = -grad(u). All evaluators
/// are pure and safe for concurrent use.
struct ProblemSpec {
  std::string name;
  double omega = 0.0;
  bool has_exact = false;
  std::function<Complex(Vec2)> exact_u;
  std::function<CVec2(Vec2)> exact_grad_u;
  std::function<Complex(Vec2)> source_f;
  std::function<Complex(Vec2, Vec2)> boundary_g;  // (point, outward unit normal)
};

// u(x,y) = exp(i omega (x cos(pi/8) + y sin(pi/8))) on the unit square;
// f = 0, g follows from the impedance formula.
ProblemSpec plane_wave(double omega);

// u(r,phi) = J_{2/3}(omega r) sin(2/3 (pi - phi)) on the L-shaped domain
// (-1,1)^2 \ [0,1]^2, with the angular coordinate phi chosen so u vanishes
// on both boundary rays meeting the reentrant corner at the origin. f = 0.
// The gradient evaluator throws std::domain_error at r = 0 exactly.
ProblemSpec lshape_singular(double omega);

// f = 0, g = 0: the exact solution is identically zero.
ProblemSpec zero_problem(double omega);

// Lookup by configuration name ("plane_wave" | "lshape_singular").
ProblemSpec make_problem(const std::string& name, double omega);

// Bessel function of the first kind, fractional order nu > -1, x >= 0.
// Ascending series below the crossover, Schlaefli integral above it;
// absolute error <= 1e-12 * max(1, |J_nu(x)|) for x <= 100.
double bessel_j(double nu, double x);

namespace detail {

double lanczos_gamma(double x);
double bessel_j_series(double nu, double x);
double bessel_j_integral(double nu, double x);

// Chebyshev interpolant of J_nu on [lo, hi], built from the integral
// representation; evaluation is a short Clenshaw recurrence.
class ChebBessel {
 public:
  ChebBessel(double nu, double lo, double hi, int n);
  double eval(double x) const;
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double nu_, lo_, hi_;
  std::vector<double> coef_;
};

}  // namespace detail

}  // namespace hdgres

#endif  // HDGRES_PROBLEMS_HPP
