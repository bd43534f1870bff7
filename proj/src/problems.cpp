#include "hdgres/problems.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "hdgres/quadrature.hpp"

namespace hdgres {

namespace detail {

double lanczos_gamma(double x) {
  static const double coeff[9] = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  const double pi = std::acos(-1.0);
  if (x < 0.5) {
    // Reflection; poles at nonpositive integers.
    const double s = std::sin(pi * x);
    if (s == 0.0) throw std::domain_error("gamma: pole at nonpositive integer");
    return pi / (s * lanczos_gamma(1.0 - x));
  }
  const double z = x - 1.0;
  double a = coeff[0];
  for (int i = 1; i < 9; ++i) a += coeff[i] / (z + i);
  const double t = z + 7.5;
  return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

double bessel_j_series(double nu, double x) {
  if (x == 0.0) {
    if (nu == 0.0) return 1.0;
    if (nu > 0.0) return 0.0;
    throw std::domain_error("bessel_j: negative order at x = 0");
  }
  // t_0 = (x/2)^nu / Gamma(nu+1); t_m = -t_{m-1} * (x/2)^2 / (m (m+nu)).
  // Long double accumulation keeps the alternating-series cancellation
  // below the 1e-12 contract for x up to the series crossover.
  const long double half_x = 0.5L * static_cast<long double>(x);
  long double term =
      std::pow(half_x, static_cast<long double>(nu)) / lanczos_gamma(nu + 1.0);
  long double sum = term;
  const long double q = half_x * half_x;
  for (int m = 1; m <= 60; ++m) {
    term *= -q / (m * (m + static_cast<long double>(nu)));
    sum += term;
    if (std::abs(term) < 1e-19L * std::abs(sum) + 1e-300L) break;
  }
  return static_cast<double>(sum);
}

namespace {

struct GaussCache {
  std::vector<double> nodes, weights;
  GaussCache(int n) { gauss_legendre(n, nodes, weights); }
};

}  // namespace

double bessel_j_integral(double nu, double x) {
  if (x <= 0.0) throw std::domain_error("bessel_j: integral form needs x > 0");
  const double pi = std::acos(-1.0);
  // Schlaefli representation, valid for x > 0 and any real order:
  // J_nu(x) = (1/pi) int_0^pi cos(nu t - x sin t) dt
  //         - (sin(nu pi)/pi) int_0^inf exp(-nu t - x sinh t) dt.
  static const GaussCache gauss(400);
  double osc = 0.0;
  for (std::size_t i = 0; i < gauss.nodes.size(); ++i) {
    const double t = 0.5 * pi * (gauss.nodes[i] + 1.0);
    osc += 0.5 * pi * gauss.weights[i] * std::cos(nu * t - x * std::sin(t));
  }
  const double snupi = std::sin(nu * pi);
  double tail = 0.0;
  if (snupi != 0.0) {
    const double upper = std::asinh(60.0 / x) + 1.0;
    for (std::size_t i = 0; i < gauss.nodes.size(); ++i) {
      const double t = 0.5 * upper * (gauss.nodes[i] + 1.0);
      tail += 0.5 * upper * gauss.weights[i] * std::exp(-nu * t - x * std::sinh(t));
    }
  }
  return (osc - snupi * tail) / pi;
}

}  // namespace detail

namespace detail {

ChebBessel::ChebBessel(double nu, double lo, double hi, int n)
    : nu_(nu), lo_(lo), hi_(hi), coef_(n, 0.0) {
  const double pi = std::acos(-1.0);
  std::vector<double> values(n);
  for (int k = 0; k < n; ++k) {
    const double t = std::cos(pi * (k + 0.5) / n);
    values[k] = bessel_j_integral(nu, 0.5 * (lo + hi) + 0.5 * (hi - lo) * t);
  }
  for (int j = 0; j < n; ++j) {
    double c = 0.0;
    for (int k = 0; k < n; ++k) c += values[k] * std::cos(j * pi * (k + 0.5) / n);
    coef_[j] = 2.0 * c / n;
  }
  coef_[0] *= 0.5;
  // The coefficients decay superexponentially; dropping the negligible tail
  // shortens every Clenshaw evaluation.
  double scale = 0.0;
  for (double c : coef_) scale = std::max(scale, std::abs(c));
  std::size_t keep = coef_.size();
  while (keep > 8 && std::abs(coef_[keep - 1]) < 1e-16 * scale &&
         std::abs(coef_[keep - 2]) < 1e-16 * scale)
    --keep;
  coef_.resize(keep);
}

double ChebBessel::eval(double x) const {
  const double t = (2.0 * x - lo_ - hi_) / (hi_ - lo_);
  double b1 = 0.0, b2 = 0.0;
  for (int j = static_cast<int>(coef_.size()) - 1; j >= 1; --j) {
    const double b0 = 2.0 * t * b1 - b2 + coef_[j];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + coef_[0];
}

}  // namespace detail

namespace {

constexpr double kSeriesCrossover = 10.0;

// J_nu evaluator combining the exact series below x = 9 with a Chebyshev
// proxy of the Schlaefli integral above; the proxy keeps oscillatory
// error-norm quadrature affordable on fine meshes.
class FastBessel {
 public:
  FastBessel(double nu, double x_max)
      : nu_(nu),
        cheb_(std::make_shared<detail::ChebBessel>(
            nu, 8.0, std::max(x_max * 1.05 + 1.0, 20.0),
            257 + 2 * static_cast<int>(x_max))) {}

  double operator()(double x) const {
    if (x <= 8.5) return detail::bessel_j_series(nu_, x);
    if (x >= 9.5)
      return x <= cheb_->hi() ? cheb_->eval(x) : detail::bessel_j_integral(nu_, x);
    // Blend across the switchover so difference stencils see a smooth field.
    const double w = 9.5 - x;
    return w * detail::bessel_j_series(nu_, x) + (1.0 - w) * cheb_->eval(x);
  }

 private:
  double nu_;
  std::shared_ptr<const detail::ChebBessel> cheb_;
};

}  // namespace

double bessel_j(double nu, double x) {
  if (x < 0.0) throw std::domain_error("bessel_j: negative argument");
  if (nu <= -1.0) throw std::domain_error("bessel_j: order must be > -1");
  if (x <= kSeriesCrossover) return detail::bessel_j_series(nu, x);
  return detail::bessel_j_integral(nu, x);
}

ProblemSpec plane_wave(double omega) {
  if (omega <= 0.0) throw std::invalid_argument("plane_wave: omega must be positive");
  const double pi = std::acos(-1.0);
  const Vec2 dir{std::cos(pi / 8.0), std::sin(pi / 8.0)};
  const Complex i_unit{0.0, 1.0};

  ProblemSpec p;
  p.name = "plane_wave";
  p.omega = omega;
  p.has_exact = true;
  p.exact_u = [omega, dir, i_unit](Vec2 x) {
    return std::exp(i_unit * (omega * (dir.x * x.x + dir.y * x.y)));
  };
  p.exact_grad_u = [omega, dir, i_unit, u = p.exact_u](Vec2 x) {
    const Complex v = i_unit * omega * u(x);
    return CVec2{dir.x * v, dir.y * v};
  };
  p.source_f = [](Vec2) { return Complex{0.0, 0.0}; };
  p.boundary_g = [omega, i_unit, u = p.exact_u, grad = p.exact_grad_u](Vec2 x, Vec2 n) {
    // g = -q.n + i omega u with q = -grad u.
    const CVec2 g = grad(x);
    return g.dot_real(n) + i_unit * omega * u(x);
  };
  return p;
}

ProblemSpec lshape_singular(double omega) {
  if (omega <= 0.0) throw std::invalid_argument("lshape_singular: omega must be positive");
  const double pi = std::acos(-1.0);
  const double nu = 2.0 / 3.0;
  const Complex i_unit{0.0, 1.0};

  // Angle measured so the two rays bounding the reentrant corner of
  // (-1,1)^2 \ [0,1]^2 land on the zeros of sin(2/3 (pi - phi)): the
  // positive y-axis maps to phi = -pi/2 and the positive x-axis to phi = pi.
  auto angle = [pi](Vec2 x) {
    const double psi = std::atan2(x.y, x.x);
    return psi >= pi / 2.0 ? psi - pi : psi + pi;
  };

  // The domain diameter bounds omega * r; proxies over that range keep the
  // oscillatory error-norm quadrature affordable.
  const double x_max = omega * std::sqrt(2.0);
  const FastBessel j_mid(nu, x_max);
  const FastBessel j_low(nu - 1.0, x_max);
  const FastBessel j_high(nu + 1.0, x_max);

  ProblemSpec p;
  p.name = "lshape_singular";
  p.omega = omega;
  p.has_exact = true;
  p.exact_u = [omega, nu, pi, angle, j_mid](Vec2 x) {
    const double r = std::hypot(x.x, x.y);
    if (r == 0.0) return Complex{0.0, 0.0};
    const double phi = angle(x);
    return Complex{j_mid(omega * r) * std::sin(nu * (pi - phi)), 0.0};
  };
  p.exact_grad_u = [omega, nu, pi, angle, j_mid, j_low, j_high](Vec2 x) {
    const double r = std::hypot(x.x, x.y);
    if (r == 0.0) throw std::domain_error("lshape_singular: singular point");
    const double phi = angle(x);
    const double s = std::sin(nu * (pi - phi));
    const double c = std::cos(nu * (pi - phi));
    const double jn = j_mid(omega * r);
    // J'_nu(z) = (J_{nu-1}(z) - J_{nu+1}(z)) / 2
    const double jp = 0.5 * (j_low(omega * r) - j_high(omega * r));
    const double du_dr = omega * jp * s;
    const double du_dphi = -nu * jn * c;
    const double cs = x.x / r, sn = x.y / r;
    return CVec2{Complex{du_dr * cs - du_dphi / r * sn, 0.0},
                 Complex{du_dr * sn + du_dphi / r * cs, 0.0}};
  };
  p.source_f = [](Vec2) { return Complex{0.0, 0.0}; };
  p.boundary_g = [omega, i_unit, u = p.exact_u, grad = p.exact_grad_u](Vec2 x, Vec2 n) {
    const CVec2 g = grad(x);
    return g.dot_real(n) + i_unit * omega * u(x);
  };
  return p;
}

ProblemSpec zero_problem(double omega) {
  if (omega <= 0.0) throw std::invalid_argument("zero_problem: omega must be positive");
  ProblemSpec p;
  p.name = "zero";
  p.omega = omega;
  p.has_exact = true;
  p.exact_u = [](Vec2) { return Complex{0.0, 0.0}; };
  p.exact_grad_u = [](Vec2) { return CVec2{}; };
  p.source_f = [](Vec2) { return Complex{0.0, 0.0}; };
  p.boundary_g = [](Vec2, Vec2) { return Complex{0.0, 0.0}; };
  return p;
}

ProblemSpec make_problem(const std::string& name, double omega) {
  if (name == "plane_wave") return plane_wave(omega);
  if (name == "lshape_singular") return lshape_singular(omega);
  throw std::invalid_argument("unknown problem: " + name);
}

}  // namespace hdgres
