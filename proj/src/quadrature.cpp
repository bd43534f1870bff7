#include "hdgres/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace hdgres {

namespace detail {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton iteration on P_n starting from the Chebyshev estimate.
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // One clean-up pass for the weight.
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

QuadRule collapsed_triangle_rule(int exactness) {
  if (exactness < 0) throw std::invalid_argument("quadrature exactness must be >= 0");
  // Duffy map (u, v) -> (u, v(1-u)) with Jacobian (1-u): a monomial of total
  // degree d becomes degree <= d+1 in u and <= d in v.
  const int nu = exactness / 2 + 2;  // 2*nu - 1 >= exactness + 1
  const int nv = exactness / 2 + 1;  // 2*nv - 1 >= exactness
  std::vector<double> xu, wu, xv, wv;
  gauss_legendre(nu, xu, wu);
  gauss_legendre(nv, xv, wv);
  QuadRule rule;
  rule.exactness = exactness;
  rule.points.reserve(static_cast<std::size_t>(nu) * nv);
  rule.weights.reserve(static_cast<std::size_t>(nu) * nv);
  for (int i = 0; i < nu; ++i) {
    const double u = 0.5 * (xu[i] + 1.0);
    for (int j = 0; j < nv; ++j) {
      const double v = 0.5 * (xv[j] + 1.0);
      rule.points.push_back({u, v * (1.0 - u)});
      rule.weights.push_back(0.25 * wu[i] * wv[j] * (1.0 - u));
    }
  }
  return rule;
}

}  // namespace detail

QuadRule triangle_quadrature(int exactness) {
  if (exactness < 0) throw std::invalid_argument("quadrature exactness must be >= 0");
  if (exactness > 20) throw std::invalid_argument("quadrature order unsupported");
  if (exactness <= 1) {
    QuadRule rule;
    rule.exactness = 1;
    rule.points = {{1.0 / 3.0, 1.0 / 3.0}};
    rule.weights = {0.5};
    return rule;
  }
  // Average the collapsed rule over the three barycentric rotations; the
  // rotated rules are each exact, so the average is exact and C3-symmetric.
  const QuadRule base = detail::collapsed_triangle_rule(exactness);
  QuadRule rule;
  rule.exactness = exactness;
  rule.points.reserve(3 * base.points.size());
  rule.weights.reserve(3 * base.points.size());
  for (std::size_t q = 0; q < base.points.size(); ++q) {
    const double x = base.points[q].x, y = base.points[q].y;
    const double w = base.weights[q] / 3.0;
    // (l1,l2,l3) = (1-x-y, x, y) cycled
    rule.points.push_back({x, y});
    rule.points.push_back({y, 1.0 - x - y});
    rule.points.push_back({1.0 - x - y, x});
    rule.weights.insert(rule.weights.end(), 3, w);
  }
  return rule;
}

QuadRule edge_quadrature(int exactness) {
  if (exactness < 0) throw std::invalid_argument("quadrature exactness must be >= 0");
  const int n = (exactness + 2) / 2;  // ceil((exactness+1)/2)
  std::vector<double> x, w;
  detail::gauss_legendre(n, x, w);
  QuadRule rule;
  rule.exactness = exactness;
  rule.points.reserve(n);
  for (int i = 0; i < n; ++i) rule.points.push_back({x[i], 0.0});
  rule.weights = std::move(w);
  return rule;
}

}  // namespace hdgres
