#ifndef HDGRES_QUADRATURE_HPP
#define HDGRES_QUADRATURE_HPP

#include <vector>

#include "hdgres/geometry.hpp"

namespace hdgres {

/// Quadrature rule on the reference triangle {x,y >= 0, x+y <= 1} or, for
/// edge rules, on [-1,1] (points stored with y = 0).
struct QuadRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int exactness = 0;

  int size() const { return static_cast<int>(points.size()); }
};

// Rotationally symmetric rule on the reference triangle, exact for all
// polynomials of total degree <= exactness. Supported up to exactness 20;
// beyond that throws std::invalid_argument("quadrature order unsupported").
QuadRule triangle_quadrature(int exactness);

// Gauss-Legendre rule on [-1,1] with ceil((exactness+1)/2) points.
QuadRule edge_quadrature(int exactness);

namespace detail {

// Collapsed tensor-product rule (exact, not symmetric), any exactness >= 0.
// Used internally and by oracle tests needing exactness beyond the public cap.
QuadRule collapsed_triangle_rule(int exactness);

// Gauss-Legendre nodes/weights on [-1,1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace detail

}  // namespace hdgres

#endif  // HDGRES_QUADRATURE_HPP
