#ifndef HDGRES_BASIS_HPP
#define HDGRES_BASIS_HPP

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "hdgres/geometry.hpp"
#include "hdgres/quadrature.hpp"

namespace hdgres {

/// L2-orthonormal polynomial basis on the reference triangle, built by
/// Gram-Schmidt on graded monomials with exact moment integrals. The first
/// function is the (normalized) constant, so every later function has zero
/// mean: the zero-mean subspaces P_m \cap L2_0 are spanned by functions 1..
class ReferenceBasis {
 public:
  explicit ReferenceBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(exponents_.size()); }

  double value(int i, Vec2 p) const;
  Vec2 grad(int i, Vec2 p) const;

 private:
  int degree_;
  std::vector<std::array<int, 2>> exponents_;  // graded monomial order
  Eigen::MatrixXd coeff_;                      // row i: basis_i over monomials
};

// Shared, immutable basis cache (construction is cheap but repeated).
const ReferenceBasis& reference_basis_cache(int degree);

/// Basis values/gradients tabulated at the points of a quadrature rule.
struct BasisSet {
  int degree = 0;
  int dim = 0;
  Eigen::MatrixXd val;  // dim x npoints
  Eigen::MatrixXd dx;   // reference-coordinate gradients
  Eigen::MatrixXd dy;
  // Mean-first ordering: dropping row 0 spans the zero-mean subspace.
  bool mean_first = true;
};

BasisSet reference_basis(int degree, const QuadRule& rule);

// Legendre polynomial values P_0..P_degree at t in [-1,1] (face bases are
// Legendre, orthonormalized per face by sqrt((2j+1)/h_F)).
void legendre_values(int degree, double t, double* out);

}  // namespace hdgres

#endif  // HDGRES_BASIS_HPP
