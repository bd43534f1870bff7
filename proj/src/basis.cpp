#include "hdgres/basis.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace hdgres {

namespace {

using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

// Exact moment of x^a y^b over the reference triangle: a! b! / (a+b+2)!
// evaluated as 1 / (binom(a+b, a) * (a+b+1) * (a+b+2)).
long double triangle_moment(int a, int b) {
  long double binom = 1.0L;
  for (int i = 1; i <= a; ++i) binom = binom * (b + i) / i;
  const long double s = a + b;
  return 1.0L / (binom * (s + 1) * (s + 2));
}

}  // namespace

ReferenceBasis::ReferenceBasis(int degree) : degree_(degree) {
  if (degree < 0 || degree > 10)
    throw std::invalid_argument("reference basis degree out of supported range");
  for (int d = 0; d <= degree; ++d)
    for (int a = d; a >= 0; --a) exponents_.push_back({a, d - a});
  const int n = size();

  LongMatrix gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      gram(i, j) = triangle_moment(exponents_[i][0] + exponents_[j][0],
                                   exponents_[i][1] + exponents_[j][1]);

  // Cholesky orthonormalization in extended precision, with one refinement
  // pass to absorb the monomial conditioning. The triangular construction
  // keeps the basis graded: function i only involves monomials 0..i, so the
  // first function is the constant and all later ones have zero mean.
  Eigen::LLT<LongMatrix> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("reference basis: moment matrix not SPD");
  LongMatrix coeff = llt.matrixL().solve(LongMatrix::Identity(n, n));

  const LongMatrix gram1 = coeff * gram * coeff.transpose();
  Eigen::LLT<LongMatrix> llt1(gram1);
  coeff = llt1.matrixL().solve(coeff);
  coeff_ = coeff.cast<double>();
}

double ReferenceBasis::value(int i, Vec2 p) const {
  double s = 0.0;
  for (int j = 0; j < size(); ++j) {
    const double c = coeff_(i, j);
    if (c == 0.0) continue;
    s += c * std::pow(p.x, exponents_[j][0]) * std::pow(p.y, exponents_[j][1]);
  }
  return s;
}

Vec2 ReferenceBasis::grad(int i, Vec2 p) const {
  Vec2 g;
  for (int j = 0; j < size(); ++j) {
    const double c = coeff_(i, j);
    if (c == 0.0) continue;
    const int a = exponents_[j][0], b = exponents_[j][1];
    if (a > 0) g.x += c * a * std::pow(p.x, a - 1) * std::pow(p.y, b);
    if (b > 0) g.y += c * b * std::pow(p.x, a) * std::pow(p.y, b - 1);
  }
  return g;
}

const ReferenceBasis& reference_basis_cache(int degree) {
  static std::mutex mutex;
  static std::map<int, ReferenceBasis> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(degree);
  if (it == cache.end()) it = cache.emplace(degree, ReferenceBasis(degree)).first;
  return it->second;
}

BasisSet reference_basis(int degree, const QuadRule& rule) {
  const ReferenceBasis& basis = reference_basis_cache(degree);
  BasisSet set;
  set.degree = degree;
  set.dim = basis.size();
  const int nq = rule.size();
  set.val.resize(set.dim, nq);
  set.dx.resize(set.dim, nq);
  set.dy.resize(set.dim, nq);
  for (int i = 0; i < set.dim; ++i) {
    for (int q = 0; q < nq; ++q) {
      set.val(i, q) = basis.value(i, rule.points[q]);
      const Vec2 g = basis.grad(i, rule.points[q]);
      set.dx(i, q) = g.x;
      set.dy(i, q) = g.y;
    }
  }
  return set;
}

void legendre_values(int degree, double t, double* out) {
  out[0] = 1.0;
  if (degree >= 1) out[1] = t;
  for (int j = 2; j <= degree; ++j)
    out[j] = ((2 * j - 1) * t * out[j - 1] - (j - 1) * out[j - 2]) / j;
}

}  // namespace hdgres
