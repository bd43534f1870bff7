#include "hdgres/fe_workspace.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace hdgres {

namespace {

Vec2 edge_ref_point(int local_edge, double t) {
  static const Vec2 ref[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  const Vec2 a = ref[(local_edge + 1) % 3];
  const Vec2 b = ref[(local_edge + 2) % 3];
  return a + (b - a) * (0.5 * (t + 1.0));
}

Eigen::MatrixXd trace_table(const ReferenceBasis& basis, int local_edge,
                            const QuadRule& edge_rule) {
  Eigen::MatrixXd table(basis.size(), edge_rule.size());
  for (int q = 0; q < edge_rule.size(); ++q) {
    const Vec2 p = edge_ref_point(local_edge, edge_rule.points[q].x);
    for (int i = 0; i < basis.size(); ++i) table(i, q) = basis.value(i, p);
  }
  return table;
}

Eigen::MatrixXd legendre_table(int nf, const QuadRule& edge_rule, double sign) {
  Eigen::MatrixXd table(nf, edge_rule.size());
  std::vector<double> vals(nf);
  for (int q = 0; q < edge_rule.size(); ++q) {
    legendre_values(nf - 1, sign * edge_rule.points[q].x, vals.data());
    for (int j = 0; j < nf; ++j) table(j, q) = vals[j];
  }
  return table;
}

FeWorkspace build_workspace(int degree) {
  if (degree < 0) throw std::invalid_argument("fe_workspace: degree must be >= 0");
  FeWorkspace ws;
  ws.degree = degree;
  ws.nk = (degree + 1) * (degree + 2) / 2;
  ws.nk1 = (degree + 2) * (degree + 3) / 2;
  ws.nk2 = (degree + 3) * (degree + 4) / 2;
  ws.nf = degree + 1;

  const int exact = 2 * (degree + 2);
  ws.vol = triangle_quadrature(exact);
  ws.vol_hi = triangle_quadrature(20);
  ws.edge = edge_quadrature(exact);
  ws.edge_hi = edge_quadrature(20);

  ws.pk = reference_basis(degree, ws.vol);
  ws.pk1 = reference_basis(degree + 1, ws.vol);
  ws.pk2 = reference_basis(degree + 2, ws.vol);
  ws.pk_hi = reference_basis(degree, ws.vol_hi);
  ws.pk1_hi = reference_basis(degree + 1, ws.vol_hi);
  ws.pk2_hi = reference_basis(degree + 2, ws.vol_hi);

  const ReferenceBasis& bk = reference_basis_cache(degree);
  const ReferenceBasis& bk1 = reference_basis_cache(degree + 1);
  for (int e = 0; e < 3; ++e) {
    ws.pk_trace[e] = trace_table(bk, e, ws.edge);
    ws.pk1_trace[e] = trace_table(bk1, e, ws.edge);
  }
  ws.leg_pos = legendre_table(ws.nf, ws.edge, +1.0);
  ws.leg_neg = legendre_table(ws.nf, ws.edge, -1.0);
  ws.leg_pos_hi = legendre_table(ws.nf, ws.edge_hi, +1.0);
  ws.leg_neg_hi = legendre_table(ws.nf, ws.edge_hi, -1.0);
  return ws;
}

}  // namespace

const FeWorkspace& fe_workspace(int degree) {
  static std::mutex mutex;
  static std::map<int, FeWorkspace> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(degree);
  if (it == cache.end()) it = cache.emplace(degree, build_workspace(degree)).first;
  return it->second;
}

}  // namespace hdgres
