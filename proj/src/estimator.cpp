#include "hdgres/estimator.hpp"

#include <cmath>
#include <stdexcept>

#include "hdgres/parallel.hpp"

namespace hdgres {

namespace {

// Trace of a head-aligned coefficient vector on local edge e of its element
// at the global face parameter of edge-rule point q. A traversal against the
// stored face orientation reads the mirrored point (the Gauss grid is
// symmetric by construction).
Complex trace_value(const Eigen::MatrixXd& table, int sign, const Eigen::VectorXcd& coeff,
                    int q) {
  const int nq = static_cast<int>(table.cols());
  const int col = sign > 0 ? q : nq - 1 - q;
  Complex v{0.0, 0.0};
  for (int i = 0; i < coeff.size(); ++i) v += coeff(i) * table(i, col);
  return v;
}

int local_edge_of_face(const Mesh& mesh, int element, int face) {
  for (int e = 0; e < 3; ++e)
    if (mesh.tri_to_faces[element][e].face == face) return e;
  throw std::logic_error("estimator: face not incident to element");
}

// Halved jump share of one element: (1/2) sum over its interior faces of
// omega^2 h_F int_F |[nu]|^2.
double element_jump_share(const Mesh& mesh, int element, double omega,
                          const std::vector<double>& face_jumps) {
  double sum = 0.0;
  for (int e = 0; e < 3; ++e) {
    const int f = mesh.tri_to_faces[element][e].face;
    if (mesh.faces[f].kind != FaceKind::interior) continue;
    sum += 0.5 * omega * omega * mesh.faces[f].length * face_jumps[f];
  }
  return sum;
}

}  // namespace

std::vector<double> face_jump_integrals(const Mesh& mesh, const PostSolution& post) {
  const FeWorkspace& ws = fe_workspace(post.degree);
  std::vector<double> jumps(mesh.n_faces(), 0.0);
  parallel_for(mesh.n_faces(), [&](int f) {
    const Face& face = mesh.faces[f];
    if (face.kind != FaceKind::interior) return;
    const int t0 = face.tri[0], t1 = face.tri[1];
    const int e0 = local_edge_of_face(mesh, t0, f);
    const int e1 = local_edge_of_face(mesh, t1, f);
    const int s0 = mesh.tri_to_faces[t0][e0].sign;
    const int s1 = mesh.tri_to_faces[t1][e1].sign;
    double sum = 0.0;
    for (int q = 0; q < ws.edge.size(); ++q) {
      const Complex v0 = trace_value(ws.pk1_trace[e0], s0, post.nu[t0], q);
      const Complex v1 = trace_value(ws.pk1_trace[e1], s1, post.nu[t1], q);
      sum += 0.5 * face.length * ws.edge.weights[q] * std::norm(v0 - v1);
    }
    jumps[f] = sum;
  });
  return jumps;
}

double element_estimator(const Mesh& mesh, int element, const PostSolution& post,
                         const HdgSolution& hdg, const std::vector<double>& face_jumps) {
  const ElementContext ctx = element_context(mesh, element, post.degree);
  const FeWorkspace& ws = *ctx.ws;
  double eta_sq = std::pow(grad_norm_zero_mean(ctx, post.eps[element]), 2);
  const auto residual = q_plus_grad_at_vol(ctx, hdg.q[element], post.nu[element]);
  for (int q = 0; q < ws.vol.size(); ++q)
    eta_sq += ws.vol.weights[q] * ctx.map.det * residual[q].squared_norm();
  eta_sq += element_jump_share(mesh, element, hdg.omega, face_jumps);
  return std::sqrt(eta_sq);
}

double global_estimator(const std::vector<double>& eta) {
  double sq = 0.0;
  for (double e : eta) sq += e * e;
  return std::sqrt(sq);
}

EstimateField estimate_all(const Mesh& mesh, const HdgSolution& hdg,
                           const PostSolution& post) {
  const int nel = mesh.n_triangles();
  EstimateField field;
  field.eta.assign(nel, 0.0);
  field.grad_eps_sq.assign(nel, 0.0);
  field.q_residual_sq.assign(nel, 0.0);
  field.jump_sq.assign(nel, 0.0);

  const std::vector<double> jumps = face_jump_integrals(mesh, post);

  parallel_for(nel, [&](int t) {
    const ElementContext ctx = element_context(mesh, t, post.degree);
    const FeWorkspace& ws = *ctx.ws;
    field.grad_eps_sq[t] = std::pow(grad_norm_zero_mean(ctx, post.eps[t]), 2);
    const auto residual = q_plus_grad_at_vol(ctx, hdg.q[t], post.nu[t]);
    double qres = 0.0;
    for (int q = 0; q < ws.vol.size(); ++q)
      qres += ws.vol.weights[q] * ctx.map.det * residual[q].squared_norm();
    field.q_residual_sq[t] = qres;
    field.jump_sq[t] = element_jump_share(mesh, t, hdg.omega, jumps);
    field.eta[t] = std::sqrt(field.grad_eps_sq[t] + field.q_residual_sq[t] + field.jump_sq[t]);
  });
  field.eta_global = global_estimator(field.eta);
  return field;
}

ErrorReport error_norms(const Mesh& mesh, const ProblemSpec& problem,
                        const HdgSolution& hdg, const PostSolution& post,
                        double eta_global) {
  if (!problem.has_exact) throw std::invalid_argument("no exact solution");
  const FeWorkspace& ws = fe_workspace(hdg.degree);
  const int nel = mesh.n_triangles();
  const double omega = problem.omega;

  ErrorReport report;
  report.elem_nu_1omega_sq.assign(nel, 0.0);
  report.elem_q_sq.assign(nel, 0.0);
  report.elem_grad_nu_sq.assign(nel, 0.0);
  std::vector<double> u_sq(nel, 0.0), nu_sq(nel, 0.0);

  const std::vector<double> jumps = face_jump_integrals(mesh, post);

  parallel_for(nel, [&](int t) {
    const AffineMap map = element_map(mesh, t);
    const int nq = ws.vol_hi.size();
    double acc_u = 0.0, acc_nu = 0.0, acc_grad = 0.0, acc_q = 0.0;
    for (int q = 0; q < nq; ++q) {
      const Vec2 x = map.apply(ws.vol_hi.points[q]);
      const double w = ws.vol_hi.weights[q] * map.det;
      const Complex u_exact = problem.exact_u(x);
      const CVec2 grad_exact = problem.exact_grad_u(x);
      const CVec2 q_exact{-grad_exact.x, -grad_exact.y};

      Complex uh{0.0, 0.0}, nuh{0.0, 0.0};
      CVec2 qh, grad_nu;
      for (int i = 0; i < ws.nk; ++i) {
        uh += hdg.u[t](i) * ws.pk_hi.val(i, q);
        qh.x += hdg.q[t](i) * ws.pk_hi.val(i, q);
        qh.y += hdg.q[t](ws.nk + i) * ws.pk_hi.val(i, q);
      }
      for (int i = 0; i < ws.nk1; ++i) {
        nuh += post.nu[t](i) * ws.pk1_hi.val(i, q);
        const Vec2 g = map.push_gradient({ws.pk1_hi.dx(i, q), ws.pk1_hi.dy(i, q)});
        grad_nu.x += post.nu[t](i) * g.x;
        grad_nu.y += post.nu[t](i) * g.y;
      }
      acc_u += w * std::norm(u_exact - uh);
      acc_nu += w * std::norm(u_exact - nuh);
      acc_grad += w * (grad_exact - grad_nu).squared_norm();
      acc_q += w * (q_exact - qh).squared_norm();
    }
    u_sq[t] = acc_u;
    nu_sq[t] = acc_nu;
    report.elem_grad_nu_sq[t] = acc_grad;
    report.elem_q_sq[t] = acc_q;
    // [u - nu] = -[nu] across interior faces since u is continuous.
    report.elem_nu_1omega_sq[t] = omega * omega * acc_nu + acc_grad +
                                  element_jump_share(mesh, t, omega, jumps);
  });

  double jump_total = 0.0;
  for (int f = 0; f < mesh.n_faces(); ++f)
    jump_total += omega * omega * mesh.faces[f].length * jumps[f];

  double sum_u = 0.0, sum_nu = 0.0, sum_grad = 0.0, sum_q = 0.0, sum_1omega = 0.0;
  for (int t = 0; t < nel; ++t) {
    sum_u += u_sq[t];
    sum_nu += nu_sq[t];
    sum_grad += report.elem_grad_nu_sq[t];
    sum_q += report.elem_q_sq[t];
    sum_1omega += report.elem_nu_1omega_sq[t];
  }
  report.err_u_l2 = std::sqrt(sum_u);
  report.err_nu_l2 = std::sqrt(sum_nu);
  report.err_grad_nu = std::sqrt(sum_grad);
  report.jump_nu = std::sqrt(jump_total);
  report.err_nu_1omega = std::sqrt(sum_1omega);
  report.err_q_l2 = std::sqrt(sum_q);
  report.triple = std::sqrt(sum_1omega + sum_q);
  if (eta_global > 0.0 && report.triple > 0.0)
    report.effectivity = eta_global / report.triple;
  return report;
}

double saturation_ratio(const Mesh& mesh, const ProblemSpec& problem,
                        const HdgSolution& hdg, const PostSolution& post) {
  if (!problem.has_exact) throw std::invalid_argument("no exact solution");
  const FeWorkspace& ws = fe_workspace(hdg.degree);
  const int nel = mesh.n_triangles();
  std::vector<double> theta_sq(nel, 0.0), nu_sq(nel, 0.0);
  parallel_for(nel, [&](int t) {
    const ElementContext ctx = element_context(mesh, t, hdg.degree);
    const Eigen::VectorXcd theta = aux_theta(ctx, hdg.q[t], hdg.u[t]);
    const AffineMap& map = ctx.map;
    double acc_theta = 0.0, acc_nu = 0.0;
    for (int q = 0; q < ws.vol_hi.size(); ++q) {
      const Vec2 x = map.apply(ws.vol_hi.points[q]);
      const double w = ws.vol_hi.weights[q] * map.det;
      const CVec2 grad_exact = problem.exact_grad_u(x);
      CVec2 grad_theta, grad_nu;
      for (int i = 0; i < ws.nk2; ++i) {
        const Vec2 g = map.push_gradient({ws.pk2_hi.dx(i, q), ws.pk2_hi.dy(i, q)});
        grad_theta.x += theta(i) * g.x;
        grad_theta.y += theta(i) * g.y;
        if (i < ws.nk1) {
          grad_nu.x += post.nu[t](i) * g.x;
          grad_nu.y += post.nu[t](i) * g.y;
        }
      }
      acc_theta += w * (grad_exact - grad_theta).squared_norm();
      acc_nu += w * (grad_exact - grad_nu).squared_norm();
    }
    theta_sq[t] = acc_theta;
    nu_sq[t] = acc_nu;
  });
  double sum_theta = 0.0, sum_nu = 0.0;
  for (int t = 0; t < nel; ++t) {
    sum_theta += theta_sq[t];
    sum_nu += nu_sq[t];
  }
  return std::sqrt(sum_theta / sum_nu);
}

}  // namespace hdgres
