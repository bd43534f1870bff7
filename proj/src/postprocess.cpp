#include "hdgres/postprocess.hpp"

#include <stdexcept>

#include "hdgres/parallel.hpp"

namespace hdgres {

namespace {

// One step of iterative refinement; the local stiffness systems are small
// but can carry noticeable conditioning on skewed elements.
template <typename Solver, typename Rhs>
Rhs refined_solve(const Solver& solver, const Eigen::MatrixXd& matrix, const Rhs& rhs) {
  Rhs x = solver.solve(rhs);
  x += solver.solve((rhs - matrix * x).eval());
  return x;
}

}  // namespace

ElementContext element_context(const Mesh& mesh, int element, int degree) {
  const FeWorkspace& ws = fe_workspace(degree);
  ElementContext ctx;
  ctx.element = element;
  ctx.ws = &ws;
  ctx.map = element_map(mesh, element);

  const int nk2 = ws.nk2;
  const int nq = ws.vol.size();
  ctx.grad_x.resize(nk2, nq);
  ctx.grad_y.resize(nk2, nq);
  for (int i = 0; i < nk2; ++i) {
    for (int q = 0; q < nq; ++q) {
      const Vec2 g = ctx.map.push_gradient({ws.pk2.dx(i, q), ws.pk2.dy(i, q)});
      ctx.grad_x(i, q) = g.x;
      ctx.grad_y(i, q) = g.y;
    }
  }
  ctx.stiffness = Eigen::MatrixXd::Zero(nk2, nk2);
  for (int q = 0; q < nq; ++q) {
    const double w = ws.vol.weights[q] * ctx.map.det;
    for (int i = 0; i < nk2; ++i)
      for (int j = 0; j <= i; ++j)
        ctx.stiffness(i, j) += w * (ctx.grad_x(i, q) * ctx.grad_x(j, q) +
                                    ctx.grad_y(i, q) * ctx.grad_y(j, q));
  }
  ctx.stiffness = ctx.stiffness.selfadjointView<Eigen::Lower>();
  ctx.stiff_zero_mean.compute(ctx.stiffness.block(1, 1, nk2 - 1, nk2 - 1));
  if (ctx.stiff_zero_mean.info() != Eigen::Success)
    throw std::runtime_error("postprocess: zero-mean stiffness not SPD");
  return ctx;
}

Eigen::VectorXcd minus_q_gradient_moments(const ElementContext& ctx,
                                          const Eigen::VectorXcd& q_coeff) {
  const FeWorkspace& ws = *ctx.ws;
  const int nk = ws.nk, nk2 = ws.nk2, nq = ws.vol.size();
  Eigen::VectorXcd moments = Eigen::VectorXcd::Zero(nk2);
  for (int q = 0; q < nq; ++q) {
    Complex qx{0.0, 0.0}, qy{0.0, 0.0};
    for (int j = 0; j < nk; ++j) {
      qx += q_coeff(j) * ws.pk.val(j, q);
      qy += q_coeff(nk + j) * ws.pk.val(j, q);
    }
    const double w = ws.vol.weights[q] * ctx.map.det;
    for (int i = 0; i < nk2; ++i)
      moments(i) -= w * (qx * ctx.grad_x(i, q) + qy * ctx.grad_y(i, q));
  }
  return moments;
}

Eigen::VectorXcd stenberg_postprocess(const ElementContext& ctx,
                                      const Eigen::VectorXcd& q_coeff,
                                      const Eigen::VectorXcd& u_coeff) {
  const int nk1 = ctx.ws->nk1;
  const Eigen::VectorXcd moments = minus_q_gradient_moments(ctx, q_coeff);
  // Zero-mean P_{k+1} block of the nested stiffness.
  const Eigen::MatrixXd s = ctx.stiffness.block(1, 1, nk1 - 1, nk1 - 1);
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("postprocess: stenberg stiffness not SPD");
  Eigen::VectorXcd out(nk1);
  // Orthonormal mean-first basis: the mean constraint pins coefficient 0.
  out(0) = u_coeff(0);
  out.tail(nk1 - 1).real() =
      refined_solve(llt, s, moments.segment(1, nk1 - 1).real().eval());
  out.tail(nk1 - 1).imag() =
      refined_solve(llt, s, moments.segment(1, nk1 - 1).imag().eval());
  return out;
}

std::pair<Eigen::VectorXcd, Eigen::VectorXcd> minres_postprocess(
    const ElementContext& ctx, const Eigen::VectorXcd& q_coeff,
    const Eigen::VectorXcd& u_coeff) {
  const int nk1 = ctx.ws->nk1, nk2 = ctx.ws->nk2;
  const int nxi = nk2 - 1;           // dim Xi_K
  const int n = nxi + nk1;           // unknowns [eps; nu]
  const Eigen::VectorXcd moments = minus_q_gradient_moments(ctx, q_coeff);

  // Rows: Xi tests | zero-mean P_{k+1} tests | mean constraint. The matrix
  // is real; the load is complex, solved as two real right-hand sides.
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(n, n);
  sys.block(0, 0, nxi, nxi) = ctx.stiffness.block(1, 1, nxi, nxi);
  sys.block(0, nxi, nxi, nk1) = ctx.stiffness.block(1, 0, nxi, nk1);
  sys.block(nxi, 0, nk1 - 1, nxi) = ctx.stiffness.block(1, 1, nk1 - 1, nxi);
  sys(n - 1, nxi) = 1.0;

  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, 2);
  rhs.block(0, 0, nxi, 1) = moments.segment(1, nxi).real();
  rhs.block(0, 1, nxi, 1) = moments.segment(1, nxi).imag();
  rhs(n - 1, 0) = u_coeff(0).real();
  rhs(n - 1, 1) = u_coeff(0).imag();

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys);
  const Eigen::MatrixXd x = refined_solve(lu, sys, rhs);

  Eigen::VectorXcd eps(nxi), nu(nk1);
  eps.real() = x.block(0, 0, nxi, 1);
  eps.imag() = x.block(0, 1, nxi, 1);
  nu.real() = x.block(nxi, 0, nk1, 1);
  nu.imag() = x.block(nxi, 1, nk1, 1);
  return {nu, eps};
}

namespace {

Eigen::VectorXcd theta_from_moments(const ElementContext& ctx,
                                    const Eigen::VectorXcd& moments, Complex mean_coeff) {
  const int nk2 = ctx.ws->nk2;
  const Eigen::MatrixXd s = ctx.stiffness.block(1, 1, nk2 - 1, nk2 - 1);
  Eigen::VectorXcd out(nk2);
  out(0) = mean_coeff;
  out.tail(nk2 - 1).real() =
      refined_solve(ctx.stiff_zero_mean, s, moments.segment(1, nk2 - 1).real().eval());
  out.tail(nk2 - 1).imag() =
      refined_solve(ctx.stiff_zero_mean, s, moments.segment(1, nk2 - 1).imag().eval());
  return out;
}

}  // namespace

Eigen::VectorXcd aux_theta(const ElementContext& ctx, const Eigen::VectorXcd& q_coeff,
                           const Eigen::VectorXcd& u_coeff) {
  return theta_from_moments(ctx, minus_q_gradient_moments(ctx, q_coeff), u_coeff(0));
}

Eigen::VectorXcd aux_theta_field(const ElementContext& ctx,
                                 const std::vector<CVec2>& q_at_vol, Complex mean_coeff) {
  const FeWorkspace& ws = *ctx.ws;
  const int nk2 = ws.nk2;
  if (static_cast<int>(q_at_vol.size()) != ws.vol.size())
    throw std::invalid_argument("aux_theta_field: flux sample count mismatch");
  Eigen::VectorXcd moments = Eigen::VectorXcd::Zero(nk2);
  for (int q = 0; q < ws.vol.size(); ++q) {
    const double w = ws.vol.weights[q] * ctx.map.det;
    for (int i = 0; i < nk2; ++i)
      moments(i) -= w * (q_at_vol[q].x * ctx.grad_x(i, q) + q_at_vol[q].y * ctx.grad_y(i, q));
  }
  return theta_from_moments(ctx, moments, mean_coeff);
}

double dual_norm(const ElementContext& ctx, const std::vector<CVec2>& p_at_vol) {
  const FeWorkspace& ws = *ctx.ws;
  const int nk2 = ws.nk2, nq = ws.vol.size();
  if (static_cast<int>(p_at_vol.size()) != nq)
    throw std::invalid_argument("dual_norm: field sample count mismatch");
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(nk2 - 1);
  for (int q = 0; q < nq; ++q) {
    const double w = ws.vol.weights[q] * ctx.map.det;
    for (int i = 1; i < nk2; ++i)
      b(i - 1) += w * (p_at_vol[q].x * ctx.grad_x(i, q) + p_at_vol[q].y * ctx.grad_y(i, q));
  }
  const Eigen::MatrixXd s = ctx.stiffness.block(1, 1, nk2 - 1, nk2 - 1);
  const Eigen::VectorXd sr = refined_solve(ctx.stiff_zero_mean, s, b.real().eval());
  const Eigen::VectorXd si = refined_solve(ctx.stiff_zero_mean, s, b.imag().eval());
  const double sq = b.real().dot(sr) + b.imag().dot(si);
  return std::sqrt(std::max(sq, 0.0));
}

double grad_norm(const ElementContext& ctx, const Eigen::VectorXcd& coeff) {
  const int nk2 = ctx.ws->nk2;
  Eigen::VectorXcd padded = Eigen::VectorXcd::Zero(nk2);
  padded.head(coeff.size()) = coeff;
  const Eigen::VectorXcd s = ctx.stiffness * padded;
  double sq = 0.0;
  for (int i = 0; i < nk2; ++i) sq += (std::conj(padded(i)) * s(i)).real();
  return std::sqrt(std::max(sq, 0.0));
}

double grad_norm_zero_mean(const ElementContext& ctx, const Eigen::VectorXcd& coeff) {
  Eigen::VectorXcd padded = Eigen::VectorXcd::Zero(coeff.size() + 1);
  padded.tail(coeff.size()) = coeff;
  return grad_norm(ctx, padded);
}

std::vector<CVec2> q_plus_grad_at_vol(const ElementContext& ctx,
                                      const Eigen::VectorXcd& q_coeff,
                                      const Eigen::VectorXcd& w_coeff) {
  const FeWorkspace& ws = *ctx.ws;
  const int nk = ws.nk, nq = ws.vol.size();
  std::vector<CVec2> out(nq);
  for (int q = 0; q < nq; ++q) {
    Complex vx{0.0, 0.0}, vy{0.0, 0.0};
    for (int j = 0; j < nk; ++j) {
      vx += q_coeff(j) * ws.pk.val(j, q);
      vy += q_coeff(nk + j) * ws.pk.val(j, q);
    }
    for (int j = 0; j < w_coeff.size(); ++j) {
      vx += w_coeff(j) * ctx.grad_x(j, q);
      vy += w_coeff(j) * ctx.grad_y(j, q);
    }
    out[q] = {vx, vy};
  }
  return out;
}

PostSolution postprocess_all(const Mesh& mesh, const HdgSolution& hdg) {
  PostSolution post;
  post.degree = hdg.degree;
  post.mesh = &mesh;
  const int nel = mesh.n_triangles();
  post.nu.resize(nel);
  post.eps.resize(nel);
  parallel_for(nel, [&](int t) {
    const ElementContext ctx = element_context(mesh, t, hdg.degree);
    auto [nu, eps] = minres_postprocess(ctx, hdg.q[t], hdg.u[t]);
    post.nu[t] = std::move(nu);
    post.eps[t] = std::move(eps);
  });
  return post;
}

}  // namespace hdgres
