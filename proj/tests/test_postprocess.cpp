#include <doctest.h>

#include <cmath>
#include <random>

#include "hdgres/postprocess.hpp"

using namespace hdgres;

namespace {

const double kPi = std::acos(-1.0);

// L2-project a field sampled at the volume points onto the mapped
// orthonormal P_k basis.
Eigen::VectorXcd project_pk(const ElementContext& ctx, const std::vector<Complex>& samples) {
  const FeWorkspace& ws = *ctx.ws;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(ws.nk);
  for (int q = 0; q < ws.vol.size(); ++q)
    for (int i = 0; i < ws.nk; ++i)
      out(i) += ws.vol.weights[q] * samples[q] * ws.pk.val(i, q);
  return out;
}

// q = -grad(p) for p given by (head-aligned) P_{k+2} coefficients.
Eigen::VectorXcd minus_grad_coeffs(const ElementContext& ctx, const Eigen::VectorXcd& p) {
  const FeWorkspace& ws = *ctx.ws;
  std::vector<Complex> gx(ws.vol.size()), gy(ws.vol.size());
  for (int q = 0; q < ws.vol.size(); ++q) {
    Complex sx{0, 0}, sy{0, 0};
    for (int i = 0; i < p.size(); ++i) {
      sx += p(i) * ctx.grad_x(i, q);
      sy += p(i) * ctx.grad_y(i, q);
    }
    gx[q] = -sx;
    gy[q] = -sy;
  }
  Eigen::VectorXcd out(2 * ws.nk);
  out.head(ws.nk) = project_pk(ctx, gx);
  out.tail(ws.nk) = project_pk(ctx, gy);
  return out;
}

Eigen::VectorXcd random_coeffs(std::mt19937& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex{gauss(rng), gauss(rng)};
  return v;
}

// an awkwardly shaped but valid triangle
Mesh one_element_mesh() {
  return Mesh({{0.1, -0.2}, {1.3, 0.15}, {0.4, 1.1}}, {{{0, 1, 2}}}, {0});
}

}  // namespace

TEST_CASE("stenberg: constants reproduce exactly") {
  const Mesh mesh = one_element_mesh();
  for (int k : {0, 1, 2}) {
    CAPTURE(k);
    const ElementContext ctx = element_context(mesh, 0, k);
    const FeWorkspace& ws = *ctx.ws;
    const Complex c{1.5, -0.75};
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(ws.nk);
    u(0) = c / std::sqrt(2.0);  // u == c on the element
    const Eigen::VectorXcd q = Eigen::VectorXcd::Zero(2 * ws.nk);
    const Eigen::VectorXcd out = stenberg_postprocess(ctx, q, u);
    CHECK(std::abs(out(0) - u(0)) < 1e-13);
    CHECK(out.tail(ws.nk1 - 1).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("stenberg: exact reproduction of P_{k+1} potentials") {
  std::mt19937 rng(101);
  const Mesh mesh = one_element_mesh();
  for (int k : {0, 1, 2}) {
    CAPTURE(k);
    const ElementContext ctx = element_context(mesh, 0, k);
    const FeWorkspace& ws = *ctx.ws;
    const Eigen::VectorXcd p = random_coeffs(rng, ws.nk1);
    const Eigen::VectorXcd q = minus_grad_coeffs(ctx, p);
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(ws.nk);
    u(0) = p(0);  // matching element mean
    const Eigen::VectorXcd out = stenberg_postprocess(ctx, q, u);
    CHECK((out - p).cwiseAbs().maxCoeff() < 1e-11 * p.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("minres: constants, mean constraint, and the stenberg identity") {
  std::mt19937 rng(202);
  const Mesh mesh = one_element_mesh();
  for (int k : {0, 1, 2}) {
    CAPTURE(k);
    const ElementContext ctx = element_context(mesh, 0, k);
    const FeWorkspace& ws = *ctx.ws;

    SUBCASE("zero flux and constant scalar") {
      const Complex c{0.25, 2.0};
      Eigen::VectorXcd u = Eigen::VectorXcd::Zero(ws.nk);
      u(0) = c;
      auto [nu, eps] = minres_postprocess(ctx, Eigen::VectorXcd::Zero(2 * ws.nk), u);
      CHECK(std::abs(nu(0) - c) < 1e-13);
      CHECK(nu.tail(ws.nk1 - 1).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(eps.cwiseAbs().maxCoeff() < 1e-12);
    }

    SUBCASE("nu equals the stenberg reconstruction; eps is grad-orthogonal") {
      const Eigen::VectorXcd q = random_coeffs(rng, 2 * ws.nk);
      const Eigen::VectorXcd u = random_coeffs(rng, ws.nk);
      auto [nu, eps] = minres_postprocess(ctx, q, u);
      const Eigen::VectorXcd stenberg = stenberg_postprocess(ctx, q, u);
      CHECK((nu - stenberg).cwiseAbs().maxCoeff() <
            1e-10 * std::max(1.0, stenberg.cwiseAbs().maxCoeff()));
      // mean constraint
      CHECK(std::abs(nu(0) - u(0)) < 1e-12 * std::max(1.0, std::abs(u(0))));

      // (grad w, grad eps) = 0 for all zero-mean P_{k+1} tests
      Eigen::VectorXcd eps_full = Eigen::VectorXcd::Zero(ws.nk2);
      eps_full.tail(ws.nk2 - 1) = eps;
      const Eigen::VectorXcd s = ctx.stiffness * eps_full;
      const double geps = grad_norm_zero_mean(ctx, eps);
      for (int i = 1; i < ws.nk1; ++i) {
        const double gw = std::sqrt(ctx.stiffness(i, i));
        CHECK(std::abs(s(i)) <= 1e-10 * std::max(1.0, gw * geps));
      }
    }
  }
}

TEST_CASE("aux theta: constants, reproduction, and the eps identity") {
  std::mt19937 rng(303);
  const Mesh mesh = one_element_mesh();
  for (int k : {0, 1, 2}) {
    CAPTURE(k);
    const ElementContext ctx = element_context(mesh, 0, k);
    const FeWorkspace& ws = *ctx.ws;

    SUBCASE("zero flux gives the constant with the prescribed mean") {
      Eigen::VectorXcd u = Eigen::VectorXcd::Zero(ws.nk);
      u(0) = Complex{3.0, -1.0};
      const Eigen::VectorXcd theta = aux_theta(ctx, Eigen::VectorXcd::Zero(2 * ws.nk), u);
      CHECK(std::abs(theta(0) - u(0)) < 1e-13);
      CHECK(theta.tail(ws.nk2 - 1).cwiseAbs().maxCoeff() < 1e-12);
    }

    SUBCASE("exact reproduction of P_{k+2} potentials from the sampled flux") {
      Eigen::VectorXcd p = random_coeffs(rng, ws.nk2);
      std::vector<CVec2> q_field(ws.vol.size());
      for (int q = 0; q < ws.vol.size(); ++q) {
        Complex sx{0, 0}, sy{0, 0};
        for (int i = 0; i < ws.nk2; ++i) {
          sx += p(i) * ctx.grad_x(i, q);
          sy += p(i) * ctx.grad_y(i, q);
        }
        q_field[q] = {-sx, -sy};
      }
      const Eigen::VectorXcd theta = aux_theta_field(ctx, q_field, p(0));
      CHECK((theta - p).cwiseAbs().maxCoeff() < 1e-10 * p.cwiseAbs().maxCoeff());
    }

    SUBCASE("exact reproduction of P_{k+1} potentials through the flux coefficients") {
      // -grad p lies in P_k^2 exactly when p is in P_{k+1}
      Eigen::VectorXcd p = Eigen::VectorXcd::Zero(ws.nk2);
      p.head(ws.nk1) = random_coeffs(rng, ws.nk1);
      const Eigen::VectorXcd q = minus_grad_coeffs(ctx, p);
      Eigen::VectorXcd u = Eigen::VectorXcd::Zero(ws.nk);
      u(0) = p(0);
      const Eigen::VectorXcd theta = aux_theta(ctx, q, u);
      CHECK((theta - p).cwiseAbs().maxCoeff() < 1e-10 * p.cwiseAbs().maxCoeff());
    }

    SUBCASE("||grad(theta - nu)|| = ||grad eps||") {
      const Eigen::VectorXcd q = random_coeffs(rng, 2 * ws.nk);
      const Eigen::VectorXcd u = random_coeffs(rng, ws.nk);
      auto [nu, eps] = minres_postprocess(ctx, q, u);
      const Eigen::VectorXcd theta = aux_theta(ctx, q, u);
      Eigen::VectorXcd diff = theta;
      diff.head(ws.nk1) -= nu;
      const double lhs = grad_norm(ctx, diff);
      const double rhs = grad_norm_zero_mean(ctx, eps);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
  }
}

TEST_CASE("dual norm") {
  std::mt19937 rng(404);
  const Mesh mesh = one_element_mesh();
  const int k = 1;
  const ElementContext ctx = element_context(mesh, 0, k);
  const FeWorkspace& ws = *ctx.ws;
  const int nq = ws.vol.size();

  SUBCASE("gradient of a test function attains its own norm") {
    const Eigen::VectorXcd v0 = random_coeffs(rng, ws.nk2 - 1);
    Eigen::VectorXcd v0_full = Eigen::VectorXcd::Zero(ws.nk2);
    v0_full.tail(ws.nk2 - 1) = v0;
    std::vector<CVec2> field(nq);
    for (int q = 0; q < nq; ++q) {
      Complex gx{0, 0}, gy{0, 0};
      for (int i = 0; i < ws.nk2; ++i) {
        gx += v0_full(i) * ctx.grad_x(i, q);
        gy += v0_full(i) * ctx.grad_y(i, q);
      }
      field[q] = {gx, gy};
    }
    CHECK(dual_norm(ctx, field) ==
          doctest::Approx(grad_norm_zero_mean(ctx, v0)).epsilon(1e-11));
  }

  SUBCASE("constant field matches the dense least-squares projector") {
    const CVec2 p{Complex{0.8, 0.0}, Complex{-0.6, 0.0}};
    std::vector<CVec2> field(nq, p);
    // stack sqrt(w) * gradient columns and solve the real least-squares
    Eigen::MatrixXd mat(2 * nq, ws.nk2 - 1);
    Eigen::VectorXd rhs(2 * nq);
    for (int q = 0; q < nq; ++q) {
      const double sw = std::sqrt(ws.vol.weights[q] * ctx.map.det);
      for (int i = 1; i < ws.nk2; ++i) {
        mat(2 * q, i - 1) = sw * ctx.grad_x(i, q);
        mat(2 * q + 1, i - 1) = sw * ctx.grad_y(i, q);
      }
      rhs(2 * q) = sw * p.x.real();
      rhs(2 * q + 1) = sw * p.y.real();
    }
    const Eigen::VectorXd c =
        mat.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
    const double projection_norm = (mat * c).norm();
    CHECK(dual_norm(ctx, field) == doctest::Approx(projection_norm).epsilon(1e-10));
  }

  SUBCASE("residual field identity and minimality of nu") {
    const Eigen::VectorXcd q = random_coeffs(rng, 2 * ws.nk);
    const Eigen::VectorXcd u = random_coeffs(rng, ws.nk);
    auto [nu, eps] = minres_postprocess(ctx, q, u);
    const double base = dual_norm(ctx, q_plus_grad_at_vol(ctx, q, nu));
    CHECK(base == doctest::Approx(grad_norm_zero_mean(ctx, eps)).epsilon(1e-10));
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::VectorXcd delta = Eigen::VectorXcd::Zero(ws.nk1);
      delta.tail(ws.nk1 - 1) = random_coeffs(rng, ws.nk1 - 1) * 0.3;  // zero mean
      const double perturbed = dual_norm(ctx, q_plus_grad_at_vol(ctx, q, nu + delta));
      CHECK(perturbed >= base - 1e-10);
    }
  }
}

TEST_CASE("postprocess outputs are linear in the inputs") {
  std::mt19937 rng(505);
  const Mesh mesh = one_element_mesh();
  const ElementContext ctx = element_context(mesh, 0, 1);
  const FeWorkspace& ws = *ctx.ws;
  const Complex c{-1.25, 0.5};
  const Eigen::VectorXcd q = random_coeffs(rng, 2 * ws.nk);
  const Eigen::VectorXcd u = random_coeffs(rng, ws.nk);
  auto [nu1, eps1] = minres_postprocess(ctx, q, u);
  auto [nu2, eps2] = minres_postprocess(ctx, (c * q).eval(), (c * u).eval());
  const Eigen::VectorXcd th1 = aux_theta(ctx, q, u);
  const Eigen::VectorXcd th2 = aux_theta(ctx, (c * q).eval(), (c * u).eval());
  const double scale = std::abs(c) * nu1.cwiseAbs().maxCoeff();
  CHECK((nu2 - c * nu1).cwiseAbs().maxCoeff() < 1e-11 * scale);
  CHECK((eps2 - c * eps1).cwiseAbs().maxCoeff() < 1e-11 * std::max(1.0, scale));
  CHECK((th2 - c * th1).cwiseAbs().maxCoeff() < 1e-11 * std::max(1.0, scale));
}

TEST_CASE("postprocess_all: mean constraints and zero-mean residuals") {
  const Mesh mesh = generate_unit_square(3);
  const ProblemSpec problem = plane_wave(kPi);
  HdgConfig config;
  config.degree = 1;
  const HdgSolution sol = solve_hdg(mesh, problem, config);
  const PostSolution post = postprocess_all(mesh, sol);
  const FeWorkspace& ws = fe_workspace(1);

  for (int t = 0; t < mesh.n_triangles(); ++t) {
    // (nu,1)_K = (u_h,1)_K reduces to equal leading coefficients
    CHECK(std::abs(post.nu[t](0) - sol.u[t](0)) <=
          1e-11 * std::max(1.0, std::abs(sol.u[t](0))));
    // zero mean of eps, via quadrature
    const ElementContext ctx = element_context(mesh, t, 1);
    Complex mean{0.0, 0.0};
    for (int q = 0; q < ws.vol.size(); ++q) {
      Complex v{0.0, 0.0};
      for (int i = 0; i < ws.nk2 - 1; ++i) v += post.eps[t](i) * ws.pk2.val(i + 1, q);
      mean += ws.vol.weights[q] * ctx.map.det * v;
    }
    CHECK(std::abs(mean) < 1e-12);
  }
}
