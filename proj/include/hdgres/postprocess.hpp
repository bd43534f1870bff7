#ifndef HDGRES_POSTPROCESS_HPP
#define HDGRES_POSTPROCESS_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "hdgres/element_map.hpp"
#include "hdgres/fe_workspace.hpp"
#include "hdgres/hdg.hpp"
#include "hdgres/mesh.hpp"

namespace hdgres {

/// Per-element working set for the local solves. The orthonormal bases are
/// nested (P_k, P_{k+1} are the leading blocks of P_{k+2}), so one stiffness
/// matrix serves every local problem:
///   gradient space   = rows/cols 1 .. nk2-1           (Xi_K, zero-mean)
///   P_{k+1} subspace = leading nk1 coefficients
struct ElementContext {
  int element = -1;
  const FeWorkspace* ws = nullptr;
  AffineMap map;
  Eigen::MatrixXd grad_x, grad_y;           // nk2 x nq physical gradients
  Eigen::MatrixXd stiffness;                // nk2 x nk2, (grad_i, grad_j)_K
  Eigen::LLT<Eigen::MatrixXd> stiff_zero_mean;  // factor of stiffness(1:,1:)
};

ElementContext element_context(const Mesh& mesh, int element, int degree);

// -(q_h, grad Psi_i)_K for all P_{k+2} basis functions.
Eigen::VectorXcd minus_q_gradient_moments(const ElementContext& ctx,
                                          const Eigen::VectorXcd& q_coeff);

// Stenberg reconstruction in P_{k+1}: (grad u~, grad v) = -(q_h, grad v) on
// the zero-mean subspace, mean matched to u_h.
Eigen::VectorXcd stenberg_postprocess(const ElementContext& ctx,
                                      const Eigen::VectorXcd& q_coeff,
                                      const Eigen::VectorXcd& u_coeff);

// Saddle-point residual minimization: returns (nu in P_{k+1}, eps in
// Xi_K = P_{k+2} cap L2_0; eps coefficients are for basis functions 1..).
std::pair<Eigen::VectorXcd, Eigen::VectorXcd> minres_postprocess(
    const ElementContext& ctx, const Eigen::VectorXcd& q_coeff,
    const Eigen::VectorXcd& u_coeff);

// Enriched local solve in P_{k+2} (saturation diagnostic).
Eigen::VectorXcd aux_theta(const ElementContext& ctx, const Eigen::VectorXcd& q_coeff,
                           const Eigen::VectorXcd& u_coeff);

// Same solve for a flux sampled at the points of ctx.ws->vol; reproduces any
// potential in P_{k+2} exactly (the coefficient overload is limited to
// fluxes representable in P_k^2). mean_coeff prescribes the leading
// coefficient, i.e. the element mean.
Eigen::VectorXcd aux_theta_field(const ElementContext& ctx,
                                 const std::vector<CVec2>& q_at_vol, Complex mean_coeff);

// sup over v in Xi_K of (p, grad v)_K / ||grad v||_K for a field sampled at
// the points of ctx.ws->vol, computed as sqrt(b^H S^-1 b).
double dual_norm(const ElementContext& ctx, const std::vector<CVec2>& p_at_vol);

// ||grad w||_K for w given by P_{k+2} coefficients (length <= nk2; shorter
// vectors are zero-padded, so P_{k+1} coefficients work directly).
double grad_norm(const ElementContext& ctx, const Eigen::VectorXcd& coeff);

// Same for coefficients over the zero-mean basis functions 1.. (eps layout).
double grad_norm_zero_mean(const ElementContext& ctx, const Eigen::VectorXcd& coeff);

// Values of q_h + grad(w) at the volume quadrature points.
std::vector<CVec2> q_plus_grad_at_vol(const ElementContext& ctx,
                                      const Eigen::VectorXcd& q_coeff,
                                      const Eigen::VectorXcd& w_coeff);

/// Element-local postprocessed fields for a whole mesh.
struct PostSolution {
  int degree = 0;              // HDG degree k
  const Mesh* mesh = nullptr;  // non-owning
  std::vector<Eigen::VectorXcd> nu;   // per element, dim P_{k+1}
  std::vector<Eigen::VectorXcd> eps;  // per element, dim Xi_K = nk2 - 1
};

PostSolution postprocess_all(const Mesh& mesh, const HdgSolution& hdg);

}  // namespace hdgres

#endif  // HDGRES_POSTPROCESS_HPP
