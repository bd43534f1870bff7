#ifndef HDGRES_HDG_HPP
#define HDGRES_HDG_HPP

#include <Eigen/Dense>
#include <vector>

#include "hdgres/fe_workspace.hpp"
#include "hdgres/mesh.hpp"
#include "hdgres/problems.hpp"

namespace hdgres {

struct HdgConfig {
  int degree = 1;
  enum class TauMode { constant, omega } tau_mode = TauMode::omega;
  double tau_value = 1.0;  // used in constant mode

  double tau_for(double omega) const {
    const double tau = tau_mode == TauMode::omega ? omega : tau_value;
    if (tau <= 0.0) throw std::invalid_argument("hdg: stabilization tau must be positive");
    return tau;
  }
};

/// Discrete HDG fields: per-element coefficients of q_h (x block then y
/// block, dim P_k each) and u_h, plus per-face trace coefficients.
/// Coefficients refer to the reference-orthonormal bases pushed through the
/// element map; face bases are Legendre, orthonormal on the face.
struct HdgSolution {
  int degree = 0;
  double omega = 0.0;
  const Mesh* mesh = nullptr;  // non-owning; the mesh must outlive the solution
  HdgConfig config;
  std::vector<Eigen::VectorXcd> q;     // per element, 2*nk
  std::vector<Eigen::VectorXcd> u;     // per element, nk
  std::vector<Eigen::VectorXcd> uhat;  // per face, k+1
};

/// Element-local dense blocks of the hybridized system, in the symmetric
/// sign convention (second and boundary equations negated, which leaves the
/// solution unchanged and makes the condensed system complex symmetric).
/// Interior ordering: [qx | qy | u]; face ordering: local edges 0,1,2.
struct LocalBlocks {
  int element = -1;
  int nk = 0;
  int nf = 0;
  Eigen::MatrixXcd A;            // (3nk) x (3nk) interior coupling
  Eigen::MatrixXcd C;            // (3nk) x (3nf): interior rows, trace columns
  Eigen::MatrixXcd G;            // (3nf) x (3nk): flux-continuity rows
  Eigen::MatrixXcd D;            // (3nf) x (3nf)
  Eigen::VectorXcd load_interior;  // [0; -(f,w)]
  Eigen::VectorXcd load_face;      // -<g,mu> on boundary faces

  // The (q,v) mass block; Hermitian positive definite (= det J x identity).
  Eigen::MatrixXcd q_mass() const { return A.topLeftCorner(2 * nk, 2 * nk); }
};

struct CondensedBlock {
  int element = -1;
  Eigen::MatrixXcd schur;  // (3nf) x (3nf)
  Eigen::VectorXcd rhs;    // 3nf
};

LocalBlocks assemble_local(const Mesh& mesh, int element, const ProblemSpec& problem,
                           const HdgConfig& config);

// Eliminates (q_h, u_h); throws std::runtime_error("local elimination
// failed") if the interior block is singular.
CondensedBlock condense(const LocalBlocks& blocks);

// Assembles and factorizes the global skeleton system; returns the stacked
// trace coefficients (face f owns rows [f*(k+1), (f+1)*(k+1))). Throws
// std::runtime_error("skeleton system singular") on factorization failure
// and checks the relative residual to 1e-10.
Eigen::VectorXcd solve_skeleton(const Mesh& mesh,
                                const std::vector<CondensedBlock>& blocks, int degree);

// Back-substitutes one element given its trace coefficients.
Eigen::VectorXcd recover_element(const LocalBlocks& blocks, const Eigen::VectorXcd& uhat_loc);

// Back-substitutes all elements (re-assembles local blocks internally).
HdgSolution recover_interior(const Mesh& mesh, const ProblemSpec& problem,
                             const HdgConfig& config, const Eigen::VectorXcd& uhat);

HdgSolution solve_hdg(const Mesh& mesh, const ProblemSpec& problem, const HdgConfig& config);

/// Residuals of the four discrete equations (original sign convention),
/// tested against every basis function, relative to the load norms.
struct HdgResiduals {
  double interior = 0.0;  // local equations (a), (b)
  double skeleton = 0.0;  // flux continuity / boundary equations (c), (d)
};

HdgResiduals hdg_residuals(const Mesh& mesh, const ProblemSpec& problem,
                           const HdgConfig& config, const HdgSolution& sol);

// Gathers the trace coefficients of one element in local edge order.
Eigen::VectorXcd element_traces(const Mesh& mesh, const HdgSolution& sol, int element);

}  // namespace hdgres

#endif  // HDGRES_HDG_HPP
