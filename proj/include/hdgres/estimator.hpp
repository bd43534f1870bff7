#ifndef HDGRES_ESTIMATOR_HPP
#define HDGRES_ESTIMATOR_HPP

#include <vector>

#include "hdgres/hdg.hpp"
#include "hdgres/mesh.hpp"
#include "hdgres/postprocess.hpp"
#include "hdgres/problems.hpp"

namespace hdgres {

/// Local error indicators
///   eta_K^2 = ||grad eps_K||_K^2 + ||q_h + grad nu_h||_K^2
///           + (1/2) sum_{interior F of K} omega^2 h_F ||[nu_h]||_F^2
/// and their global square-sum aggregate.
struct EstimateField {
  std::vector<double> eta;            // per element
  std::vector<double> grad_eps_sq;    // component breakdown
  std::vector<double> q_residual_sq;
  std::vector<double> jump_sq;        // the halved face shares of this element
  double eta_global = 0.0;
};

// int_F |[nu_h]|^2 ds per face (zero on boundary faces).
std::vector<double> face_jump_integrals(const Mesh& mesh, const PostSolution& post);

double element_estimator(const Mesh& mesh, int element, const PostSolution& post,
                         const HdgSolution& hdg, const std::vector<double>& face_jumps);

double global_estimator(const std::vector<double>& eta);

EstimateField estimate_all(const Mesh& mesh, const HdgSolution& hdg, const PostSolution& post);

/// Error norms against the exact solution, all by exactness-20 quadrature.
/// The broken ||.||_{1,omega} includes the jump terms; the triple norm is
/// ( ||u-nu||_{1,omega,Th}^2 + ||q-q_h||_Th^2 )^{1/2}.
struct ErrorReport {
  double err_u_l2 = 0.0;       // ||u - u_h||
  double err_nu_l2 = 0.0;      // ||u - nu_h||
  double err_grad_nu = 0.0;    // ||grad(u - nu_h)|| broken, no jumps
  double jump_nu = 0.0;        // (sum_F omega^2 h_F ||[nu_h]||_F^2)^{1/2}
  double err_nu_1omega = 0.0;  // ||u - nu_h||_{1,omega,Th}
  double err_q_l2 = 0.0;       // ||q - q_h||
  double triple = 0.0;
  double effectivity = 0.0;    // eta / triple when eta is supplied

  // Per-element squares for the local efficiency inequalities.
  std::vector<double> elem_nu_1omega_sq;  // ||u-nu||_{1,omega,K}^2
  std::vector<double> elem_q_sq;          // ||q-q_h||_K^2
  std::vector<double> elem_grad_nu_sq;    // ||grad(u-nu)||_K^2
};

// eta_global > 0 fills the effectivity index; pass 0 to leave it unset.
ErrorReport error_norms(const Mesh& mesh, const ProblemSpec& problem,
                        const HdgSolution& hdg, const PostSolution& post,
                        double eta_global = 0.0);

// Saturation diagnostic ||grad(u - theta_h)|| / ||grad(u - nu_h)|| over the
// broken gradient seminorm, theta_h from the enriched local solve. Reported
// only; no bound is assumed on it.
double saturation_ratio(const Mesh& mesh, const ProblemSpec& problem,
                        const HdgSolution& hdg, const PostSolution& post);

}  // namespace hdgres

#endif  // HDGRES_ESTIMATOR_HPP
