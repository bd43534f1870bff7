#ifndef HDGRES_FE_WORKSPACE_HPP
#define HDGRES_FE_WORKSPACE_HPP

#include <Eigen/Dense>
#include <array>

#include "hdgres/basis.hpp"
#include "hdgres/quadrature.hpp"

namespace hdgres {

/// Reference-element tables shared by assembly, postprocessing, and error
/// evaluation for one HDG degree k. Immutable after construction and safe
/// to share across element workers.
///
/// Edge traces are tabulated in the element-side parameterization: local
/// edge e of a triangle runs t in [-1,1] from vertex e+1 to vertex e+2.
/// Face (Legendre) bases are tabulated for both traversal directions, so an
/// element whose traversal opposes the stored face orientation uses the
/// mirrored table.
struct FeWorkspace {
  int degree = 0;  // HDG polynomial degree k
  int nk = 0;      // dim P_k
  int nk1 = 0;     // dim P_{k+1}
  int nk2 = 0;     // dim P_{k+2}
  int nf = 0;      // face dofs per face, k+1

  QuadRule vol;      // exactness 2(k+2): exact for every bilinear form used
  QuadRule vol_hi;   // exactness 20: data terms and error norms
  QuadRule edge;     // exactness 2(k+2)
  QuadRule edge_hi;  // exactness 20

  BasisSet pk, pk1, pk2;           // tabulated at vol
  BasisSet pk_hi, pk1_hi, pk2_hi;  // tabulated at vol_hi

  std::array<Eigen::MatrixXd, 3> pk_trace;   // nk x |edge| per local edge
  std::array<Eigen::MatrixXd, 3> pk1_trace;  // nk1 x |edge| (jump terms)

  Eigen::MatrixXd leg_pos, leg_neg;        // nf x |edge|, P_j(+t), P_j(-t)
  Eigen::MatrixXd leg_pos_hi, leg_neg_hi;  // nf x |edge_hi|
};

// Cached per-degree workspace.
const FeWorkspace& fe_workspace(int degree);

}  // namespace hdgres

#endif  // HDGRES_FE_WORKSPACE_HPP
