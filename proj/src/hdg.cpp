#include "hdgres/hdg.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>

#include "hdgres/element_map.hpp"
#include "hdgres/parallel.hpp"

namespace hdgres {

namespace {

// Face-basis values (orthonormal Legendre on the face) at the element-side
// edge quadrature points of local edge e. Rows: face dof, cols: point.
Eigen::MatrixXd face_basis_table(const FeWorkspace& ws, const Mesh& mesh, int element,
                                 int e, bool hi_rule) {
  const FaceRef fr = mesh.tri_to_faces[element][e];
  const double h = mesh.faces[fr.face].length;
  const Eigen::MatrixXd& leg = hi_rule ? (fr.sign > 0 ? ws.leg_pos_hi : ws.leg_neg_hi)
                                       : (fr.sign > 0 ? ws.leg_pos : ws.leg_neg);
  Eigen::MatrixXd table = leg;
  for (int j = 0; j < ws.nf; ++j) table.row(j) *= std::sqrt((2 * j + 1) / h);
  return table;
}

}  // namespace

LocalBlocks assemble_local(const Mesh& mesh, int element, const ProblemSpec& problem,
                           const HdgConfig& config) {
  const FeWorkspace& ws = fe_workspace(config.degree);
  const AffineMap map = element_map(mesh, element);
  const double omega = problem.omega;
  const double tau = config.tau_for(omega);
  const Complex i_unit{0.0, 1.0};

  const int nk = ws.nk;
  const int nf = ws.nf;
  const int nqv = ws.vol.size();

  LocalBlocks blocks;
  blocks.element = element;
  blocks.nk = nk;
  blocks.nf = nf;
  blocks.A = Eigen::MatrixXcd::Zero(3 * nk, 3 * nk);
  blocks.C = Eigen::MatrixXcd::Zero(3 * nk, 3 * nf);
  blocks.G = Eigen::MatrixXcd::Zero(3 * nf, 3 * nk);
  blocks.D = Eigen::MatrixXcd::Zero(3 * nf, 3 * nf);
  blocks.load_interior = Eigen::VectorXcd::Zero(3 * nk);
  blocks.load_face = Eigen::VectorXcd::Zero(3 * nf);

  // Physical gradients of the P_k basis at volume points.
  Eigen::MatrixXd gx(nk, nqv), gy(nk, nqv);
  for (int i = 0; i < nk; ++i) {
    for (int q = 0; q < nqv; ++q) {
      const Vec2 g = map.push_gradient({ws.pk.dx(i, q), ws.pk.dy(i, q)});
      gx(i, q) = g.x;
      gy(i, q) = g.y;
    }
  }

  // Volume pieces: scalar mass M, and S_d(i,j) = (phi_j, d-component of
  // grad phi_i)_K. The (u, div v) and (q, grad w) couplings both reduce to S.
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(nk, nk);
  Eigen::MatrixXd sgx = Eigen::MatrixXd::Zero(nk, nk);
  Eigen::MatrixXd sgy = Eigen::MatrixXd::Zero(nk, nk);
  for (int q = 0; q < nqv; ++q) {
    const double w = ws.vol.weights[q] * map.det;
    for (int i = 0; i < nk; ++i) {
      const double vi = ws.pk.val(i, q);
      for (int j = 0; j < nk; ++j) {
        const double vj = ws.pk.val(j, q);
        mass(i, j) += w * vi * vj;
        sgx(i, j) += w * vj * gx(i, q);
        sgy(i, j) += w * vj * gy(i, q);
      }
    }
  }

  // Equation (a): (q, v) - (u, div v) + <uhat, v.n>.
  blocks.A.block(0, 0, nk, nk) = mass;
  blocks.A.block(nk, nk, nk, nk) = mass;
  blocks.A.block(0, 2 * nk, nk, nk) = -sgx;
  blocks.A.block(nk, 2 * nk, nk, nk) = -sgy;
  // Equation (b), negated: (q, grad w) - <q.n, w> + w^2 (u, w)
  //                        - i tau <u - uhat, w> = -(f, w).
  blocks.A.block(2 * nk, 0, nk, nk) = sgx;
  blocks.A.block(2 * nk, nk, nk, nk) = sgy;
  blocks.A.block(2 * nk, 2 * nk, nk, nk) = omega * omega * mass;

  for (int e = 0; e < 3; ++e) {
    const FaceRef fr = mesh.tri_to_faces[element][e];
    const Face& face = mesh.faces[fr.face];
    const double h = face.length;
    const Vec2 n = mesh.outward_normal(element, e);
    const bool boundary = face.kind == FaceKind::boundary;
    const Eigen::MatrixXd& trace = ws.pk_trace[e];
    const Eigen::MatrixXd mu = face_basis_table(ws, mesh, element, e, false);
    const int nqe = ws.edge.size();

    Eigen::MatrixXd edge_mass = Eigen::MatrixXd::Zero(nk, nk);    // <phi_j, phi_i>_F
    Eigen::MatrixXd edge_mixed = Eigen::MatrixXd::Zero(nk, nf);   // <m_l, phi_i>_F
    Eigen::MatrixXd face_mass = Eigen::MatrixXd::Zero(nf, nf);    // <m_l', m_l>_F
    for (int q = 0; q < nqe; ++q) {
      const double w = 0.5 * h * ws.edge.weights[q];
      for (int i = 0; i < nk; ++i) {
        for (int j = 0; j < nk; ++j) edge_mass(i, j) += w * trace(i, q) * trace(j, q);
        for (int l = 0; l < nf; ++l) edge_mixed(i, l) += w * trace(i, q) * mu(l, q);
      }
      for (int l = 0; l < nf; ++l)
        for (int m = 0; m < nf; ++m) face_mass(l, m) += w * mu(l, q) * mu(m, q);
    }

    // (a): +<uhat, v.n>
    blocks.C.block(0, e * nf, nk, nf) += n.x * edge_mixed;
    blocks.C.block(nk, e * nf, nk, nf) += n.y * edge_mixed;
    // (b) negated: -<q.n, w> - i tau <u, w> + i tau <uhat, w>
    blocks.A.block(2 * nk, 0, nk, nk) -= n.x * edge_mass;
    blocks.A.block(2 * nk, nk, nk, nk) -= n.y * edge_mass;
    blocks.A.block(2 * nk, 2 * nk, nk, nk) -= i_unit * tau * edge_mass;
    blocks.C.block(2 * nk, e * nf, nk, nf) += i_unit * tau * edge_mixed;
    // Flux rows: <q.n, mu> + i tau <u, mu> - i tau <uhat, mu>, and on the
    // boundary the negated absorbing condition adds -i omega <uhat, mu>.
    blocks.G.block(e * nf, 0, nf, nk) += n.x * edge_mixed.transpose();
    blocks.G.block(e * nf, nk, nf, nk) += n.y * edge_mixed.transpose();
    blocks.G.block(e * nf, 2 * nk, nf, nk) += i_unit * tau * edge_mixed.transpose();
    blocks.D.block(e * nf, e * nf, nf, nf) -= i_unit * tau * face_mass;
    if (boundary) blocks.D.block(e * nf, e * nf, nf, nf) -= i_unit * omega * face_mass;

    // Boundary load -<g, mu> with the high-order edge rule.
    if (boundary) {
      const auto [pa, pb] = mesh.local_edge(element, e);
      const Eigen::MatrixXd mu_hi = face_basis_table(ws, mesh, element, e, true);
      for (int q = 0; q < ws.edge_hi.size(); ++q) {
        const double t = ws.edge_hi.points[q].x;
        const Vec2 x = pa + (pb - pa) * (0.5 * (t + 1.0));
        const Complex gval = problem.boundary_g(x, n);
        const double w = 0.5 * h * ws.edge_hi.weights[q];
        for (int l = 0; l < nf; ++l)
          blocks.load_face(e * nf + l) -= w * gval * mu_hi(l, q);
      }
    }
  }

  // Interior load -(f, w) with the high-order volume rule.
  for (int q = 0; q < ws.vol_hi.size(); ++q) {
    const Vec2 x = map.apply(ws.vol_hi.points[q]);
    const Complex fval = problem.source_f(x);
    if (fval == Complex{0.0, 0.0}) continue;
    const double w = ws.vol_hi.weights[q] * map.det;
    for (int i = 0; i < nk; ++i)
      blocks.load_interior(2 * nk + i) -= w * fval * ws.pk_hi.val(i, q);
  }

  return blocks;
}

CondensedBlock condense(const LocalBlocks& blocks) {
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(blocks.A);
  if (!lu.isInvertible()) throw std::runtime_error("local elimination failed");
  CondensedBlock out;
  out.element = blocks.element;
  out.schur = blocks.D - blocks.G * lu.solve(blocks.C);
  out.rhs = blocks.load_face - blocks.G * lu.solve(blocks.load_interior);
  return out;
}

Eigen::VectorXcd solve_skeleton(const Mesh& mesh, const std::vector<CondensedBlock>& blocks,
                                int degree) {
  const int nf = degree + 1;
  const Eigen::Index n = static_cast<Eigen::Index>(mesh.n_faces()) * nf;
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(blocks.size() * 9 * nf * nf);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);

  for (const CondensedBlock& block : blocks) {
    std::array<int, 3> offset{};
    for (int e = 0; e < 3; ++e)
      offset[e] = mesh.tri_to_faces[block.element][e].face * nf;
    for (int ei = 0; ei < 3; ++ei) {
      for (int i = 0; i < nf; ++i) {
        rhs(offset[ei] + i) += block.rhs(ei * nf + i);
        for (int ej = 0; ej < 3; ++ej)
          for (int j = 0; j < nf; ++j)
            triplets.emplace_back(offset[ei] + i, offset[ej] + j,
                                  block.schur(ei * nf + i, ej * nf + j));
      }
    }
  }

  Eigen::SparseMatrix<Complex> skeleton(n, n);
  skeleton.setFromTriplets(triplets.begin(), triplets.end());
  skeleton.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
  lu.analyzePattern(skeleton);
  lu.factorize(skeleton);
  if (lu.info() != Eigen::Success) throw std::runtime_error("skeleton system singular");
  Eigen::VectorXcd uhat = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw std::runtime_error("skeleton system singular");

  const double rhs_norm = rhs.norm();
  if (rhs_norm > 0.0) {
    const double residual = (skeleton * uhat - rhs).norm() / rhs_norm;
    if (!(residual <= 1e-10))  // also catches NaN from a near-singular factor
      throw std::runtime_error("skeleton solve residual too large");
  }
  return uhat;
}

Eigen::VectorXcd recover_element(const LocalBlocks& blocks, const Eigen::VectorXcd& uhat_loc) {
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(blocks.A);
  if (!lu.isInvertible()) throw std::runtime_error("local elimination failed");
  return lu.solve(blocks.load_interior - blocks.C * uhat_loc);
}

HdgSolution recover_interior(const Mesh& mesh, const ProblemSpec& problem,
                             const HdgConfig& config, const Eigen::VectorXcd& uhat) {
  const FeWorkspace& ws = fe_workspace(config.degree);
  const int nel = mesh.n_triangles();
  HdgSolution sol;
  sol.degree = config.degree;
  sol.omega = problem.omega;
  sol.mesh = &mesh;
  sol.config = config;
  sol.q.resize(nel);
  sol.u.resize(nel);
  sol.uhat.resize(mesh.n_faces());
  for (int f = 0; f < mesh.n_faces(); ++f) sol.uhat[f] = uhat.segment(f * ws.nf, ws.nf);

  parallel_for(nel, [&](int t) {
    const LocalBlocks blocks = assemble_local(mesh, t, problem, config);
    Eigen::VectorXcd traces(3 * ws.nf);
    for (int e = 0; e < 3; ++e)
      traces.segment(e * ws.nf, ws.nf) =
          uhat.segment(mesh.tri_to_faces[t][e].face * ws.nf, ws.nf);
    const Eigen::VectorXcd x = recover_element(blocks, traces);
    sol.q[t] = x.head(2 * ws.nk);
    sol.u[t] = x.tail(ws.nk);
  });
  return sol;
}

HdgSolution solve_hdg(const Mesh& mesh, const ProblemSpec& problem, const HdgConfig& config) {
  const int nel = mesh.n_triangles();
  std::vector<CondensedBlock> blocks(nel);
  parallel_for(nel, [&](int t) {
    blocks[t] = condense(assemble_local(mesh, t, problem, config));
  });
  const Eigen::VectorXcd uhat = solve_skeleton(mesh, blocks, config.degree);
  return recover_interior(mesh, problem, config, uhat);
}

Eigen::VectorXcd element_traces(const Mesh& mesh, const HdgSolution& sol, int element) {
  const int nf = sol.degree + 1;
  Eigen::VectorXcd traces(3 * nf);
  for (int e = 0; e < 3; ++e)
    traces.segment(e * nf, nf) = sol.uhat[mesh.tri_to_faces[element][e].face];
  return traces;
}

HdgResiduals hdg_residuals(const Mesh& mesh, const ProblemSpec& problem,
                           const HdgConfig& config, const HdgSolution& sol) {
  const FeWorkspace& ws = fe_workspace(config.degree);
  const int nel = mesh.n_triangles();
  const int nf = ws.nf;

  double interior_sq = 0.0;
  double load_sq = 0.0;
  Eigen::VectorXcd face_res = Eigen::VectorXcd::Zero(mesh.n_faces() * nf);
  Eigen::VectorXcd face_load = Eigen::VectorXcd::Zero(mesh.n_faces() * nf);

  for (int t = 0; t < nel; ++t) {
    const LocalBlocks blocks = assemble_local(mesh, t, problem, config);
    Eigen::VectorXcd x(3 * ws.nk);
    x << sol.q[t], sol.u[t];
    const Eigen::VectorXcd traces = element_traces(mesh, sol, t);
    interior_sq += (blocks.A * x + blocks.C * traces - blocks.load_interior).squaredNorm();
    load_sq += blocks.load_interior.squaredNorm();
    const Eigen::VectorXcd fr = blocks.G * x + blocks.D * traces - blocks.load_face;
    for (int e = 0; e < 3; ++e) {
      const int off = mesh.tri_to_faces[t][e].face * nf;
      face_res.segment(off, nf) += fr.segment(e * nf, nf);
      face_load.segment(off, nf) += blocks.load_face.segment(e * nf, nf);
    }
  }

  const double load_norm = std::sqrt(load_sq + face_load.squaredNorm());
  const double scale = load_norm > 0.0 ? load_norm : 1.0;
  HdgResiduals res;
  res.interior = std::sqrt(interior_sq) / scale;
  res.skeleton = face_res.norm() / scale;
  return res;
}

}  // namespace hdgres
