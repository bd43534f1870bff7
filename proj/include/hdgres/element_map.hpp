#ifndef HDGRES_ELEMENT_MAP_HPP
#define HDGRES_ELEMENT_MAP_HPP

#include <Eigen/Dense>

#include "hdgres/geometry.hpp"
#include "hdgres/mesh.hpp"

namespace hdgres {

/// Affine map from the reference triangle (0,0)-(1,0)-(0,1) to a physical
/// element. Gradients transform by the inverse-transpose Jacobian.
struct AffineMap {
  Eigen::Matrix2d jacobian;
  Vec2 translation;
  double det = 0.0;  // equals 2 x triangle area
  Eigen::Matrix2d jacobian_inv_t;

  Vec2 apply(Vec2 ref) const {
    return {jacobian(0, 0) * ref.x + jacobian(0, 1) * ref.y + translation.x,
            jacobian(1, 0) * ref.x + jacobian(1, 1) * ref.y + translation.y};
  }
  Vec2 push_gradient(Vec2 ref_grad) const {
    return {jacobian_inv_t(0, 0) * ref_grad.x + jacobian_inv_t(0, 1) * ref_grad.y,
            jacobian_inv_t(1, 0) * ref_grad.x + jacobian_inv_t(1, 1) * ref_grad.y};
  }
};

AffineMap element_map(const Mesh& mesh, int element);

}  // namespace hdgres

#endif  // HDGRES_ELEMENT_MAP_HPP
