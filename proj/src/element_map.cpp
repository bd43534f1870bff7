#include "hdgres/element_map.hpp"

#include <stdexcept>

namespace hdgres {

AffineMap element_map(const Mesh& mesh, int element) {
  if (element < 0 || element >= mesh.n_triangles())
    throw std::invalid_argument("element_map: element index out of range");
  const Vec2 p0 = mesh.vertex_of(element, 0);
  const Vec2 p1 = mesh.vertex_of(element, 1);
  const Vec2 p2 = mesh.vertex_of(element, 2);
  AffineMap map;
  map.jacobian << p1.x - p0.x, p2.x - p0.x, p1.y - p0.y, p2.y - p0.y;
  map.translation = p0;
  map.det = map.jacobian.determinant();
  if (map.det <= 0.0) throw std::invalid_argument("element_map: degenerate element");
  map.jacobian_inv_t = map.jacobian.inverse().transpose();
  return map;
}

}  // namespace hdgres
