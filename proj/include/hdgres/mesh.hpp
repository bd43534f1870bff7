#ifndef HDGRES_MESH_HPP
#define HDGRES_MESH_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "hdgres/geometry.hpp"

namespace hdgres {

enum class FaceKind { interior = 0, boundary = 1 };

/// One mesh edge. Vertices are stored in the order the lower-indexed
/// incident triangle traverses them (counterclockwise), so `normal` is the
/// outward normal of that triangle and the outward domain normal on the
/// boundary.
struct Face {
  std::array<int, 2> v{-1, -1};
  double length = 0.0;
  Vec2 normal;
  FaceKind kind = FaceKind::interior;
  // Incident triangles; tri[0] < tri[1], tri[1] == -1 on the boundary.
  std::array<int, 2> tri{-1, -1};
};

struct FaceRef {
  int face = -1;
  int sign = 0;  // +1: triangle traversal matches stored vertex order
};

/// Conforming triangulation. Immutable after construction; refinement
/// returns a new mesh.
///
/// Local edge convention: edge e of triangle (v0,v1,v2) is the edge opposite
/// vertex e, traversed v_{e+1} -> v_{e+2} (indices mod 3) in the triangle's
/// counterclockwise boundary walk.
class Mesh {
 public:
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // CCW vertex indices
  std::vector<Face> faces;
  std::vector<std::array<FaceRef, 3>> tri_to_faces;  // per local edge
  std::vector<int> refinement_edge;                  // local edge index, NVB state
  // Index of the parent triangle in the mesh this one was refined from;
  // -1 for triangles created by a generator.
  std::vector<int> parent;

  Mesh() = default;
  // Builds face connectivity from triangles; throws std::invalid_argument on
  // inverted triangles or non-manifold edges.
  Mesh(std::vector<Vec2> verts, std::vector<std::array<int, 3>> tris,
       std::vector<int> ref_edges);

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
  int n_faces() const { return static_cast<int>(faces.size()); }

  Vec2 vertex_of(int tri, int local) const { return vertices[triangles[tri][local]]; }
  double triangle_area(int tri) const;
  double triangle_diameter(int tri) const;
  // Physical endpoints of local edge e of triangle t in traversal order.
  std::pair<Vec2, Vec2> local_edge(int tri, int e) const;
  // Outward unit normal of triangle t on its local edge e.
  Vec2 outward_normal(int tri, int e) const;
  // Outward normal of the lower-indexed triangle incident to face fi.
  Vec2 outward_normal_of_face(int fi) const;

  double total_area() const;
  double boundary_length() const;

  // Full invariant check (face incidence, orientation consistency, positive
  // areas, unit normals, no hanging nodes). Throws std::logic_error with a
  // description on the first violation.
  void validate() const;
};

struct MeshStats {
  int n_elements = 0;
  double h_max = 0.0;
  double min_angle = 0.0;  // radians
};

// Structured mesh of the unit square (0,1)^2, n subdivisions per side, each
// cell split along its lower-left to upper-right diagonal. 2n^2 triangles.
Mesh generate_unit_square(int n);

// Structured mesh of the L-shaped domain (-1,1)^2 \ [0,1]^2 with the
// reentrant corner vertex at the origin. n subdivisions per unit side,
// 6n^2 triangles.
Mesh generate_l_shape(int n);

// One conforming newest-vertex-bisection pass: every marked triangle is
// bisected at least once; the marked-edge closure keeps the result
// conforming. Marked indices outside [0, n_triangles) are rejected.
Mesh bisect(const Mesh& mesh, const std::vector<int>& marked);

MeshStats mesh_stats(const Mesh& mesh);

// Plain-text mesh format:
//   NV NT NF
//   NV lines: x y                 (17 significant digits)
//   NT lines: v0 v1 v2 ref_edge
//   NF lines: v0 v1 kind          (0 interior, 1 boundary)
void write_mesh(const Mesh& mesh, std::ostream& out);
void write_mesh_file(const Mesh& mesh, const std::string& path);
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);

}  // namespace hdgres

#endif  // HDGRES_MESH_HPP
