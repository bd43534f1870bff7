#include "hdgres/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hdgres {

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

Vec2 edge_normal(Vec2 a, Vec2 b) {
  Vec2 t = b - a;
  double len = t.norm();
  return {t.y / len, -t.x / len};
}

int longest_local_edge(const std::array<Vec2, 3>& p) {
  double best = -1.0;
  int arg = 0;
  for (int e = 0; e < 3; ++e) {
    double len = (p[(e + 2) % 3] - p[(e + 1) % 3]).norm();
    if (len > best) {
      best = len;
      arg = e;
    }
  }
  return arg;
}

}  // namespace

Mesh::Mesh(std::vector<Vec2> verts, std::vector<std::array<int, 3>> tris,
           std::vector<int> ref_edges)
    : vertices(std::move(verts)),
      triangles(std::move(tris)),
      refinement_edge(std::move(ref_edges)) {
  const int nt = n_triangles();
  if (static_cast<int>(refinement_edge.size()) != nt)
    throw std::invalid_argument("mesh: refinement_edge size mismatch");
  parent.assign(nt, -1);

  for (int t = 0; t < nt; ++t) {
    for (int v : triangles[t])
      if (v < 0 || v >= n_vertices())
        throw std::invalid_argument("mesh: vertex index out of range");
    if (triangle_signed_area(vertex_of(t, 0), vertex_of(t, 1), vertex_of(t, 2)) <= 0.0)
      throw std::invalid_argument("mesh: non-positive triangle area");
    if (refinement_edge[t] < 0 || refinement_edge[t] > 2)
      throw std::invalid_argument("mesh: refinement edge out of range");
  }

  // Face table: first traversal (lowest triangle index) fixes orientation.
  std::map<std::uint64_t, int> face_of_edge;
  tri_to_faces.assign(nt, {});
  for (int t = 0; t < nt; ++t) {
    for (int e = 0; e < 3; ++e) {
      const int a = triangles[t][(e + 1) % 3];
      const int b = triangles[t][(e + 2) % 3];
      auto [it, inserted] = face_of_edge.try_emplace(edge_key(a, b), n_faces());
      if (inserted) {
        Face f;
        f.v = {a, b};
        f.length = (vertices[b] - vertices[a]).norm();
        f.normal = edge_normal(vertices[a], vertices[b]);
        f.tri = {t, -1};
        f.kind = FaceKind::boundary;
        faces.push_back(f);
        tri_to_faces[t][e] = {it->second, +1};
      } else {
        Face& f = faces[it->second];
        if (f.tri[1] != -1)
          throw std::invalid_argument("mesh: edge shared by more than two triangles");
        f.tri[1] = t;
        f.kind = FaceKind::interior;
        // A consistently oriented mesh traverses a shared edge both ways.
        if (f.v[0] != b || f.v[1] != a)
          throw std::invalid_argument("mesh: inconsistent triangle orientation on shared edge");
        tri_to_faces[t][e] = {it->second, -1};
      }
    }
  }
}

double Mesh::triangle_area(int tri) const {
  return triangle_signed_area(vertex_of(tri, 0), vertex_of(tri, 1), vertex_of(tri, 2));
}

double Mesh::triangle_diameter(int tri) const {
  double d = 0.0;
  for (int e = 0; e < 3; ++e)
    d = std::max(d, (vertex_of(tri, (e + 2) % 3) - vertex_of(tri, (e + 1) % 3)).norm());
  return d;
}

std::pair<Vec2, Vec2> Mesh::local_edge(int tri, int e) const {
  return {vertex_of(tri, (e + 1) % 3), vertex_of(tri, (e + 2) % 3)};
}

Vec2 Mesh::outward_normal(int tri, int e) const {
  auto [a, b] = local_edge(tri, e);
  return edge_normal(a, b);
}

double Mesh::total_area() const {
  double s = 0.0;
  for (int t = 0; t < n_triangles(); ++t) s += triangle_area(t);
  return s;
}

double Mesh::boundary_length() const {
  double s = 0.0;
  for (const Face& f : faces)
    if (f.kind == FaceKind::boundary) s += f.length;
  return s;
}

void Mesh::validate() const {
  for (int t = 0; t < n_triangles(); ++t)
    if (triangle_area(t) <= 0.0) throw std::logic_error("mesh: non-positive area");

  for (int fi = 0; fi < n_faces(); ++fi) {
    const Face& f = faces[fi];
    const bool boundary = f.kind == FaceKind::boundary;
    if (boundary != (f.tri[1] == -1))
      throw std::logic_error("mesh: face kind inconsistent with incidence");
    if (std::abs(f.normal.norm() - 1.0) > 1e-14)
      throw std::logic_error("mesh: non-unit face normal");
    const double len = (vertices[f.v[1]] - vertices[f.v[0]]).norm();
    if (std::abs(f.length - len) > 1e-13 * std::max(1.0, len))
      throw std::logic_error("mesh: stored face length mismatch");
    // Stored orientation must be the lower incident triangle's traversal.
    const Vec2 n = f.normal;
    const Vec2 outward = outward_normal_of_face(fi);
    if (std::abs(n.x - outward.x) + std::abs(n.y - outward.y) > 1e-13)
      throw std::logic_error("mesh: face normal not outward for the lower triangle");
  }

  for (int t = 0; t < n_triangles(); ++t) {
    for (int e = 0; e < 3; ++e) {
      const FaceRef fr = tri_to_faces[t][e];
      const Face& f = faces[fr.face];
      const int a = triangles[t][(e + 1) % 3];
      const int b = triangles[t][(e + 2) % 3];
      if (fr.sign == +1 && (f.v[0] != a || f.v[1] != b))
        throw std::logic_error("mesh: face orientation sign wrong (+)");
      if (fr.sign == -1 && (f.v[0] != b || f.v[1] != a))
        throw std::logic_error("mesh: face orientation sign wrong (-)");
      if (f.tri[0] != t && f.tri[1] != t)
        throw std::logic_error("mesh: tri_to_faces incidence broken");
    }
  }

  // Hanging node check: no vertex may lie strictly inside a boundary face.
  // (A T-junction turns the long edge into an incidence-1 face.)
  for (const Face& f : faces) {
    if (f.kind != FaceKind::boundary) continue;
    const Vec2 a = vertices[f.v[0]];
    const Vec2 b = vertices[f.v[1]];
    for (int v = 0; v < n_vertices(); ++v) {
      if (v == f.v[0] || v == f.v[1]) continue;
      const Vec2 p = vertices[v];
      const Vec2 ab = b - a;
      const double t = (p - a).dot(ab) / ab.dot(ab);
      if (t <= 0.0 || t >= 1.0) continue;
      const Vec2 proj = a + ab * t;
      if ((p - proj).norm() < 1e-12 * f.length)
        throw std::logic_error("mesh: hanging node detected");
    }
  }
}

Vec2 Mesh::outward_normal_of_face(int fi) const {
  const Face& f = faces[fi];
  const int t = f.tri[0];
  for (int e = 0; e < 3; ++e)
    if (tri_to_faces[t][e].face == fi) return outward_normal(t, e);
  throw std::logic_error("mesh: face not found in its own triangle");
}

Mesh generate_unit_square(int n) {
  if (n < 1) throw std::invalid_argument("generate_unit_square: n must be >= 1");
  std::vector<Vec2> verts;
  verts.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  const double h = 1.0 / n;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) verts.push_back({i * h, j * h});
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };

  std::vector<std::array<int, 3>> tris;
  tris.reserve(static_cast<std::size_t>(2) * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int ll = vid(i, j), lr = vid(i + 1, j);
      const int ul = vid(i, j + 1), ur = vid(i + 1, j + 1);
      tris.push_back({ll, lr, ur});
      tris.push_back({ll, ur, ul});
    }
  }
  std::vector<int> ref(tris.size());
  for (std::size_t t = 0; t < tris.size(); ++t) {
    std::array<Vec2, 3> p{verts[tris[t][0]], verts[tris[t][1]], verts[tris[t][2]]};
    ref[t] = longest_local_edge(p);
  }
  return Mesh(std::move(verts), std::move(tris), std::move(ref));
}

Mesh generate_l_shape(int n) {
  if (n < 1) throw std::invalid_argument("generate_l_shape: n must be >= 1");
  // Grid over (-1,1)^2 with 2n subdivisions per side; drop cells in [0,1]^2.
  const int m = 2 * n;
  const double h = 1.0 / n;
  std::vector<Vec2> grid;
  grid.reserve(static_cast<std::size_t>(m + 1) * (m + 1));
  for (int j = 0; j <= m; ++j)
    for (int i = 0; i <= m; ++i) grid.push_back({-1.0 + i * h, -1.0 + j * h});

  std::vector<int> remap(grid.size(), -1);
  std::vector<Vec2> verts;
  std::vector<std::array<int, 3>> tris;
  auto gid = [m](int i, int j) { return j * (m + 1) + i; };
  auto keep_cell = [n](int i, int j) { return !(i >= n && j >= n); };
  auto use_vertex = [&](int g) {
    if (remap[g] < 0) {
      remap[g] = static_cast<int>(verts.size());
      verts.push_back(grid[g]);
    }
    return remap[g];
  };

  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      if (!keep_cell(i, j)) continue;
      const int ll = use_vertex(gid(i, j)), lr = use_vertex(gid(i + 1, j));
      const int ul = use_vertex(gid(i, j + 1)), ur = use_vertex(gid(i + 1, j + 1));
      tris.push_back({ll, lr, ur});
      tris.push_back({ll, ur, ul});
    }
  }
  std::vector<int> ref(tris.size());
  for (std::size_t t = 0; t < tris.size(); ++t) {
    std::array<Vec2, 3> p{verts[tris[t][0]], verts[tris[t][1]], verts[tris[t][2]]};
    ref[t] = longest_local_edge(p);
  }
  return Mesh(std::move(verts), std::move(tris), std::move(ref));
}

namespace {

struct SplitState {
  const Mesh* mesh;
  const std::vector<int>* midpoint_of_face;  // -1 where unmarked
  std::vector<std::array<int, 3>> out_tris;
  std::vector<int> out_ref;
  std::vector<int> out_parent;

  // Recursively bisect (p, a, b) whose refinement edge is (a, b); `mid` is
  // the midpoint vertex of that edge. Children inherit marked parent edges
  // as their own refinement edges, so depth is at most two.
  void split(int root, int p, int a, int b, int mid, int mid_pa, int mid_bp) {
    // child 1: (p, a, mid), refinement edge (p, a)
    if (mid_pa >= 0) {
      split(root, mid, p, a, mid_pa, -1, -1);
    } else {
      emit(root, {p, a, mid}, 2);
    }
    // child 2: (p, mid, b), refinement edge (b, p)
    if (mid_bp >= 0) {
      split(root, mid, b, p, mid_bp, -1, -1);
    } else {
      emit(root, {p, mid, b}, 1);
    }
  }

  void emit(int root, std::array<int, 3> tri, int ref_edge) {
    out_tris.push_back(tri);
    out_ref.push_back(ref_edge);
    out_parent.push_back(root);
  }
};

}  // namespace

Mesh bisect(const Mesh& mesh, const std::vector<int>& marked) {
  for (int t : marked)
    if (t < 0 || t >= mesh.n_triangles())
      throw std::invalid_argument("bisect: marked index out of range");
  if (marked.empty()) {
    Mesh copy = mesh;
    for (int t = 0; t < copy.n_triangles(); ++t) copy.parent[t] = t;
    return copy;
  }

  // Mark the refinement edges of all marked triangles, then close: any
  // triangle touching a marked edge must also get its refinement edge marked.
  std::vector<char> edge_marked(mesh.n_faces(), 0);
  std::vector<int> queue;
  auto mark_tri = [&](int t) {
    const int f = mesh.tri_to_faces[t][mesh.refinement_edge[t]].face;
    if (!edge_marked[f]) {
      edge_marked[f] = 1;
      queue.push_back(f);
    }
  };
  for (int t : marked) mark_tri(t);
  while (!queue.empty()) {
    const int f = queue.back();
    queue.pop_back();
    for (int t : mesh.faces[f].tri)
      if (t >= 0) mark_tri(t);
  }

  // New vertices: midpoints of marked edges, ordered by face index.
  std::vector<Vec2> verts = mesh.vertices;
  std::vector<int> midpoint_of_face(mesh.n_faces(), -1);
  for (int f = 0; f < mesh.n_faces(); ++f) {
    if (!edge_marked[f]) continue;
    const Face& face = mesh.faces[f];
    midpoint_of_face[f] = static_cast<int>(verts.size());
    verts.push_back((mesh.vertices[face.v[0]] + mesh.vertices[face.v[1]]) * 0.5);
  }

  SplitState st;
  st.mesh = &mesh;
  st.midpoint_of_face = &midpoint_of_face;
  st.out_tris.reserve(mesh.triangles.size() * 2);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const int e = mesh.refinement_edge[t];
    const int fe = mesh.tri_to_faces[t][e].face;
    if (midpoint_of_face[fe] < 0) {
      st.out_tris.push_back(mesh.triangles[t]);
      st.out_ref.push_back(e);
      st.out_parent.push_back(t);
      continue;
    }
    const int p = mesh.triangles[t][e];
    const int a = mesh.triangles[t][(e + 1) % 3];
    const int b = mesh.triangles[t][(e + 2) % 3];
    // Closure guarantees only the other two parent edges can carry midpoints.
    const int mid_pa = midpoint_of_face[mesh.tri_to_faces[t][(e + 2) % 3].face];
    const int mid_bp = midpoint_of_face[mesh.tri_to_faces[t][(e + 1) % 3].face];
    st.split(t, p, a, b, midpoint_of_face[fe], mid_pa, mid_bp);
  }

  Mesh out(std::move(verts), std::move(st.out_tris), std::move(st.out_ref));
  out.parent = std::move(st.out_parent);
  return out;
}

MeshStats mesh_stats(const Mesh& mesh) {
  MeshStats s;
  s.n_elements = mesh.n_triangles();
  s.min_angle = std::numeric_limits<double>::infinity();
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    s.h_max = std::max(s.h_max, mesh.triangle_diameter(t));
    for (int v = 0; v < 3; ++v) {
      const Vec2 e1 = mesh.vertex_of(t, (v + 1) % 3) - mesh.vertex_of(t, v);
      const Vec2 e2 = mesh.vertex_of(t, (v + 2) % 3) - mesh.vertex_of(t, v);
      const double ang = std::atan2(std::abs(e1.cross(e2)), e1.dot(e2));
      s.min_angle = std::min(s.min_angle, ang);
    }
  }
  return s;
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  out << mesh.n_vertices() << ' ' << mesh.n_triangles() << ' ' << mesh.n_faces() << '\n';
  out << std::setprecision(17);
  for (const Vec2& v : mesh.vertices) out << v.x << ' ' << v.y << '\n';
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    out << tri[0] << ' ' << tri[1] << ' ' << tri[2] << ' ' << mesh.refinement_edge[t] << '\n';
  }
  for (const Face& f : mesh.faces)
    out << f.v[0] << ' ' << f.v[1] << ' ' << static_cast<int>(f.kind) << '\n';
}

void write_mesh_file(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open mesh file for writing: " + path);
  write_mesh(mesh, out);
}

Mesh read_mesh(std::istream& in) {
  int nv = 0, nt = 0, nf = 0;
  if (!(in >> nv >> nt >> nf)) throw std::runtime_error("mesh file: bad header");
  if (nv < 3 || nt < 1 || nf < 3) throw std::runtime_error("mesh file: implausible counts");
  std::vector<Vec2> verts(nv);
  for (auto& v : verts)
    if (!(in >> v.x >> v.y)) throw std::runtime_error("mesh file: bad vertex line");
  std::vector<std::array<int, 3>> tris(nt);
  std::vector<int> ref(nt);
  for (int t = 0; t < nt; ++t)
    if (!(in >> tris[t][0] >> tris[t][1] >> tris[t][2] >> ref[t]))
      throw std::runtime_error("mesh file: bad triangle line");

  Mesh mesh(std::move(verts), std::move(tris), std::move(ref));
  if (mesh.n_faces() != nf) throw std::runtime_error("mesh file: face count mismatch");
  std::map<std::uint64_t, int> listed;
  for (int f = 0; f < nf; ++f) {
    int a = 0, b = 0, kind = 0;
    if (!(in >> a >> b >> kind)) throw std::runtime_error("mesh file: bad face line");
    listed[edge_key(a, b)] = kind;
  }
  for (const Face& built : mesh.faces) {
    auto it = listed.find(edge_key(built.v[0], built.v[1]));
    if (it == listed.end() || it->second != static_cast<int>(built.kind))
      throw std::runtime_error("mesh file: face record inconsistent with triangles");
  }
  return mesh;
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file: " + path);
  return read_mesh(in);
}

}  // namespace hdgres
