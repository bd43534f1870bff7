#ifndef HDGRES_GEOMETRY_HPP
#define HDGRES_GEOMETRY_HPP

#include <cmath>
#include <complex>

namespace hdgres {

using Complex = std::complex<double>;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }

  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  // z-component of the 2D cross product
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

// Complex-valued planar vector field sample.
struct CVec2 {
  Complex x{0.0, 0.0};
  Complex y{0.0, 0.0};

  CVec2() = default;
  CVec2(Complex x_, Complex y_) : x(x_), y(y_) {}

  CVec2 operator+(const CVec2& o) const { return {x + o.x, y + o.y}; }
  CVec2 operator-(const CVec2& o) const { return {x - o.x, y - o.y}; }
  Complex dot_real(Vec2 n) const { return x * n.x + y * n.y; }
  double squared_norm() const { return std::norm(x) + std::norm(y); }
};

inline double triangle_signed_area(Vec2 a, Vec2 b, Vec2 c) {
  return 0.5 * (b - a).cross(c - a);
}

}  // namespace hdgres

#endif  // HDGRES_GEOMETRY_HPP
