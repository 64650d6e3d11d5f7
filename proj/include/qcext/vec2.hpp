#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qcext {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

// Raised when an operation's precondition does not hold.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }
// Counterclockwise quarter turn.
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline Vec2 normalized(Vec2 a) {
  const double n = norm(a);
  if (!(n > 0.0)) throw Error("cannot normalize a zero vector");
  return a / n;
}
inline Vec2 unit_from_angle(double t) { return {std::cos(t), std::sin(t)}; }
inline double angle_of(Vec2 a) { return std::atan2(a.y, a.x); }
inline bool is_finite(Vec2 a) { return std::isfinite(a.x) && std::isfinite(a.y); }
inline Vec2 lerp(Vec2 a, Vec2 b, double s) { return a + (b - a) * s; }

// CCW angle in [0, 2pi) needed to rotate `from` onto `to`.
double ccw_angle(Vec2 from, Vec2 to);

std::string to_string(Vec2 v);

// {p : normal . p <= offset}; normal has unit length.
struct HalfPlane {
  Vec2 normal;
  double offset = 0.0;

  HalfPlane() = default;
  HalfPlane(Vec2 n, double off);
  // Half-plane with outward normal n whose boundary passes through p.
  static HalfPlane through(Vec2 n, Vec2 p);

  double slack(Vec2 p) const { return offset - dot(normal, p); }
  bool contains(Vec2 p, double tol = 0.0) const { return slack(p) >= -tol; }
  Vec2 anchor() const { return normal * offset; }
  Vec2 direction() const { return perp(normal); }
};

// Affine map p -> linear * p + shift, stored row-major as [[m11,m12,tx],[m21,m22,ty]].
struct Affine2 {
  std::array<double, 4> m{1.0, 0.0, 0.0, 1.0};
  Vec2 shift;

  static Affine2 identity() { return {}; }
  static Affine2 rotation(double angle, Vec2 shift = {});
  Vec2 apply(Vec2 p) const { return linear(p) + shift; }
  Vec2 linear(Vec2 p) const { return {m[0] * p.x + m[1] * p.y, m[2] * p.x + m[3] * p.y}; }
  // Transpose of the linear part; the inverse when the map is orthogonal.
  Vec2 linear_transpose(Vec2 p) const { return {m[0] * p.x + m[2] * p.y, m[1] * p.x + m[3] * p.y}; }
  Vec2 inverse_apply(Vec2 p) const;
  double det() const { return m[0] * m[3] - m[1] * m[2]; }
  bool is_orthogonal(double tol = 1e-9) const;
};

// Closed parameter interval; either end may be infinite. Empty when lo > hi.
struct Interval {
  double lo = -kInf;
  double hi = kInf;
  bool empty() const { return !(lo <= hi); }
  double length() const { return empty() ? 0.0 : hi - lo; }
  Interval intersect(Interval o) const { return {std::max(lo, o.lo), std::min(hi, o.hi)}; }
};

}  // namespace qcext
