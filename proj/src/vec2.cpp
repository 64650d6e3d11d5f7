#include "qcext/vec2.hpp"

#include <cstdio>

namespace qcext {

double ccw_angle(Vec2 from, Vec2 to) {
  double a = std::atan2(cross(from, to), dot(from, to));
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

std::string to_string(Vec2 v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.17g, %.17g)", v.x, v.y);
  return buf;
}

HalfPlane::HalfPlane(Vec2 n, double off) {
  const double len = norm(n);
  if (!(len > 0.0) || !std::isfinite(len)) throw Error("half-plane normal must be a finite nonzero vector");
  normal = n / len;
  offset = off / len;
}

HalfPlane HalfPlane::through(Vec2 n, Vec2 p) {
  const Vec2 u = normalized(n);
  return HalfPlane(u, dot(u, p));
}

Affine2 Affine2::rotation(double angle, Vec2 shift) {
  Affine2 a;
  const double c = std::cos(angle), s = std::sin(angle);
  a.m = {c, -s, s, c};
  a.shift = shift;
  return a;
}

Vec2 Affine2::inverse_apply(Vec2 p) const {
  const double d = det();
  if (d == 0.0) throw Error("singular affine map");
  const Vec2 q = p - shift;
  return {(m[3] * q.x - m[1] * q.y) / d, (-m[2] * q.x + m[0] * q.y) / d};
}

bool Affine2::is_orthogonal(double tol) const {
  const double c1 = m[0] * m[0] + m[2] * m[2];
  const double c2 = m[1] * m[1] + m[3] * m[3];
  const double c12 = m[0] * m[1] + m[2] * m[3];
  return std::abs(c1 - 1.0) <= tol && std::abs(c2 - 1.0) <= tol && std::abs(c12) <= tol;
}

}  // namespace qcext
