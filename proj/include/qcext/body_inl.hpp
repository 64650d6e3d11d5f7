#pragma once

#include <algorithm>
#include <array>
#include <utility>
#include <cmath>

namespace qcext {

template <class Member>
Cone2 Cone2::from_candidates(Vec2 apex, const std::vector<Vec2>& candidates, Member member) {
  std::vector<double> angles;
  std::vector<std::pair<double, Vec2>> exact;  // keep the original vectors for the answer
  for (Vec2 c : candidates) {
    const double n = norm(c);
    if (!(n > 0.0)) continue;
    const Vec2 u = c / n;
    if (member(u)) {
      angles.push_back(std::atan2(u.y, u.x));
      exact.push_back({angles.back(), u});
    }
  }
  auto dir_of = [&](double a) {
    for (const auto& [b, u] : exact)
      if (std::abs(a - b) <= 1e-12) return u;
    return unit_from_angle(a);
  };
  Cone2 cone;
  cone.apex = apex;
  if (angles.empty()) return cone;
  std::sort(angles.begin(), angles.end());
  std::vector<double> uniq;
  for (double a : angles)
    if (uniq.empty() || a - uniq.back() > 1e-12) uniq.push_back(a);
  if (uniq.size() > 1 && uniq.front() + 2.0 * kPi - uniq.back() <= 1e-12) uniq.pop_back();
  if (uniq.size() == 1) {
    cone.kind = Kind::Ray;
    cone.lo = cone.hi = dir_of(uniq[0]);
    return cone;
  }
  // The cone is the complement of the largest angular gap between members.
  std::size_t gap_after = uniq.size() - 1;
  double best_gap = uniq.front() + 2.0 * kPi - uniq.back();
  for (std::size_t i = 0; i + 1 < uniq.size(); ++i) {
    const double g = uniq[i + 1] - uniq[i];
    if (g > best_gap) {
      best_gap = g;
      gap_after = i;
    }
  }
  const double lo = uniq[(gap_after + 1) % uniq.size()];
  const double hi = uniq[gap_after];
  cone.lo = dir_of(lo);
  cone.hi = dir_of(hi);
  const double span = 2.0 * kPi - best_gap;
  const Vec2 mid = unit_from_angle(lo + 0.5 * span);
  if (span < kPi - 1e-9) {
    cone.kind = Kind::Wedge;
  } else if (span <= kPi + 1e-9) {
    if (member(mid)) {
      cone.kind = Kind::HalfPlane;
    } else if (member(-mid)) {
      std::swap(cone.lo, cone.hi);
      cone.kind = Kind::HalfPlane;
    } else {
      cone.kind = Kind::Line;
    }
  } else {
    cone.kind = member(unit_from_angle(hi + 0.5 * best_gap)) ? Kind::Full : Kind::Wedge;
  }
  return cone;
}

namespace detail {

template <class F>
ConcaveMax maximize_concave(F f, double t0, double step) {
  auto val = [&](double t) {
    const double v = f(t);
    return std::isnan(v) ? -kInf : v;
  };
  constexpr double kFar = 1e12;
  double a = t0 - step, b = t0, c = t0 + step;
  double fa = val(a), fb = val(b), fc = val(c);
  if (fc > fb) {
    // climb right
    while (fc > fb) {
      a = b;
      b = c;
      fb = fc;
      c = b + 2.0 * (b - a);
      if (std::abs(c) > kFar) return {c, val(c), +1};
      fc = val(c);
    }
  } else if (fa > fb) {
    while (fa > fb) {
      c = b;
      b = a;
      fb = fa;
      a = b - 2.0 * (c - b);
      if (std::abs(a) > kFar) return {a, val(a), -1};
      fa = val(a);
    }
  }
  // golden-section search on [a, c]
  const double r = 0.5 * (3.0 - std::sqrt(5.0));
  double x1 = a + r * (c - a), x2 = c - r * (c - a);
  double f1 = val(x1), f2 = val(x2);
  for (int i = 0; i < 300 && (c - a) > 1e-14 * (1.0 + std::abs(a) + std::abs(c)); ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = c - r * (c - a);
      f2 = val(x2);
    } else {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = a + r * (c - a);
      f1 = val(x1);
    }
  }
  const double t = 0.5 * (a + c);
  double ft = val(t);
  if (fb > ft && b >= a && b <= c) return {b, fb, 0};
  return {t, ft, 0};
}

template <class F>
std::pair<Vec2, double> nelder_mead_max(F f, Vec2 start, double step, int iterations) {
  std::array<Vec2, 3> p{start, start + Vec2{step, 0.0}, start + Vec2{0.0, step}};
  std::array<double, 3> v{f(p[0]), f(p[1]), f(p[2])};
  for (int it = 0; it < iterations; ++it) {
    // order best first
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2 - i; ++j)
        if (v[j] < v[j + 1]) {
          std::swap(v[j], v[j + 1]);
          std::swap(p[j], p[j + 1]);
        }
    if (dist(p[0], p[2]) < 1e-13 * (1.0 + norm(p[0]))) break;
    const Vec2 c = (p[0] + p[1]) * 0.5;
    const Vec2 r = c + (c - p[2]);
    const double vr = f(r);
    if (vr > v[0]) {
      const Vec2 e = c + (c - p[2]) * 2.0;
      const double ve = f(e);
      if (ve > vr) { p[2] = e; v[2] = ve; }
      else { p[2] = r; v[2] = vr; }
    } else if (vr > v[1]) {
      p[2] = r;
      v[2] = vr;
    } else {
      const Vec2 k = c + (p[2] - c) * 0.5;
      const double vk = f(k);
      if (vk > v[2]) {
        p[2] = k;
        v[2] = vk;
      } else {
        for (int i = 1; i < 3; ++i) {
          p[i] = p[0] + (p[i] - p[0]) * 0.5;
          v[i] = f(p[i]);
        }
      }
    }
  }
  int b = 0;
  for (int i = 1; i < 3; ++i)
    if (v[i] > v[b]) b = i;
  return {p[b], v[b]};
}

}  // namespace detail
}  // namespace qcext
