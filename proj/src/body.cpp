#include "qcext/body.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qcext {

bool NormalArc::contains(Vec2 n, double tol) const {
  if (singleton(tol)) return dist(n, first) <= tol;
  const double s = ccw_angle(first, last);
  const double a = ccw_angle(first, n);
  return a <= s + tol || a >= 2.0 * kPi - tol;
}

bool Cone2::contains_direction(Vec2 d, double tol) const {
  const double n = norm(d);
  if (!(n > 0.0)) return true;
  const Vec2 u = d / n;
  switch (kind) {
    case Kind::Trivial: return false;
    case Kind::Full: return true;
    case Kind::Ray: return dist(u, lo) <= tol;
    case Kind::Line: return dist(u, lo) <= tol || dist(u, hi) <= tol;
    case Kind::Wedge:
    case Kind::HalfPlane: {
      const double span = kind == Kind::HalfPlane ? kPi : ccw_angle(lo, hi);
      const double a = ccw_angle(lo, u);
      return a <= span + tol || a >= 2.0 * kPi - tol;
    }
  }
  return false;
}

bool Cone2::contains(Vec2 p, double tol) const { return contains_direction(p - apex, tol); }

double Cone2::max_dot(Vec2 dir) const {
  switch (kind) {
    case Kind::Trivial: return 0.0;
    case Kind::Full: return norm(dir);
    case Kind::Ray: return dot(dir, lo);
    case Kind::Line: return std::abs(dot(dir, lo));
    case Kind::Wedge:
    case Kind::HalfPlane:
      if (contains_direction(dir, 0.0)) return norm(dir);
      return std::max(dot(dir, lo), dot(dir, hi));
  }
  return 0.0;
}

namespace detail {

namespace {

struct LocalFrame {
  const Profile& g;
  const Affine2& tf;
  Vec2 to_local(Vec2 p) const { return tf.linear_transpose(p - tf.shift); }
  Vec2 to_world(Vec2 q) const { return tf.apply(q); }
};

// Largest u in [lo, hi] (or smallest, when `upper` is false) with pred(u), pred monotone.
template <class P>
double bisect_edge(P pred, double inside, double outside) {
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (inside + outside);
    if (m == inside || m == outside) break;
    if (pred(m)) inside = m;
    else outside = m;
  }
  return inside;
}

}  // namespace

double epigraph_nearest_u(const Profile& g, Vec2 q) {
  const double gap = q.y - g.value(q.x);
  const double d0 = std::abs(gap);
  if (d0 == 0.0) return q.x;
  auto sq = [&](double u) {
    const double dw = g.value(u) - q.y;
    const double du = u - q.x;
    const double v = du * du + dw * dw;
    return std::isnan(v) ? kInf : v;
  };
  // Any nearer curve point lies in the box |u - qx| <= d0, g(u) <= qy + d0.
  auto low_enough = [&](double u) { return g.value(u) <= q.y + d0; };
  double lo = q.x - d0, hi = q.x + d0;
  if (!low_enough(lo)) lo = bisect_edge(low_enough, q.x, lo);
  if (!low_enough(hi)) hi = bisect_edge(low_enough, q.x, hi);
  constexpr int kSamples = 256;
  std::vector<double> us(kSamples + 1), vals(kSamples + 1);
  for (int i = 0; i <= kSamples; ++i) {
    us[i] = lo + (hi - lo) * i / kSamples;
    vals[i] = sq(us[i]);
  }
  std::vector<int> order(kSamples + 1);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + 3, order.end(),
                    [&](int a, int b) { return vals[a] < vals[b]; });
  double best_u = q.x, best = sq(q.x);
  for (int k = 0; k < 3; ++k) {
    const int i = order[k];
    double a = us[std::max(i - 1, 0)], c = us[std::min(i + 1, kSamples)];
    const double r = 0.5 * (3.0 - std::sqrt(5.0));
    double x1 = a + r * (c - a), x2 = c - r * (c - a);
    double f1 = sq(x1), f2 = sq(x2);
    for (int it = 0; it < 200 && c - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
      if (f1 > f2) {
        a = x1; x1 = x2; f1 = f2; x2 = c - r * (c - a); f2 = sq(x2);
      } else {
        c = x2; x2 = x1; f2 = f1; x1 = a + r * (c - a); f1 = sq(x1);
      }
    }
    double u = 0.5 * (a + c);
    // Newton polish on the stationarity condition.
    for (int it = 0; it < 4; ++it) {
      const double gv = g.value(u), gs = g.slope(u), gc = g.curvature(u);
      const double f1d = (u - q.x) + (gv - q.y) * gs;
      const double f2d = 1.0 + gs * gs + (gv - q.y) * gc;
      if (!(f2d > 0.0)) break;
      const double nu = u - f1d / f2d;
      if (!std::isfinite(nu) || sq(nu) > sq(u)) break;
      u = nu;
    }
    const double v = sq(u);
    if (v < best) {
      best = v;
      best_u = u;
    }
  }
  return best_u;
}

double base_signed_depth(const Base& base, Vec2 p) {
  if (const auto* d = std::get_if<Disk>(&base)) return d->radius - dist(p, d->center);
  if (const auto* e = std::get_if<Epigraph>(&base)) {
    LocalFrame f{e->profile, e->transform};
    const Vec2 q = f.to_local(p);
    const double gap = q.y - e->profile.value(q.x);
    if (gap == 0.0) return 0.0;
    const double u = epigraph_nearest_u(e->profile, q);
    const double d = dist(q, Vec2{u, e->profile.value(u)});
    const double mag = std::min(d, std::abs(gap));
    return gap > 0.0 ? mag : -mag;
  }
  return kInf;
}

Vec2 base_nearest_point(const Base& base, Vec2 p) {
  if (const auto* d = std::get_if<Disk>(&base)) {
    const Vec2 r = p - d->center;
    const double n = norm(r);
    if (n == 0.0) return d->center + Vec2{d->radius, 0.0};
    return d->center + r * (d->radius / n);
  }
  if (const auto* e = std::get_if<Epigraph>(&base)) {
    LocalFrame f{e->profile, e->transform};
    const double u = epigraph_nearest_u(e->profile, f.to_local(p));
    return f.to_world({u, e->profile.value(u)});
  }
  return p;
}

Vec2 base_normal_at(const Base& base, Vec2 p) {
  if (const auto* d = std::get_if<Disk>(&base)) return normalized(p - d->center);
  if (const auto* e = std::get_if<Epigraph>(&base)) {
    LocalFrame f{e->profile, e->transform};
    const double u = epigraph_nearest_u(e->profile, f.to_local(p));
    return normalized(e->transform.linear({e->profile.slope(u), -1.0}));
  }
  throw Error("a half-plane intersection has no smooth base");
}

Vec2 base_curve_point(const Base& base, double t) {
  if (const auto* d = std::get_if<Disk>(&base)) return d->center + unit_from_angle(t) * d->radius;
  if (const auto* e = std::get_if<Epigraph>(&base)) return e->transform.apply({t, e->profile.value(t)});
  throw Error("a half-plane intersection has no boundary curve");
}

Interval base_chord(const Base& base, Vec2 origin, Vec2 dir) {
  if (std::holds_alternative<std::monostate>(base)) return {};
  if (const auto* d = std::get_if<Disk>(&base)) {
    const Vec2 o = origin - d->center;
    const double a = dot(dir, dir);
    const double b = dot(o, dir);
    // factor the dominant coordinate so tangential offsets keep full precision
    const double r = d->radius;
    const double ax = std::abs(o.x), ay = std::abs(o.y);
    const double c = ax >= ay ? (ax - r) * (ax + r) + o.y * o.y : (ay - r) * (ay + r) + o.x * o.x;
    const double disc = b * b - a * c;
    if (disc < 0.0) return {1.0, -1.0};
    const double s = std::sqrt(disc);
    // numerically stable roots of a t^2 + 2 b t + c
    const double qv = b >= 0.0 ? -(b + s) : -(b - s);
    double t1 = qv / a;
    double t2 = qv != 0.0 ? c / qv : -t1;
    if (t1 > t2) std::swap(t1, t2);
    return {t1, t2};
  }
  const auto& e = std::get<Epigraph>(base);
  const Vec2 o = e.transform.linear_transpose(origin - e.transform.shift);
  const Vec2 v = e.transform.linear_transpose(dir);
  const Profile& g = e.profile;
  auto phi = [&](double t) { return (o.y + t * v.y) - g.value(o.x + t * v.x); };
  if (v.x == 0.0) {
    const double gap = o.y - g.value(o.x);
    if (v.y == 0.0) return gap >= 0.0 ? Interval{} : Interval{1.0, -1.0};
    const double root = -gap / v.y;
    return v.y > 0.0 ? Interval{root, kInf} : Interval{-kInf, root};
  }
  // The profile variable runs as o.x + t v.x; start near the curve minimum region.
  const double scale = 1.0 / std::abs(v.x);
  const ConcaveMax m = maximize_concave(phi, 0.0, scale);
  if (m.value < 0.0) return {1.0, -1.0};
  auto inside = [&](double t) { return phi(t) >= 0.0; };
  Interval out;
  // left end
  if (m.escape == -1 && m.value >= 0.0) {
    out.lo = -kInf;
  } else {
    double step = scale, t = m.t - step;
    while (inside(t)) {
      step *= 2.0;
      t = m.t - step;
      if (step > 1e12) break;
    }
    out.lo = inside(t) ? -kInf : bisect_edge(inside, m.t, t);
  }
  if (m.escape == +1 && m.value >= 0.0) {
    out.hi = kInf;
  } else {
    double step = scale, t = m.t + step;
    while (inside(t)) {
      step *= 2.0;
      t = m.t + step;
      if (step > 1e12) break;
    }
    out.hi = inside(t) ? kInf : bisect_edge(inside, m.t, t);
  }
  return out;
}

}  // namespace detail

namespace {

constexpr double kParallel = 1e-15;

}  // namespace

Interval detail::clip_interval(const HalfPlane& h, Vec2 o, Vec2 d) {
  const double a = dot(h.normal, d);
  const double b = h.slack(o);
  if (std::abs(a) <= kParallel) return b >= -1e-12 ? Interval{} : Interval{1.0, -1.0};
  if (a > 0.0) return {-kInf, b / a};
  return {b / a, kInf};
}

namespace {

using detail::clip_interval;

bool base_recession_member(const Base& base, Vec2 d) {
  if (std::holds_alternative<std::monostate>(base)) return true;
  if (std::holds_alternative<Disk>(base)) return false;
  const auto& e = std::get<Epigraph>(base);
  const Vec2 l = e.transform.linear_transpose(d);
  constexpr double tol = 1e-12;
  if (std::abs(l.x) <= tol) return l.y >= -tol;
  if (l.x > 0.0) {
    const double s = e.profile.slope_at_plus_inf();
    return std::isfinite(s) && l.y >= s * l.x - tol;
  }
  const double s = e.profile.slope_at_minus_inf();
  return std::isfinite(s) && l.y >= s * l.x - tol;
}

std::vector<Vec2> base_recession_extremes(const Base& base) {
  const auto* e = std::get_if<Epigraph>(&base);
  if (!e) return {};
  const double hi = e->profile.slope_at_plus_inf();
  const double lo = e->profile.slope_at_minus_inf();
  std::vector<Vec2> out{e->transform.linear({0.0, 1.0})};
  if (std::isfinite(hi)) out.push_back(e->transform.linear(normalized({1.0, hi})));
  if (std::isfinite(lo)) out.push_back(e->transform.linear(normalized({-1.0, -lo})));
  return out;
}

// Support of the base alone in direction dir (unit).
SupportValue base_support(const Base& base, Vec2 dir) {
  if (const auto* d = std::get_if<Disk>(&base)) {
    const Vec2 p = d->center + dir * d->radius;
    return {dot(dir, p), p, true};
  }
  const auto& e = std::get<Epigraph>(base);
  const Vec2 l = e.transform.linear_transpose(dir);
  if (l.y >= -1e-12) return {kInf, std::nullopt, false};
  auto f = [&](double u) { return l.x * u + l.y * e.profile.value(u); };
  detail::ConcaveMax m = detail::maximize_concave(f, 0.0, 1.0);
  if (m.escape == 0) {
    // Newton polish on l.x + l.y g'(u) = 0.
    for (int it = 0; it < 4; ++it) {
      const double h = l.y * e.profile.curvature(m.t);
      if (!(h < 0.0)) break;
      const double nu = m.t - (l.x + l.y * e.profile.slope(m.t)) / h;
      if (!std::isfinite(nu) || f(nu) < f(m.t)) break;
      m.t = nu;
      m.value = f(nu);
    }
  }
  const Vec2 p = e.transform.apply({m.t, e.profile.value(m.t)});
  const double shift = dot(dir, e.transform.shift);
  if (m.escape != 0) {
    // Limit of a monotone tail; evaluate far out as the sup estimate.
    return {m.value + shift, p, false};
  }
  return {m.value + shift, p, true};
}

}  // namespace

Body2 Body2::halfplanes(std::vector<HalfPlane> items) {
  if (items.empty()) throw Error("halfplanes body needs at least one half-plane");
  Body2 b;
  b.clips_ = std::move(items);
  b.finalize();
  return b;
}

Body2 Body2::polychain(std::vector<Vec2> vertices, std::optional<std::array<Vec2, 2>> rays,
                       bool allow_collinear) {
  const std::size_t n = vertices.size();
  if (!rays && n < 3) throw Error("bounded polychain needs at least 3 vertices");
  if (rays && n < 1) throw Error("unbounded polychain needs at least one vertex");
  if (!rays) {
    double area2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) area2 += cross(vertices[i], vertices[(i + 1) % n]);
    if (area2 < 0.0) std::reverse(vertices.begin(), vertices.end());  // accept clockwise polygons
  }
  std::vector<Vec2> dirs;  // boundary traversal directions, CCW
  if (rays) dirs.push_back(-normalized((*rays)[0]));
  for (std::size_t i = 0; i + 1 < n; ++i) dirs.push_back(normalized(vertices[i + 1] - vertices[i]));
  if (rays) dirs.push_back(normalized((*rays)[1]));
  else dirs.push_back(normalized(vertices.front() - vertices.back()));
  const std::size_t m = dirs.size();
  double turning = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!rays && i + 1 == m) {
      const double c = cross(dirs[i], dirs[0]);
      if (c < -1e-12 || (!allow_collinear && c <= 1e-12)) throw Error("polychain is not strictly convex");
      turning += std::atan2(c, dot(dirs[i], dirs[0]));
      break;
    }
    if (i + 1 == m) break;
    const double c = cross(dirs[i], dirs[i + 1]);
    if (c < -1e-12 || (!allow_collinear && c <= 1e-12)) throw Error("polychain is not strictly convex");
    turning += std::atan2(c, dot(dirs[i], dirs[i + 1]));
  }
  if (!rays && std::abs(turning - 2.0 * kPi) > 1e-6) throw Error("polychain winds more than once");
  if (rays && turning > kPi + 1e-12) throw Error("polychain rays diverge past a half-turn");
  std::vector<HalfPlane> hs;
  std::size_t k = 0;
  if (rays) hs.push_back(HalfPlane::through(-perp(dirs[k++]), vertices.front()));
  for (std::size_t i = 0; i + 1 < n; ++i) hs.push_back(HalfPlane::through(-perp(dirs[k++]), vertices[i]));
  hs.push_back(HalfPlane::through(-perp(dirs[k]), vertices.back()));
  Body2 b;
  b.clips_ = std::move(hs);
  b.chain_vertices_ = std::move(vertices);
  b.chain_rays_ = rays;
  b.finalize();
  for (Vec2 v : *b.chain_vertices_)
    if (!b.contains(v, 1e-9)) throw Error("polychain is not convex");
  return b;
}

Body2 Body2::disk(Vec2 center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error("disk radius must be positive");
  Body2 b;
  b.base_ = Disk{center, radius};
  b.finalize();
  return b;
}

Body2 Body2::epigraph(Profile profile, Affine2 transform) {
  if (!transform.is_orthogonal()) throw Error("epigraph transform must be orthogonal");
  Body2 b;
  b.base_ = Epigraph{std::move(profile), transform};
  b.finalize();
  return b;
}

Body2 Body2::square(double half_side, Vec2 center) {
  return rectangle(center - Vec2{half_side, half_side}, center + Vec2{half_side, half_side});
}

Body2 Body2::rectangle(Vec2 lo, Vec2 hi) {
  if (!(hi.x > lo.x && hi.y > lo.y)) throw Error("rectangle corners out of order");
  return polychain({lo, {hi.x, lo.y}, hi, {lo.x, hi.y}});
}

Body2 Body2::clipped(const std::vector<HalfPlane>& extra) const {
  Body2 b;
  b.base_ = base_;
  b.clips_ = clips_;
  b.clips_.insert(b.clips_.end(), extra.begin(), extra.end());
  b.finalize();
  return b;
}

void Body2::finalize() {
  // drop duplicate and redundant-parallel half-planes
  std::vector<HalfPlane> kept;
  for (const HalfPlane& h : clips_) {
    bool merged = false;
    for (HalfPlane& k : kept) {
      if (dist(k.normal, h.normal) <= 1e-14) {
        k.offset = std::min(k.offset, h.offset);
        merged = true;
        break;
      }
    }
    if (!merged) kept.push_back(h);
  }
  clips_ = std::move(kept);
  if (!has_base() && clips_.empty()) throw Error("body must be a proper subset of the plane");
  recession_ = compute_recession();
  if (recession_.kind == Cone2::Kind::Full) throw Error("body must be a proper subset of the plane");
  facets_.clear();
  for (std::size_t i = 0; i < clips_.size(); ++i) {
    const HalfPlane& h = clips_[i];
    Facet f{static_cast<int>(i), h.anchor(), h.direction(), detail::base_chord(base_, h.anchor(), h.direction())};
    for (std::size_t j = 0; j < clips_.size() && !f.range.empty(); ++j)
      if (j != i) f.range = f.range.intersect(clip_interval(clips_[j], f.origin, f.dir));
    if (!f.range.empty() && f.range.length() > 1e-12) facets_.push_back(f);
  }
  compute_witness();
}

Cone2 Body2::compute_recession() const {
  std::vector<Vec2> cand = base_recession_extremes(base_);
  for (const HalfPlane& h : clips_) {
    cand.push_back(perp(h.normal));
    cand.push_back(-perp(h.normal));
  }
  if (!has_base() && clips_.empty()) return {Cone2::Kind::Full, {}, {1, 0}, {1, 0}};
  auto member = [&](Vec2 d) {
    if (!base_recession_member(base_, d)) return false;
    for (const HalfPlane& h : clips_)
      if (dot(h.normal, d) > 1e-12) return false;
    return true;
  };
  return Cone2::from_candidates({}, cand, member);
}

void Body2::compute_witness() {
  auto obj = [&](Vec2 p) { return std::min(depth(p), 1.0); };
  std::vector<Vec2> starts{{0.0, 0.0}};
  if (const auto* d = std::get_if<Disk>(&base_)) starts.push_back(d->center);
  if (const auto* e = std::get_if<Epigraph>(&base_)) {
    starts.push_back(e->transform.apply({0.0, e->profile.value(0.0) + 1.0}));
    starts.push_back(e->transform.apply({0.0, e->profile.value(0.0) + 0.1}));
  }
  if (chain_vertices_) {
    Vec2 c;
    for (Vec2 v : *chain_vertices_) c += v;
    starts.push_back(c / static_cast<double>(chain_vertices_->size()));
  }
  for (const Facet& f : facets_) {
    const HalfPlane& h = clips_[f.clip];
    double t = 0.0;
    if (std::isfinite(f.range.lo) && std::isfinite(f.range.hi)) t = 0.5 * (f.range.lo + f.range.hi);
    else if (std::isfinite(f.range.lo)) t = f.range.lo + 1.0;
    else if (std::isfinite(f.range.hi)) t = f.range.hi - 1.0;
    const double len = std::isfinite(f.range.length()) ? f.range.length() : 2.0;
    starts.push_back(f.origin + f.dir * t - h.normal * std::min(0.5, 0.25 * len));
    if (starts.size() > 12) break;
  }
  Vec2 best = starts.front();
  double best_val = -kInf;
  for (Vec2 s : starts) {
    double step = 0.5;
    auto [p, v] = detail::nelder_mead_max(obj, s, step);
    if (v > best_val) {
      best_val = v;
      best = p;
    }
    if (best_val >= 1.0) break;
  }
  if (!(best_val > 1e-12)) throw Error("body has empty interior");
  witness_ = best;
  witness_radius_ = best_val;
  extent_ = 0.0;
  if (bounded()) {
    for (int i = 0; i < 64; ++i) {
      const Vec2 u = unit_from_angle(2.0 * kPi * i / 64);
      extent_ = std::max(extent_, support(u).value - dot(u, witness_));
    }
  }
}

double Body2::depth(Vec2 p) const {
  double d = has_base() ? detail::base_signed_depth(base_, p) : kInf;
  for (const HalfPlane& h : clips_) d = std::min(d, h.slack(p));
  return d;
}

bool Body2::contains(Vec2 p, double tol) const {
  bool outside_clip = false;
  for (const HalfPlane& h : clips_) {
    const double s = h.slack(p);
    if (s < -tol) return false;
    if (s < 0.0) outside_clip = true;
  }
  // exact sign of the base constraint avoids a nearest-point search
  bool in_base = true;
  if (const auto* d = std::get_if<Disk>(&base_)) {
    in_base = dist(p, d->center) <= d->radius;
  } else if (const auto* e = std::get_if<Epigraph>(&base_)) {
    const Vec2 q = e->transform.linear_transpose(p - e->transform.shift);
    in_base = q.y >= e->profile.value(q.x);
  }
  if (in_base && !outside_clip) return true;
  if (tol <= 0.0) return false;
  const double d = depth(p);
  if (d >= 0.0) return true;
  if (d < -tol) return false;
  return project(p).distance <= tol;
}

Projection Body2::project(Vec2 p) const {
  if (depth(p) >= 0.0) return {p, 0.0};
  Projection best{p, kInf};
  auto consider = [&](Vec2 q) {
    const double d = dist(p, q);
    if (d < best.distance) best = {q, d};
  };
  if (has_base()) {
    const Vec2 q = detail::base_nearest_point(base_, p);
    bool ok = true;
    for (const HalfPlane& h : clips_)
      if (h.slack(q) < -1e-12 * (1.0 + norm(q))) ok = false;
    if (ok) consider(q);
  }
  for (const Facet& f : facets_) {
    const double t = std::clamp(dot(p - f.origin, f.dir), f.range.lo, f.range.hi);
    consider(f.origin + f.dir * t);
  }
  if (!std::isfinite(best.distance)) throw Error("projection failed");
  return best;
}

double Body2::distance_to_boundary(Vec2 p) const {
  const double d = depth(p);
  if (d >= 0.0) return d;
  return project(p).distance;
}

SupportValue Body2::support(Vec2 dir) const {
  const Vec2 u = normalized(dir);
  if (recession_.max_dot(u) > 1e-12) return {kInf, std::nullopt, false};
  SupportValue best{-kInf, std::nullopt, false};
  auto consider = [&](Vec2 q, bool attained) {
    const double v = dot(u, q);
    if (v > best.value) best = {v, q, attained};
  };
  bool base_unbounded = false;
  if (has_base()) {
    const SupportValue sv = base_support(base_, u);
    base_unbounded = !std::isfinite(sv.value);
    if (sv.point && std::isfinite(sv.value)) {
      bool ok = true;
      for (const HalfPlane& h : clips_)
        if (h.slack(*sv.point) < -1e-12 * (1.0 + norm(*sv.point))) ok = false;
      if (ok) {
        if (sv.attained) consider(*sv.point, true);
        else if (sv.value > best.value) best = {sv.value, sv.point, false};
      }
    }
  }
  for (const Facet& f : facets_) {
    if (std::isfinite(f.range.lo)) consider(f.origin + f.dir * f.range.lo, true);
    if (std::isfinite(f.range.hi)) consider(f.origin + f.dir * f.range.hi, true);
    if (!std::isfinite(f.range.lo) && !std::isfinite(f.range.hi)) consider(f.origin, true);
  }
  if (!best.point) {
    if (base_unbounded) return {kInf, std::nullopt, false};
    throw Error("support evaluation failed");
  }
  return best;
}

std::vector<Vec2> Body2::face(Vec2 dir) const {
  const Vec2 u = normalized(dir);
  const SupportValue sv = support(u);
  if (!std::isfinite(sv.value)) return {};
  for (const Facet& f : facets_) {
    const HalfPlane& h = clips_[f.clip];
    if (dist(h.normal, u) > 1e-9 || std::abs(h.offset - sv.value) > 1e-9 * (1.0 + std::abs(sv.value))) continue;
    std::vector<Vec2> out;
    if (std::isfinite(f.range.lo)) out.push_back(f.origin + f.dir * f.range.lo);
    if (std::isfinite(f.range.hi)) out.push_back(f.origin + f.dir * f.range.hi);
    if (!out.empty()) return out;
  }
  return {*sv.point};
}

Interval Body2::chord(Vec2 origin, Vec2 dir) const {
  Interval r = detail::base_chord(base_, origin, dir);
  for (const HalfPlane& h : clips_) {
    if (r.empty()) break;
    r = r.intersect(clip_interval(h, origin, dir));
  }
  return r;
}

NormalArc Body2::supporting_normals(Vec2 x, double tol) const {
  const double d = depth(x);
  if (d > tol) throw Error("point " + to_string(x) + " is interior, not on the boundary");
  if (d < -tol && project(x).distance > tol) throw Error("point " + to_string(x) + " lies outside the body");
  const double act = std::max(tol, 2.0 * std::abs(d));
  std::vector<Vec2> ns;
  for (const HalfPlane& h : clips_)
    if (std::abs(h.slack(x)) <= act) ns.push_back(h.normal);
  if (has_base() && std::abs(detail::base_signed_depth(base_, x)) <= act) ns.push_back(detail::base_normal_at(base_, x));
  if (ns.empty()) throw Error("no active constraint at " + to_string(x));
  std::sort(ns.begin(), ns.end(), [](Vec2 a, Vec2 b) { return std::atan2(a.y, a.x) < std::atan2(b.y, b.x); });
  std::vector<double> ang;
  for (Vec2 n : ns) ang.push_back(std::atan2(n.y, n.x));
  std::size_t gap_after = ang.size() - 1;
  double gap = ang.front() + 2.0 * kPi - ang.back();
  for (std::size_t i = 0; i + 1 < ang.size(); ++i) {
    if (ang[i + 1] - ang[i] > gap) {
      gap = ang[i + 1] - ang[i];
      gap_after = i;
    }
  }
  return {ns[(gap_after + 1) % ns.size()], ns[gap_after]};
}

namespace {

// Parameter range of the epigraph curve inside the window, in profile coordinates.
Interval epigraph_window_range(const Epigraph& e, const Window& w) {
  const Vec2 c = e.transform.linear_transpose(w.center - e.transform.shift);
  const Profile& g = e.profile;
  auto in = [&](double u) { return dist(Vec2{u, g.value(u)}, c) <= w.radius; };
  const double u0 = detail::epigraph_nearest_u(g, c);
  if (!in(u0)) return {1.0, -1.0};
  auto expand = [&](double sign) {
    double step = std::max(1e-3, w.radius * 1e-3), inside = u0;
    double t = u0 + sign * step;
    while (in(t)) {
      inside = t;
      step *= 2.0;
      t = u0 + sign * step;
      if (step > 1e9) return t;
    }
    for (int i = 0; i < 200; ++i) {
      const double m = 0.5 * (inside + t);
      if (m == inside || m == t) break;
      if (in(m)) inside = m;
      else t = m;
    }
    return inside;
  };
  return {expand(-1.0), expand(+1.0)};
}

double base_param_of(const Base& base, Vec2 p) {
  if (const auto* d = std::get_if<Disk>(&base)) {
    double a = angle_of(p - d->center);
    if (a < 0.0) a += 2.0 * kPi;
    return a;
  }
  const auto& e = std::get<Epigraph>(base);
  return e.transform.linear_transpose(p - e.transform.shift).x;
}

}  // namespace

BoundaryArc Body2::boundary(const Window& window) const {
  std::vector<BoundaryPiece> pieces;
  auto feasible = [&](Vec2 q) {
    for (const HalfPlane& h : clips_)
      if (h.slack(q) < 0.0) return false;
    return true;
  };
  if (has_base()) {
    const bool is_disk = std::holds_alternative<Disk>(base_);
    Interval range;
    if (is_disk) {
      range = {0.0, 2.0 * kPi};
    } else {
      range = epigraph_window_range(std::get<Epigraph>(base_), window);
    }
    if (!range.empty()) {
      std::vector<double> cuts;
      for (const HalfPlane& h : clips_) {
        const Interval r = detail::base_chord(base_, h.anchor(), h.direction());
        if (r.empty()) continue;
        for (double t : {r.lo, r.hi}) {
          if (!std::isfinite(t)) continue;
          const double s = base_param_of(base_, h.anchor() + h.direction() * t);
          if (s > range.lo && s < range.hi) cuts.push_back(s);
        }
      }
      cuts.push_back(range.lo);
      cuts.push_back(range.hi);
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
      std::vector<std::pair<double, double>> runs;
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        if (b - a <= 0.0) continue;
        if (!feasible(detail::base_curve_point(base_, 0.5 * (a + b)))) continue;
        if (!runs.empty() && runs.back().second == a) runs.back().second = b;
        else runs.push_back({a, b});
      }
      if (is_disk && runs.size() > 1 && runs.front().first == 0.0 && runs.back().second == 2.0 * kPi) {
        runs.front().first = runs.back().first - 2.0 * kPi;
        runs.pop_back();
      }
      for (auto [a, b] : runs) {
        BoundaryPiece p;
        p.kind = BoundaryPiece::Kind::Curve;
        p.t0 = a;
        p.t1 = b;
        p.a = detail::base_curve_point(base_, a);
        p.b = detail::base_curve_point(base_, b);
        if (!is_disk) {
          p.clipped_start = a == range.lo;
          p.clipped_end = b == range.hi;
        }
        pieces.push_back(p);
      }
    }
  }
  for (const Facet& f : facets_) {
    const Interval wr = detail::base_chord(Disk{window.center, window.radius}, f.origin, f.dir);
    const Interval r = f.range.intersect(wr);
    if (r.empty() || r.length() <= 1e-12) continue;
    BoundaryPiece p;
    p.kind = BoundaryPiece::Kind::Segment;
    p.a = f.origin + f.dir * r.lo;
    p.b = f.origin + f.dir * r.hi;
    p.clipped_start = r.lo > f.range.lo;
    p.clipped_end = r.hi < f.range.hi;
    p.clip_index = f.clip;
    pieces.push_back(p);
  }
  return BoundaryArc(base_, std::move(pieces));
}

std::optional<std::pair<Vec2, Vec2>> Body2::longest_flat_piece(const Window& window) const {
  std::optional<std::pair<Vec2, Vec2>> best;
  double len = 0.0;
  for (const BoundaryPiece& p : boundary(window).pieces()) {
    if (p.kind != BoundaryPiece::Kind::Segment) continue;
    if (dist(p.a, p.b) > len) {
      len = dist(p.a, p.b);
      best = std::make_pair(p.a, p.b);
    }
  }
  return best;
}

BoundaryArc::BoundaryArc(Base base, std::vector<BoundaryPiece> pieces)
    : base_(std::move(base)), pieces_(std::move(pieces)) {}

Vec2 BoundaryArc::point(int piece, double s) const {
  const BoundaryPiece& p = pieces_.at(piece);
  if (p.kind == BoundaryPiece::Kind::Segment) return lerp(p.a, p.b, s);
  if (s <= 0.0) return p.a;
  if (s >= 1.0) return p.b;
  return detail::base_curve_point(base_, p.t0 + (p.t1 - p.t0) * s);
}

namespace {

constexpr int kArcTable = 1024;

// Cumulative polyline lengths along a curve piece at uniform parameter steps.
std::vector<double> arc_table(const BoundaryArc& arc, int piece) {
  std::vector<double> cum(kArcTable + 1, 0.0);
  Vec2 prev = arc.point(piece, 0.0);
  for (int i = 1; i <= kArcTable; ++i) {
    const Vec2 q = arc.point(piece, static_cast<double>(i) / kArcTable);
    cum[i] = cum[i - 1] + dist(prev, q);
    prev = q;
  }
  return cum;
}

}  // namespace

double BoundaryArc::length(int piece) const {
  const BoundaryPiece& p = pieces_.at(piece);
  if (p.kind == BoundaryPiece::Kind::Segment) return dist(p.a, p.b);
  return arc_table(*this, piece).back();
}

double BoundaryArc::total_length() const {
  double s = 0.0;
  for (int i = 0; i < static_cast<int>(pieces_.size()); ++i) s += length(i);
  return s;
}

std::vector<BoundarySample> BoundaryArc::sample(int n) const {
  std::vector<BoundarySample> out;
  const int k = static_cast<int>(pieces_.size());
  std::vector<double> lens(k);
  double total = 0.0;
  for (int i = 0; i < k; ++i) total += (lens[i] = length(i));
  for (int i = 0; i < k; ++i) {
    const int m = std::max(2, static_cast<int>(std::lround(n * (total > 0.0 ? lens[i] / total : 1.0 / k))) + 1);
    if (pieces_[i].kind == BoundaryPiece::Kind::Segment) {
      for (int j = 0; j < m; ++j) {
        const double s = static_cast<double>(j) / (m - 1);
        out.push_back({point(i, s), i, s});
      }
      continue;
    }
    // equal arc-length spacing by inverting the cumulative table
    const std::vector<double> cum = arc_table(*this, i);
    std::size_t idx = 0;
    for (int j = 0; j < m; ++j) {
      const double target = cum.back() * j / (m - 1);
      while (idx + 1 < cum.size() && cum[idx + 1] < target) ++idx;
      double s;
      if (j == 0) s = 0.0;
      else if (j == m - 1) s = 1.0;
      else {
        const double seg = idx + 1 < cum.size() ? cum[idx + 1] - cum[idx] : 0.0;
        const double frac = seg > 0.0 ? (target - cum[idx]) / seg : 0.0;
        s = (idx + frac) / kArcTable;
      }
      out.push_back({point(i, s), i, s});
    }
  }
  return out;
}

}  // namespace qcext
