#include "qcext/extension.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "qcext/geometry.hpp"

namespace qcext {

bool ExtendedBody::contains(Vec2 p, double tol) const { return margin(p) >= -tol; }

double ExtendedBody::margin(Vec2 p) const {
  if (special == Special::Empty) return -kInf;
  if (special == Special::Plane) return kInf;
  double m = kInf;
  for (const HalfPlane& h : halfplanes) m = std::min(m, h.slack(p));
  return m;
}

namespace {

struct DirLine {
  Vec2 p;
  Vec2 d;  // interior lies to the left
  double ang = 0.0;
  int idx = -1;  // index into the input list, -1 for box sides
};

Vec2 meet(const DirLine& a, const DirLine& b) {
  const double t = cross(b.p - a.p, b.d) / cross(a.d, b.d);
  return a.p + a.d * t;
}

// Half-plane intersection by the angular sort and deque sweep.
std::vector<DirLine> hpi(const std::vector<HalfPlane>& hs, Vec2 lo, Vec2 hi) {
  std::vector<DirLine> ls;
  auto add = [&](const HalfPlane& h, int idx) {
    DirLine l{h.anchor(), perp(h.normal), 0.0, idx};
    l.ang = std::atan2(l.d.y, l.d.x);
    ls.push_back(l);
  };
  for (std::size_t i = 0; i < hs.size(); ++i) add(hs[i], static_cast<int>(i));
  add(HalfPlane({1, 0}, hi.x), -1);
  add(HalfPlane({-1, 0}, -lo.x), -1);
  add(HalfPlane({0, 1}, hi.y), -1);
  add(HalfPlane({0, -1}, -lo.y), -1);
  const double scale = std::max({1.0, std::abs(lo.x), std::abs(lo.y), std::abs(hi.x), std::abs(hi.y)});
  const double eps = 1e-12 * scale;
  std::sort(ls.begin(), ls.end(), [&](const DirLine& a, const DirLine& b) {
    if (std::abs(a.ang - b.ang) > 1e-14) return a.ang < b.ang;
    return cross(b.d, a.p - b.p) > 0.0;  // more restrictive first
  });
  std::vector<DirLine> uniq;
  for (const DirLine& l : ls)
    if (uniq.empty() || std::abs(l.ang - uniq.back().ang) > 1e-14) uniq.push_back(l);
  auto out = [&](const DirLine& l, Vec2 q) { return cross(l.d, q - l.p) < eps; };
  std::deque<DirLine> dq;
  for (const DirLine& l : uniq) {
    while (dq.size() >= 2 && out(l, meet(dq[dq.size() - 1], dq[dq.size() - 2]))) dq.pop_back();
    while (dq.size() >= 2 && out(l, meet(dq[0], dq[1]))) dq.pop_front();
    if (!dq.empty() && std::abs(cross(dq.back().d, l.d)) < 1e-15) {
      // antiparallel neighbours: empty unless they overlap
      if (dot(dq.back().d, l.d) < 0.0 && cross(l.d, dq.back().p - l.p) < -eps) return {};
    }
    dq.push_back(l);
  }
  while (dq.size() >= 3 && out(dq[0], meet(dq[dq.size() - 1], dq[dq.size() - 2]))) dq.pop_back();
  while (dq.size() >= 3 && out(dq[dq.size() - 1], meet(dq[0], dq[1]))) dq.pop_front();
  if (dq.size() < 3) return {};
  return {dq.begin(), dq.end()};
}

}  // namespace

std::optional<std::vector<HalfPlane>> prune_halfplanes(const std::vector<HalfPlane>& hs, Vec2 box_lo, Vec2 box_hi) {
  const std::vector<DirLine> poly = hpi(hs, box_lo, box_hi);
  if (poly.empty()) return std::nullopt;
  const std::size_t n = poly.size();
  const double scale = std::max({1.0, norm(box_lo), norm(box_hi)});
  std::vector<HalfPlane> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (poly[i].idx < 0) continue;
    const Vec2 a = meet(poly[(i + n - 1) % n], poly[i]);
    const Vec2 b = meet(poly[i], poly[(i + 1) % n]);
    if (dist(a, b) > 1e-12 * scale) out.push_back(hs[poly[i].idx]);
  }
  return out;
}

std::vector<Vec2> halfplane_polygon(const std::vector<HalfPlane>& hs, Vec2 box_lo, Vec2 box_hi) {
  const std::vector<DirLine> poly = hpi(hs, box_lo, box_hi);
  std::vector<Vec2> v;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) v.push_back(meet(poly[i], poly[(i + 1) % n]));
  return v;
}

BoundaryArc relative_boundary(const Body2& b, const Body2& c, const Window& w, double tau) {
  const BoundaryArc arc = b.boundary(w);
  constexpr int kSteps = 512;
  auto dc = [&](Vec2 p) { return c.depth(p); };
  std::vector<BoundaryPiece> out;
  for (int i = 0; i < static_cast<int>(arc.pieces().size()); ++i) {
    if (arc.pieces()[i].kind == BoundaryPiece::Kind::Segment) {
      // a segment of B inside C is either interior to C or lies on a facet of C
      const BoundaryPiece& p = arc.pieces()[i];
      for (Vec2 q : {p.a, p.b})
        if (dc(q) < -1e-7 * (1.0 + norm(q))) throw Error("B is not contained in C (point " + to_string(q) + ")");
      if (dc(lerp(p.a, p.b, 0.5)) > tau) out.push_back(p);
      continue;
    }
    std::vector<double> d(kSteps + 1);
    for (int j = 0; j <= kSteps; ++j) {
      const Vec2 p = arc.point(i, static_cast<double>(j) / kSteps);
      d[j] = dc(p);
      if (d[j] < -1e-7 * (1.0 + norm(p))) throw Error("B is not contained in C (point " + to_string(p) + ")");
    }
    auto s_of = [](int j) { return static_cast<double>(j) / kSteps; };
    // Bisect toward the closure limit where the depth in C drops to zero.
    auto refine = [&](int in_j, int dir) {
      int j = in_j;
      while (j + dir >= 0 && j + dir <= kSteps && d[j + dir] > 0.0) j += dir;
      if (j + dir < 0 || j + dir > kSteps) return s_of(j);
      double a = s_of(j), bnd = s_of(j + dir);
      for (int it = 0; it < 80; ++it) {
        const double m = 0.5 * (a + bnd);
        if (dc(arc.point(i, m)) > 0.0) a = m;
        else bnd = m;
      }
      return a;
    };
    int j = 0;
    while (j <= kSteps) {
      if (!(d[j] > tau)) {
        ++j;
        continue;
      }
      int k = j;
      while (k + 1 <= kSteps && d[k + 1] > tau) ++k;
      const double s0 = j == 0 ? 0.0 : refine(j, -1);
      const double s1 = k == kSteps ? 1.0 : refine(k, +1);
      BoundaryPiece p = arc.pieces()[i];
      if (p.kind == BoundaryPiece::Kind::Curve) {
        const double t0 = p.t0, t1 = p.t1;
        p.t0 = t0 + s0 * (t1 - t0);
        p.t1 = t0 + s1 * (t1 - t0);
      }
      const Vec2 a = arc.point(i, s0), bb = arc.point(i, s1);
      p.clipped_start = p.clipped_start && s0 == 0.0;
      p.clipped_end = p.clipped_end && s1 == 1.0;
      p.a = a;
      p.b = bb;
      out.push_back(p);
      j = k + 1;
    }
  }
  return BoundaryArc(b.base(), std::move(out));
}

ExtendedBody extend_body(const std::optional<Body2>& b, const Body2& c, const ExtendOptions& opt) {
  ExtendedBody e;
  if (!b) {
    e.special = ExtendedBody::Special::Empty;
    return e;
  }
  const Window w = b->bounded() ? b->default_window(16.0) : (opt.window ? *opt.window : c.default_window(1024.0));
  const BoundaryArc arc = relative_boundary(*b, c, w, opt.tol);
  if (arc.empty()) {
    e.special = ExtendedBody::Special::Plane;
    return e;
  }
  std::vector<HalfPlane> hs;
  std::vector<Vec2> pts;
  for (const BoundarySample& s : arc.sample(opt.resolution)) {
    // interior points of a flat piece all share the facet normal
    const bool flat = arc.pieces()[s.piece].kind == BoundaryPiece::Kind::Segment;
    if (!flat || s.s == 0.0 || s.s == 1.0) pts.push_back(s.point);
  }
  for (int i = 0; i < static_cast<int>(arc.pieces().size()); ++i)
    if (arc.pieces()[i].kind == BoundaryPiece::Kind::Segment) pts.push_back(arc.point(i, 0.5));
  for (Vec2 q : pts) {
    const NormalArc n = b->supporting_normals(q, 1e-9 * (1.0 + norm(q)));
    hs.push_back(HalfPlane::through(n.first, q));
    if (!n.singleton()) hs.push_back(HalfPlane::through(n.last, q));
  }
  const double r = 4.0 * w.radius;
  const Vec2 lo = w.center - Vec2{r, r}, hi = w.center + Vec2{r, r};
  auto pruned = prune_halfplanes(hs, lo, hi);
  if (!pruned) throw Error("extended body is empty inside the working window");
  e.halfplanes = std::move(*pruned);
  if (e.halfplanes.empty()) e.special = ExtendedBody::Special::Plane;
  return e;
}

const char* grade_name(Grade g) {
  switch (g) {
    case Grade::Continuous: return "continuous";
    case Grade::UscOnly: return "usc-only";
    case Grade::None: return "none";
  }
  return "none";
}

Grade extension_grade(const Body2& c) {
  if (find_asymptotic_direction(c).found) return Grade::None;
  return is_rotund(c) ? Grade::Continuous : Grade::UscOnly;
}

ExtensionResult::ExtensionResult(LevelFamily fam, std::vector<ExtendedBody> ext, Grade grade, double tau)
    : family_(std::move(fam)), extended_(std::move(ext)), grade_(grade), tau_(tau) {}

std::size_t ExtensionResult::level_index(Vec2 x) const {
  if (family_.ambient().contains(x, 0.0)) return family_.first_containing(x);
  std::size_t lo = 0, hi = extended_.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (extended_[mid].contains_interior(x, tau_)) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

double ExtensionResult::operator()(Vec2 x) const {
  const std::size_t k = level_index(x);
  return k < family_.size() ? family_.level(k) : family_.sentinel();
}

ExtensionResult extend_function(const LevelFamily& fam, const ExtendOptions& opt) {
  const Body2& c = fam.ambient();
  const Window w = opt.window ? *opt.window : c.default_window(1024.0);
  const NestingReport nest = check_nesting(fam, w, 256, opt.tol);
  if (!nest.nested)
    throw Error("level family is not nested" + (nest.witness ? " near " + to_string(*nest.witness) : std::string()));
  std::vector<ExtendedBody> ext;
  ext.reserve(fam.size());
  for (std::size_t k = 0; k < fam.size(); ++k) ext.push_back(extend_body(fam.body(k), c, opt));
  return ExtensionResult(fam, std::move(ext), extension_grade(c), opt.tol);
}

CoveringCache::CoveringCache(Body2 c, BodyGenerator gen, ExtendOptions opt)
    : c_(std::move(c)), gen_(std::move(gen)), opt_(std::move(opt)) {}

const ExtendedBody& CoveringCache::extended(long long k) {
  auto it = cache_.find(k);
  if (it == cache_.end()) it = cache_.emplace(k, extend_body(gen_(k), c_, opt_)).first;
  return it->second;
}

bool CoveringCache::member(long long k, Vec2 x) { return extended(k).contains(x, opt_.tol); }

long long CoveringCache::index(Vec2 x, long long budget) {
  if (member(0, x)) return 0;
  long long prev = 0, k = 1;
  while (true) {
    if (k > budget) k = budget;
    if (member(k, x)) break;
    if (k == budget) throw Error("no covering level found up to k = " + std::to_string(budget));
    prev = k;
    k *= 2;
  }
  long long lo = prev + 1, hi = k;
  while (lo < hi) {
    const long long mid = lo + (hi - lo) / 2;
    if (member(mid, x)) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

long long covering_index(const Body2& c, const BodyGenerator& gen, Vec2 x, long long budget, const ExtendOptions& opt) {
  CoveringCache cache(c, gen, opt);
  return cache.index(x, budget);
}

std::size_t covering_index(const LevelFamily& fam, Vec2 x, const ExtendOptions& opt) {
  auto gen = [&](long long k) { return fam.body(static_cast<std::size_t>(k)); };
  return static_cast<std::size_t>(
      covering_index(fam.ambient(), gen, x, static_cast<long long>(fam.size()) - 1, opt));
}

}  // namespace qcext
