#include "qcext/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace qcext {

bool contains(const Body2& c, Vec2 p, double tol) { return c.contains(p, tol); }
Projection project(Vec2 p, const Body2& c) { return c.project(p); }
SupportValue support(const Body2& c, Vec2 dir) { return c.support(dir); }
NormalArc supporting_normals(const Body2& c, Vec2 x, double tol) { return c.supporting_normals(x, tol); }
Cone2 recession_cone(const Body2& c) { return c.recession_cone(); }

SlopeEstimate asymptotic_slope(Vec2 x0, Vec2 v, const Body2& c) {
  const Vec2 u = normalized(v);
  Interval ray = c.chord(x0, u).intersect({0.0, kInf});
  if (!ray.empty() && ray.length() > 1e-12) {
    const double t = std::isfinite(ray.hi) ? 0.5 * (ray.lo + ray.hi) : ray.lo + 1.0;
    if (c.depth(x0 + u * t) > 1e-12) throw Error("ray from " + to_string(x0) + " meets the interior");
  }
  auto phi = [&](double t) { return c.distance(x0 + u * t); };
  SlopeEstimate est;
  double t = 1.0;
  double ft = phi(t);
  bool have_prev = false;
  for (int k = 0; k < 20; ++k) {
    const double f2 = phi(2.0 * t);
    const double s = (f2 - ft) / t;
    est.previous = have_prev ? est.value : s;
    est.value = s;
    est.t_last = 2.0 * t;
    if (have_prev && std::abs(est.value - est.previous) < 1e-6 * std::max(std::abs(est.previous), 1e-12)) break;
    have_prev = true;
    t *= 2.0;
    ft = f2;
  }
  return est;
}

AsymptoticWitness is_asymptotic_direction(const Body2& c, Vec2 v) {
  AsymptoticWitness out;
  out.direction = normalized(v);
  if (c.bounded() || !c.recession_cone().contains_direction(out.direction, 1e-9)) return out;
  for (Vec2 n : {perp(out.direction), -perp(out.direction)}) {
    const SupportValue s = c.support(n);
    if (!std::isfinite(s.value)) continue;
    // Foot of the origin on the supporting line parallel to v.
    const Vec2 x0 = n * s.value;
    const SlopeEstimate est = asymptotic_slope(x0, out.direction, c);
    if (est.is_zero()) {
      out.found = true;
      out.x0 = x0;
      out.slope = est.value;
      return out;
    }
  }
  return out;
}

AsymptoticWitness find_asymptotic_direction(const Body2& c) {
  const Cone2& r = c.recession_cone();
  if (r.trivial()) return {};
  std::vector<Vec2> cand{r.lo};
  if (dist(r.lo, r.hi) > 1e-12) cand.push_back(r.hi);
  for (Vec2 v : cand) {
    AsymptoticWitness w = is_asymptotic_direction(c, v);
    if (w.found) return w;
  }
  AsymptoticWitness none;
  none.direction = r.lo;
  return none;
}

double delta_modulus(const Body2& c, Vec2 x, double eps, int resolution) {
  const double r = c.witness_radius();
  if (!(eps >= 0.0) || !(eps < 2.0 * r)) throw Error("eps must lie in [0, 2r)");
  if (std::abs(c.depth(x)) > 1e-7 * (1.0 + norm(x))) throw Error("point " + to_string(x) + " is not on the boundary");
  if (eps == 0.0) return 0.0;
  const BoundaryArc arc = c.boundary(Window{x, 1.5 * eps + 1e-9});
  double best = kInf;
  for (int i = 0; i < static_cast<int>(arc.pieces().size()); ++i) {
    auto g = [&](double s) { return dist(arc.point(i, s), x) - eps; };
    double prev_s = 0.0, prev = g(0.0);
    for (int j = 1; j <= resolution; ++j) {
      const double s = static_cast<double>(j) / resolution;
      const double cur = g(s);
      if ((prev <= 0.0) != (cur <= 0.0) || cur == 0.0) {
        double a = prev_s, b = s, fa = prev;
        for (int it = 0; it < 80; ++it) {
          const double m = 0.5 * (a + b);
          const double fm = g(m);
          if ((fm <= 0.0) == (fa <= 0.0)) {
            a = m;
            fa = fm;
          } else {
            b = m;
          }
        }
        const Vec2 y = arc.point(i, 0.5 * (a + b));
        best = std::min(best, c.distance_to_boundary((x + y) * 0.5));
      }
      prev_s = s;
      prev = cur;
    }
  }
  if (!std::isfinite(best)) throw Error("no boundary point at distance eps from " + to_string(x));
  return std::clamp(best, 0.0, 0.5 * eps);
}

NormalArc separating_normals(Vec2 z, const Body2& e) {
  // boundary points may land an ulp inside
  if (e.depth(z) > 1e-12 * (1.0 + norm(z))) throw Error("point " + to_string(z) + " lies in the interior");
  const Projection pr = e.project(z);
  if (pr.distance <= 1e-12) return e.supporting_normals(z, 1e-9);
  auto sigma = [&](double th) { return e.support(unit_from_angle(th)).value - dot(unit_from_angle(th), z); };
  const double th0 = angle_of(z - pr.point);
  auto edge = [&](double sign) {
    constexpr int kSteps = 2048;
    double inside = th0, outside = th0;
    bool crossed = false;
    for (int k = 1; k <= kSteps; ++k) {
      const double th = th0 + sign * kPi * k / kSteps;
      if (sigma(th) > 0.0) {
        outside = th;
        crossed = true;
        break;
      }
      inside = th;
    }
    if (!crossed) return inside;
    for (int it = 0; it < 60; ++it) {
      const double m = 0.5 * (inside + outside);
      if (sigma(m) <= 0.0) inside = m;
      else outside = m;
    }
    return inside;
  };
  const double hi = edge(+1.0);
  const double lo = edge(-1.0);
  return {unit_from_angle(lo), unit_from_angle(hi)};
}

Cone2 cone_from(Vec2 z, const Body2& e, double tol) {
  if (e.depth(z) > tol) throw Error("cone apex " + to_string(z) + " lies in the interior; the cone is the plane");
  const NormalArc n = separating_normals(z, e);
  Cone2 cone;
  cone.apex = z;
  cone.lo = perp(n.last);
  cone.hi = -perp(n.first);
  const double span = n.span();
  if (span <= 1e-12) cone.kind = Cone2::Kind::HalfPlane;
  else if (span >= kPi - 1e-12) cone.kind = Cone2::Kind::Ray;
  else cone.kind = Cone2::Kind::Wedge;
  return cone;
}

BoundaryArc gamma_set(Vec2 z, const Body2& c) {
  if (c.contains(z, 0.0)) throw Error("point " + to_string(z) + " belongs to the body");
  const NormalArc n = separating_normals(z, c);
  std::vector<BoundaryPiece> pieces;
  for (Vec2 dir : {n.first, n.last}) {
    const SupportValue sv = c.support(dir);
    if (!sv.attained) throw Error("tangency set is unbounded (asymptotic direction present)");
    const std::vector<Vec2> f = c.face(dir);
    BoundaryPiece p;
    p.kind = BoundaryPiece::Kind::Segment;
    p.a = f.front();
    p.b = f.back();
    bool dup = false;
    for (const BoundaryPiece& q : pieces)
      if (dist(q.a, p.a) < 1e-12 && dist(q.b, p.b) < 1e-12) dup = true;
    if (!dup) pieces.push_back(p);
  }
  return BoundaryArc(Base{}, std::move(pieces));
}

std::vector<HalfPlane> k_cone_halfplanes(Vec2 x, const Body2& c, double tol) {
  const NormalArc n = c.supporting_normals(x, tol);
  std::vector<HalfPlane> hs{HalfPlane::through(n.first, x)};
  if (!n.singleton()) hs.push_back(HalfPlane::through(n.last, x));
  return hs;
}

Body2 k_cone(Vec2 x, const Body2& c, double tol) { return Body2::halfplanes(k_cone_halfplanes(x, c, tol)); }

bool is_rotund(const Body2& c) {
  if (!c.facets().empty()) return false;
  if (const auto* e = std::get_if<Epigraph>(&c.base())) {
    if (e->profile.kind() == Profile::Kind::CustomPoly && e->profile.coeffs().size() < 3) return false;
  }
  return true;
}

double min_sampled_delta(const Body2& c, double eps, const Window& w, int points, int resolution) {
  const BoundaryArc arc = c.boundary(w);
  double best = kInf;
  for (const BoundarySample& s : arc.sample(points)) best = std::min(best, delta_modulus(c, s.point, eps, resolution));
  return best;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Vec2> h(2 * pts.size());
  std::size_t k = 0;
  for (const Vec2& p : pts) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], p - h[k - 2]) <= 0.0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

bool polygon_contains(const std::vector<Vec2>& hull, Vec2 q, double tol) {
  if (hull.size() < 3) return false;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Vec2 a = hull[i], b = hull[(i + 1) % hull.size()];
    if (cross(normalized(b - a), q - a) < -tol) return false;
  }
  return true;
}

}  // namespace qcext
