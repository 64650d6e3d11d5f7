#include "qcext/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "qcext/counterexamples.hpp"
#include "qcext/extension.hpp"
#include "qcext/geometry.hpp"
#include "qcext/levelset.hpp"
#include "qcext/svg.hpp"

namespace qcext {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double rel_tol(Vec2 p, double t = 1e-9) { return t * (1.0 + norm(p)); }

// Box sampler over a window; rejection into the body with a bounded number of tries.
std::optional<Vec2> sample_in(const Body2& c, const Window& w, std::mt19937_64& rng, int tries = 2000) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < tries; ++i) {
    const Vec2 p = w.center + Vec2{u(rng), u(rng)} * w.radius;
    if (c.contains(p, 0.0)) return p;
  }
  return std::nullopt;
}

Vec2 sample_box(const Window& w, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return w.center + Vec2{u(rng), u(rng)} * w.radius;
}

std::optional<Vec2> sample_boundary(const Body2& c, const Window& w, std::mt19937_64& rng) {
  const BoundaryArc arc = c.boundary(w);
  if (arc.empty()) return std::nullopt;
  std::uniform_int_distribution<int> pick(0, static_cast<int>(arc.pieces().size()) - 1);
  std::uniform_real_distribution<double> s(0.0, 1.0);
  return arc.point(pick(rng), s(rng));
}

Vec2 unit_dir(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a(0.0, 2.0 * kPi);
  return unit_from_angle(a(rng));
}

class Recorder {
 public:
  Recorder(std::string name, std::uint64_t seed) : t0_(Clock::now()) {
    r_.name = std::move(name);
    r_.seed = seed;
  }
  void pass() { ++r_.cases; }
  void fail(std::string check, std::string detail, std::vector<Vec2> witness = {}) {
    ++r_.cases;
    // one record per check is enough to reproduce; count the rest in the detail of the first
    for (CaseFailure& f : r_.failures)
      if (f.check == check) return;
    r_.failures.push_back({std::move(check), std::move(detail), std::move(witness)});
  }
  void expect(bool ok, const std::string& check, const std::string& detail, std::vector<Vec2> witness = {}) {
    if (ok) pass();
    else fail(check, detail, std::move(witness));
  }
  // Runs a case; exceptions count as failures of that check.
  template <class F>
  void guarded(const std::string& check, F f) {
    try {
      f();
    } catch (const std::exception& e) {
      fail(check, std::string("exception: ") + e.what());
    }
  }
  SuiteReport finish() {
    r_.seconds = seconds_since(t0_);
    return std::move(r_);
  }

 private:
  SuiteReport r_;
  Clock::time_point t0_;
};

std::vector<Body2> canonical_bodies() {
  std::vector<Body2> out;
  for (const std::string& n : preset_names()) out.push_back(preset_body(n));
  return out;
}

std::int64_t expensive(const SuiteConfig& cfg) { return std::max<std::int64_t>(1, cfg.budget / 50); }

Window probe_window(const Body2& c) {
  const Window w = c.default_window(4.0);
  return c.bounded() ? Window{w.center, 1.25 * w.radius} : w;
}

}  // namespace

std::string SuiteReport::content_hash() const {
  std::ostringstream os;
  os << name << '|' << seed << '|' << cases;
  for (const CaseFailure& f : failures) {
    os << '|' << f.check << ':' << f.detail;
    for (Vec2 p : f.witness) os << ':' << fmt17(p.x) << ',' << fmt17(p.y);
  }
  return hex64(fnv1a(os.str()));
}

Json SuiteReport::to_json() const {
  Json fs = Json::array();
  for (const CaseFailure& f : failures) {
    Json w = Json::array();
    for (Vec2 p : f.witness) w.push_back(vec_json(p));
    fs.push_back({{"check", f.check}, {"detail", f.detail}, {"witness", w}});
  }
  return {{"suite", name},     {"seed", seed},       {"cases", cases},
          {"failures", fs},    {"passed", passed()}, {"seconds", seconds},
          {"hash", content_hash()}};
}

std::vector<std::string> suite_names() { return {"geometry", "levelset", "extension", "counterexamples", "end_to_end"}; }

std::string body_hash(const Body2& b) { return hex64(fnv1a(body_to_json(b).dump())); }

std::vector<Body2> fuzz_bodies(std::uint64_t seed, int n) {
  if (n < 1) throw Error("fuzz_bodies needs n >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<Body2> out;
  while (static_cast<int>(out.size()) < n) {
    const int kind = static_cast<int>(out.size()) % 3;
    try {
      if (kind == 0) {
        // convex hull of Gaussian points
        std::vector<Vec2> pts(6 + static_cast<int>(uni(rng) * 10));
        for (Vec2& p : pts) p = {gauss(rng), gauss(rng)};
        const std::vector<Vec2> h = convex_hull(pts);
        if (h.size() < 3) continue;
        out.push_back(Body2::polychain(h));
      } else if (kind == 1) {
        // half-planes around the origin at positive offsets
        const int m = 3 + static_cast<int>(uni(rng) * 5);
        std::vector<HalfPlane> hs;
        for (int i = 0; i < m; ++i) hs.push_back(HalfPlane{unit_dir(rng), 0.5 + uni(rng)});
        out.push_back(Body2::halfplanes(hs));
      } else {
        const double ang = 2.0 * kPi * uni(rng);
        const Affine2 t = Affine2::rotation(ang, {gauss(rng), gauss(rng)});
        const int which = static_cast<int>(uni(rng) * 3);
        if (which == 0) out.push_back(Body2::disk({gauss(rng), gauss(rng)}, 0.5 + 1.5 * uni(rng)));
        else if (which == 1) out.push_back(Body2::epigraph(Profile::parabola(0.25 + 2.0 * uni(rng), -0.5 - uni(rng)), t));
        else out.push_back(Body2::epigraph(Profile::cosh(0.5 + uni(rng), -1.0 - 2.0 * uni(rng)), t));
      }
    } catch (const Error&) {
      // degenerate draw; try again
    }
  }
  return out;
}

std::vector<Vec2> minimize_witness(const std::function<bool(const std::vector<Vec2>&)>& still_fails,
                                   std::vector<Vec2> pts, int budget) {
  if (pts.empty() || !still_fails(pts)) return pts;
  Vec2 centroid;
  for (Vec2 p : pts) centroid = centroid + p;
  centroid = centroid / static_cast<double>(pts.size());
  int evals = 0;
  double step = 0.5;
  while (evals < budget && step > 1e-6) {
    bool moved = false;
    for (std::size_t i = 0; i < pts.size() && evals < budget; ++i) {
      std::vector<Vec2> trial = pts;
      trial[i] = lerp(trial[i], centroid, step);
      ++evals;
      if (still_fails(trial)) {
        pts = std::move(trial);
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
  }
  return pts;
}

namespace {

SuiteReport geometry_suite(std::uint64_t seed, const SuiteConfig& cfg) {
  Recorder rec("geometry", seed);
  std::mt19937_64 rng(seed);
  std::vector<Body2> bodies = canonical_bodies();
  for (Body2& b : fuzz_bodies(seed, 12)) bodies.push_back(std::move(b));
  const std::size_t nb = bodies.size();
  std::vector<bool> asym(nb);
  for (std::size_t i = 0; i < nb; ++i) asym[i] = find_asymptotic_direction(bodies[i]).found;

  for (std::int64_t i = 0; i < cfg.budget; ++i) {
    const Body2& c = bodies[i % nb];
    const Window w = probe_window(c);
    rec.guarded("project-idempotent", [&] {
      const Vec2 p = sample_box(w, rng);
      const Vec2 q = project(p, c).point;
      const double d = project(q, c).distance;
      rec.expect(d <= rel_tol(q), "project-idempotent", "second projection moved by " + fmt17(d), {p, q});
    });
    rec.guarded("support-inequality", [&] {
      const auto p = sample_in(c, w, rng);
      if (!p) return;
      const Vec2 g = unit_dir(rng);
      const double s = support(c, g).value;
      rec.expect(s >= dot(g, *p) - rel_tol(*p), "support-inequality",
                 "support " + fmt17(s) + " below g.p = " + fmt17(dot(g, *p)), {*p, g});
    });
    rec.guarded("k-cone-contains-body", [&] {
      const auto x = sample_boundary(c, w, rng);
      const auto p = sample_in(c, w, rng);
      if (!x || !p) return;
      bool ok = true;
      for (const HalfPlane& h : k_cone_halfplanes(*x, c, 1e-9)) ok = ok && h.slack(*p) >= -rel_tol(*p, 1e-8);
      rec.expect(ok, "k-cone-contains-body", "body point outside K(x, C)", {*x, *p});
    });
  }
  for (std::size_t i = 0; i < nb; ++i) {
    const Body2& c = bodies[i];
    bool all_finite = true;
    for (int k = 0; k < 32; ++k) all_finite = all_finite && std::isfinite(support(c, unit_from_angle(2.0 * kPi * k / 32)).value);
    rec.expect(all_finite == c.bounded() && recession_cone(c).trivial() == c.bounded(), "recession-trivial-iff-bounded",
               "body " + body_hash(c));
  }
  for (std::int64_t i = 0; i < expensive(cfg); ++i) {
    const std::size_t bi = i % nb;
    const Body2& c = bodies[bi];
    const Window w = probe_window(c);
    rec.guarded("k-cone-equals-cone-closure", [&] {
      const auto x = sample_boundary(c, w, rng);
      if (!x) return;
      const Cone2 cone = cone_from(*x, c);
      const auto hs = k_cone_halfplanes(*x, c, 1e-9);
      bool ok = true;
      Vec2 bad;
      for (int k = 0; k < 64; ++k) {
        const Vec2 d = unit_dir(rng);
        // directions grazing an edge of the cone are ambiguous at this tolerance
        if (cone.kind != Cone2::Kind::Full && cone.kind != Cone2::Kind::Trivial &&
            (std::abs(cross(d, cone.lo)) < 1e-6 || std::abs(cross(d, cone.hi)) < 1e-6))
          continue;
        bool in_k = true;
        for (const HalfPlane& h : hs) in_k = in_k && h.slack(*x + d) >= -1e-9;
        if (in_k != cone.contains_direction(d, 1e-9)) {
          ok = false;
          bad = d;
        }
      }
      rec.expect(ok, "k-cone-equals-cone-closure", "direction classified differently", {*x, bad});
    });
    if (asym[bi]) continue;
    rec.guarded("gamma-bounded-nonempty", [&] {
      Vec2 z = sample_box(Window{w.center, 2.0 * w.radius}, rng);
      if (c.contains(z, 0.0)) return;
      const BoundaryArc g = gamma_set(z, c);
      bool ok = !g.empty();
      for (const BoundaryPiece& p : g.pieces()) ok = ok && std::isfinite(norm(p.a)) && std::isfinite(norm(p.b));
      rec.expect(ok, "gamma-bounded-nonempty", "tangency set empty or unbounded", {z});
      // boundary points beyond conv(Gamma + z) see z inside their supporting cone
      std::vector<Vec2> hull_pts{z};
      for (const BoundarySample& s : g.sample(16)) hull_pts.push_back(s.point);
      const std::vector<Vec2> hull = convex_hull(hull_pts);
      for (int k = 0; k < 8; ++k) {
        const auto y = sample_boundary(c, w, rng);
        if (!y) continue;
        // y must lie strictly outside the hull of the tangency points and z
        const bool outside = hull.size() < 3 || !polygon_contains(hull, *y, 1e-6);
        if (!outside) continue;
        bool in_k = true;
        for (const HalfPlane& hp : k_cone_halfplanes(*y, c, 1e-9)) in_k = in_k && hp.slack(z) >= -rel_tol(z, 1e-7);
        rec.expect(in_k, "tangency-cone-membership", "z outside K(y, C)", {z, *y});
      }
    });
    rec.guarded("bounded-below-attained", [&] {
      const Vec2 h = unit_dir(rng);
      const SupportValue s = support(c, -h);  // inf of h over C is -s
      if (!std::isfinite(s.value)) return;
      const double lo = -s.value;
      const Body2 sub = c.clipped({HalfPlane{h, lo + 1.0}});
      rec.expect(s.attained && sub.bounded(), "bounded-below-attained",
                 "inf of h not attained or sublevel set unbounded", {h});
    });
    rec.guarded("delta-monotone", [&] {
      const auto x = sample_boundary(c, w, rng);
      if (!x) return;
      const double r = c.witness_radius();
      double prev = 0.0;
      bool ok = true;
      for (double f : {0.05, 0.1, 0.2, 0.4, 0.8, 1.6}) {
        const double d = delta_modulus(c, *x, f * r, 512);
        if (d < prev - 1e-9) ok = false;
        prev = std::max(prev, d);
      }
      rec.expect(ok, "delta-monotone", "delta decreased along eps", {*x});
    });
  }
  return rec.finish();
}

// Parallel cuts C ∩ {h <= c_k}; for parallel lines the gaps are exactly c_{k+1} - c_k.
struct CutFamily {
  std::vector<Body2> bodies;
  std::vector<double> levels;
  std::vector<double> gaps;
  std::vector<double> cuts;
  Vec2 h;
};

CutFamily cut_family(const Body2& c, Vec2 h, int count, bool last_is_c = false) {
  const SupportValue below = c.support(-h), above = c.support(h);
  if (!std::isfinite(below.value)) throw Error("cut direction unbounded below");
  const double lo = -below.value;
  const double step = std::isfinite(above.value) ? (above.value - lo) / (count + 1) : 1.0;
  CutFamily f;
  f.h = h;
  double level = 0.0;
  for (int k = 0; k < count; ++k) {
    const double cut = lo + (k + 1) * step;
    f.cuts.push_back(cut);
    f.bodies.push_back(c.clipped({HalfPlane{h, cut}}));
    f.levels.push_back(level);
    if (k + 1 < count) {
      f.gaps.push_back(step);
      level += step;
    }
  }
  if (last_is_c) {
    f.gaps.push_back(step);
    f.bodies.push_back(c);
    f.levels.push_back(level + step);
  }
  return f;
}

Vec2 cut_direction(const Body2& c, std::mt19937_64& rng) {
  if (c.bounded()) return unit_dir(rng);
  const Cone2& r = c.recession_cone();
  return normalized(r.lo + r.hi);
}

SuiteReport levelset_suite(std::uint64_t seed, const SuiteConfig& cfg) {
  Recorder rec("levelset", seed);
  std::mt19937_64 rng(seed);
  std::vector<Body2> bodies{preset_body("disk"), preset_body("square"), preset_body("parabola"), preset_body("cosh")};
  for (Body2& b : fuzz_bodies(seed ^ 0x5eedULL, 6))
    if (b.bounded()) bodies.push_back(std::move(b));

  for (const Body2& c : bodies) {
    rec.guarded("staircase-sublevel-recovery", [&] {
      const CutFamily fam = cut_family(c, cut_direction(c, rng), 4);
      const QCFunction f = staircase_qc(c, fam.bodies, fam.levels, fam.gaps);
      const Window w = probe_window(c);
      const std::int64_t n = std::max<std::int64_t>(1, cfg.budget / static_cast<std::int64_t>(bodies.size()));
      for (std::int64_t i = 0; i < n; ++i) {
        const auto x = sample_in(c, w, rng);
        if (!x) continue;
        const double v = f(*x);
        for (std::size_t k = 0; k < fam.bodies.size(); ++k) {
          if (fam.bodies[k].contains(*x, 0.0) && v > fam.levels[k] + 1e-9)
            rec.fail("staircase-sublevel-recovery", "value above beta_k inside D_k", {*x});
          if (k < fam.gaps.size() && !fam.bodies[k + 1].contains(*x, 0.0) &&
              v < fam.levels[k] + fam.gaps[k] * (1.0 - 1e-6))
            rec.fail("staircase-sublevel-recovery", "value below beta_k + s_k outside D_{k+1}", {*x});
        }
        rec.pass();
      }
      // the 1-Lipschitz construction respects its modulus bound
      const Window mw = probe_window(c);
      const SampleDomain dom = SampleDomain::in_body(c, mw.center - Vec2{mw.radius, mw.radius},
                                                     mw.center + Vec2{mw.radius, mw.radius});
      const std::vector<double> grid{0.01, 0.03, 0.1, 0.3, 1.0};
      const ModulusTable t = modulus_estimate([&](Vec2 p) { return f(p); }, dom, expensive(cfg) * 20, grid, seed);
      bool ok = true;
      for (const auto& [tt, om] : t.rows) ok = ok && om <= tt + 1e-9;
      rec.expect(ok, "modulus-below-lipschitz-line", "omega(t) exceeds t for a 1-Lipschitz staircase");
    });
  }

  rec.guarded("tilde-f-continuity", [&] {
    NoUCOptions o;
    o.kmax = 16;
    const NoUCResult r = gen_no_uc(preset_body("parabola"), o);
    const double bound = 2.0 / r.cert.beta;
    std::uniform_int_distribution<std::size_t> pick(0, r.cert.points.size() - 1);
    std::uniform_real_distribution<double> off(-1.0, 1.0), len(0.0, 0.05);
    const Body2& c = *r.f.domain();
    for (std::int64_t i = 0; i < cfg.budget; ++i) {
      const Vec2 base = r.cert.points[pick(rng)];
      const Vec2 p = base + Vec2{off(rng), off(rng)} * 1.5;
      const Vec2 q = p + unit_dir(rng) * len(rng);
      if (!c.contains(p, 0.0) || !c.contains(q, 0.0)) continue;
      const double jump = std::abs(r.f(p) - r.f(q));
      rec.expect(jump <= bound * dist(p, q) + 1e-9, "tilde-f-continuity",
                 "jump " + fmt17(jump) + " over distance " + fmt17(dist(p, q)), {p, q});
    }
  });

  rec.guarded("compose-projection-verdict", [&] {
    const SampleDomain box = SampleDomain::box({-1.0, -1.0}, {1.0, 1.0});
    const QCFunction sup_norm(std::nullopt, [](Vec2 p) { return std::max(std::abs(p.x), std::abs(p.y)); }, "sup-norm");
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 4; ++i) {
      std::array<double, 4> m{u(rng), u(rng), u(rng), u(rng)};
      if (i == 0) m = {1.0, 0.0, 0.0, 0.0};  // rank one
      const QCFunction g = compose_projection(sup_norm, m);
      const QCReport r = quasiconvex_check([&](Vec2 p) { return g(p); }, box, expensive(cfg) * 10, seed + i);
      rec.expect(r.passed(), "compose-projection-verdict", "composition of a quasiconvex function flagged");
    }
  });

  rec.guarded("mcshane-restriction", [&] {
    const Body2 c = preset_body("disk");
    const CutFamily fam = cut_family(c, {0.0, 1.0}, 4);
    const QCFunction f = staircase_qc(c, fam.bodies, fam.levels, fam.gaps);
    const QCFunction m = mcshane_extend(f, 1.0);
    for (std::int64_t i = 0; i < expensive(cfg) * 10; ++i) {
      const auto x = sample_in(c, probe_window(c), rng);
      if (!x) continue;
      const double d = std::abs(m(*x) - f(*x));
      rec.expect(d <= 1e-9, "mcshane-restriction", "extension differs on C by " + fmt17(d), {*x});
    }
  });

  if (cfg.plant_failure) {
    const SampleDomain box = SampleDomain::box({-1.0, -1.0}, {1.0, 1.0});
    const QCReport r = quasiconvex_check([](Vec2 p) { return std::abs(p.x * p.y); }, box, 10000, seed);
    std::vector<Vec2> w;
    if (r.witness) {
      // shrink the pair (x, y) with z at the same fraction, keeping half the violation
      const auto [x, y, z] = *r.witness;
      const double lam = dist(x, z) / std::max(dist(x, y), 1e-300);
      auto f = [](Vec2 p) { return std::abs(p.x * p.y); };
      auto fails = [&](const std::vector<Vec2>& q) {
        return f(lerp(q[0], q[1], lam)) - std::max(f(q[0]), f(q[1])) >= 0.5 * r.worst;
      };
      w = minimize_witness(fails, {x, y});
      w.push_back(lerp(w[0], w[1], lam));
    }
    rec.expect(r.passed(), "planted-abs-xy", "violation " + fmt17(r.worst) + " (" + std::to_string(r.violations) +
                                                 " of " + std::to_string(r.triples) + " triples)", w);
  }
  return rec.finish();
}

bool segment_meets(const Body2& b, Vec2 x, Vec2 y) {
  const Interval ch = b.chord(x, y - x).intersect({0.0, 1.0});
  if (!ch.empty()) return true;
  // grazing contact within rounding
  double best = kInf;
  for (int i = 0; i <= 64; ++i) best = std::min(best, b.distance(lerp(x, y, i / 64.0)));
  return best <= rel_tol(x, 1e-7);
}

double hausdorff_to_body(const std::vector<Vec2>& poly, const Body2& b) {
  double h = 0.0;
  for (Vec2 v : poly) h = std::max(h, b.distance(v));
  return h;
}

// Hausdorff(e(B) ∩ C, B) for polygonal C, plus the boundary sampling step used for e(B).
std::pair<double, double> operator_gap(const ExtendedBody& e, const Body2& b, const Body2& c, const ExtendOptions& opt) {
  const Window w = b.default_window(16.0);
  const double step = relative_boundary(b, c, w, opt.tol).total_length() / opt.resolution;
  std::vector<HalfPlane> hs = e.halfplanes;
  hs.insert(hs.end(), c.clips().begin(), c.clips().end());
  if (const auto& v = c.chain_vertices())
    for (std::size_t i = 0; i < v->size(); ++i) {
      const Vec2 a = (*v)[i], b = (*v)[(i + 1) % v->size()];
      const Vec2 n = normalized(Vec2{b.y - a.y, a.x - b.x});
      hs.push_back(HalfPlane{n, dot(n, a)});
    }
  const Vec2 r{w.radius, w.radius};
  const auto poly = halfplane_polygon(hs, w.center - r, w.center + r);
  return {hausdorff_to_body(poly, b), step};
}

void polygon_cases(Recorder& rec, std::mt19937_64& rng, std::uint64_t seed, std::int64_t instances) {
  const ExtendOptions opt;
  std::int64_t done = 0;
  while (done < instances) {
    for (const Body2& c : fuzz_bodies(++seed, 3)) {
      if (!c.bounded() || !c.chain_vertices() || done >= instances) continue;
      ++done;
      rec.guarded("polygon-in-polygon", [&] {
        const Window w1 = c.default_window(1.0);
        const auto p = sample_in(c, w1, rng);
        if (!p) throw Error("no interior sample");
        const Vec2 n1 = unit_dir(rng), n2 = unit_dir(rng);
        const Body2 b = c.clipped({HalfPlane{n1, dot(n1, *p)}});
        const Body2 b1 = b.clipped({HalfPlane{n2, dot(n2, *p)}});
        const ExtendedBody e = extend_body(b, c, opt), e1 = extend_body(b1, c, opt);
        const auto [h, step] = operator_gap(e, b, c, opt);
        rec.expect(h <= 5.0 * step + 1e-12, "operator-hausdorff",
                   "Hausdorff " + fmt17(h) + " exceeds 5 x step " + fmt17(step), {*p});
        const Window w{c.witness(), 4.0 * w1.radius};
        for (int k = 0; k < 32; ++k) {
          const Vec2 x = sample_box(w, rng);
          if (e1.contains(x, 1e-9))
            rec.expect(e.contains(x, 1e-7), "monotonicity", "point of e(B1) outside e(B2)", {x});
          const auto y = sample_in(c, w, rng, 50);
          if (y && e.contains(x, 0.0) && !c.contains(x, 0.0) && !b.contains(*y, 0.0))
            rec.expect(segment_meets(b, x, *y), "segment-crosses-body", "segment misses B", {x, *y});
        }
      });
    }
  }
}

void half_disk_case(Recorder& rec) {
  rec.guarded("half-disk-closed-form", [&] {
    const Body2 c = preset_body("disk");
    const ExtendedBody e = extend_body(c.clipped({HalfPlane{{1.0, 0.0}, 0.0}}), c);
    const std::vector<HalfPlane> want{{{1.0, 0.0}, 0.0}, {{0.0, 1.0}, 1.0}, {{0.0, -1.0}, 1.0}};
    bool ok = e.halfplanes.size() == want.size();
    for (const HalfPlane& w : want) {
      bool found = false;
      for (const HalfPlane& h : e.halfplanes)
        found = found || (dist(h.normal, w.normal) <= 1e-6 && std::abs(h.offset - w.offset) <= 1e-6);
      ok = ok && found;
    }
    rec.expect(ok, "half-disk-closed-form", "e(B) differs from {u<=0, |v|<=1}");
  });
}

void strict_monotone_cases(Recorder& rec, std::mt19937_64& rng, std::int64_t n) {
  rec.guarded("strict-monotonicity", [&] {
    const Body2 c = preset_body("parabola");
    const ExtendedBody e1 = extend_body(c.clipped({HalfPlane{{0.0, 1.0}, 1.0}}), c);
    const ExtendedBody e2 = extend_body(c.clipped({HalfPlane{{0.0, 1.0}, 2.0}}), c);
    const Window w{{0.0, -2.0}, 6.0};
    for (std::int64_t i = 0; i < n; ++i) {
      const Vec2 x = sample_box(w, rng);
      if (!e1.contains(x, 0.0)) continue;
      rec.expect(e2.margin(x) > 1e-9, "strict-monotonicity", "e(B1) point without margin in e(B2)", {x});
    }
  });
}

// Parabola body with B_k = C ∩ {v <= k}: every point gets a finite covering level.
void covering_cases(Recorder& rec, std::mt19937_64& rng, std::int64_t n) {
  rec.guarded("covering-index-finite", [&] {
    const Body2 c = preset_body("parabola");
    CoveringCache up(c, [&](long long k) -> std::optional<Body2> {
      return c.clipped({HalfPlane{{0.0, 1.0}, static_cast<double>(k)}});
    });
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (std::int64_t i = 0; i < n; ++i) {
      const Vec2 x{u(rng), u(rng)};
      try {
        const long long k = up.index(x, 1LL << 40);
        rec.expect(up.member(k, x), "covering-index-finite", "index does not contain the point", {x});
      } catch (const Error& e) {
        rec.fail("covering-index-finite", e.what(), {x});
      }
    }
  });
}

// Downward family B_k = C ∩ {v >= k}: the extensions have empty intersection.
void downward_cases(Recorder& rec, std::mt19937_64& rng, std::int64_t n) {
  rec.guarded("empty-intersection", [&] {
    const Body2 c = preset_body("parabola");
    CoveringCache down(c, [&](long long k) -> std::optional<Body2> {
      return c.clipped({HalfPlane{{0.0, -1.0}, -static_cast<double>(k)}});
    });
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (std::int64_t i = 0; i < n; ++i) {
      const Vec2 x{u(rng), u(rng)};
      bool excluded = false;
      for (long long k = 1; k <= (1LL << 20) && !excluded; k *= 2) excluded = !down.member(k, x);
      rec.expect(excluded, "empty-intersection", "point kept by every e(B_k)", {x});
    }
  });
}

SuiteReport extension_suite(std::uint64_t seed, const SuiteConfig& cfg) {
  Recorder rec("extension", seed);
  std::mt19937_64 rng(seed);
  for (const char* name : {"disk", "square", "parabola", "cosh"}) {
    const SuiteReport sub = extension_property_suite(preset_body(name), seed, cfg);
    for (std::int64_t i = 0; i < sub.cases; ++i) rec.pass();
    for (const CaseFailure& f : sub.failures) rec.fail(std::string(name) + ":" + f.check, f.detail, f.witness);
  }
  polygon_cases(rec, rng, seed, expensive(cfg));
  half_disk_case(rec);
  strict_monotone_cases(rec, rng, cfg.budget);
  covering_cases(rec, rng, expensive(cfg) * 10);
  downward_cases(rec, rng, expensive(cfg) * 10);
  return rec.finish();
}

// Runs the generator named in a denied grade; throws if it fails.
void run_generator(const std::string& gen, const Body2& c) {
  if (gen == "gen_no_qc") gen_no_qc(c);
  else if (gen == "gen_non_rotund") gen_non_rotund(c);
  else if (gen == "gen_no_uc") gen_no_uc(c, {16, 1e-2});
  else if (gen == "gen_no_lip") gen_no_lip(c, {12, 360, true});
  else throw Error("unknown generator " + gen);
}

void classifier_cases(Recorder& rec, const std::vector<std::string>& names, std::uint64_t seed, const SuiteConfig& cfg) {
  for (const std::string& name : names) {
    rec.guarded("classifier-" + name, [&] {
      const Body2 c = preset_body(name);
      const Classification cl = characterize(c);
      for (const GradeVerdict& g : cl.grades) {
        if (!g.granted) {
          try {
            run_generator(g.generator, c);
            rec.pass();
          } catch (const std::exception& e) {
            rec.fail("denied-grade-generator", name + " " + g.grade + ": " + g.generator + " failed: " + e.what());
          }
        } else {
          const SuiteReport sub = extension_property_suite(c, seed, cfg);
          std::string why;
          if (!sub.failures.empty()) why = sub.failures.front().check + ": " + sub.failures.front().detail;
          rec.expect(sub.passed(), "granted-grade-properties", name + " " + g.grade + ": " + why);
        }
      }
    });
  }
}

// Step extension of the no-Lipschitz staircase on an enlarged disk. Near P_k (where f <= beta_k)
// the oscillation at scale 2|P_k Q_k| / theta must reach beta_{k+1} - beta_k.
void quotient_cases(Recorder& rec, int kmax) {
  rec.guarded("quotient-bound", [&] {
    const Body2 e = preset_body("disk");
    const NoLipResult r = gen_no_lip(e, {kmax, 360, true});
    const NoLipCertificate& cert = r.cert;
    const Body2 big = Body2::disk({0.0, 0.0}, 2.0);
    std::vector<LevelEntry> entries;
    for (const NoLipRow& row : cert.rows) entries.push_back({row.beta, e.clipped(row.body)});
    entries.push_back({cert.rows.back().beta + cert.rows.back().gap, big});
    const ExtensionResult ext = extend_function(LevelFamily(big, entries));
    for (std::size_t k = 0; k + 1 < cert.rows.size(); ++k) {
      const NoLipRow& row = cert.rows[k];
      const Vec2 x = cert.frame.to_world(row.p);
      const double t = 2.0 * row.pq / cert.theta;
      double best = 0.0;
      for (int i = 0; i < 256; ++i) best = std::max(best, ext(x + unit_from_angle(2.0 * kPi * i / 256) * t) - row.beta);
      rec.expect(best >= row.gap * (1.0 - 1e-9), "quotient-bound",
                 "k = " + std::to_string(row.k) + ": modulus " + fmt17(best) + " below gap " + fmt17(row.gap), {x});
    }
  });
}

SuiteReport counterexamples_suite(std::uint64_t seed, const SuiteConfig& cfg) {
  Recorder rec("counterexamples", seed);
  const int kmax = cfg.budget >= 10000 ? 20 : 12;

  rec.guarded("no-lip-trend", [&] {
    for (const char* name : {"disk", "square", "cosh"}) {
      const NoLipCertificate c = gen_no_lip(preset_body(name), {kmax, 360, true}).cert;
      rec.expect(c.lower_bounds_increasing(2, kmax), "no-lip-lower-bounds-increasing", name);
      rec.expect(c.products_decreasing(2, kmax), "no-lip-products-decreasing", name);
      if (std::string(name) == "disk" && kmax >= 13)
        for (int k = 12; k < kmax; ++k) {
          const double q = c.rows[k + 1].lower_bound / c.rows[k].lower_bound;
          rec.expect(std::abs(q - 2.0) <= 0.1, "no-lip-ratio", "K ratio " + fmt17(q) + " at k = " + std::to_string(k));
        }
    }
  });

  rec.guarded("no-uc-trend", [&] {
    for (const char* name : {"parabola", "cosh"}) {
      const int km = std::string(name) == "parabola" ? 64 : 32;
      const NoUCCertificate c = gen_no_uc(preset_body(name), {km, 1e-2}).cert;
      rec.expect(c.beta > 0.0 && c.min_level_gap() >= c.beta * (1.0 - 1e-6), "no-uc-level-gaps",
                 std::string(name) + ": min gap " + fmt17(c.min_level_gap()) + " vs beta " + fmt17(c.beta));
      rec.expect(c.monotone_from() < km, "no-uc-gaps-eventually-monotone", name);
      if (km == 64) rec.expect(c.gaps.back() < 0.05, "no-uc-last-gap", "gap_64 = " + fmt17(c.gaps.back()));
    }
  });

  rec.guarded("forcing", [&] {
    std::vector<std::pair<std::string, ForcingCertificate>> certs;
    certs.emplace_back("hypograph", gen_no_qc(preset_body("hypograph")).cert);
    for (const char* name : {"square", "triangle", "half-disk"}) certs.emplace_back(name, gen_non_rotund(preset_body(name)).cert);
    for (const auto& [name, c] : certs) {
      rec.expect(c.all_forcing_meet_c(), "forcing-lines-meet-body", name);
      bool excl = true;
      for (const ForcingLevel& l : c.levels) excl = excl && l.witness_excluded;
      rec.expect(excl, "forcing-witness-excluded", name);
    }
  });

  rec.guarded("usc", [&] {
    const UscResult u = gen_usc_counterexample();
    rec.expect(u.f({0.0, -1.0}) == 0.0 && u.f({0.0, 0.0}) == 1.0, "usc-values", "f(0,-1) or f(0,0) off");
    rec.expect(verify_usc_forcing().origin_forced, "usc-forcing", "a sampled hull misses the origin");
  });

  classifier_cases(rec, {"disk", "parabola", "square", "hypograph"}, seed, SuiteConfig{std::max<std::int64_t>(200, cfg.budget / 10), false});
  quotient_cases(rec, kmax);
  return rec.finish();
}

std::string fail_detail(const SuiteReport& r) {
  std::string out;
  for (const CaseFailure& f : r.failures) out += (out.empty() ? "" : "; ") + f.check + ": " + f.detail;
  return out;
}

CriterionResult finish_criterion(int id, SuiteReport r, std::string ok_detail) {
  CriterionResult c;
  c.id = id;
  c.passed = r.passed();
  c.detail = c.passed ? std::move(ok_detail) : fail_detail(r);
  c.seconds = r.seconds;
  return c;
}

CriterionResult criterion_extension(std::uint64_t seed) {
  Recorder rec("criterion-1", seed);
  std::mt19937_64 rng(seed);
  const Body2 c = preset_body("parabola");
  std::vector<LevelEntry> entries;
  // cuts at v = (k+1)^2 - 1 keep the tangent rays bounding e(B_k) at least a grid cell apart
  for (int k = 0; k <= 10; ++k)
    entries.push_back({static_cast<double>(k), c.clipped({HalfPlane{{0.0, 1.0}, double(k * (k + 2))}})});
  entries.push_back({11.0, c});
  const LevelFamily fam(c, entries);
  const ExtensionResult ext = extend_function(fam);

  double worst = 0.0;
  const Window w{{0.0, 0.0}, 20.0};
  for (int i = 0; i < 100000; ++i) {
    const auto x = sample_in(c, w, rng);
    if (!x) continue;
    worst = std::max(worst, std::abs(ext(*x) - eval_levels(fam, *x)));
  }
  rec.expect(worst == 0.0, "identity", "max |F - f| = " + fmt17(worst));

  const QCReport qc = quasiconvex_check([&](Vec2 p) { return ext(p); }, SampleDomain::box({-20.0, -20.0}, {20.0, 20.0}),
                                        100000, seed, 1e-9);
  rec.expect(qc.passed(), "quasiconvex", std::to_string(qc.violations) + " violations, worst " + fmt17(qc.worst));

  const int n = 1024;
  const Grid g = sample_grid([&](Vec2 p) { return ext(p); }, {-20.0, -20.0}, {20.0, 20.0}, n, n);
  double jump = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (i + 1 < n) jump = std::max(jump, std::abs(g.value(i + 1, j) - g.value(i, j)));
      if (j + 1 < n) jump = std::max(jump, std::abs(g.value(i, j + 1) - g.value(i, j)));
    }
  const double gap = fam.max_level_gap();
  rec.expect(jump <= gap + 1e-9, "grid-jump", "largest jump " + fmt17(jump) + " vs gap " + fmt17(gap));
  SuiteReport r = rec.finish();
  if (r.seconds >= 120.0) r.failures.push_back({"runtime", fmt17(r.seconds) + " s", {}});
  return finish_criterion(1, std::move(r),
                          "max|F-f| = 0, " + std::to_string(qc.triples) + " triples clean, max grid jump " + fmt17(jump));
}

CriterionResult criterion_operator(std::uint64_t seed) {
  Recorder rec("criterion-2", seed);
  std::mt19937_64 rng(seed);
  polygon_cases(rec, rng, seed, 500);
  half_disk_case(rec);
  SuiteReport r = rec.finish();
  return finish_criterion(2, std::move(r), "500 polygon instances and half-disk closed form");
}

CriterionResult criterion_covering(std::uint64_t seed) {
  Recorder rec("criterion-3", seed);
  std::mt19937_64 rng(seed);
  covering_cases(rec, rng, 10000);
  downward_cases(rec, rng, 10000);
  SuiteReport r = rec.finish();
  return finish_criterion(3, std::move(r), "10^4 points covered, 10^4 points excluded downward");
}

CriterionResult criterion_no_lip(std::uint64_t seed) {
  Recorder rec("criterion-4", seed);
  const NoLipCertificate c = gen_no_lip(preset_body("disk")).cert;
  const int last = static_cast<int>(c.rows.size()) - 1;
  rec.expect(last >= 20, "rows", "only " + std::to_string(last) + " rows");
  rec.expect(c.lower_bounds_increasing(2, 20), "K-increasing", "K_k not strictly increasing on 2..20");
  double qlo = kInf, qhi = 0.0;
  for (int k = 12; k < last; ++k) {
    const double q = c.rows[k + 1].lower_bound / c.rows[k].lower_bound;
    qlo = std::min(qlo, q);
    qhi = std::max(qhi, q);
  }
  rec.expect(qlo >= 1.8 && qhi <= 2.2, "K-ratio", "ratio range [" + fmt17(qlo) + ", " + fmt17(qhi) + "]");
  int k0 = 20;
  while (k0 > 0 && c.rows[k0].product < c.rows[k0 - 1].product) --k0;
  rec.expect(k0 <= 2 && c.rows[20].product < 1e-4, "product",
             "decreasing from k = " + std::to_string(k0) + ", product_20 = " + fmt17(c.rows[20].product));
  SuiteReport r = rec.finish();
  const double secs = r.seconds;
  if (secs >= 30.0) r.failures.push_back({"runtime", fmt17(secs) + " s", {}});
  return finish_criterion(4, std::move(r),
                          "K_20 = " + fmt17(c.rows[20].lower_bound) + ", ratios in [" + fmt17(qlo) + ", " + fmt17(qhi) +
                              "], product_20 = " + fmt17(c.rows[20].product) + ", " + fmt17(secs) + " s");
}

CriterionResult criterion_no_uc(std::uint64_t seed) {
  Recorder rec("criterion-5", seed);
  const NoUCCertificate c = gen_no_uc(preset_body("parabola")).cert;
  const double last = c.gaps.back();
  rec.expect(c.gaps.size() == 64 && last < 0.05, "gap-64", "gap_64 = " + fmt17(last));
  rec.expect(c.monotone_from() < 64, "monotone", "no monotone tail");
  rec.expect(c.min_level_gap() >= c.beta * (1.0 - 1e-6) && c.beta >= 0.5, "beta",
             "beta = " + fmt17(c.beta) + ", min gap = " + fmt17(c.min_level_gap()));
  SuiteReport r = rec.finish();
  const double secs = r.seconds;
  if (secs >= 30.0) r.failures.push_back({"runtime", fmt17(secs) + " s", {}});
  return finish_criterion(5, std::move(r),
                          "gap_64 = " + fmt17(last) + ", monotone from k = " + std::to_string(c.monotone_from()) +
                              ", beta = " + fmt17(c.beta) + ", min level gap = " + fmt17(c.min_level_gap()));
}

CriterionResult criterion_classifier(std::uint64_t seed) {
  Recorder rec("criterion-6", seed);
  const std::vector<std::pair<std::string, ExtClass>> want{{"disk", ExtClass::UcExtendable},
                                                          {"parabola", ExtClass::CExtendable},
                                                          {"square", ExtClass::QcExtendable},
                                                          {"hypograph", ExtClass::NotQcExtendable}};
  std::string got;
  for (const auto& [name, cls] : want) {
    const Classification cl = characterize(preset_body(name));
    got += (got.empty() ? "" : ", ") + name + " " + class_name(cl.cls);
    rec.expect(cl.cls == cls, "class", name + " classified " + class_name(cl.cls));
  }
  classifier_cases(rec, {"disk", "parabola", "square", "hypograph"}, seed, SuiteConfig{});
  SuiteReport r = rec.finish();
  return finish_criterion(6, std::move(r), got);
}

CriterionResult criterion_usc(std::uint64_t seed) {
  Recorder rec("criterion-7", seed);
  const UscResult u = gen_usc_counterexample();
  const double f0 = u.f({0.0, 0.0}), fb = u.f({0.0, -1.0});
  rec.expect(fb == 0.0 && f0 == 1.0, "values", "f(0,-1) = " + fmt17(fb) + ", f(0,0) = " + fmt17(f0));
  const UscForcingCheck chk = verify_usc_forcing();
  rec.expect(chk.origin_forced && chk.f_origin > 0.5, "forcing", "origin not forced into a sampled hull");
  SuiteReport r = rec.finish();
  return finish_criterion(7, std::move(r),
                          "f(0,-1) = 0, f(0,0) = 1, origin in all " + std::to_string(chk.per_radius.size()) + " hulls");
}

CriterionResult criterion_planted(std::uint64_t seed) {
  Recorder rec("criterion-8", seed);
  const QCReport r0 = quasiconvex_check([](Vec2 p) { return std::abs(p.x * p.y); },
                                        SampleDomain::box({-1.0, -1.0}, {1.0, 1.0}), 10000, seed);
  rec.expect(r0.witness.has_value() && r0.worst >= 0.2, "planted", "worst violation " + fmt17(r0.worst));
  SuiteReport r = rec.finish();
  return finish_criterion(8, std::move(r),
                          std::to_string(r0.violations) + " violating triples, worst " + fmt17(r0.worst));
}

SuiteReport end_to_end_suite(std::uint64_t seed) {
  Recorder rec("end_to_end", seed);
  for (int id = 1; id <= kCriteria; ++id) {
    const CriterionResult c = run_criterion(id, seed);
    rec.expect(c.passed, "criterion-" + std::to_string(id), c.detail);
  }
  return rec.finish();
}

}  // namespace

SuiteReport extension_property_suite(const Body2& c, std::uint64_t seed, const SuiteConfig& cfg) {
  Recorder rec("extension-properties", seed);
  std::mt19937_64 rng(seed);
  const CutFamily cf = cut_family(c, cut_direction(c, rng), 5, true);
  std::vector<LevelEntry> entries;
  for (std::size_t k = 0; k < cf.bodies.size(); ++k) entries.push_back({cf.levels[k], cf.bodies[k]});
  const LevelFamily fam(c, entries);
  const ExtendOptions opt;
  const ExtensionResult ext = extend_function(fam, opt);
  const Window w0 = probe_window(c);
  const Window w{w0.center, 2.0 * w0.radius};

  for (std::int64_t i = 0; i < cfg.budget; ++i) {
    const auto x = sample_in(c, w, rng, 200);
    if (!x) continue;
    const double a = ext(*x), b = eval_levels(fam, *x);
    rec.expect(a == b, "extension-identity", "F = " + fmt17(a) + " but f = " + fmt17(b), {*x});
  }

  const Vec2 r{w.radius, w.radius};
  const QCReport qc = quasiconvex_check([&](Vec2 p) { return ext(p); }, SampleDomain::box(w.center - r, w.center + r),
                                        cfg.budget, seed);
  std::vector<Vec2> qw;
  if (qc.witness) qw.assign(qc.witness->begin(), qc.witness->end());
  rec.expect(qc.passed(), "extension-quasiconvex", std::to_string(qc.violations) + " violating triples", qw);

  if (ext.grade() == Grade::Continuous) {
    // each extended sublevel sits in the interior of the next one: walk the boundary of e(B_k)
    const Vec2 lo = w.center - r, hi = w.center + r;
    for (std::size_t k = 0; k + 1 < fam.size(); ++k) {
      const ExtendedBody& ek = ext.extended()[k];
      const ExtendedBody& en = ext.extended()[k + 1];
      if (ek.special != ExtendedBody::Special::None || en.special == ExtendedBody::Special::Plane) continue;
      const std::vector<Vec2> poly = halfplane_polygon(ek.halfplanes, lo, hi);
      double worst = kInf;
      Vec2 at;
      for (std::size_t i = 0; i < poly.size(); ++i)
        for (int j = 0; j < 16; ++j) {
          const Vec2 p = lerp(poly[i], poly[(i + 1) % poly.size()], j / 16.0);
          const double edge = std::min({p.x - lo.x, hi.x - p.x, p.y - lo.y, hi.y - p.y});
          if (edge < 1e-9 * w.radius) continue;  // window clip, not a boundary of e(B_k)
          if (en.margin(p) < worst) {
            worst = en.margin(p);
            at = p;
          }
        }
      if (std::isfinite(worst))
        rec.expect(worst > 0.0, "extension-strict-nesting",
                   "boundary of e(B_k) reaches e(B_k+1) boundary, margin " + fmt17(worst), {at});
    }
  }

  for (std::size_t k = 0; k + 1 < fam.size(); ++k) {
    const ExtendedBody& ek = ext.extended()[k];
    const ExtendedBody& en = ext.extended()[k + 1];
    const Body2& bk = *fam.body(k);
    for (std::int64_t i = 0; i < std::max<std::int64_t>(8, cfg.budget / 20); ++i) {
      const Vec2 x = sample_box(w, rng);
      if (!ek.contains(x, 0.0)) continue;
      rec.expect(en.contains(x, 1e-7), "extension-monotone", "point of e(B_k) outside e(B_k+1)", {x});
      if (c.contains(x, 0.0)) continue;
      const auto y = sample_in(c, w, rng, 50);
      if (y && !bk.contains(*y, 0.0))
        rec.expect(segment_meets(bk, x, *y), "segment-crosses-body", "segment misses B", {x, *y});
    }
  }
  return rec.finish();
}

CriterionResult run_criterion(int id, std::uint64_t seed) {
  const auto t0 = Clock::now();
  CriterionResult r;
  try {
    switch (id) {
      case 1: r = criterion_extension(seed); break;
      case 2: r = criterion_operator(seed); break;
      case 3: r = criterion_covering(seed); break;
      case 4: r = criterion_no_lip(seed); break;
      case 5: r = criterion_no_uc(seed); break;
      case 6: r = criterion_classifier(seed); break;
      case 7: r = criterion_usc(seed); break;
      case 8: r = criterion_planted(seed); break;
      default: throw Error("unknown criterion " + std::to_string(id));
    }
  } catch (const Error& e) {
    if (id < 1 || id > kCriteria) throw;
    r = {id, false, std::string("exception: ") + e.what(), 0.0};
  } catch (const std::exception& e) {
    r = {id, false, std::string("exception: ") + e.what(), 0.0};
  }
  r.seconds = seconds_since(t0);
  return r;
}

SuiteReport run_suite(const std::string& name, std::uint64_t seed, const SuiteConfig& cfg) {
  if (name == "geometry") return geometry_suite(seed, cfg);
  if (name == "levelset") return levelset_suite(seed, cfg);
  if (name == "extension") return extension_suite(seed, cfg);
  if (name == "counterexamples") return counterexamples_suite(seed, cfg);
  if (name == "end_to_end") return end_to_end_suite(seed);
  throw Error("unknown suite: " + name);
}

}  // namespace qcext
