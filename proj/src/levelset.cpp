#include "qcext/levelset.hpp"

#include <algorithm>
#include <cmath>

namespace qcext {

LevelFamily::LevelFamily(Body2 ambient, std::vector<LevelEntry> entries, double sentinel)
    : ambient_(std::move(ambient)), entries_(std::move(entries)), sentinel_(sentinel) {
  if (entries_.empty()) throw Error("level family needs at least one entry");
  for (std::size_t k = 0; k + 1 < entries_.size(); ++k)
    if (!(entries_[k].level < entries_[k + 1].level)) throw Error("levels must be strictly increasing");
}

double LevelFamily::max_level_gap() const {
  double g = 0.0;
  for (std::size_t k = 0; k + 1 < entries_.size(); ++k) g = std::max(g, entries_[k + 1].level - entries_[k].level);
  return g;
}

std::size_t LevelFamily::first_containing(Vec2 x) const {
  // Nested bodies: membership is monotone in k.
  std::size_t lo = 0, hi = entries_.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const auto& b = entries_[mid].body;
    if (b && b->contains(x, 0.0)) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

NestingReport check_nesting(const LevelFamily& fam, const Window& w, int samples, double tol) {
  NestingReport r;
  for (std::size_t k = 0; k + 1 < fam.size(); ++k) {
    const auto& a = fam.body(k);
    const auto& b = fam.body(k + 1);
    if (!a) continue;
    if (!b) {
      r.nested = r.strictly_nested = false;
      r.witness = a->witness();
      return r;
    }
    for (const BoundarySample& s : a->boundary(w).sample(samples)) {
      const double d = b->depth(s.point);
      if (d < -tol * (1.0 + norm(s.point))) {
        r.nested = false;
        r.witness = s.point;
      }
      // margin only means something away from the ambient boundary
      if (fam.ambient().depth(s.point) <= tol) continue;
      if (d < r.min_margin) r.min_margin = d;
      if (d <= tol) r.strictly_nested = false;
    }
  }
  if (!r.nested) r.strictly_nested = false;
  return r;
}

double eval_levels(const LevelFamily& fam, Vec2 x, double tol) {
  if (!fam.ambient().contains(x, tol)) throw Error("point " + to_string(x) + " lies outside the ambient body");
  const std::size_t k = fam.first_containing(x);
  return k < fam.size() ? fam.level(k) : fam.sentinel();
}

double ModulusTable::at(double t) const {
  double v = 0.0;
  for (const auto& [s, w] : rows) {
    if (s > t) break;
    v = w;
  }
  return v;
}

QCFunction::QCFunction(std::optional<Body2> domain, Eval eval, std::string kind)
    : domain_(std::move(domain)), eval_(std::move(eval)), kind_(std::move(kind)) {}

QCFunction staircase_qc(const Body2& ambient, std::vector<Body2> bodies, std::vector<double> levels,
                        std::vector<double> gaps, const StaircaseOptions& opt) {
  const std::size_t n = bodies.size();
  if (n == 0) throw Error("staircase needs at least one body");
  if (levels.size() != n) throw Error("staircase needs one level per body");
  if (gaps.size() != n && gaps.size() + 1 != n) throw Error("staircase needs one gap per body (or one fewer)");
  for (double s : gaps)
    if (!(s > 0.0)) throw Error("staircase gaps must be positive");
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double diff = levels[k + 1] - levels[k];
    if (std::abs(diff - gaps[k]) > 1e-9 * std::max(1.0, std::abs(gaps[k])))
      throw Error("level increments must equal the gaps (k = " + std::to_string(k) + ")");
  }
  if (opt.check_gaps) {
    const Window w = opt.window ? *opt.window : ambient.default_window(1024.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      for (const BoundarySample& s : bodies[k + 1].boundary(w).sample(opt.samples)) {
        if (ambient.depth(s.point) <= 1e-12 * (1.0 + norm(s.point))) continue;
        const double d = bodies[k].distance(s.point);
        if (d < gaps[k] * (1.0 - 1e-6) - 1e-15)
          throw Error("gap violation at level " + std::to_string(k) + ": sampled distance " + std::to_string(d) +
                      " < gap " + std::to_string(gaps[k]) + " near " + to_string(s.point));
      }
    }
  }
  const bool residual_ramp = gaps.size() == n;
  auto eval = [ambient, bodies = std::move(bodies), levels = std::move(levels), gaps = std::move(gaps),
               residual_ramp](Vec2 x) {
    const std::size_t m = bodies.size();
    // boundary points computed in floating point may sit an ulp outside
    const double slack = 1e-12 * (1.0 + norm(x));
    std::size_t lo = 0, hi = m;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (bodies[mid].contains(x, slack)) hi = mid;
      else lo = mid + 1;
    }
    if (lo == 0) return levels[0];
    if (lo == m && !residual_ramp) return levels[m - 1];
    const std::size_t k = lo - 1;  // x lies outside D_k
    return levels[k] + std::min(bodies[k].distance(x), gaps[k]);
  };
  QCFunction f(ambient, eval, "staircase");
  f.lipschitz = 1.0;
  return f;
}

double tilde_h(const TildeData& d, Vec2 y) { return dot(d.h, y - d.origin); }

QCFunction tilde_f(TildeData data) {
  const std::size_t n = data.alphas.size();
  if (n < 3 || data.points.size() != n) throw Error("tilde_f needs at least three points with matching levels");
  if (std::abs(data.alphas[0]) > 1e-9) throw Error("tilde_f expects alpha_1 = 0");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(data.alphas[i + 1] > data.alphas[i])) throw Error("tilde_f levels must increase");
  if (data.halfplanes.size() < n - 1) throw Error("tilde_f needs the half-planes H_k up to the last level");
  for (const HalfPlane& hp : data.halfplanes)
    if (!hp.contains(data.origin)) throw Error("each H_k must contain the origin");
  const Body2 dom = data.domain;
  auto eval = [d = std::move(data)](Vec2 y) {
    const double hy = tilde_h(d, y);
    if (hy < 0.0) return 0.0;
    const auto& a = d.alphas;  // a[i] holds alpha_{i+1}
    const std::size_t n = a.size();
    // Pick the block [alpha_{2k-1}, alpha_{2k+1}) containing h(y); indices 2k-1 -> i = 2k-2.
    std::size_t i = 0;
    while (i + 2 < n && hy >= a[i + 2]) i += 2;
    if (i + 2 >= n) {
      // past the computed range: continue with slope one beyond the last full block
      const double last = a[i];
      return last + (hy - last);
    }
    if (hy < a[i + 1]) return a[i] + (a[i + 2] - a[i]) / (a[i + 1] - a[i]) * (hy - a[i]);
    // alpha_{2k} <= h < alpha_{2k+1}: H_{2k} has index 2k-1 = i+1
    const HalfPlane& hp = d.halfplanes.at(i + 1);
    const double out = -hp.slack(y);
    return a[i + 2] + std::max(out, 0.0);
  };
  return QCFunction(dom, eval, "tilde_f");
}

QCFunction compose_projection(const QCFunction& f, std::array<double, 4> p, std::optional<Body2> domain) {
  Affine2 map;
  map.m = p;
  auto eval = [f, map](Vec2 x) { return f(map.linear(x)); };
  QCFunction out(std::move(domain), eval, "composed");
  if (f.lipschitz) {
    // operator norm of the 2x2 matrix
    const double a = p[0], b = p[1], c = p[2], d = p[3];
    const double s = a * a + b * b + c * c + d * d;
    const double det = a * d - b * c;
    const double op = std::sqrt(0.5 * (s + std::sqrt(std::max(0.0, s * s - 4.0 * det * det))));
    out.lipschitz = *f.lipschitz * op;
  }
  return out;
}

std::function<double(double)> extend_line_constant(std::function<double(double)> f, double a, double b) {
  if (!(a <= b)) throw Error("interval must be nonempty");
  return [f = std::move(f), a, b](double t) { return f(std::clamp(t, a, b)); };
}

QCFunction mcshane_extend(const QCFunction& f, double lipschitz, const McShaneOptions& opt) {
  if (!f.domain()) throw Error("McShane extension needs a domain body");
  const Body2 c = *f.domain();
  const Window w = opt.window ? *opt.window : c.default_window(16.0);
  std::vector<std::pair<Vec2, double>> samples;
  for (const BoundarySample& s : c.boundary(w).sample(opt.boundary_samples)) samples.push_back({s.point, f(s.point)});
  for (int i = 0; i <= opt.grid; ++i) {
    for (int j = 0; j <= opt.grid; ++j) {
      const Vec2 p = w.center + Vec2{(2.0 * i / opt.grid - 1.0) * w.radius, (2.0 * j / opt.grid - 1.0) * w.radius};
      if (c.contains(p, 0.0)) samples.push_back({p, f(p)});
    }
  }
  const double L = lipschitz;
  auto eval = [f, c, L, samples = std::move(samples), scale = w.radius](Vec2 x) {
    auto cost = [&](Vec2 u) { return f(u) + L * dist(x, u); };
    Vec2 best = samples.front().first;
    double bv = kInf;
    for (const auto& [u, fu] : samples) {
      const double v = fu + L * dist(x, u);
      if (v < bv) {
        bv = v;
        best = u;
      }
    }
    if (c.contains(x, 0.0)) {
      const double v = f(x);
      if (v <= bv) return v;
    }
    // pattern search over C
    double step = scale / 32.0;
    while (step > 1e-10 * (1.0 + scale)) {
      bool moved = false;
      for (Vec2 d : {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}}) {
        const Vec2 u = c.project(best + d * step).point;
        const double v = cost(u);
        if (v < bv) {
          bv = v;
          best = u;
          moved = true;
        }
      }
      if (!moved) step *= 0.5;
    }
    return bv;
  };
  QCFunction out(std::nullopt, eval, "mcshane");
  out.lipschitz = L;
  return out;
}

Vec2 SampleDomain::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> ux(lo.x, hi.x), uy(lo.y, hi.y);
  for (int i = 0; i < 100000; ++i) {
    const Vec2 p{ux(rng), uy(rng)};
    if (!body || body->contains(p, 0.0)) return p;
  }
  throw Error("sampling domain has negligible area");
}

QCReport quasiconvex_check(const std::function<double(Vec2)>& f, const SampleDomain& dom, std::int64_t n_triples,
                           std::uint64_t seed, double tol) {
  if (n_triples < 1) throw Error("n_triples must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lam(0.0, 1.0);
  QCReport r;
  r.triples = n_triples;
  auto violation = [&](Vec2 x, Vec2 y, double l) {
    const Vec2 z = x * l + y * (1.0 - l);
    return f(z) - std::max(f(x), f(y));
  };
  Vec2 bx, by;
  double bl = 0.5;
  for (std::int64_t i = 0; i < n_triples; ++i) {
    const Vec2 x = dom.sample(rng), y = dom.sample(rng);
    const double l = lam(rng);
    const double v = violation(x, y, l);
    if (v > tol) {
      ++r.violations;
      if (v > r.worst) {
        r.worst = v;
        bx = x;
        by = y;
        bl = l;
      }
    }
  }
  if (r.violations > 0) {
    // hill-climb the worst triple inside the domain
    auto inside = [&](Vec2 p) {
      return p.x >= dom.lo.x && p.x <= dom.hi.x && p.y >= dom.lo.y && p.y <= dom.hi.y &&
             (!dom.body || dom.body->contains(p, 0.0));
    };
    double step = 0.05 * std::max(dom.hi.x - dom.lo.x, dom.hi.y - dom.lo.y);
    while (step > 1e-9) {
      bool moved = false;
      for (int which = 0; which < 3; ++which) {
        for (Vec2 d : {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}}) {
          Vec2 x = bx, y = by;
          double l = bl;
          if (which == 0) x = x + d * step;
          else if (which == 1) y = y + d * step;
          else l = std::clamp(l + d.x * step, 1e-6, 1.0 - 1e-6);
          if (!inside(x) || !inside(y)) continue;
          const double v = violation(x, y, l);
          if (v > r.worst) {
            r.worst = v;
            bx = x;
            by = y;
            bl = l;
            moved = true;
          }
        }
      }
      if (!moved) step *= 0.5;
    }
    r.witness = std::array<Vec2, 3>{bx, by, bx * bl + by * (1.0 - bl)};
  }
  return r;
}

ModulusTable modulus_estimate(const std::function<double(Vec2)>& f, const SampleDomain& dom, std::int64_t pairs,
                              const std::vector<double>& grid, std::uint64_t seed) {
  if (pairs < 1) throw Error("pair_samples must be positive");
  if (grid.empty()) throw Error("modulus grid is empty");
  std::vector<double> g = grid;
  std::sort(g.begin(), g.end());
  std::vector<double> w(g.size(), 0.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double tmax = g.back();
  for (std::int64_t i = 0; i < pairs; ++i) {
    const Vec2 x = dom.sample(rng);
    const Vec2 y = x + unit_from_angle(2.0 * kPi * unit(rng)) * (tmax * unit(rng));
    if (dom.body && !dom.body->contains(y, 0.0)) continue;
    const double t = dist(x, y);
    const auto it = std::lower_bound(g.begin(), g.end(), t);
    if (it == g.end()) continue;
    const std::size_t k = static_cast<std::size_t>(it - g.begin());
    w[k] = std::max(w[k], std::abs(f(x) - f(y)));
  }
  ModulusTable table;
  double run = 0.0;
  table.rows.push_back({0.0, 0.0});
  for (std::size_t k = 0; k < g.size(); ++k) {
    run = std::max(run, w[k]);
    if (g[k] > 0.0) table.rows.push_back({g[k], run});
  }
  return table;
}

double lipschitz_estimate(const std::function<double(Vec2)>& f, const SampleDomain& dom, std::int64_t pairs,
                          std::uint64_t seed) {
  if (pairs < 1) throw Error("pair_samples must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double span = std::max(dom.hi.x - dom.lo.x, dom.hi.y - dom.lo.y);
  double best = 0.0;
  for (std::int64_t i = 0; i < pairs; ++i) {
    const Vec2 x = dom.sample(rng);
    const double r = span * std::pow(10.0, -4.0 * unit(rng));
    const Vec2 y = x + unit_from_angle(2.0 * kPi * unit(rng)) * r;
    if (dom.body && !dom.body->contains(y, 0.0)) continue;
    best = std::max(best, std::abs(f(x) - f(y)) / dist(x, y));
  }
  return best;
}

}  // namespace qcext
