#include "qcext/counterexamples.hpp"

#include <algorithm>
#include <cmath>

#include "qcext/extension.hpp"

namespace qcext {

Vec2 Frame::to_frame(Vec2 p) const {
  const double det = cross(e1, e2);
  if (std::abs(det) < 1e-300) throw Error("degenerate frame");
  const Vec2 q = p - origin;
  return {cross(q, e2) / det, cross(e1, q) / det};
}

HalfPlane Frame::halfplane_to_world(Vec2 a, double b) const {
  // a . M^{-1} (p - origin) <= b  with M = [e1 e2]
  const double det = cross(e1, e2);
  if (std::abs(det) < 1e-300) throw Error("degenerate frame");
  const Vec2 w{(a.x * e2.y - a.y * e1.y) / det, (-a.x * e2.x + a.y * e1.x) / det};
  const double len = norm(w);
  if (!(len > 0.0)) throw Error("degenerate half-plane");
  return HalfPlane{w / len, (b + dot(w, origin)) / len};
}

namespace {

Vec2 interior_origin(const Body2& c) {
  if (c.depth({0.0, 0.0}) > 1e-9) return {0.0, 0.0};
  return c.witness();
}

// Minimum of d(., target) over origin + t dir, t in range; convex in t.
double min_distance_on_line(const Body2& target, Vec2 origin, Vec2 dir, Interval range) {
  auto clamp = [&](double t) { return std::clamp(t, range.lo, range.hi); };
  double t0 = 0.0, step = 1.0;
  if (std::isfinite(range.lo) && std::isfinite(range.hi)) {
    t0 = 0.5 * (range.lo + range.hi);
    step = std::max(range.length() / 16.0, 1e-9);
  } else if (std::isfinite(range.lo)) {
    t0 = range.lo;
  } else if (std::isfinite(range.hi)) {
    t0 = range.hi;
  }
  auto phi = [&](double t) { return -target.distance(origin + dir * clamp(t)); };
  const detail::ConcaveMax m = detail::maximize_concave(phi, t0, step);
  if (m.escape != 0) {
    const double edge = m.escape > 0 ? range.hi : range.lo;
    if (std::isfinite(edge)) return target.distance(origin + dir * edge);
    return -m.value;
  }
  return target.distance(origin + dir * clamp(m.t));
}

double support_curvature_radius(const Body2& e, double angle, double h) {
  auto point_at = [&](double a) -> std::optional<Vec2> {
    const Vec2 n = unit_from_angle(a);
    const SupportValue s = e.support(n);
    if (!std::isfinite(s.value) || !s.attained) return std::nullopt;
    return s.point;
  };
  const auto p = point_at(angle - h), q = point_at(angle + h), mid = point_at(angle);
  if (!p || !q || !mid) return -1.0;
  return dist(*p, *q) / (2.0 * h);
}

}  // namespace

Vec2 choose_support_direction(const Body2& e, int scan) {
  if (scan < 8) throw Error("normal scan needs at least 8 directions");
  const double h = kPi / scan;
  int best = -1;
  double best_r = -1.0;
  for (int i = 0; i < scan; ++i) {
    const double r = support_curvature_radius(e, 2.0 * kPi * i / scan, h);
    if (r < 0.0) continue;
    // strictly larger beyond relative noise wins; ties keep the lowest angle
    if (best < 0 || r > best_r * (1.0 + 1e-6) + 1e-15) {
      best = i;
      best_r = r;
    }
  }
  if (best < 0) throw Error("no direction with an attained support");
  return unit_from_angle(2.0 * kPi * best / scan);
}

bool NoLipCertificate::lower_bounds_increasing(int from, int to) const {
  for (int k = from; k < to; ++k)
    if (!(rows.at(k + 1).lower_bound > rows.at(k).lower_bound)) return false;
  return true;
}

bool NoLipCertificate::products_decreasing(int from, int to) const {
  for (int k = from; k < to; ++k)
    if (!(rows.at(k + 1).product < rows.at(k).product)) return false;
  return true;
}

NoLipResult gen_no_lip(const Body2& e, const NoLipOptions& opt) {
  if (opt.kmax < 1) throw Error("kmax must be at least 1");
  NoLipCertificate cert;
  const Vec2 n = choose_support_direction(e, opt.scan);
  const std::vector<Vec2> face = e.face(n);
  if (face.empty()) throw Error("support face not found");
  const Vec2 p0 = face.size() == 1 ? face[0] : lerp(face.front(), face.back(), 0.5);
  const Vec2 m = -n;
  const Vec2 t{m.y, -m.x};
  const Interval inward = e.chord(p0, m);
  const double lambda = std::isfinite(inward.hi) ? std::min(1.0, 0.5 * inward.hi) : 1.0;
  if (!(lambda > 0.0)) throw Error("support point has no inward chord");
  cert.support_normal = n;
  cert.support_point = p0;
  cert.scale = lambda;
  cert.theta = 1.0 / lambda;
  cert.frame = Frame{p0, t * lambda, m * lambda};
  const Frame& fr = cert.frame;

  // lower boundary profile over the tangent line, in frame units
  auto g = [&](double z) {
    const Interval ch = e.chord(fr.to_world({z, 0.0}), m);
    if (ch.empty() || !std::isfinite(ch.lo)) return kInf;
    return std::max(ch.lo, 0.0) / lambda;
  };
  double zmax = 0.0;
  for (int j = 1; j <= 1000; ++j) {
    const double z = j / 1000.0;
    if (g(z) <= 1.0) zmax = z;
  }
  if (!(zmax > 0.0)) throw Error("boundary profile leaves the unit band immediately");
  const double eps = 0.5 * zmax;
  cert.eps = eps;
  for (int j = 0; j <= 64; ++j) {
    const double z = eps * j / 64.0;
    cert.profile.emplace_back(z, g(z));
  }

  const int kmax = opt.kmax;
  std::vector<double> alpha(kmax + 2);
  for (int k = 0; k <= kmax + 1; ++k) alpha[k] = std::ldexp(1.0, -2 * k);
  std::vector<Body2> bodies;
  std::vector<double> levels, gaps;
  for (int k = 0; k <= kmax; ++k) {
    NoLipRow row;
    row.k = k;
    row.z = std::ldexp(eps, -k);
    row.g = g(row.z);
    row.delta = 0.5 * row.g - g(0.5 * row.z);
    row.alpha = alpha[k];
    row.beta = 0.25 * eps * (2.0 - std::ldexp(1.0, 1 - k));
    row.gap = std::ldexp(eps, -(k + 2));
    row.pq = 2.0 * row.delta + alpha[k + 1];
    row.product = std::ldexp(row.pq, k);
    row.lower_bound = cert.theta * eps / (std::ldexp(1.0, k + 3) * row.pq);
    row.line_intercept = alpha[k];
    row.line_slope = (row.g - alpha[k]) / row.z;
    row.p = {row.z, row.g};
    row.q = {row.z, row.g - row.pq};
    row.body = {fr.halfplane_to_world({-1.0, 0.0}, -0.75 * row.z),
                fr.halfplane_to_world({row.line_slope, -1.0}, -alpha[k])};
    bodies.push_back(e.clipped(row.body));
    levels.push_back(lambda * row.beta);
    gaps.push_back(lambda * row.gap);
    cert.rows.push_back(std::move(row));
  }
  StaircaseOptions so;
  so.check_gaps = opt.check_gaps;
  so.window = e.bounded() ? e.default_window(4.0) : Window{p0, 8.0 * lambda};
  const QCFunction world = staircase_qc(e, std::move(bodies), std::move(levels), std::move(gaps), so);
  QCFunction f(e, [world, lambda](Vec2 x) { return world(x) / lambda; }, "no-lip");
  f.lipschitz = 1.0 / lambda;
  return {std::move(f), std::move(cert)};
}

double NoUCCertificate::min_level_gap() const {
  double best = kInf;
  for (std::size_t i = 0; i + 1 < alphas.size(); ++i) best = std::min(best, alphas[i + 1] - alphas[i]);
  return best;
}

int NoUCCertificate::monotone_from() const {
  int k = static_cast<int>(gaps.size()) - 1;
  while (k > 0 && gaps[k - 1] >= gaps[k]) --k;
  return k + 1;  // gap_k uses 1-based k
}

NoUCResult gen_no_uc(const Body2& c, const NoUCOptions& opt) {
  if (opt.kmax < 1) throw Error("kmax must be at least 1");
  if (c.bounded()) throw Error("hypothesis failed: body is bounded");
  if (!is_rotund(c)) throw Error("hypothesis failed: body is not rotund");
  if (find_asymptotic_direction(c).found) throw Error("hypothesis failed: body has an asymptotic direction");

  NoUCCertificate cert;
  const Vec2 o = interior_origin(c);
  const Cone2& rec = c.recession_cone();
  Vec2 v = rec.kind == Cone2::Kind::Ray ? rec.lo : normalized(rec.lo + rec.hi);
  const Interval ch = c.chord(o, v);
  if (!std::isfinite(ch.lo)) throw Error("hypothesis failed: recession line inside the body");
  const Vec2 c0 = o + v * ch.lo;
  const Vec2 h = -c.supporting_normals(c0).first;
  if (!(dot(h, v) > 0.0)) throw Error("functional does not grow along the recession direction");
  v = v / dot(h, v);
  const Vec2 u = -perp(h);  // clockwise side of h
  cert.origin = o;
  cert.h = h;
  cert.v = v;
  cert.u = u;
  cert.c0 = c0;
  cert.m = dot(h, c0 - o);

  // branch point on the level line {h(. - o) = t} in direction u
  auto branch = [&](double t) {
    const Vec2 base = o + h * t;
    const Interval seg = c.chord(base, u);
    if (seg.empty() || !std::isfinite(seg.hi)) throw Error("level line leaves the body unexpectedly");
    return base + u * seg.hi;
  };
  const int count = 2 * opt.kmax + 1;
  cert.points.push_back(branch(0.0));
  cert.alphas.push_back(0.0);
  for (int n = 1; n < count; ++n) {
    const Vec2 prev = cert.points.back();
    const double a = cert.alphas.back();
    double lo = a, hi = a + 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (dist(branch(mid), prev) < 1.0) lo = mid;
      else hi = mid;
    }
    const double t = 0.5 * (lo + hi);
    cert.points.push_back(branch(t));
    cert.alphas.push_back(dot(h, cert.points.back() - o));
  }

  // sampled bi-Lipschitz ratio of the branch against h
  double beta = kInf;
  const double top = cert.alphas.back();
  Vec2 prev = branch(0.0);
  for (double t = opt.beta_step; t <= top + 0.5 * opt.beta_step; t += opt.beta_step) {
    const Vec2 cur = branch(t);
    beta = std::min(beta, opt.beta_step / dist(cur, prev));
    prev = cur;
  }
  for (std::size_t i = 0; i + 1 < cert.points.size(); ++i)
    beta = std::min(beta, (cert.alphas[i + 1] - cert.alphas[i]) / dist(cert.points[i + 1], cert.points[i]));
  cert.beta = beta;

  for (std::size_t i = 0; i + 1 < cert.points.size(); ++i) {
    HalfPlane hp = HalfPlane::through(normalized(perp(cert.points[i + 1] - cert.points[i])), cert.points[i]);
    if (!hp.contains(o)) hp = HalfPlane{-hp.normal, -hp.offset};
    cert.halfplanes.push_back(hp);
  }
  for (int k = 1; k <= opt.kmax; ++k) {
    const Vec2 d = cert.points[2 * k] + cert.points[2 * k - 2] - cert.points[2 * k - 1] * 2.0;
    cert.gaps.push_back(norm(d));
  }

  TildeData td{c, o, h, cert.points, cert.alphas, cert.halfplanes};
  QCFunction f = tilde_f(std::move(td));
  return {std::move(f), std::move(cert)};
}

bool ForcingCertificate::all_forcing_meet_c() const {
  for (const ForcingLevel& l : levels)
    if (!(l.chord_length > 0.0)) return false;
  return true;
}

namespace {

// Frame line s = 1 + eps - (eps / b) t as a point and direction in world coordinates.
std::pair<Vec2, Vec2> wedge_line(const Frame& fr, double eps, double b) {
  const Vec2 p = fr.to_world({0.0, 1.0 + eps});
  const Vec2 q = fr.to_world({b, 1.0});
  return {p, normalized(q - p)};
}

// Sampled length of the part of a line inside C (chord, checked at interior samples).
double sampled_chord_length(const Body2& c, Vec2 p, Vec2 d) {
  const Interval ch = c.chord(p, d);
  if (ch.empty()) return 0.0;
  const double lo = std::isfinite(ch.lo) ? ch.lo : ch.hi - 1.0;
  const double hi = std::isfinite(ch.hi) ? ch.hi : lo + 1.0;
  if (!(hi > lo)) return 0.0;
  int inside = 0;
  constexpr int kSamples = 64;
  for (int i = 1; i < kSamples; ++i)
    if (c.depth(p + d * (lo + (hi - lo) * i / kSamples)) > 0.0) ++inside;
  if (inside == 0) return 0.0;
  return ch.length();
}

ForcingResult build_forcing(const Body2& c, ForcingCertificate cert, const std::vector<double>& eps,
                            const std::vector<double>& b, bool per_level_witness, const ForcingOptions& opt) {
  const Frame& fr = cert.frame;
  const std::size_t count = eps.size();
  std::vector<Body2> bodies;
  std::vector<HalfPlane> forcing;
  for (std::size_t i = 0; i < count; ++i) {
    forcing.push_back(fr.halfplane_to_world({eps[i] / b[i], 1.0}, 1.0 + eps[i]));
    bodies.push_back(c.clipped({forcing.back()}));
  }
  // exact gaps: distance to D_n is convex along the chord of the next line
  std::vector<double> gaps, levels{0.0};
  for (std::size_t i = 0; i + 1 < count; ++i) {
    const auto [p, d] = wedge_line(fr, eps[i + 1], b[i + 1]);
    const Interval ch = c.chord(p, d);
    if (ch.empty()) throw Error("forcing line misses the body");
    const double gap = min_distance_on_line(bodies[i], p, d, ch) * (1.0 - 1e-9);
    if (!(gap > 0.0)) throw Error("consecutive wedge bodies touch inside C");
    gaps.push_back(gap);
    levels.push_back(levels.back() + gap);
  }
  for (std::size_t i = 0; i < count; ++i) {
    ForcingLevel l;
    l.n = static_cast<int>(i) + 1;
    l.eps = eps[i];
    l.b = b[i];
    l.alpha = levels[i];
    l.gap = i + 1 < count ? gaps[i] : 0.0;
    l.forcing = forcing[i];
    const auto [p, d] = wedge_line(fr, eps[i], b[i]);
    l.chord_length = sampled_chord_length(c, p, d);
    // frame point (0, 1 + eps_w) stays outside every open wedge half-plane from this level on
    const double ew = per_level_witness ? eps[i] : eps[0];
    bool excluded = true;
    for (std::size_t j = i; j < count; ++j)
      if (1.0 + ew < 1.0 + eps[j]) excluded = false;
    l.witness_excluded = excluded;
    cert.levels.push_back(l);
  }
  cert.witness = fr.to_world({0.0, 1.0 + eps[0]});
  cert.alpha_first = levels.front();
  cert.alpha_last = levels.back();
  StaircaseOptions so;
  so.check_gaps = opt.check_gaps;
  Vec2 far = fr.to_world({b.back(), 1.0});
  so.window = Window{fr.origin, 2.0 * dist(far, fr.origin) + 4.0 * (norm(fr.e1) + norm(fr.e2))};
  QCFunction f = staircase_qc(c, std::move(bodies), levels, gaps, so);
  return {std::move(f), std::move(cert)};
}

}  // namespace

ForcingResult gen_no_qc(const Body2& c, const ForcingOptions& opt) {
  if (opt.kmax < 2) throw Error("kmax must be at least 2");
  if (c.bounded()) throw Error("hypothesis failed: body is bounded");
  const AsymptoticWitness aw = find_asymptotic_direction(c);
  if (!aw.found || !aw.x0) throw Error("hypothesis failed: no asymptotic direction");
  const Vec2 v = normalized(aw.direction);
  const Vec2 o = interior_origin(c);
  // supporting line through x0 parallel to v
  Vec2 n = perp(v);
  if (dot(n, *aw.x0 - o) < 0.0) n = -n;
  const double height = dot(n, *aw.x0 - o);
  if (!(height > 0.0)) throw Error("asymptote passes through the interior point");

  ForcingCertificate cert;
  cert.kind = "no-qc";
  cert.frame = Frame{o, v, n * height};
  std::vector<double> eps, b;
  for (int i = 1; i <= opt.kmax; ++i) {
    eps.push_back(std::ldexp(1.0, -i));
    if (i == 1) {
      b.push_back(1.0);
      continue;
    }
    // double until (b, 0) leaves 2 B_{i-1}: 0 >= 1 - (eps/b_prev)(b/2 - b_prev)
    const double ep = eps[i - 2], bp = b.back();
    double nb = bp;
    while (1.0 - ep / bp * (0.5 * nb - bp) > 0.0) nb *= 2.0;
    b.push_back(nb);
  }
  return build_forcing(c, std::move(cert), eps, b, false, opt);
}

ForcingResult gen_non_rotund(const Body2& c, const ForcingOptions& opt) {
  if (opt.kmax < 2) throw Error("kmax must be at least 2");
  const auto seg = c.longest_flat_piece(c.default_window(16.0));
  if (!seg || dist(seg->first, seg->second) < 1e-6) throw Error("hypothesis failed: body is rotund");
  const Vec2 o = interior_origin(c);
  const auto [a, d] = *seg;
  ForcingCertificate cert;
  cert.kind = "non-rotund";
  cert.frame = Frame{o, (d - a) * 0.5, a - o};
  std::vector<double> eps, b;
  for (int i = 1; i <= opt.kmax; ++i) {
    eps.push_back(std::ldexp(1.0, -i));
    b.push_back(2.0 - std::ldexp(1.0, 1 - i));
  }
  ForcingResult r = build_forcing(c, std::move(cert), eps, b, true, opt);
  r.cert.anchor = a;
  r.cert.f_at_anchor = r.f(a);
  if (r.cert.f_at_anchor > r.cert.alpha_first + 1e-12) throw Error("segment endpoint escapes the first level");
  return r;
}

UscResult gen_usc_counterexample() {
  const Body2 dom = Body2::rectangle({0.0, -1.0}, {1.0, 1.0});
  auto eval = [](Vec2 p) {
    if (p.x < 0.0 || p.x > 1.0 || p.y < -1.0 || p.y > 1.0) throw Error("point outside the rectangle " + to_string(p));
    if (p.y < 0.0) return 0.0;
    if (p.x > 0.0 && p.x < 1.0) return p.y;
    return 1.0;
  };
  QCFunction f(dom, eval, "usc-example");
  UscRecord rec{dom, f({0.0, -1.0}), f({0.0, 0.0})};
  return {std::move(f), std::move(rec)};
}

LevelFamily usc_family(int m) {
  if (m < 1) throw Error("usc family needs m >= 1");
  const Body2 c = Body2::rectangle({0.0, -1.0}, {1.0, 1.0});
  std::vector<LevelEntry> entries;
  for (int j = 0; j <= m; ++j) {
    const double y = static_cast<double>(j) / m;
    entries.push_back({y, Body2::rectangle({0.0, -1.0}, {1.0, y})});
  }
  return LevelFamily(c, std::move(entries));
}

UscForcingCheck verify_usc_forcing(const std::vector<double>& radii) {
  const UscResult usc = gen_usc_counterexample();
  UscForcingCheck out;
  out.f_origin = usc.record.f_origin;
  for (double r : radii) {
    std::vector<Vec2> pts;
    const Vec2 bottom{0.0, -1.0};
    for (int i = 0; i < 64; ++i) pts.push_back(bottom + unit_from_angle(2.0 * kPi * i / 64) * r);
    // the open segment (0,1) x {1/3}, sampled down toward its left end
    for (int j = 1; j <= 15; ++j) pts.push_back({std::pow(10.0, -j), 1.0 / 3.0});
    pts.push_back({0.5, 1.0 / 3.0});
    pts.push_back({1.0 - 1e-9, 1.0 / 3.0});
    const bool inside = polygon_contains(convex_hull(pts), {0.0, 0.0});
    out.per_radius.emplace_back(r, inside);
    out.origin_forced = out.origin_forced && inside;
  }
  return out;
}

const char* class_name(ExtClass c) {
  switch (c) {
    case ExtClass::Trivial: return "TRIVIAL";
    case ExtClass::UcExtendable: return "UC_EXTENDABLE";
    case ExtClass::CExtendable: return "C_EXTENDABLE";
    case ExtClass::QcExtendable: return "QC_EXTENDABLE";
    case ExtClass::NotQcExtendable: return "NOT_QC_EXTENDABLE";
  }
  return "?";
}

Classification characterize(const Body2& c) {
  Classification out;
  // a body with interior that is not the plane is neither affine nor of dimension <= 1
  out.affine = false;
  out.dim_le_1 = false;
  out.bounded = c.bounded();
  const AsymptoticWitness aw = find_asymptotic_direction(c);
  out.has_asymptotic_direction = aw.found;
  if (aw.found) out.asymptotic = aw;
  const double eps = 0.5 * c.witness_radius();
  out.delta_min = min_sampled_delta(c, eps, c.default_window(4.0), 64);
  out.rotund = is_rotund(c) && out.delta_min > 0.0;

  if (out.has_asymptotic_direction) out.cls = ExtClass::NotQcExtendable;
  else if (!out.rotund) out.cls = ExtClass::QcExtendable;
  else if (out.bounded) out.cls = ExtClass::UcExtendable;
  else out.cls = ExtClass::CExtendable;

  auto verdict = [&](const char* grade, bool granted, const char* gen) {
    out.grades.push_back({grade, granted, granted ? "" : gen});
  };
  switch (out.cls) {
    case ExtClass::NotQcExtendable:
      verdict("quasiconvex", false, "gen_no_qc");
      verdict("continuous", false, "gen_no_qc");
      verdict("uniformly-continuous", false, "gen_no_qc");
      break;
    case ExtClass::QcExtendable:
      verdict("quasiconvex", true, "");
      verdict("continuous", false, "gen_non_rotund");
      verdict("uniformly-continuous", false, "gen_non_rotund");
      break;
    case ExtClass::CExtendable:
      verdict("quasiconvex", true, "");
      verdict("continuous", true, "");
      verdict("uniformly-continuous", false, "gen_no_uc");
      break;
    default:
      verdict("quasiconvex", true, "");
      verdict("continuous", true, "");
      verdict("uniformly-continuous", true, "");
      break;
  }
  verdict("lipschitz", false, "gen_no_lip");
  return out;
}

}  // namespace qcext
