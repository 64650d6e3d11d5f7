#include "qcext/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qcext/geometry.hpp"

namespace qcext {

Json vec_json(Vec2 p) { return Json::array({p.x, p.y}); }

Vec2 vec_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error("expected a point [x, y], got " + j.dump());
  return {j[0].get<double>(), j[1].get<double>()};
}

Json halfplane_json(const HalfPlane& h) { return {{"normal", vec_json(h.normal)}, {"offset", h.offset}}; }

HalfPlane halfplane_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("normal") || !j.contains("offset") || !j["offset"].is_number())
    throw Error("half-plane needs \"normal\" and \"offset\": " + j.dump());
  const Vec2 n = vec_from_json(j["normal"]);
  if (!(norm(n) > 0.0)) throw Error("half-plane normal must be nonzero");
  return HalfPlane{n, j["offset"].get<double>()};
}

namespace {

Json transform_json(const Affine2& t) {
  return Json::array({Json::array({t.m[0], t.m[1], t.shift.x}), Json::array({t.m[2], t.m[3], t.shift.y})});
}

Affine2 transform_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || j[0].size() != 3 || j[1].size() != 3)
    throw Error("transform must be [[m11,m12,tx],[m21,m22,ty]]");
  Affine2 t;
  t.m = {j[0][0].get<double>(), j[0][1].get<double>(), j[1][0].get<double>(), j[1][1].get<double>()};
  t.shift = {j[0][2].get<double>(), j[1][2].get<double>()};
  return t;
}

Json profile_params(const Profile& p) {
  if (p.kind() == Profile::Kind::CustomPoly) return {{"coeffs", p.coeffs()}};
  Json j = Json::object();
  for (const auto& [k, v] : p.params()) j[k] = v;
  return j;
}

double param(const Json& params, const char* key, double fallback) {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_number()) throw Error(std::string("profile parameter ") + key + " must be a number");
  return params[key].get<double>();
}

Profile profile_from_json(const std::string& name, const Json& params) {
  if (name == "parabola") return Profile::parabola(param(params, "a", 1.0), param(params, "c", -1.0));
  if (name == "exp_hypograph") return Profile::exp_hypograph(param(params, "scale", 1.0), param(params, "shift", -1.0));
  if (name == "cosh") return Profile::cosh(param(params, "a", 1.0), param(params, "c", -2.0));
  if (name == "custom_poly") {
    if (!params.contains("coeffs")) throw Error("custom_poly needs \"coeffs\"");
    return Profile::custom_poly(params["coeffs"].get<std::vector<double>>());
  }
  throw Error("unknown profile \"" + name + "\"");
}

std::vector<HalfPlane> clips_from(const Json& j) {
  std::vector<HalfPlane> out;
  if (j.contains("clip"))
    for (const Json& h : j["clip"]) out.push_back(halfplane_from_json(h));
  return out;
}

}  // namespace

Json body_to_json(const Body2& b) {
  if (b.chain_vertices()) {
    Json j{{"kind", "polychain"}};
    Json verts = Json::array();
    for (Vec2 v : *b.chain_vertices()) verts.push_back(vec_json(v));
    j["vertices"] = verts;
    if (b.chain_rays()) j["rays"] = Json::array({vec_json((*b.chain_rays())[0]), vec_json((*b.chain_rays())[1])});
    return j;
  }
  Json clips = Json::array();
  for (const HalfPlane& h : b.clips()) clips.push_back(halfplane_json(h));
  if (const auto* d = std::get_if<Disk>(&b.base())) {
    Json j{{"kind", "disk"}, {"center", vec_json(d->center)}, {"radius", d->radius}};
    if (!clips.empty()) j["clip"] = clips;
    return j;
  }
  if (const auto* e = std::get_if<Epigraph>(&b.base())) {
    Json j{{"kind", "epigraph"},
           {"profile", e->profile.name()},
           {"params", profile_params(e->profile)},
           {"transform", transform_json(e->transform)}};
    if (!clips.empty()) j["clip"] = clips;
    return j;
  }
  return {{"kind", "halfplanes"}, {"items", clips}};
}

Body2 body_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) throw Error("body JSON needs a string \"kind\"");
  const std::string kind = j["kind"];
  try {
    if (kind == "halfplanes") {
      if (!j.contains("items")) throw Error("halfplanes body needs \"items\"");
      std::vector<HalfPlane> hs;
      for (const Json& h : j["items"]) hs.push_back(halfplane_from_json(h));
      return Body2::halfplanes(std::move(hs));
    }
    if (kind == "polychain") {
      if (!j.contains("vertices")) throw Error("polychain body needs \"vertices\"");
      std::vector<Vec2> vs;
      for (const Json& v : j["vertices"]) vs.push_back(vec_from_json(v));
      std::optional<std::array<Vec2, 2>> rays;
      if (j.contains("rays") && !j["rays"].is_null()) {
        if (j["rays"].size() != 2) throw Error("polychain \"rays\" must hold two directions");
        rays = std::array<Vec2, 2>{vec_from_json(j["rays"][0]), vec_from_json(j["rays"][1])};
      }
      Body2 b = Body2::polychain(std::move(vs), rays);
      const auto extra = clips_from(j);
      return extra.empty() ? b : b.clipped(extra);
    }
    if (kind == "disk") {
      const Vec2 c = j.contains("center") ? vec_from_json(j["center"]) : Vec2{};
      const double r = j.value("radius", 1.0);
      Body2 b = Body2::disk(c, r);
      const auto extra = clips_from(j);
      return extra.empty() ? b : b.clipped(extra);
    }
    if (kind == "epigraph") {
      const std::string name = j.value("profile", std::string("parabola"));
      const Json params = j.contains("params") ? j["params"] : Json::object();
      const Affine2 t = j.contains("transform") ? transform_from_json(j["transform"]) : Affine2::identity();
      Body2 b = Body2::epigraph(profile_from_json(name, params), t);
      const auto extra = clips_from(j);
      return extra.empty() ? b : b.clipped(extra);
    }
  } catch (const Json::exception& e) {
    throw Error(std::string("malformed body JSON: ") + e.what());
  }
  throw Error("unknown body kind \"" + kind + "\"");
}

Body2 preset_body(const std::string& name) {
  if (name == "disk") return Body2::disk({0.0, 0.0}, 1.0);
  if (name == "square") return Body2::square();
  if (name == "parabola") return Body2::epigraph(Profile::parabola());
  if (name == "hypograph") return Body2::epigraph(Profile::exp_hypograph(), Affine2{{1.0, 0.0, 0.0, -1.0}, {}});
  if (name == "cosh") return Body2::epigraph(Profile::cosh());
  if (name == "triangle") return Body2::polychain({{0.0, 1.0}, {1.0, -3.0}, {2.0, 1.0}});
  if (name == "half-disk") return Body2::disk({0.0, 0.0}, 1.0).clipped({HalfPlane{{1.0, 0.0}, 0.0}});
  if (name == "strip") return Body2::halfplanes({HalfPlane{{0.0, 1.0}, 1.0}, HalfPlane{{0.0, -1.0}, 1.0}});
  throw Error("unknown preset body \"" + name + "\"");
}

std::vector<std::string> preset_names() {
  return {"disk", "square", "parabola", "hypograph", "cosh", "triangle", "half-disk", "strip"};
}

Json extended_body_json(const ExtendedBody& e) {
  switch (e.special) {
    case ExtendedBody::Special::Empty: return {{"kind", "empty"}};
    case ExtendedBody::Special::Plane: return {{"kind", "plane"}};
    case ExtendedBody::Special::None: break;
  }
  Json items = Json::array();
  for (const HalfPlane& h : e.halfplanes) items.push_back(halfplane_json(h));
  return {{"kind", "halfplanes"}, {"items", items}};
}

namespace {

const Json& need(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(std::string("function JSON needs \"") + key + "\"");
  return j[key];
}

std::vector<std::optional<Body2>> bodies_from(const Json& arr) {
  std::vector<std::optional<Body2>> out;
  for (const Json& b : arr) {
    if (b.is_null()) out.emplace_back(std::nullopt);
    else out.emplace_back(body_from_json(b));
  }
  return out;
}

}  // namespace

ParsedFunction function_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw Error("function JSON needs a \"kind\"");
  const std::string kind = j["kind"];
  if (kind == "levels") {
    const Body2 amb = body_from_json(need(j, "ambient"));
    const auto bodies = bodies_from(need(j, "bodies"));
    const auto levels = need(j, "levels").get<std::vector<double>>();
    if (bodies.size() != levels.size()) throw Error("levels and bodies differ in length");
    std::vector<LevelEntry> entries;
    for (std::size_t i = 0; i < bodies.size(); ++i) entries.push_back({levels[i], bodies[i]});
    LevelFamily fam(amb, std::move(entries));
    QCFunction f(amb, [fam](Vec2 x) { return eval_levels(fam, x); }, "levels");
    return {kind, fam, std::move(f)};
  }
  if (kind == "staircase") {
    const Body2 amb = body_from_json(need(j, "ambient"));
    std::vector<Body2> bodies;
    std::vector<LevelEntry> entries;
    const auto levels = need(j, "levels").get<std::vector<double>>();
    for (const auto& b : bodies_from(need(j, "bodies"))) {
      if (!b) throw Error("staircase bodies must be nonempty");
      bodies.push_back(*b);
    }
    if (bodies.size() != levels.size()) throw Error("levels and bodies differ in length");
    for (std::size_t i = 0; i < bodies.size(); ++i) entries.push_back({levels[i], bodies[i]});
    QCFunction f = staircase_qc(amb, bodies, levels, need(j, "gaps").get<std::vector<double>>());
    return {kind, LevelFamily(amb, std::move(entries)), std::move(f)};
  }
  if (kind == "constant") {
    const Body2 amb = body_from_json(need(j, "ambient"));
    const double v = need(j, "value").get<double>();
    LevelFamily fam(amb, {{v, amb}});
    return {kind, fam, QCFunction(amb, [v](Vec2) { return v; }, "constant")};
  }
  if (kind == "usc") {
    const int m = j.value("m", 8);
    UscResult r = gen_usc_counterexample();
    return {kind, usc_family(m), std::move(r.f)};
  }
  if (kind == "tilde_f") {
    NoUCOptions opt;
    opt.kmax = j.value("kmax", 64);
    NoUCResult r = gen_no_uc(body_from_json(need(j, "body")), opt);
    return {kind, std::nullopt, std::move(r.f)};
  }
  if (kind == "composed") {
    ParsedFunction inner = function_from_json(need(j, "inner"));
    const Json& p = need(j, "proj");
    if (p.size() != 2 || p[0].size() != 2 || p[1].size() != 2) throw Error("proj must be a 2x2 matrix");
    const std::array<double, 4> m{p[0][0].get<double>(), p[0][1].get<double>(), p[1][0].get<double>(),
                                  p[1][1].get<double>()};
    return {kind, std::nullopt, compose_projection(inner.eval, m)};
  }
  throw Error("unknown function kind \"" + kind + "\"");
}

Json cone_json(const Cone2& c) {
  static const char* names[] = {"trivial", "ray", "wedge", "halfplane", "line", "full"};
  Json j{{"kind", names[static_cast<int>(c.kind)]}};
  if (c.kind != Cone2::Kind::Trivial && c.kind != Cone2::Kind::Full) {
    j["lo"] = vec_json(c.lo);
    j["hi"] = vec_json(c.hi);
  }
  return j;
}

Json certificate_json(const NoLipCertificate& c) {
  Json rows = Json::array();
  for (const NoLipRow& r : c.rows) {
    Json body = Json::array();
    for (const HalfPlane& h : r.body) body.push_back(halfplane_json(h));
    rows.push_back({{"k", r.k},
                    {"z", r.z},
                    {"g", r.g},
                    {"delta", r.delta},
                    {"alpha", r.alpha},
                    {"beta", r.beta},
                    {"gap", r.gap},
                    {"pq", r.pq},
                    {"product", r.product},
                    {"K", r.lower_bound},
                    {"line", {{"intercept", r.line_intercept}, {"slope", r.line_slope}}},
                    {"P", vec_json(r.p)},
                    {"Q", vec_json(r.q)},
                    {"D_clip", body}});
  }
  Json profile = Json::array();
  for (const auto& [z, g] : c.profile) profile.push_back(Json::array({z, g}));
  return {{"kind", "no-lip"},
          {"eps", c.eps},
          {"theta", c.theta},
          {"scale", c.scale},
          {"support_normal", vec_json(c.support_normal)},
          {"support_point", vec_json(c.support_point)},
          {"frame", {{"origin", vec_json(c.frame.origin)}, {"e1", vec_json(c.frame.e1)}, {"e2", vec_json(c.frame.e2)}}},
          {"profile", profile},
          {"rows", rows}};
}

Json certificate_json(const NoUCCertificate& c) {
  Json pts = Json::array(), hs = Json::array();
  for (Vec2 p : c.points) pts.push_back(vec_json(p));
  for (const HalfPlane& h : c.halfplanes) hs.push_back(halfplane_json(h));
  return {{"kind", "no-uc"},
          {"origin", vec_json(c.origin)},
          {"h", vec_json(c.h)},
          {"v", vec_json(c.v)},
          {"u", vec_json(c.u)},
          {"c0", vec_json(c.c0)},
          {"m", c.m},
          {"beta", c.beta},
          {"min_level_gap", c.min_level_gap()},
          {"monotone_from", c.monotone_from()},
          {"points", pts},
          {"alphas", c.alphas},
          {"halfplanes", hs},
          {"gaps", c.gaps}};
}

Json certificate_json(const ForcingCertificate& c) {
  Json levels = Json::array();
  for (const ForcingLevel& l : c.levels)
    levels.push_back({{"n", l.n},
                      {"eps", l.eps},
                      {"b", l.b},
                      {"alpha", l.alpha},
                      {"gap", l.gap},
                      {"forcing", halfplane_json(l.forcing)},
                      {"chord_length", std::isfinite(l.chord_length) ? Json(l.chord_length) : Json("inf")},
                      {"witness_excluded", l.witness_excluded}});
  Json j{{"kind", c.kind},
         {"frame", {{"origin", vec_json(c.frame.origin)}, {"e1", vec_json(c.frame.e1)}, {"e2", vec_json(c.frame.e2)}}},
         {"witness", vec_json(c.witness)},
         {"alpha_first", c.alpha_first},
         {"alpha_last", c.alpha_last},
         {"all_forcing_meet_c", c.all_forcing_meet_c()},
         {"levels", levels}};
  if (c.anchor) {
    j["anchor"] = vec_json(*c.anchor);
    j["f_at_anchor"] = c.f_at_anchor;
    j["jump"] = c.alpha_last - c.alpha_first;
  }
  return j;
}

Json usc_json(const UscRecord& r, const UscForcingCheck& check) {
  Json radii = Json::array();
  for (const auto& [rad, ok] : check.per_radius) radii.push_back({{"radius", rad}, {"hull_contains_origin", ok}});
  return {{"kind", "usc"},
          {"domain", body_to_json(r.domain)},
          {"f_bottom", r.f_bottom},
          {"f_origin", r.f_origin},
          {"segment", Json::array({vec_json(r.segment_a), vec_json(r.segment_b)})},
          {"origin_forced", check.origin_forced},
          {"checks", radii}};
}

Json classification_json(const Classification& c) {
  Json grades = Json::array();
  for (const GradeVerdict& g : c.grades) {
    Json gj{{"grade", g.grade}, {"granted", g.granted}};
    if (!g.granted) gj["witness_generator"] = g.generator;
    grades.push_back(gj);
  }
  Json j{{"class", class_name(c.cls)},
         {"affine", c.affine},
         {"dim_le_1", c.dim_le_1},
         {"bounded", c.bounded},
         {"rotund", c.rotund},
         {"delta_min", c.delta_min},
         {"has_asymptotic_direction", c.has_asymptotic_direction},
         {"grades", grades}};
  if (c.asymptotic) {
    j["asymptotic_direction"] = vec_json(c.asymptotic->direction);
    if (c.asymptotic->x0) j["asymptotic_x0"] = vec_json(*c.asymptotic->x0);
  }
  return j;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_text(const CsvTable& t) {
  std::ostringstream os;
  for (const std::string& c : t.comments) os << "# " << c << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt17(row[i]);
    os << '\n';
  }
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
  if (!f) throw Error("write failed for " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot read " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

CsvTable no_lip_table(const NoLipCertificate& c) {
  CsvTable t;
  t.comments = {"no-lip certificate: eps=" + fmt17(c.eps) + " theta=" + fmt17(c.theta)};
  t.columns = {"k", "z", "g", "delta", "alpha", "beta", "gap", "pq", "product", "K"};
  for (const NoLipRow& r : c.rows)
    t.rows.push_back({double(r.k), r.z, r.g, r.delta, r.alpha, r.beta, r.gap, r.pq, r.product, r.lower_bound});
  return t;
}

CsvTable no_uc_points_table(const NoUCCertificate& c) {
  CsvTable t;
  t.comments = {"no-uc points: beta=" + fmt17(c.beta)};
  t.columns = {"n", "x", "y", "alpha"};
  for (std::size_t i = 0; i < c.points.size(); ++i)
    t.rows.push_back({double(i + 1), c.points[i].x, c.points[i].y, c.alphas[i]});
  return t;
}

CsvTable no_uc_gap_table(const NoUCCertificate& c) {
  CsvTable t;
  t.comments = {"gap_k = |y_{2k+1} + y_{2k-1} - 2 y_{2k}|"};
  t.columns = {"k", "gap"};
  for (std::size_t k = 0; k < c.gaps.size(); ++k) t.rows.push_back({double(k + 1), c.gaps[k]});
  return t;
}

CsvTable forcing_table(const ForcingCertificate& c) {
  CsvTable t;
  t.comments = {c.kind + " certificate"};
  t.columns = {"n", "eps", "b", "alpha", "gap", "normal_x", "normal_y", "offset", "chord_length", "witness_excluded"};
  for (const ForcingLevel& l : c.levels)
    t.rows.push_back({double(l.n), l.eps, l.b, l.alpha, l.gap, l.forcing.normal.x, l.forcing.normal.y, l.forcing.offset,
                      l.chord_length, l.witness_excluded ? 1.0 : 0.0});
  return t;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace qcext
