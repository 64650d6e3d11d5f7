#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "qcext/counterexamples.hpp"
#include "qcext/extension.hpp"
#include "qcext/geometry.hpp"
#include "qcext/io.hpp"
#include "qcext/svg.hpp"
#include "qcext/verify.hpp"

using namespace qcext;

namespace {

// Values after precedence: command-line flag, then QCEXT_* environment, then default.
struct RunConfig {
  double tol = 1e-9;
  int resolution = 2048;
  double window = 4.0;
  std::uint64_t seed = 42;
  std::optional<int> kmax;
  int grid = 256;
  std::string out;
};

struct Flags {
  std::optional<double> tol;
  std::optional<int> resolution;
  std::optional<double> window;
  std::optional<std::uint64_t> seed;
  std::optional<int> kmax;
  std::optional<int> grid;
  std::string out;
};

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

RunConfig resolve(const Flags& f) {
  RunConfig c;
  if (auto e = env("QCEXT_TOL")) {
    try {
      c.tol = std::stod(*e);
    } catch (const std::exception&) {
      throw Error("QCEXT_TOL is not a number: " + *e);
    }
  }
  if (auto e = env("QCEXT_SEED")) {
    try {
      c.seed = std::stoull(*e);
    } catch (const std::exception&) {
      throw Error("QCEXT_SEED is not an integer: " + *e);
    }
  }
  if (f.tol) c.tol = *f.tol;
  if (f.seed) c.seed = *f.seed;
  if (f.resolution) c.resolution = *f.resolution;
  if (f.window) c.window = *f.window;
  if (f.grid) c.grid = *f.grid;
  c.kmax = f.kmax;
  c.out = f.out;
  if (!(c.tol > 0.0)) throw Error("tolerance must be positive");
  if (c.resolution < 8) throw Error("resolution must be at least 8");
  if (!(c.window > 0.0)) throw Error("window multiplier must be positive");
  if (c.grid < 2) throw Error("grid must be at least 2");
  if (c.kmax && *c.kmax < 1) throw Error("kmax must be positive");
  return c;
}

Json parse_json_arg(const std::string& arg) {
  const std::string text = (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) ? arg : read_text(arg);
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(std::string("malformed JSON: ") + e.what());
  }
}

// A preset name, a JSON file, or inline JSON.
Body2 load_body(const std::string& arg) {
  for (const std::string& n : preset_names())
    if (n == arg) return preset_body(arg);
  return body_from_json(parse_json_arg(arg));
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") std::cout << text;
  else write_text(path, text);
}

ExtendOptions extend_options(const RunConfig& c) {
  ExtendOptions o;
  o.tol = c.tol;
  o.resolution = c.resolution;
  return o;
}

std::pair<Vec2, Vec2> window_box(const Body2& c, double mult) {
  const Window w = c.default_window(mult);
  return {w.center - Vec2{w.radius, w.radius}, w.center + Vec2{w.radius, w.radius}};
}

std::vector<SvgOverlay> boundary_overlays(const Body2& c, Vec2 lo, Vec2 hi, const std::string& stroke) {
  const Vec2 mid = (lo + hi) * 0.5;
  const BoundaryArc arc = c.boundary(Window{mid, norm(hi - lo)});
  std::vector<SvgOverlay> out;
  for (int i = 0; i < static_cast<int>(arc.pieces().size()); ++i) {
    SvgOverlay o;
    o.stroke = stroke;
    for (int j = 0; j <= 256; ++j) o.points.push_back(arc.point(i, j / 256.0));
    out.push_back(std::move(o));
  }
  return out;
}

SvgOverlay polygon_overlay(const std::vector<HalfPlane>& hs, Vec2 lo, Vec2 hi, const std::string& stroke) {
  SvgOverlay o;
  o.points = halfplane_polygon(hs, lo, hi);
  o.closed = true;
  o.stroke = stroke;
  return o;
}

std::string grid_csv(const Grid& g, std::vector<std::string> comments) {
  CsvTable t;
  t.comments = std::move(comments);
  t.columns = {"x", "y", "F"};
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) t.rows.push_back({g.x(i), g.y(j), g.value(i, j)});
  return csv_text(t);
}

// ---- body ----

int cmd_body(const std::string& action, const std::string& arg, const RunConfig& cfg) {
  if (action == "make") {
    emit(cfg.out, body_to_json(load_body(arg)).dump(2) + "\n");
    return 0;
  }
  if (action == "validate") {
    emit(cfg.out, body_to_json(body_from_json(parse_json_arg(arg))).dump(2) + "\n");
    return 0;
  }
  const Body2 c = load_body(arg);
  const AsymptoticWitness aw = find_asymptotic_direction(c);
  const double delta = min_sampled_delta(c, 0.5 * c.witness_radius(), c.default_window(cfg.window), 64);
  Json asym = Json::array();
  if (aw.found) {
    Json a{{"direction", vec_json(aw.direction)}, {"slope", aw.slope}};
    if (aw.x0) a["x0"] = vec_json(*aw.x0);
    asym.push_back(a);
  }
  const Json info{{"body", body_to_json(c)},
                  {"bounded", c.bounded()},
                  {"rotund", is_rotund(c) && delta > 0.0},
                  {"delta_min", delta},
                  {"recession_cone", cone_json(recession_cone(c))},
                  {"asymptotic_directions", asym}};
  emit(cfg.out, info.dump(2) + "\n");
  return 0;
}

// ---- extend / plot ----

struct Field {
  std::function<double(Vec2)> f;
  std::vector<double> levels;
  std::string grade;
  Body2 ambient;
  std::vector<SvgOverlay> overlays;
};

Field extension_field(const std::string& fn_arg, const std::optional<std::string>& body_arg, const RunConfig& cfg) {
  Json j = parse_json_arg(fn_arg);
  if (body_arg && j.is_object() && !j.contains("ambient")) j["ambient"] = body_to_json(load_body(*body_arg));
  ParsedFunction pf = function_from_json(j);
  if (!pf.family) throw Error("function kind \"" + pf.kind + "\" carries no level family to extend");
  auto ext = std::make_shared<ExtensionResult>(extend_function(*pf.family, extend_options(cfg)));
  Field fld{[ext](Vec2 p) { return (*ext)(p); }, {}, grade_name(ext->grade()), pf.family->ambient(), {}};
  for (std::size_t k = 0; k < pf.family->size(); ++k) fld.levels.push_back(pf.family->level(k));
  return fld;
}

void write_svg(const Field& fld, const Grid& g, const std::string& path, const std::string& title) {
  SvgOptions o;
  o.title = title;
  o.overlays = fld.overlays;
  for (SvgOverlay& b : boundary_overlays(fld.ambient, g.lo, g.hi, "#000000")) o.overlays.push_back(std::move(b));
  // contour between consecutive step values so each level curve is a sublevel boundary
  std::vector<double> iso;
  for (std::size_t k = 0; k + 1 < fld.levels.size(); ++k) iso.push_back(0.5 * (fld.levels[k] + fld.levels[k + 1]));
  if (iso.empty()) iso = fld.levels;
  write_text(path, contour_svg(g, iso, o));
}

int cmd_extend(const std::string& fn, const std::optional<std::string>& body, const std::string& svg,
               const RunConfig& cfg) {
  const Field fld = extension_field(fn, body, cfg);
  const auto [lo, hi] = window_box(fld.ambient, cfg.window);
  const Grid g = sample_grid(fld.f, lo, hi, cfg.grid, cfg.grid);
  emit(cfg.out, grid_csv(g, {"grade: " + fld.grade, "grid: " + std::to_string(cfg.grid) + "x" + std::to_string(cfg.grid),
                             "tol: " + fmt17(cfg.tol), "resolution: " + std::to_string(cfg.resolution)}));
  if (!svg.empty()) write_svg(fld, g, svg, "extension (" + fld.grade + ")");
  return 0;
}

Field certificate_field(const std::string& kind, const std::optional<std::string>& body, const RunConfig& cfg) {
  auto need_body = [&] {
    if (!body) throw Error("certificate kind " + kind + " needs --body");
    return load_body(*body);
  };
  if (kind == "usc") {
    UscResult r = gen_usc_counterexample();
    Field f{r.f, {}, "usc", r.record.domain, {}};
    for (int j = 0; j <= 8; ++j) f.levels.push_back(j / 8.0);
    f.overlays.push_back({{r.record.segment_a, r.record.segment_b}, false, "#cc0000"});
    return f;
  }
  const Body2 c = need_body();
  if (kind == "no-lip") {
    NoLipOptions o;
    o.kmax = cfg.kmax.value_or(8);
    NoLipResult r = gen_no_lip(c, o);
    Field f{r.f, {}, "no-lip", c, {}};
    const auto [lo, hi] = window_box(c, cfg.window);
    // D_k = E ∩ row half-planes; E enters through 128 supporting half-planes
    std::vector<HalfPlane> hull;
    for (int i = 0; i < 128; ++i) {
      const Vec2 g = unit_from_angle(2.0 * kPi * i / 128);
      const double s = support(c, g).value;
      if (std::isfinite(s)) hull.push_back({g, s});
    }
    for (const NoLipRow& row : r.cert.rows) {
      f.levels.push_back(row.beta);
      std::vector<HalfPlane> hs = row.body;
      hs.insert(hs.end(), hull.begin(), hull.end());
      f.overlays.push_back(polygon_overlay(hs, lo, hi, "#2a7f2a"));
    }
    return f;
  }
  if (kind == "no-uc") {
    NoUCOptions o;
    o.kmax = cfg.kmax.value_or(8);
    NoUCResult r = gen_no_uc(c, o);
    Field f{r.f, {}, "no-uc", c, {}};
    for (double a : r.cert.alphas) f.levels.push_back(a);
    return f;
  }
  if (kind == "no-qc" || kind == "non-rotund") {
    ForcingOptions o = kind == "no-qc" ? ForcingOptions{} : ForcingOptions{10, true};
    if (cfg.kmax) o.kmax = *cfg.kmax;
    ForcingResult r = kind == "no-qc" ? gen_no_qc(c, o) : gen_non_rotund(c, o);
    Field f{r.f, {}, kind, c, {}};
    for (const ForcingLevel& l : r.cert.levels) f.levels.push_back(l.alpha);
    return f;
  }
  throw Error("unknown certificate kind " + kind);
}

int cmd_plot(const std::string& fn, const std::string& cert, const std::optional<std::string>& body,
             const RunConfig& cfg) {
  if (fn.empty() == cert.empty()) throw Error("plot needs exactly one of --function or --certificate");
  const Field fld = fn.empty() ? certificate_field(cert, body, cfg) : extension_field(fn, body, cfg);
  const auto [lo, hi] = window_box(fld.ambient, cfg.window);
  const std::function<double(Vec2)> safe = [&](Vec2 p) {
    // certificate functions live on C only; off C the sample is blank
    if (!fn.empty() || fld.ambient.contains(p, 0.0)) return fld.f(p);
    return std::numeric_limits<double>::quiet_NaN();
  };
  const Grid g = sample_grid(safe, lo, hi, cfg.grid, cfg.grid);
  if (cfg.out.empty()) throw Error("plot needs --out for the SVG file");
  write_svg(fld, g, cfg.out, fld.grade);
  return 0;
}

// ---- certify ----

int cmd_certify(const std::string& kind, const std::optional<std::string>& body, const RunConfig& cfg) {
  Json j;
  std::vector<std::pair<std::string, CsvTable>> tables;
  if (kind == "usc") {
    const UscResult r = gen_usc_counterexample();
    j = usc_json(r.record, verify_usc_forcing());
  } else {
    if (!body) throw Error("certify " + kind + " needs --body");
    const Body2 c = load_body(*body);
    if (kind == "no-lip") {
      NoLipOptions o;
      if (cfg.kmax) o.kmax = *cfg.kmax;
      const NoLipResult r = gen_no_lip(c, o);
      j = certificate_json(r.cert);
      tables.emplace_back("", no_lip_table(r.cert));
    } else if (kind == "no-uc") {
      NoUCOptions o;
      if (cfg.kmax) o.kmax = *cfg.kmax;
      const NoUCResult r = gen_no_uc(c, o);
      j = certificate_json(r.cert);
      tables.emplace_back("", no_uc_gap_table(r.cert));
      tables.emplace_back("_points", no_uc_points_table(r.cert));
    } else if (kind == "no-qc" || kind == "non-rotund") {
      ForcingOptions o = kind == "no-qc" ? ForcingOptions{} : ForcingOptions{10, true};
      if (cfg.kmax) o.kmax = *cfg.kmax;
      const ForcingResult r = kind == "no-qc" ? gen_no_qc(c, o) : gen_non_rotund(c, o);
      j = certificate_json(r.cert);
      tables.emplace_back("", forcing_table(r.cert));
    } else {
      throw Error("unknown certificate kind " + kind);
    }
  }
  if (cfg.out.empty() || cfg.out == "-") {
    std::cout << j.dump(2) << "\n";
    for (const auto& [suffix, t] : tables) std::cout << csv_text(t);
    return 0;
  }
  write_text(cfg.out + ".json", j.dump(2) + "\n");
  for (const auto& [suffix, t] : tables) write_text(cfg.out + suffix + ".csv", csv_text(t));
  return 0;
}

int cmd_characterize(const std::string& body, const RunConfig& cfg) {
  const Classification cl = characterize(load_body(body));
  std::cout << class_name(cl.cls) << "\n";
  const std::string text = classification_json(cl).dump(2) + "\n";
  if (cfg.out.empty()) std::cout << text;
  else write_text(cfg.out, text);
  return 0;
}

int cmd_verify(const std::string& suite, std::int64_t budget, bool plant, const RunConfig& cfg) {
  SuiteConfig sc;
  sc.budget = budget;
  sc.plant_failure = plant;
  const SuiteReport r = run_suite(suite, cfg.seed, sc);
  emit(cfg.out, r.to_json().dump(2) + "\n");
  return r.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasiconvex extension toolkit for planar convex bodies"};
  app.require_subcommand(1);
  Flags fl;
  app.add_option("--tol", fl.tol, "Geometric tolerance (env QCEXT_TOL)");
  app.add_option("--resolution", fl.resolution, "Boundary sampling resolution");
  app.add_option("--window", fl.window, "Window radius multiplier");
  app.add_option("--seed", fl.seed, "Random seed (env QCEXT_SEED)");
  app.add_option("--kmax", fl.kmax, "Number of certificate rows");
  app.add_option("--grid", fl.grid, "Grid points per axis");
  app.add_option("--out", fl.out, "Output path (or prefix for certify)");
  app.fallthrough();

  std::string action, body_arg, fn_arg, svg_arg, kind, cert_arg, suite;
  std::optional<std::string> body_opt;
  std::int64_t budget = 10000;
  bool plant = false;

  auto* body = app.add_subcommand("body", "Build, validate or describe a body");
  body->add_option("action", action, "make | validate | info")->required()->check(CLI::IsMember({"make", "validate", "info"}));
  body->add_option("body", body_arg, "Preset name, JSON file or inline JSON")->required();

  auto* extend = app.add_subcommand("extend", "Extend a level-family function and write its grid as CSV");
  extend->add_option("--function", fn_arg, "Function JSON (file or inline)")->required();
  extend->add_option("--body", body_opt, "Ambient body when the function omits one");
  extend->add_option("--svg", svg_arg, "Also write a contour plot");

  auto* certify = app.add_subcommand("certify", "Generate a non-extendability certificate");
  certify->add_option("kind", kind, "no-qc | non-rotund | no-uc | no-lip | usc")
      ->required()
      ->check(CLI::IsMember({"no-qc", "non-rotund", "no-uc", "no-lip", "usc"}));
  certify->add_option("--body", body_opt, "Body (preset, file or JSON)");

  auto* charz = app.add_subcommand("characterize", "Classify a body by extension grade");
  charz->add_option("body", body_arg, "Preset name, JSON file or inline JSON")->required();

  auto* verify = app.add_subcommand("verify", "Run a seeded property suite");
  verify->add_option("suite", suite, "geometry | levelset | extension | counterexamples | end_to_end")->required();
  verify->add_option("--budget", budget, "Cases per predicate");
  verify->add_flag("--plant", plant, "Add the planted |xy| failure to the levelset suite");

  auto* plot = app.add_subcommand("plot", "Contour plot of an extension or certificate function");
  plot->add_option("--function", fn_arg, "Function JSON to extend and plot");
  plot->add_option("--certificate", cert_arg, "Certificate kind to plot");
  plot->add_option("--body", body_opt, "Body for the certificate or ambient override");

  for (CLI::App* sub : {body, extend, certify, charz, verify, plot}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const RunConfig cfg = resolve(fl);
    if (*body) return cmd_body(action, body_arg, cfg);
    if (*extend) return cmd_extend(fn_arg, body_opt, svg_arg, cfg);
    if (*certify) return cmd_certify(kind, body_opt, cfg);
    if (*charz) return cmd_characterize(body_arg, cfg);
    if (*verify) return cmd_verify(suite, budget, plant, cfg);
    if (*plot) return cmd_plot(fn_arg, cert_arg, body_opt, cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
