#include <doctest.h>

#include <cstdlib>
#include <limits>
#include <random>

#include "qcext/io.hpp"
#include "qcext/svg.hpp"

using namespace qcext;

TEST_CASE("body JSON round trip for every preset") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const std::string& name : preset_names()) {
    CAPTURE(name);
    const Body2 b = preset_body(name);
    const Json j = body_to_json(b);
    const Body2 back = body_from_json(Json::parse(j.dump()));
    CHECK(body_to_json(back) == j);
    for (int i = 0; i < 500; ++i) {
      const Vec2 p{u(rng), u(rng)};
      CHECK(back.contains(p, 0.0) == b.contains(p, 0.0));
    }
  }
}

TEST_CASE("body JSON with an inline clip") {
  const Json j = Json::parse(R"({"kind": "disk", "center": [0, 0], "radius": 1,
                                 "clip": [{"normal": [1, 0], "offset": 0}]})");
  const Body2 b = body_from_json(j);
  CHECK(b.contains({-0.5, 0.0}));
  CHECK_FALSE(b.contains({0.5, 0.0}));
  CHECK(body_to_json(b).contains("clip"));
}

TEST_CASE("malformed body JSON") {
  CHECK_THROWS(body_from_json(Json::parse("[1, 2]")));
  CHECK_THROWS(body_from_json(Json::parse(R"({"kind": "blob"})")));
  CHECK_THROWS(body_from_json(Json::parse(R"({"kind": "disk", "center": [0], "radius": 1})")));
  CHECK_THROWS(body_from_json(Json::parse(R"({"kind": "polychain", "vertices": [[0, 0], [1, 1], [2, 0], [1, 0.2]]})")));
  CHECK_THROWS(vec_from_json(Json::parse(R"(["a", 1])")));
  CHECK_THROWS(preset_body("nope"));
}

TEST_CASE("function JSON kinds") {
  const Json c = Json::parse(R"({"kind": "constant", "value": 2.5, "ambient": {"kind": "disk", "center": [0, 0], "radius": 1}})");
  const ParsedFunction f = function_from_json(c);
  CHECK(f.kind == "constant");
  REQUIRE(f.family);
  CHECK(f.eval({0.1, 0.2}) == 2.5);
  CHECK_THROWS(function_from_json(Json::parse(R"({"value": 1})")));
  CHECK_THROWS(function_from_json(Json::parse(R"({"kind": "levels", "ambient": {"kind": "disk", "center": [0, 0], "radius": 1},
      "bodies": [], "levels": [1]})")));
}

TEST_CASE("fmt17 reparses exactly") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    const double v = u(rng) * std::ldexp(1.0, static_cast<int>(rng() % 80) - 40);
    CHECK(std::strtod(fmt17(v).c_str(), nullptr) == v);
  }
  CHECK(std::strtod(fmt17(std::numeric_limits<double>::denorm_min()).c_str(), nullptr) ==
        std::numeric_limits<double>::denorm_min());
}

TEST_CASE("csv layout") {
  CsvTable t;
  t.comments = {"grade: continuous"};
  t.columns = {"x", "y"};
  t.rows = {{0.5, 1.0}};
  CHECK(csv_text(t) == "# grade: continuous\nx,y\n0.5,1\n");
}

TEST_CASE("fnv1a reference vectors") {
  CHECK(hex64(fnv1a("")) == "cbf29ce484222325");
  CHECK(hex64(fnv1a("a")) == "af63dc4c8601ec8c");
  CHECK(hex64(fnv1a("foobar")) == "85944171f73967e8");
}

TEST_CASE("iso lines of a linear function are vertical segments") {
  const Grid g = sample_grid([](Vec2 p) { return p.x; }, {-1.0, -1.0}, {1.0, 1.0}, 21, 11);
  CHECK(g.value(20, 3) == doctest::Approx(1.0));
  const auto segs = iso_segments(g, 0.25);
  CHECK(segs.size() == 10);
  for (const auto& s : segs) {
    CHECK(s[0].x == doctest::Approx(0.25));
    CHECK(s[1].x == doctest::Approx(0.25));
  }
  CHECK(iso_segments(g, 5.0).empty());
}

TEST_CASE("contour svg") {
  const Grid g = sample_grid([](Vec2 p) { return p.x * p.x + p.y * p.y; }, {-1.0, -1.0}, {1.0, 1.0}, 32, 32);
  SvgOptions opt;
  opt.title = "bowl";
  opt.overlays.push_back({{{0.0, 0.0}, {0.5, 0.5}}, false, "#ff0000"});
  const std::string s = contour_svg(g, {0.25, 0.5}, opt);
  CHECK(s.rfind("<svg", 0) == 0);
  CHECK(s.find("</svg>") != std::string::npos);
  CHECK(s.find("bowl") != std::string::npos);
  CHECK(s.find("#ff0000") != std::string::npos);
}
