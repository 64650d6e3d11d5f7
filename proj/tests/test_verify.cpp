#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qcext/verify.hpp"

using namespace qcext;

TEST_CASE("suites are deterministic in the seed") {
  SuiteConfig cfg;
  cfg.budget = 300;
  const SuiteReport a = run_suite("geometry", 11, cfg);
  const SuiteReport b = run_suite("geometry", 11, cfg);
  CHECK(a.passed());
  CHECK(a.cases == b.cases);
  CHECK(a.content_hash() == b.content_hash());
  CHECK(a.to_json()["seed"] == 11);
}

TEST_CASE("small budget suites pass") {
  SuiteConfig cfg;
  cfg.budget = 200;
  for (const char* name : {"geometry", "levelset"}) {
    CAPTURE(name);
    CHECK(run_suite(name, 5, cfg).passed());
  }
  CHECK(std::find(suite_names().begin(), suite_names().end(), "counterexamples") != suite_names().end());
  CHECK_THROWS_WITH(run_suite("bogus", 1, cfg), doctest::Contains("unknown suite"));
}

TEST_CASE("fuzzed bodies") {
  const auto a = fuzz_bodies(77, 40);
  const auto b = fuzz_bodies(77, 40);
  REQUIRE(a.size() == 40);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(body_hash(a[i]) == body_hash(b[i]));
    CHECK(a[i].contains(a[i].witness(), 0.0));
    if (a[i].bounded()) CHECK(a[i].recession_cone().trivial());
  }
  CHECK(body_hash(fuzz_bodies(78, 1)[0]) != body_hash(a[0]));
  CHECK_THROWS(fuzz_bodies(1, 0));
}

TEST_CASE("planted quasiconvexity failure is the only failure") {
  SuiteConfig cfg;
  cfg.budget = 500;
  cfg.plant_failure = true;
  const SuiteReport r = run_suite("levelset", 42, cfg);
  REQUIRE(r.failures.size() == 1);
  CHECK(r.failures[0].check == "planted-abs-xy");
  CHECK(r.failures[0].witness.size() == 3);
}

TEST_CASE("witness minimization keeps the predicate failing") {
  // fails while the triangle still has side longer than 1
  auto fails = [](const std::vector<Vec2>& p) {
    double m = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) m = std::max(m, dist(p[i], p[(i + 1) % p.size()]));
    return m > 1.0;
  };
  const std::vector<Vec2> start{{0.0, 0.0}, {8.0, 0.0}, {0.0, 6.0}};
  const std::vector<Vec2> small = minimize_witness(fails, start, 100);
  CHECK(fails(small));
  CHECK(dist(small[0], small[1]) < 8.0);
  CHECK(minimize_witness(fails, start, 0) == start);
}
