#include <doctest.h>

#include <cmath>
#include <random>

#include "qcext/counterexamples.hpp"
#include "qcext/extension.hpp"
#include "qcext/geometry.hpp"
#include "qcext/io.hpp"
#include "qcext/verify.hpp"

using namespace qcext;

namespace {

bool has_halfplane(const ExtendedBody& e, HalfPlane want, double tol) {
  for (const HalfPlane& h : e.halfplanes)
    if (dist(h.normal, want.normal) <= tol && std::abs(h.offset - want.offset) <= tol) return true;
  return false;
}

}  // namespace

TEST_CASE("relative boundary") {
  const Body2 big = Body2::square(10.0);
  const Body2 small = Body2::square(1.0);
  const BoundaryArc all = relative_boundary(small, big, small.default_window(4.0));
  CHECK(all.total_length() == doctest::Approx(8.0).epsilon(1e-9));

  const Body2 disk = preset_body("disk");
  const Body2 left = disk.clipped({HalfPlane{{1.0, 0.0}, 0.0}});
  const BoundaryArc d = relative_boundary(left, disk, disk.default_window(4.0));
  REQUIRE(d.pieces().size() == 1);
  const BoundaryPiece& p = d.pieces().front();
  CHECK(p.kind == BoundaryPiece::Kind::Segment);
  CHECK(std::abs(p.a.x) < 1e-12);
  CHECK(std::abs(p.b.x) < 1e-12);
  CHECK(std::abs(std::abs(p.a.y) - 1.0) < 1e-9);
  CHECK(std::abs(p.a.y + p.b.y) < 1e-9);

  CHECK(relative_boundary(disk, disk, disk.default_window(4.0)).empty());
  CHECK_THROWS(relative_boundary(Body2::square(2.0), disk, disk.default_window(4.0)));
}

TEST_CASE("extend_body examples") {
  const ExtendedBody a = extend_body(Body2::square(1.0), Body2::square(10.0));
  for (Vec2 p : {Vec2{0.9, 0.9}, Vec2{-1.0, 0.5}}) CHECK(a.contains(p));
  for (Vec2 p : {Vec2{1.1, 0.0}, Vec2{0.0, -1.2}, Vec2{3.0, 3.0}}) CHECK_FALSE(a.contains(p));

  const Body2 strip_c = Body2::halfplanes({{{0.0, 1.0}, 1.0}});
  const ExtendedBody b = extend_body(Body2::halfplanes({{{0.0, 1.0}, 0.0}}), strip_c);
  REQUIRE(b.halfplanes.size() == 1);
  CHECK(has_halfplane(b, {{0.0, 1.0}, 0.0}, 1e-12));

  // oracle: sampled supporting half-planes at diameter points and endpoints (0, +-1)
  const Body2 disk = preset_body("disk");
  const ExtendedBody e = extend_body(disk.clipped({HalfPlane{{1.0, 0.0}, 0.0}}), disk);
  CHECK(e.halfplanes.size() == 3);
  CHECK(has_halfplane(e, {{1.0, 0.0}, 0.0}, 1e-6));
  CHECK(has_halfplane(e, {{0.0, 1.0}, 1.0}, 1e-6));
  CHECK(has_halfplane(e, {{0.0, -1.0}, 1.0}, 1e-6));

  CHECK(extend_body(disk, disk).special == ExtendedBody::Special::Plane);
  CHECK(extend_body(std::nullopt, disk).special == ExtendedBody::Special::Empty);
}

TEST_CASE("extend_function examples") {
  const Body2 c = preset_body("parabola");
  const LevelFamily k(c, {{2.5, c}});
  const ExtensionResult ek = extend_function(k);
  for (Vec2 p : {Vec2{0.0, 0.0}, Vec2{30.0, -40.0}}) CHECK(ek(p) == 2.5);

  std::vector<LevelEntry> entries;
  for (int j = 0; j < 4; ++j) entries.push_back({double(j), c.clipped({HalfPlane{{0.0, 1.0}, double(j)}})});
  entries.push_back({4.0, c});
  const LevelFamily fam(c, entries);
  const ExtensionResult ext = extend_function(fam);
  CHECK(ext.grade() == Grade::Continuous);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int i = 0; i < 20000; ++i) {
    const Vec2 p{u(rng), u(rng)};
    if (c.contains(p, 0.0)) CHECK(ext(p) == eval_levels(fam, p));
  }
  CHECK(quasiconvex_check([&](Vec2 p) { return ext(p); }, SampleDomain::box({-6, -6}, {6, 6}), 100000, 1).passed());

  const Body2 big = Body2::disk({0.0, 0.0}, 2.0);
  const LevelFamily bad(big, {{0.0, Body2::disk({1.0, 0.0}, 1.0)}, {1.0, Body2::disk({-1.0, 0.0}, 1.0)}});
  CHECK_THROWS(extend_function(bad));
  const LevelFamily split(c, {{0.0, c.clipped({HalfPlane{{1.0, 0.0}, 0.0}})}, {1.0, c.clipped({HalfPlane{{-1.0, 0.0}, 0.0}})}});
  CHECK_THROWS_WITH(extend_function(split), doctest::Contains("not nested"));
}

TEST_CASE("usc example extends with the usc-only tag and forces the origin") {
  const LevelFamily fam = usc_family(8);
  const ExtensionResult ext = extend_function(fam);
  CHECK(ext.grade() == Grade::UscOnly);
  const UscResult u = gen_usc_counterexample();
  CHECK(u.f({0.0, 0.0}) == 1.0);
  const UscForcingCheck chk = verify_usc_forcing();
  CHECK(chk.origin_forced);
  CHECK(chk.f_origin > 0.5);
}

TEST_CASE("covering index") {
  const Body2 c = preset_body("parabola");
  auto up = [&](long long k) -> std::optional<Body2> { return c.clipped({HalfPlane{{0.0, 1.0}, double(k)}}); };
  CHECK(covering_index(c, up, {0.0, -0.5}, 100) == 0);
  const long long k = covering_index(c, up, {0.0, -5.0}, 1000);
  CHECK(k > 0);
  CHECK(extend_body(up(k), c).contains({0.0, -5.0}));
  CHECK_FALSE(extend_body(up(k - 1), c).contains({0.0, -5.0}));

  // a stalled family never reaches points above its common facet
  const Body2 h = Body2::halfplanes({{{0.0, 1.0}, 1.0}});
  auto hk = [](long long) -> std::optional<Body2> { return Body2::halfplanes({{{0.0, 1.0}, 0.0}}); };
  CHECK_THROWS_WITH(covering_index(h, hk, {0.0, 0.5}, 64), doctest::Contains("64"));
}

TEST_CASE("property: monotonicity and segment crossing on random polygon pairs") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> a(0.0, 2.0 * kPi), s(-1.0, 1.0);
  const Body2 c = Body2::polychain({{-2, -1}, {2, -1.5}, {3, 1}, {0, 2.5}, {-2.5, 1}});
  for (int trial = 0; trial < 30; ++trial) {
    const Vec2 n1 = unit_from_angle(a(rng)), n2 = unit_from_angle(a(rng));
    const Vec2 p{0.3 * s(rng), 0.3 * s(rng)};
    const Body2 b2 = c.clipped({HalfPlane{n1, dot(n1, p)}});
    const Body2 b1 = b2.clipped({HalfPlane{n2, dot(n2, p)}});
    const ExtendedBody e1 = extend_body(b1, c), e2 = extend_body(b2, c);
    for (int i = 0; i < 200; ++i) {
      const Vec2 x{6.0 * s(rng), 6.0 * s(rng)};
      if (e1.contains(x, 1e-9)) CHECK(e2.contains(x, 1e-7));
      const Vec2 y{3.0 * s(rng), 3.0 * s(rng)};
      if (e2.contains(x, 0.0) && !c.contains(x, 0.0) && c.contains(y, 0.0) && !b2.contains(y, 0.0)) {
        const Interval ch = b2.chord(x, y - x).intersect({0.0, 1.0});
        CHECK_FALSE(ch.empty());
      }
    }
  }
}

TEST_CASE("property suite passes on a rotund and a polygonal body") {
  SuiteConfig cfg;
  cfg.budget = 500;
  CHECK(extension_property_suite(preset_body("disk"), 3, cfg).passed());
  CHECK(extension_property_suite(Body2::square(), 3, cfg).passed());
}
