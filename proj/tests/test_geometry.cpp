#include <doctest.h>

#include <cmath>
#include <random>

#include "qcext/geometry.hpp"
#include "qcext/io.hpp"

using namespace qcext;

namespace {

// Independent projection oracle for {v >= u^2 - 1}: dense scan of the boundary then golden section.
Vec2 parabola_projection_oracle(Vec2 p) {
  auto d2 = [&](double u) { return std::pow(dist(p, Vec2{u, u * u - 1.0}), 2); };
  double best = 0.0, bv = kInf;
  for (int i = -40000; i <= 40000; ++i) {
    const double u = i * 1e-4;
    if (d2(u) < bv) {
      bv = d2(u);
      best = u;
    }
  }
  double a = best - 1e-4, b = best + 1e-4;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (d2(c) < d2(d)) b = d;
    else a = c;
  }
  const double u = 0.5 * (a + b);
  return {u, u * u - 1.0};
}

bool same_set(std::vector<Vec2> got, std::vector<Vec2> want, double tol) {
  if (got.size() != want.size()) return false;
  for (Vec2 w : want) {
    bool hit = false;
    for (Vec2 g : got) hit = hit || dist(g, w) <= tol;
    if (!hit) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("contains on the preset bodies") {
  const Body2 disk = preset_body("disk"), par = preset_body("parabola");
  CHECK(contains(disk, {0.0, 0.0}));
  CHECK_FALSE(contains(disk, {2.0, 0.0}));
  CHECK(contains(par, {0.0, -1.0}));
}

TEST_CASE("projection") {
  const Body2 disk = preset_body("disk"), par = preset_body("parabola");
  const Projection a = project({0.0, 2.0}, disk);
  CHECK(dist(a.point, {0.0, 1.0}) < 1e-12);
  CHECK(a.distance == doctest::Approx(1.0).epsilon(1e-12));
  const Projection b = project({0.3, 0.2}, disk);
  CHECK(b.distance == 0.0);
  CHECK(dist(b.point, {0.3, 0.2}) == 0.0);

  const Projection c = project({0.0, -2.0}, par);
  CHECK(dist(c.point, {0.0, -1.0}) < 1e-9);
  CHECK(c.distance == doctest::Approx(1.0).epsilon(1e-9));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 40; ++i) {
    const Vec2 p{u(rng), u(rng) - 2.0};
    if (par.contains(p, 0.0)) continue;
    const Vec2 want = parabola_projection_oracle(p);
    CHECK(dist(project(p, par).point, want) < 1e-6);
  }
}

TEST_CASE("support values") {
  const Body2 disk = preset_body("disk"), par = preset_body("parabola");
  CHECK(support(disk, {0.0, 1.0}).value == doctest::Approx(1.0));
  CHECK(std::isinf(support(par, {0.0, 1.0}).value));
  const SupportValue s = support(par, {0.0, -1.0});
  CHECK(s.value == doctest::Approx(1.0));
  REQUIRE(s.point);
  CHECK(dist(*s.point, {0.0, -1.0}) < 1e-9);
}

TEST_CASE("supporting normals") {
  const NormalArc a = supporting_normals(preset_body("disk"), {1.0, 0.0});
  CHECK(a.singleton(1e-9));
  CHECK(dist(a.first, {1.0, 0.0}) < 1e-9);
  const NormalArc b = supporting_normals(Body2::square(), {1.0, 1.0});
  CHECK(dist(b.first, {1.0, 0.0}) < 1e-12);
  CHECK(dist(b.last, {0.0, 1.0}) < 1e-12);
  const NormalArc c = supporting_normals(Body2::halfplanes({{{0.0, 1.0}, 1.0}}), {5.0, 1.0});
  CHECK(c.singleton(1e-12));
  CHECK(dist(c.first, {0.0, 1.0}) < 1e-12);
  CHECK_THROWS(supporting_normals(preset_body("disk"), {0.0, 0.0}));
}

TEST_CASE("recession cones against a ray-sampling oracle") {
  CHECK(recession_cone(preset_body("disk")).trivial());
  const Body2 par = preset_body("parabola"), hyp = preset_body("hypograph");
  // oracle: v is a recession direction iff c + t v stays in C for large t
  auto oracle = [](const Body2& c, Vec2 v) {
    for (double t : {1e2, 1e4, 1e6})
      if (!c.contains(c.witness() + v * t, 1e-9)) return false;
    return true;
  };
  for (int i = 0; i < 360; ++i) {
    const Vec2 v = unit_from_angle(2.0 * kPi * (i + 0.5) / 360);
    CHECK(recession_cone(par).contains_direction(v, 1e-9) == oracle(par, v));
    CHECK(recession_cone(hyp).contains_direction(v, 1e-9) == oracle(hyp, v));
  }
  CHECK(recession_cone(par).contains_direction({0.0, 1.0}, 1e-9));
  CHECK(recession_cone(hyp).contains_direction({1.0, 0.0}, 1e-9));
  CHECK(recession_cone(hyp).contains_direction({0.0, -1.0}, 1e-9));
}

TEST_CASE("asymptotic slopes and directions") {
  const Body2 hyp = preset_body("hypograph"), disk = preset_body("disk"), par = preset_body("parabola");
  CHECK(asymptotic_slope({0.0, 1.0}, {1.0, 0.0}, hyp).is_zero());
  CHECK(asymptotic_slope({0.0, 2.0}, {1.0, 0.0}, disk).value == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(asymptotic_slope({2.0, 0.0}, {1.0, 0.0}, par).value > 0.1);
  CHECK_THROWS(asymptotic_slope({0.0, 0.0}, {1.0, 0.0}, disk));

  const AsymptoticWitness w = is_asymptotic_direction(hyp, {1.0, 0.0});
  CHECK(w.found);
  REQUIRE(w.x0);
  // the ray from x0 stays outside int C and approaches it
  CHECK(hyp.depth(*w.x0) <= 1e-12);
  CHECK(hyp.distance(*w.x0 + Vec2{40.0, 0.0}) < 1e-12 + std::exp(-40.0) * 2.0);
  CHECK_FALSE(is_asymptotic_direction(par, {0.0, 1.0}).found);
  for (int i = 0; i < 8; ++i) CHECK_FALSE(is_asymptotic_direction(disk, unit_from_angle(i)).found);
  CHECK(find_asymptotic_direction(hyp).found);
  CHECK_FALSE(find_asymptotic_direction(par).found);
}

TEST_CASE("delta modulus") {
  const Body2 disk = preset_body("disk");
  // chord of length 1 at (1,0): endpoints at angle +-2 asin(1/2), midpoint depth 1 - sqrt(3)/2
  const double want = 1.0 - std::sqrt(3.0) / 2.0;
  const double d1 = delta_modulus(disk, {1.0, 0.0}, 1.0, 2048);
  const double d2 = delta_modulus(disk, {1.0, 0.0}, 1.0, 4096);
  CHECK(std::abs(d1 - d2) < 1e-4);
  CHECK(d1 == doctest::Approx(want).epsilon(1e-4));
  CHECK(delta_modulus(Body2::square(), {1.0, 0.0}, 0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(delta_modulus(disk, {0.0, 1.0}, 0.0) == 0.0);
  CHECK_THROWS(delta_modulus(disk, {0.0, 1.0}, -1.0));
}

TEST_CASE("cones from exterior points and tangency sets") {
  const Body2 disk = preset_body("disk"), par = preset_body("parabola");
  const Cone2 c = cone_from({0.0, 2.0}, disk);
  const Vec2 t1 = normalized(Vec2{std::sqrt(3.0) / 2.0, 0.5} - Vec2{0.0, 2.0});
  const Vec2 t2 = normalized(Vec2{-std::sqrt(3.0) / 2.0, 0.5} - Vec2{0.0, 2.0});
  CHECK(same_set({c.lo, c.hi}, {t1, t2}, 1e-6));

  const Cone2 pc = cone_from({0.0, -2.0}, par);
  CHECK(same_set({pc.lo, pc.hi}, {normalized(Vec2{1.0, 2.0}), normalized(Vec2{-1.0, 2.0})}, 1e-6));
  CHECK(cone_from({1.0, 0.0}, disk).kind == Cone2::Kind::HalfPlane);
  CHECK_THROWS(cone_from({0.0, 0.0}, disk));

  auto pts = [](const BoundaryArc& a) {
    std::vector<Vec2> out;
    for (const BoundaryPiece& p : a.pieces()) {
      out.push_back(p.a);
      if (dist(p.a, p.b) > 1e-9) out.push_back(p.b);
    }
    return out;
  };
  CHECK(same_set(pts(gamma_set({0.0, 2.0}, disk)), {{std::sqrt(3.0) / 2.0, 0.5}, {-std::sqrt(3.0) / 2.0, 0.5}}, 1e-6));
  CHECK(same_set(pts(gamma_set({0.0, -2.0}, par)), {{-1.0, 0.0}, {1.0, 0.0}}, 1e-6));
  CHECK(same_set(pts(gamma_set({2.0, 2.0}, Body2::square())), {{1.0, -1.0}, {-1.0, 1.0}}, 1e-9));
  CHECK_THROWS(gamma_set({0.0, 0.0}, disk));
}

TEST_CASE("K cones") {
  const Body2 kd = k_cone({1.0, 0.0}, preset_body("disk"));
  CHECK(kd.contains({1.0, 50.0}, 1e-9));
  CHECK(kd.contains({-30.0, -7.0}, 1e-9));
  CHECK_FALSE(kd.contains({1.01, 0.0}, 1e-9));

  const Body2 ks = k_cone({1.0, 1.0}, Body2::square());
  CHECK(ks.contains({1.0, -50.0}, 1e-9));
  CHECK(ks.contains({-50.0, 1.0}, 1e-9));
  CHECK_FALSE(ks.contains({1.01, 0.0}, 1e-9));
  CHECK_FALSE(ks.contains({0.0, 1.01}, 1e-9));

  const Body2 kp = k_cone({0.0, -1.0}, preset_body("parabola"));
  CHECK(kp.contains({100.0, -1.0}, 1e-9));
  CHECK_FALSE(kp.contains({0.0, -1.01}, 1e-9));
  CHECK_THROWS(k_cone({0.0, 0.0}, preset_body("disk")));
}

TEST_CASE("rotundity predicate") {
  CHECK(is_rotund(preset_body("disk")));
  CHECK(is_rotund(preset_body("parabola")));
  CHECK_FALSE(is_rotund(Body2::square()));
  CHECK_FALSE(is_rotund(preset_body("half-disk")));
}

TEST_CASE("property: supporting half-planes at random boundary points contain random body points") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> s(0.0, 1.0);
  for (const std::string& name : preset_names()) {
    const Body2 c = preset_body(name);
    const BoundaryArc arc = c.boundary(c.default_window(2.0));
    for (int i = 0; i < 50; ++i) {
      const int piece = static_cast<int>(s(rng) * arc.pieces().size()) % static_cast<int>(arc.pieces().size());
      const Vec2 x = arc.point(piece, s(rng));
      const auto hs = k_cone_halfplanes(x, c);
      for (int j = 0; j < 20; ++j) {
        const Vec2 p = c.project(c.witness() + Vec2{s(rng) - 0.5, s(rng) - 0.5} * 8.0).point;
        for (const HalfPlane& h : hs) CHECK(h.slack(p) >= -1e-8 * (1.0 + norm(p)));
      }
    }
  }
}

TEST_CASE("convex hull helper") {
  const auto h = convex_hull({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {1, 0}});
  CHECK(h.size() == 4);
  CHECK(polygon_contains(h, {0.5, 0.5}));
  CHECK_FALSE(polygon_contains(h, {1.5, 0.5}));
}
