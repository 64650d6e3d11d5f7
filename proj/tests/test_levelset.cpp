#include <doctest.h>

#include <cmath>
#include <random>

#include "qcext/counterexamples.hpp"
#include "qcext/io.hpp"
#include "qcext/levelset.hpp"

using namespace qcext;

namespace {

double square_distance(Vec2 p, double half) {
  const double dx = std::max(std::abs(p.x) - half, 0.0), dy = std::max(std::abs(p.y) - half, 0.0);
  return std::hypot(dx, dy);
}

}  // namespace

TEST_CASE("eval_levels") {
  const Body2 c = Body2::disk({0.0, 0.0}, 2.0);
  const LevelFamily single(c, {{0.0, c}});
  CHECK(eval_levels(single, {1.0, 1.0}) == 0.0);

  const LevelFamily two(c, {{0.0, Body2::disk({0.0, 0.0}, 1.0)}, {1.0, c}});
  CHECK(eval_levels(two, {1.5, 0.0}) == 1.0);
  CHECK(eval_levels(two, {0.5, 0.0}) == 0.0);

  const LevelFamily partial(c, {{0.0, Body2::disk({0.0, 0.0}, 1.0)}});
  CHECK(eval_levels(partial, {1.5, 0.0}) == kDefaultSentinel);
  CHECK_THROWS(eval_levels(two, {3.0, 0.0}));
}

TEST_CASE("level families: nesting report and level order") {
  const Body2 c = Body2::disk({0.0, 0.0}, 2.0);
  const LevelFamily bad(c, {{0.0, Body2::disk({1.0, 0.0}, 1.0)}, {1.0, Body2::disk({-1.0, 0.0}, 1.0)}});
  CHECK_FALSE(check_nesting(bad, c.default_window(2.0)).nested);
  const LevelFamily good(c, {{0.0, Body2::disk({0.0, 0.0}, 1.0)}, {1.0, c}});
  CHECK(check_nesting(good, c.default_window(2.0)).nested);
  CHECK_THROWS(LevelFamily(c, {{1.0, Body2::disk({0.0, 0.0}, 1.0)}, {0.0, c}}));
}

TEST_CASE("staircase examples") {
  const Body2 c = Body2::square(1.5);
  const QCFunction f0 = staircase_qc(c, {c}, {0.0}, {});
  CHECK(f0({1.0, -1.2}) == 0.0);

  // two concentric squares: f = clamp(d(x, inner), 0, 1)
  const QCFunction f = staircase_qc(c, {Body2::square(0.5), c}, {0.0, 1.0}, {1.0});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 2000; ++i) {
    const Vec2 p{u(rng), u(rng)};
    CHECK(f(p) == doctest::Approx(std::clamp(square_distance(p, 0.5), 0.0, 1.0)).epsilon(1e-9));
  }
  CHECK_THROWS(staircase_qc(c, {Body2::square(0.5), c}, {0.0, 1.0}, {5.0}));
}

TEST_CASE("tilde_f cases") {
  TildeData d{Body2::halfplanes({{{0.0, -1.0}, 1.0}}), {0.0, 0.0}, {1.0, 0.0},
              {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}}, {0.0, 1.0, 2.0, 3.0, 4.0},
              std::vector<HalfPlane>(4, HalfPlane{{1.0, 0.0}, 100.0})};
  const QCFunction f = tilde_f(d);
  CHECK(f({-0.5, 0.0}) == 0.0);
  // ramp: alpha_1 + (alpha_3 - alpha_1)(h - alpha_1)/(alpha_2 - alpha_1)
  CHECK(f({0.5, 0.0}) == doctest::Approx(1.0));
  CHECK(f({2.5, 0.0}) == doctest::Approx(2.0 + 2.0 * 0.5));
  // alpha_2 <= h < alpha_3 inside H_2
  CHECK(f({1.5, 0.0}) == doctest::Approx(2.0));
  d.alphas[1] = 0.0;
  CHECK_THROWS(tilde_f(d));
}

TEST_CASE("compose_projection and line extension") {
  const QCFunction t(std::nullopt, [](Vec2 p) { return p.x; }, "t");
  const QCFunction g = compose_projection(t, {1.0, 0.0, 0.0, 0.0});
  CHECK(g({0.7, -3.0}) == doctest::Approx(0.7));
  const QCFunction k(std::nullopt, [](Vec2) { return 4.0; }, "const");
  CHECK(compose_projection(k, {0.3, 1.0, -2.0, 0.5})({9.0, 1.0}) == 4.0);

  const auto e = extend_line_constant([](double s) { return s; }, 0.0, 1.0);
  CHECK(e(-3.0) == 0.0);
  CHECK(e(0.25) == 0.25);
  CHECK(e(7.0) == 1.0);
  CHECK(extend_line_constant([](double) { return 2.0; }, 0.0, 1.0)(-9.0) == 2.0);
  const auto a = extend_line_constant([](double s) { return std::abs(s); }, -1.0, 1.0);
  CHECK(a(-5.0) == 1.0);
  CHECK(a(5.0) == 1.0);
}

TEST_CASE("McShane extension") {
  const Body2 c = preset_body("disk");
  // inf_u {f(u) + L|x - u|}: a constant c continues as c + L d(x, C)
  const QCFunction k(c, [](Vec2) { return 3.0; }, "const");
  const QCFunction mk = mcshane_extend(k, 1.0);
  CHECK(mk({0.3, -0.4}) == 3.0);
  CHECK(mk({5.0, 5.0}) == doctest::Approx(3.0 + std::sqrt(50.0) - 1.0).epsilon(1e-6));

  // a linear form is reproduced wherever x - t g reaches C
  const Vec2 g{0.6, -0.8};
  const QCFunction lin(c, [g](Vec2 p) { return dot(g, p); }, "linear");
  const QCFunction ml = mcshane_extend(lin, 1.0);
  for (double s : {0.0, 0.5, 2.0, 7.0}) {
    const Vec2 p = Vec2{0.1, -0.2} + g * s;
    CHECK(ml(p) == doctest::Approx(dot(g, p)).epsilon(1e-6));
  }

  const Vec2 x0{0.2, 0.1};
  const QCFunction dfun(c, [x0](Vec2 p) { return dist(p, x0) + 1.0; }, "distance");
  const QCFunction md = mcshane_extend(dfun, 1.0);
  for (Vec2 p : {Vec2{3.0, 1.0}, Vec2{-2.0, 4.0}, Vec2{0.5, 0.5}})
    CHECK(md(p) == doctest::Approx(dist(p, x0) + 1.0).epsilon(1e-6));
}

TEST_CASE("quasiconvex_check verdicts") {
  const SampleDomain sq = SampleDomain::box({-1.0, -1.0}, {1.0, 1.0});
  CHECK(quasiconvex_check([](Vec2 p) { return dot(p, p); }, sq, 20000).passed());
  const QCReport r = quasiconvex_check([](Vec2 p) { return std::abs(p.x * p.y); }, sq, 10000, 42);
  CHECK_FALSE(r.passed());
  REQUIRE(r.witness);
  const auto [x, y, z] = *r.witness;
  const double fx = std::abs(x.x * x.y), fy = std::abs(y.x * y.y), fz = std::abs(z.x * z.y);
  CHECK(fz - std::max(fx, fy) == doctest::Approx(r.worst));
  CHECK(r.worst >= 0.2);

  const Body2 c = preset_body("parabola");
  std::vector<Body2> bodies;
  std::vector<double> levels, gaps;
  for (int k = 0; k < 4; ++k) {
    bodies.push_back(c.clipped({HalfPlane{{0.0, 1.0}, double(k)}}));
    levels.push_back(k);
    if (k < 3) gaps.push_back(1.0);
  }
  const QCFunction f = staircase_qc(c, bodies, levels, gaps);
  CHECK(quasiconvex_check([&](Vec2 p) { return f(p); }, SampleDomain::in_body(c, {-3.0, -1.0}, {3.0, 8.0}), 100000)
            .passed());
}

TEST_CASE("modulus and Lipschitz estimates") {
  const SampleDomain sq = SampleDomain::box({-1.0, -1.0}, {1.0, 1.0});
  const Vec2 g{3.0, 4.0};
  CHECK(lipschitz_estimate([g](Vec2 p) { return dot(g, p); }, sq, 20000) == doctest::Approx(5.0).epsilon(0.02));
  const ModulusTable z = modulus_estimate([](Vec2) { return 1.0; }, sq, 5000, {0.1, 0.5, 1.0});
  for (const auto& [t, w] : z.rows) CHECK(w == 0.0);

  const Body2 c = preset_body("disk");
  const NoLipResult nl = gen_no_lip(c, {8, 360, true});
  const double lip = lipschitz_estimate([&](Vec2 p) { return nl.f(p); }, SampleDomain::in_body(c, {-1, -1}, {1, 1}), 20000);
  CHECK(lip <= *nl.f.lipschitz + 1e-9);
}

TEST_CASE("property: staircase sublevel recovery on random cut families") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi), u(-1.0, 1.0);
  const Body2 c = preset_body("disk");
  for (int trial = 0; trial < 10; ++trial) {
    const Vec2 h = unit_from_angle(ang(rng));
    std::vector<Body2> bodies;
    std::vector<double> levels, gaps;
    for (int k = 0; k < 3; ++k) {
      bodies.push_back(c.clipped({HalfPlane{h, -0.6 + 0.5 * k}}));
      levels.push_back(0.5 * k);
      if (k < 2) gaps.push_back(0.5);
    }
    const QCFunction f = staircase_qc(c, bodies, levels, gaps);
    for (int i = 0; i < 300; ++i) {
      const Vec2 p{u(rng), u(rng)};
      if (!c.contains(p, 0.0)) continue;
      for (int k = 0; k < 3; ++k) {
        if (bodies[k].contains(p, 0.0)) CHECK(f(p) <= levels[k] + 1e-9);
        if (k < 2 && !bodies[k + 1].contains(p, 0.0)) CHECK(f(p) >= levels[k] + gaps[k] * (1.0 - 1e-9));
      }
    }
  }
}
