#include <doctest.h>

#include <cmath>

#include "qcext/counterexamples.hpp"
#include "qcext/io.hpp"

using namespace qcext;

TEST_CASE("no-lip on the unit disk follows the circular profile") {
  const NoLipResult r = gen_no_lip(preset_body("disk"), {16, 720, true});
  const NoLipCertificate& c = r.cert;
  CHECK(c.eps == doctest::Approx(0.5));
  CHECK(c.theta == doctest::Approx(1.0));
  REQUIRE(c.rows.size() == 17);
  auto g = [](double z) { return 1.0 - std::sqrt(1.0 - z * z); };
  for (std::size_t k = 0; k + 1 < c.rows.size(); ++k) {
    const NoLipRow& w = c.rows[k];
    CHECK(w.z == doctest::Approx(0.5 / std::ldexp(1.0, w.k)));
    CHECK(w.g == doctest::Approx(g(w.z)).epsilon(1e-9));
    CHECK(w.delta == doctest::Approx(g(w.z) / 2.0 - g(w.z / 2.0)).epsilon(1e-6));
    CHECK(w.pq == doctest::Approx(2.0 * w.delta + c.rows[k + 1].alpha).epsilon(1e-12));
    CHECK(w.product == doctest::Approx(std::ldexp(w.pq, w.k)).epsilon(1e-12));
    CHECK(w.gap == doctest::Approx(c.eps / std::ldexp(1.0, w.k + 2)));
    CHECK(c.rows[k + 1].beta == doctest::Approx(w.beta + w.gap));
  }
  CHECK(c.lower_bounds_increasing(2, 16));
  CHECK(c.products_decreasing(2, 16));
  // delta ~ z^2 / 8 so the Lipschitz lower bound doubles each step
  const double q = c.rows[14].lower_bound / c.rows[13].lower_bound;
  CHECK(q == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("no-lip on the square has a flat profile and K_k = 2^(k-2)") {
  const NoLipResult r = gen_no_lip(Body2::square(), {12, 720, true});
  for (const NoLipRow& w : r.cert.rows) {
    CHECK(w.delta == 0.0);
    CHECK(w.alpha == doctest::Approx(std::pow(4.0, -w.k)));
    CHECK(w.lower_bound == doctest::Approx(std::ldexp(1.0, w.k - 2)).epsilon(1e-9));
  }
}

TEST_CASE("no-lip function stays within the level gaps") {
  const NoLipResult r = gen_no_lip(preset_body("disk"), {10, 720, true});
  const NoLipCertificate& c = r.cert;
  for (std::size_t k = 1; k + 1 < c.rows.size(); ++k) {
    const Vec2 p = c.frame.to_world(c.rows[k].p);
    CHECK(r.f(p) <= c.rows[k + 1].beta + 1e-9);
    CHECK(r.f(p) >= 0.0);
  }
}

TEST_CASE("no-uc on the parabola") {
  const NoUCResult r = gen_no_uc(preset_body("parabola"), {32, 1e-2});
  const NoUCCertificate& c = r.cert;
  REQUIRE_FALSE(c.points.empty());
  CHECK(c.points[0].x == doctest::Approx(1.0));
  CHECK(c.points[0].y == doctest::Approx(0.0).scale(1.0));
  // sampled ratios bound the true infimum 2/sqrt(5) from above
  CHECK(c.beta >= 2.0 / std::sqrt(5.0) - 1e-9);
  CHECK(c.beta <= 2.0 / std::sqrt(5.0) + 2e-3);
  CHECK(c.min_level_gap() >= c.beta * (1.0 - 1e-6));
  CHECK(c.gaps.size() == 32);
  CHECK(c.monotone_from() <= 2);
  CHECK(c.gaps.back() < c.gaps.front());
}

TEST_CASE("no-uc gaps shrink faster for cosh than for the parabola") {
  const NoUCResult p = gen_no_uc(preset_body("parabola"), {16, 1e-2});
  const NoUCResult h = gen_no_uc(preset_body("cosh"), {16, 1e-2});
  CHECK(h.cert.gaps.back() < p.cert.gaps.back());
}

TEST_CASE("generators reject bodies outside their hypotheses") {
  const Body2 disk = preset_body("disk");
  CHECK_THROWS_WITH(gen_no_uc(disk), doctest::Contains("bounded"));
  CHECK_THROWS(gen_no_qc(disk));
  CHECK_THROWS(gen_non_rotund(disk));
  CHECK_THROWS(gen_no_lip(disk, {0, 720, true}));
}

TEST_CASE("forcing certificates") {
  const ForcingResult q = gen_no_qc(preset_body("hypograph"));
  CHECK(q.cert.kind == "no-qc");
  CHECK(q.cert.all_forcing_meet_c());
  for (std::size_t i = 0; i < q.cert.levels.size(); ++i) {
    // the top level has nothing above it
    if (i + 1 < q.cert.levels.size()) CHECK(q.cert.levels[i].gap > 0.0);
    CHECK(q.cert.levels[i].witness_excluded);
  }

  const ForcingResult s = gen_non_rotund(Body2::square());
  CHECK(s.cert.all_forcing_meet_c());
  REQUIRE(s.cert.levels.size() >= 2);
  for (std::size_t i = 1; i + 1 < s.cert.levels.size(); ++i) CHECK(s.cert.levels[i].gap < s.cert.levels[i - 1].gap);

  const ForcingResult t = gen_non_rotund(preset_body("triangle"));
  REQUIRE(t.cert.anchor);
  CHECK(t.cert.alpha_last > t.cert.f_at_anchor);
}

TEST_CASE("usc example") {
  const UscResult u = gen_usc_counterexample();
  CHECK(u.f({0.0, -1.0}) == 0.0);
  CHECK(u.f({0.0, 0.0}) == 1.0);
  CHECK(u.f({0.5, 0.5}) == doctest::Approx(0.5));
  CHECK(u.record.f_bottom == 0.0);
  CHECK(u.record.f_origin == 1.0);
  const UscForcingCheck chk = verify_usc_forcing({0.5, 1e-3});
  CHECK(chk.per_radius.size() == 2);
  for (const auto& [r, in] : chk.per_radius) CHECK(in);
}

TEST_CASE("characterize") {
  CHECK(characterize(preset_body("disk")).cls == ExtClass::UcExtendable);
  CHECK(characterize(preset_body("parabola")).cls == ExtClass::CExtendable);
  CHECK(characterize(Body2::square()).cls == ExtClass::QcExtendable);
  const Classification h = characterize(preset_body("hypograph"));
  CHECK(h.cls == ExtClass::NotQcExtendable);
  CHECK(h.has_asymptotic_direction);
  const Classification d = characterize(preset_body("disk"));
  CHECK(d.bounded);
  CHECK(d.rotund);
  CHECK(d.delta_min > 0.0);
  for (const GradeVerdict& g : d.grades)
    if (g.grade == "lipschitz") CHECK_FALSE(g.granted);
  CHECK(std::string(class_name(ExtClass::QcExtendable)) == "QC_EXTENDABLE");
}
