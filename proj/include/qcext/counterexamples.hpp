#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcext/body.hpp"
#include "qcext/geometry.hpp"
#include "qcext/levelset.hpp"

namespace qcext {

// Affine chart world = origin + t * e1 + s * e2 (columns need not be orthonormal).
struct Frame {
  Vec2 origin;
  Vec2 e1{1.0, 0.0};
  Vec2 e2{0.0, 1.0};
  Vec2 to_world(Vec2 ts) const { return origin + e1 * ts.x + e2 * ts.y; }
  Vec2 to_frame(Vec2 p) const;
  // Image of the frame half-plane {a . (t, s) <= b}.
  HalfPlane halfplane_to_world(Vec2 a, double b) const;
};

struct NoLipRow {
  int k = 0;
  double z = 0.0;        // eps / 2^k
  double g = 0.0;        // g(eps / 2^k)
  double delta = 0.0;    // g(z)/2 - g(z/2)
  double alpha = 0.0;    // alpha_k
  double beta = 0.0;     // staircase level beta_k
  double gap = 0.0;      // eps / 2^(k+2)
  double pq = 0.0;       // |P_k Q_k| = 2 delta + alpha_{k+1}
  double product = 0.0;  // 2^k (2 delta + alpha_{k+1})
  double lower_bound = 0.0;  // K_k
  double line_intercept = 0.0;  // l_k: v = intercept + slope * u
  double line_slope = 0.0;
  Vec2 p;  // P_k (frame)
  Vec2 q;  // Q_k (frame)
  std::vector<HalfPlane> body;  // D_k = E intersected with these (world)
};

struct NoLipCertificate {
  double eps = 0.0;
  double theta = 1.0;
  double scale = 1.0;  // world length of one frame unit
  Vec2 support_normal;
  Vec2 support_point;
  Frame frame;
  std::vector<std::pair<double, double>> profile;  // (z, g(z)) on [0, eps]
  std::vector<NoLipRow> rows;
  bool lower_bounds_increasing(int from, int to) const;
  bool products_decreasing(int from, int to) const;
};

struct NoLipResult {
  QCFunction f;
  NoLipCertificate cert;
};

struct NoLipOptions {
  int kmax = 24;
  int scan = 720;
  bool check_gaps = true;
};

// Normal direction at which the boundary is flattest (largest sampled radius of curvature).
Vec2 choose_support_direction(const Body2& e, int scan = 720);
NoLipResult gen_no_lip(const Body2& e, const NoLipOptions& opt = {});

struct NoUCCertificate {
  Vec2 origin;
  Vec2 h;          // unit functional
  Vec2 v;          // recession direction scaled so h(v) = 1
  Vec2 u;          // kernel direction of h along the chosen branch
  Vec2 c0;         // minimizer of h on C
  double m = 0.0;  // h(c0)
  double beta = 0.0;
  std::vector<Vec2> points;    // y_1, y_2, ...
  std::vector<double> alphas;  // alpha_n
  std::vector<HalfPlane> halfplanes;  // H_1, H_2, ...
  std::vector<double> gaps;   // gap_k for k = 1..kmax
  double min_level_gap() const;
  // First index from which gaps are non-increasing.
  int monotone_from() const;
};

struct NoUCResult {
  QCFunction f;
  NoUCCertificate cert;
};

struct NoUCOptions {
  int kmax = 64;
  double beta_step = 1e-2;
};
NoUCResult gen_no_uc(const Body2& c, const NoUCOptions& opt = {});

struct ForcingLevel {
  int n = 0;
  double eps = 0.0;
  double b = 0.0;
  double alpha = 0.0;
  double gap = 0.0;
  HalfPlane forcing;        // world image of {s <= 1 - eps/b (t - b)}
  double chord_length = 0.0;  // length of the forcing line inside C
  bool witness_excluded = false;  // witness lies outside the open forcing half-plane
};

struct ForcingCertificate {
  std::string kind;
  Frame frame;
  std::vector<ForcingLevel> levels;
  Vec2 witness;          // frame point (0, 1 + eps_1) in world coordinates
  std::optional<Vec2> anchor;  // frame (0, 1) for the jump pair
  double alpha_first = 0.0;
  double alpha_last = 0.0;
  double f_at_anchor = 0.0;
  bool all_forcing_meet_c() const;
};

struct ForcingResult {
  QCFunction f;
  ForcingCertificate cert;
};

struct ForcingOptions {
  int kmax = 6;
  bool check_gaps = true;
};
ForcingResult gen_no_qc(const Body2& c, const ForcingOptions& opt = {});
ForcingResult gen_non_rotund(const Body2& c, const ForcingOptions& opt = {10, true});

struct UscRecord {
  Body2 domain;
  double f_bottom = 0.0;  // f(0, -1)
  double f_origin = 0.0;  // f(0, 0)
  Vec2 segment_a{0.0, 1.0 / 3.0};
  Vec2 segment_b{1.0, 1.0 / 3.0};
};
struct UscResult {
  QCFunction f;
  UscRecord record;
};
UscResult gen_usc_counterexample();
// Level family of closed sublevel approximations of the usc example (levels j/m, j = 0..m).
LevelFamily usc_family(int m = 8);

struct UscForcingCheck {
  bool origin_forced = true;  // (0,0) lies in every tested hull
  double f_origin = 0.0;
  std::vector<std::pair<double, bool>> per_radius;  // (ball radius, hull contains origin)
};
UscForcingCheck verify_usc_forcing(const std::vector<double>& radii = {0.5, 0.1, 1e-2, 1e-3, 1e-4});

enum class ExtClass { Trivial, UcExtendable, CExtendable, QcExtendable, NotQcExtendable };
const char* class_name(ExtClass c);

struct GradeVerdict {
  std::string grade;      // "uniformly-continuous", "continuous", "quasiconvex", "lipschitz"
  bool granted = false;
  std::string generator;  // witness generator when denied
};

struct Classification {
  bool affine = false;
  bool dim_le_1 = false;
  bool bounded = false;
  bool rotund = false;
  double delta_min = 0.0;
  bool has_asymptotic_direction = false;
  std::optional<AsymptoticWitness> asymptotic;
  ExtClass cls = ExtClass::Trivial;
  std::vector<GradeVerdict> grades;
};
Classification characterize(const Body2& c);

}  // namespace qcext
