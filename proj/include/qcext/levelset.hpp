#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qcext/body.hpp"

namespace qcext {

inline constexpr double kDefaultSentinel = std::numeric_limits<double>::max();

struct LevelEntry {
  double level = 0.0;
  std::optional<Body2> body;  // empty optional means the empty set
};

// Finite nested family of bodies B_k with strictly increasing levels inside an ambient body.
class LevelFamily {
 public:
  LevelFamily(Body2 ambient, std::vector<LevelEntry> entries, double sentinel = kDefaultSentinel);

  const Body2& ambient() const { return ambient_; }
  const std::vector<LevelEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  double sentinel() const { return sentinel_; }
  double level(std::size_t k) const { return entries_.at(k).level; }
  const std::optional<Body2>& body(std::size_t k) const { return entries_.at(k).body; }
  // Largest difference between consecutive levels.
  double max_level_gap() const;
  // Index of the first body containing x, or size() when none does.
  std::size_t first_containing(Vec2 x) const;

 private:
  Body2 ambient_;
  std::vector<LevelEntry> entries_;
  double sentinel_;
};

struct NestingReport {
  bool nested = true;
  bool strictly_nested = true;
  double min_margin = kInf;  // smallest sampled depth of boundary(B_k) relative-interior points inside B_{k+1}
  std::optional<Vec2> witness;
};
// Samples boundary points of each B_k that lie in int C and checks them against B_{k+1}.
NestingReport check_nesting(const LevelFamily& fam, const Window& w, int samples = 256, double tol = 1e-9);

double eval_levels(const LevelFamily& fam, Vec2 x, double tol = 1e-9);

struct ModulusTable {
  std::vector<std::pair<double, double>> rows;  // (t, omega(t)), non-decreasing
  double at(double t) const;
};

// Evaluation oracle with optional domain (none means the plane) and regularity metadata.
class QCFunction {
 public:
  using Eval = std::function<double(Vec2)>;
  QCFunction(std::optional<Body2> domain, Eval eval, std::string kind = "custom");

  double operator()(Vec2 p) const { return eval_(p); }
  const std::optional<Body2>& domain() const { return domain_; }
  const std::string& kind() const { return kind_; }

  std::optional<double> lipschitz;
  std::optional<ModulusTable> modulus;

 private:
  std::optional<Body2> domain_;
  Eval eval_;
  std::string kind_;
};

struct StaircaseOptions {
  bool check_gaps = true;
  int samples = 512;
  std::optional<Window> window;  // defaults to the ambient's extension window
};

// 1-Lipschitz staircase: beta_0 on D_0, then beta_k + min(d(x, D_k), s_k) on D_{k+1} \ D_k.
// With one gap per body the residual C \ D_last ramps once more; with one gap fewer it is constant.
QCFunction staircase_qc(const Body2& ambient, std::vector<Body2> bodies, std::vector<double> levels,
                        std::vector<double> gaps, const StaircaseOptions& opt = {});

struct TildeData {
  Body2 domain;
  Vec2 origin;                // interior point where h vanishes
  Vec2 h;                     // functional: h(y) = h . (y - origin)
  std::vector<Vec2> points;   // y_1, y_2, ... (index 0 holds y_1)
  std::vector<double> alphas; // alpha_n = h(y_n)
  std::vector<HalfPlane> halfplanes;  // H_k for k = 1..; index 0 holds H_1
};
double tilde_h(const TildeData& d, Vec2 y);
// Three-case function on [h >= 0], zero on [h < 0]; continued linearly past the last computed level.
QCFunction tilde_f(TildeData data);

// f o P for a linear map P (2x2, row-major).
QCFunction compose_projection(const QCFunction& f, std::array<double, 4> p, std::optional<Body2> domain = {});

// Constant continuation of f from [a, b] to the line.
std::function<double(double)> extend_line_constant(std::function<double(double)> f, double a, double b);

struct McShaneOptions {
  int boundary_samples = 512;
  int grid = 48;
  std::optional<Window> window;
};
// inf over sampled u in C of f(u) + L |x - u|, refined by local pattern search.
QCFunction mcshane_extend(const QCFunction& f, double lipschitz, const McShaneOptions& opt = {});

struct QCReport {
  std::int64_t triples = 0;
  std::int64_t violations = 0;
  double worst = 0.0;  // largest f(z) - max(f(x), f(y))
  std::optional<std::array<Vec2, 3>> witness;  // x, y, z
  bool passed() const { return violations == 0; }
};

// Uniform samples from a box, optionally restricted to a body by rejection.
struct SampleDomain {
  std::optional<Body2> body;
  Vec2 lo{-1.0, -1.0};
  Vec2 hi{1.0, 1.0};
  static SampleDomain box(Vec2 lo, Vec2 hi) { return {std::nullopt, lo, hi}; }
  static SampleDomain in_body(const Body2& b, Vec2 lo, Vec2 hi) { return {b, lo, hi}; }
  Vec2 sample(std::mt19937_64& rng) const;
};

QCReport quasiconvex_check(const std::function<double(Vec2)>& f, const SampleDomain& dom, std::int64_t n_triples,
                           std::uint64_t seed = 42, double tol = 1e-9);

ModulusTable modulus_estimate(const std::function<double(Vec2)>& f, const SampleDomain& dom, std::int64_t pairs,
                              const std::vector<double>& grid, std::uint64_t seed = 42);
double lipschitz_estimate(const std::function<double(Vec2)>& f, const SampleDomain& dom, std::int64_t pairs,
                          std::uint64_t seed = 42);

}  // namespace qcext
