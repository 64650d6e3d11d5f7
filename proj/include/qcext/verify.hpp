#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qcext/body.hpp"
#include "qcext/io.hpp"

namespace qcext {

struct CaseFailure {
  std::string check;
  std::string detail;
  std::vector<Vec2> witness;
};

struct SuiteReport {
  std::string name;
  std::uint64_t seed = 0;
  std::int64_t cases = 0;
  std::vector<CaseFailure> failures;
  double seconds = 0.0;
  bool passed() const { return failures.empty(); }
  // Hash over everything except wall time.
  std::string content_hash() const;
  Json to_json() const;
};

struct SuiteConfig {
  std::int64_t budget = 10000;  // cases per cheap predicate; expensive ones use budget / 50
  bool plant_failure = false;   // adds the |xy| quasiconvexity case to the levelset suite
};

std::vector<std::string> suite_names();
SuiteReport run_suite(const std::string& name, std::uint64_t seed, const SuiteConfig& cfg = {});

// Random hulls of Gaussian points, random half-plane intersections and randomized analytic bodies.
std::vector<Body2> fuzz_bodies(std::uint64_t seed, int n);
std::string body_hash(const Body2& b);

// Greedy shrinking toward the centroid while `still_fails` holds; stops after `budget` evaluations.
std::vector<Vec2> minimize_witness(const std::function<bool(const std::vector<Vec2>&)>& still_fails,
                                   std::vector<Vec2> pts, int budget = 200);

// Property suite for extend_function on a staircase test family over C.
SuiteReport extension_property_suite(const Body2& c, std::uint64_t seed, const SuiteConfig& cfg = {});

struct CriterionResult {
  int id = 0;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};
CriterionResult run_criterion(int id, std::uint64_t seed = 42);
inline constexpr int kCriteria = 8;

}  // namespace qcext
