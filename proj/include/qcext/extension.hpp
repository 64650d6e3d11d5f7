#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "qcext/body.hpp"
#include "qcext/levelset.hpp"

namespace qcext {

// e(B) as a list of half-planes, with the two special cases e(empty) and e(C).
struct ExtendedBody {
  enum class Special { None, Empty, Plane };
  Special special = Special::None;
  std::vector<HalfPlane> halfplanes;

  bool contains(Vec2 p, double tol = 1e-9) const;
  // Smallest slack over the half-planes (+inf for the plane, -inf for the empty set).
  double margin(Vec2 p) const;
  bool contains_interior(Vec2 p, double tau = 1e-9) const { return margin(p) > tau; }
};

struct ExtendOptions {
  int resolution = 2048;
  double tol = 1e-9;
  std::optional<Window> window;  // working window for unbounded geometry
};

// Closure of int C intersected with the boundary of B, as pieces of the boundary of B.
BoundaryArc relative_boundary(const Body2& b, const Body2& c, const Window& w, double tau = 1e-9);

// Irredundant subset of half-planes whose intersection, clipped to the box, has an edge
// of positive length. Returns nullopt when the clipped intersection is empty.
std::optional<std::vector<HalfPlane>> prune_halfplanes(const std::vector<HalfPlane>& hs, Vec2 box_lo, Vec2 box_hi);
// Vertices (CCW) of the intersection clipped to the box.
std::vector<Vec2> halfplane_polygon(const std::vector<HalfPlane>& hs, Vec2 box_lo, Vec2 box_hi);

ExtendedBody extend_body(const std::optional<Body2>& b, const Body2& c, const ExtendOptions& opt = {});

enum class Grade { Continuous, UscOnly, None };
const char* grade_name(Grade g);
Grade extension_grade(const Body2& c);

class ExtensionResult {
 public:
  ExtensionResult(LevelFamily fam, std::vector<ExtendedBody> ext, Grade grade, double tau);
  const LevelFamily& family() const { return family_; }
  const std::vector<ExtendedBody>& extended() const { return extended_; }
  Grade grade() const { return grade_; }
  // Index of the level assigned to x, or size() for the sentinel.
  std::size_t level_index(Vec2 x) const;
  double operator()(Vec2 x) const;

 private:
  LevelFamily family_;
  std::vector<ExtendedBody> extended_;
  Grade grade_;
  double tau_;
};

// F = eval_levels on C; off C, the smallest level whose extended body holds x in its interior.
ExtensionResult extend_function(const LevelFamily& fam, const ExtendOptions& opt = {});

using BodyGenerator = std::function<std::optional<Body2>(long long)>;

// Memoized e(B_k) for a generated family; reused across many covering queries.
class CoveringCache {
 public:
  CoveringCache(Body2 c, BodyGenerator gen, ExtendOptions opt = {});
  const ExtendedBody& extended(long long k);
  bool member(long long k, Vec2 x);
  // Smallest k with x in e(B_k), searched up to `budget` by exponential then binary search.
  long long index(Vec2 x, long long budget);
  std::size_t computed() const { return cache_.size(); }

 private:
  Body2 c_;
  BodyGenerator gen_;
  ExtendOptions opt_;
  std::map<long long, ExtendedBody> cache_;
};

// Smallest k with x in e(B_k), searched up to `budget` by exponential then binary search.
long long covering_index(const Body2& c, const BodyGenerator& gen, Vec2 x, long long budget,
                         const ExtendOptions& opt = {});
std::size_t covering_index(const LevelFamily& fam, Vec2 x, const ExtendOptions& opt = {});

}  // namespace qcext
