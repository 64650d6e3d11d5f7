#pragma once

#include <optional>

#include "qcext/body.hpp"

namespace qcext {

inline constexpr double kDefaultTol = 1e-9;
inline constexpr int kDefaultResolution = 2048;

bool contains(const Body2& c, Vec2 p, double tol = kDefaultTol);
Projection project(Vec2 p, const Body2& c);
SupportValue support(const Body2& c, Vec2 dir);
NormalArc supporting_normals(const Body2& c, Vec2 x, double tol = kDefaultTol);
Cone2 recession_cone(const Body2& c);

struct SlopeEstimate {
  double value = 0.0;     // last slope iterate
  double previous = 0.0;  // the iterate before it
  double t_last = 0.0;    // largest t used
  bool is_zero(double zero_tol = 1e-4) const { return std::abs(value) < zero_tol; }
};
// lim d(x0 + t v, C) / t, estimated by (phi(2t) - phi(t)) / t for t = 1, 2, 4, ...
SlopeEstimate asymptotic_slope(Vec2 x0, Vec2 v, const Body2& c);

struct AsymptoticWitness {
  bool found = false;
  std::optional<Vec2> x0;
  Vec2 direction;
  double slope = 0.0;
};
AsymptoticWitness is_asymptotic_direction(const Body2& c, Vec2 v);
// Searches the extreme recession directions, which are the only candidates in the plane.
AsymptoticWitness find_asymptotic_direction(const Body2& c);

// Sampled modulus of local uniform rotundity at a boundary point.
double delta_modulus(const Body2& c, Vec2 x, double eps, int resolution = kDefaultResolution);

// Closure of z + cone(E - z) for z outside int E.
Cone2 cone_from(Vec2 z, const Body2& e, double tol = kDefaultTol);
// Normals n with sup n.E <= n.z (closed CCW arc); z must lie outside int E.
NormalArc separating_normals(Vec2 z, const Body2& e);
// C intersected with the boundary of the cone from z; z must lie outside C.
BoundaryArc gamma_set(Vec2 z, const Body2& c);
// Intersection of the supporting half-planes at a boundary point.
Body2 k_cone(Vec2 x, const Body2& c, double tol = kDefaultTol);
std::vector<HalfPlane> k_cone_halfplanes(Vec2 x, const Body2& c, double tol = kDefaultTol);

// Boundary contains no segment of positive length (checked on the representation).
bool is_rotund(const Body2& c);
// Minimum sampled delta over a boundary net inside the window.
double min_sampled_delta(const Body2& c, double eps, const Window& w, int points = 64,
                         int resolution = kDefaultResolution);

// Convex hull (CCW, no collinear points) of a finite point set.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts);
// Point in a CCW convex polygon, with an absolute tolerance on the edge test.
bool polygon_contains(const std::vector<Vec2>& hull, Vec2 q, double tol = 0.0);

}  // namespace qcext
