#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "qcext/profile.hpp"
#include "qcext/vec2.hpp"

namespace qcext {

struct Disk {
  Vec2 center;
  double radius = 1.0;
};

// transform({(u, w) : w >= g(u)}); the linear part of the transform must be orthogonal.
struct Epigraph {
  Profile profile = Profile::parabola();
  Affine2 transform;
};

using Base = std::variant<std::monostate, Disk, Epigraph>;

// Region of interest used to clip unbounded boundary pieces.
struct Window {
  Vec2 center;
  double radius = 64.0;
  bool contains(Vec2 p) const { return dist(p, center) <= radius; }
};

struct Projection {
  Vec2 point;
  double distance = 0.0;
};

struct SupportValue {
  double value = kInf;
  std::optional<Vec2> point;  // maximizer (or far point of a maximizing sequence)
  bool attained = false;
};

// Closed arc of outward unit normals, counterclockwise from `first` to `last`.
struct NormalArc {
  Vec2 first;
  Vec2 last;
  bool singleton(double tol = 1e-12) const { return dist(first, last) <= tol; }
  double span() const { return singleton() ? 0.0 : ccw_angle(first, last); }
  bool contains(Vec2 n, double tol = 1e-12) const;
};

// Closed convex cone apex + cone(directions). Boundary directions run CCW from lo to hi.
struct Cone2 {
  enum class Kind { Trivial, Ray, Wedge, HalfPlane, Line, Full };
  Kind kind = Kind::Trivial;
  Vec2 apex;
  Vec2 lo;
  Vec2 hi;

  bool contains_direction(Vec2 d, double tol = 1e-12) const;
  bool contains(Vec2 p, double tol = 1e-12) const;
  // sup of dir . d over unit directions d of the cone (0 for the trivial cone).
  double max_dot(Vec2 dir) const;
  bool trivial() const { return kind == Kind::Trivial; }
  // Build from a finite set of unit directions known to contain the cone's extreme rays;
  // `member` decides membership of a direction.
  template <class Member>
  static Cone2 from_candidates(Vec2 apex, const std::vector<Vec2>& candidates, Member member);
};

struct BoundaryPiece {
  enum class Kind { Segment, Curve };
  Kind kind = Kind::Segment;
  Vec2 a;  // start point
  Vec2 b;  // end point
  double t0 = 0.0;  // curve parameters (unused for segments)
  double t1 = 0.0;
  bool clipped_start = false;  // true when the start was cut by the window
  bool clipped_end = false;
  int clip_index = -1;  // half-plane index for segments
};

struct BoundarySample {
  Vec2 point;
  int piece = 0;
  double s = 0.0;  // position in [0, 1] along the piece
};

// A finite union of boundary pieces of a body, with point accessors.
class BoundaryArc {
 public:
  BoundaryArc() = default;
  BoundaryArc(Base base, std::vector<BoundaryPiece> pieces);

  bool empty() const { return pieces_.empty(); }
  const std::vector<BoundaryPiece>& pieces() const { return pieces_; }
  Vec2 point(int piece, double s) const;
  double length(int piece) const;
  double total_length() const;
  // About n points spread by length; every piece contributes both endpoints.
  std::vector<BoundarySample> sample(int n) const;

 private:
  Base base_;
  std::vector<BoundaryPiece> pieces_;
};

// Closed convex proper subset of the plane with nonempty interior:
// an optional smooth base (disk or epigraph) intersected with half-planes.
class Body2 {
 public:
  static Body2 halfplanes(std::vector<HalfPlane> items);
  // Vertices in CCW order. rays[0] leaves vertices.front() backwards along the boundary,
  // rays[1] leaves vertices.back(). `allow_collinear` accepts polyhedral chains with
  // collinear consecutive vertices.
  static Body2 polychain(std::vector<Vec2> vertices, std::optional<std::array<Vec2, 2>> rays = {},
                         bool allow_collinear = false);
  static Body2 disk(Vec2 center, double radius);
  static Body2 epigraph(Profile profile, Affine2 transform = Affine2::identity());
  static Body2 square(double half_side = 1.0, Vec2 center = {});
  static Body2 rectangle(Vec2 lo, Vec2 hi);

  // This body intersected with additional half-planes.
  Body2 clipped(const std::vector<HalfPlane>& extra) const;

  const Base& base() const { return base_; }
  const std::vector<HalfPlane>& clips() const { return clips_; }
  bool has_base() const { return !std::holds_alternative<std::monostate>(base_); }
  const std::optional<std::vector<Vec2>>& chain_vertices() const { return chain_vertices_; }
  const std::optional<std::array<Vec2, 2>>& chain_rays() const { return chain_rays_; }

  Vec2 witness() const { return witness_; }
  double witness_radius() const { return witness_radius_; }
  bool bounded() const { return recession_.trivial(); }
  const Cone2& recession_cone() const { return recession_; }
  // Ball around the witness of radius multiplier * r, widened to cover bounded bodies.
  Window default_window(double multiplier = 16.0) const {
    return {witness_, std::max(multiplier * witness_radius_, 1.5 * extent_)};
  }

  // Positive inside (distance to the complement), negative outside; zero on the boundary.
  // Outside the value lies in [-d(p, C), 0).
  double depth(Vec2 p) const;
  bool contains(Vec2 p, double tol = 1e-9) const;
  bool contains_strictly(Vec2 p, double margin) const { return depth(p) > margin; }
  Projection project(Vec2 p) const;
  double distance(Vec2 p) const { return project(p).distance; }
  double distance_to_boundary(Vec2 p) const;
  SupportValue support(Vec2 dir) const;
  // Points of the face of C exposed by dir: one point or the two ends of a flat face.
  std::vector<Vec2> face(Vec2 dir) const;
  // {t : origin + t dir in C}.
  Interval chord(Vec2 origin, Vec2 dir) const;
  // Outward normals of active constraints at x (x must lie on the boundary within tol).
  NormalArc supporting_normals(Vec2 x, double tol = 1e-9) const;
  BoundaryArc boundary(const Window& window) const;
  // Longest flat boundary piece, if any (segments inside the window only).
  std::optional<std::pair<Vec2, Vec2>> longest_flat_piece(const Window& window) const;

  struct Facet {
    int clip = -1;
    Vec2 origin;
    Vec2 dir;
    Interval range;
  };
  const std::vector<Facet>& facets() const { return facets_; }

 private:
  Body2() = default;
  void finalize();
  Cone2 compute_recession() const;
  void compute_witness();

  Base base_;
  std::vector<HalfPlane> clips_;
  std::optional<std::vector<Vec2>> chain_vertices_;
  std::optional<std::array<Vec2, 2>> chain_rays_;
  std::vector<Facet> facets_;
  Cone2 recession_;
  Vec2 witness_;
  double witness_radius_ = 0.0;
  double extent_ = 0.0;  // max distance from the witness to the body (bounded case)
};

// Low-level helpers shared by the geometry and extension modules.
namespace detail {

struct ConcaveMax {
  double t = 0.0;
  double value = -kInf;
  int escape = 0;  // +1/-1 when the sup is approached as t -> +inf/-inf
};
// Maximizer of a concave function on R, searched outward from t0.
template <class F>
ConcaveMax maximize_concave(F f, double t0, double step = 1.0);

double base_signed_depth(const Base& base, Vec2 p);
Vec2 base_normal_at(const Base& base, Vec2 p);
Interval base_chord(const Base& base, Vec2 origin, Vec2 dir);
Vec2 base_curve_point(const Base& base, double t);
Vec2 base_nearest_point(const Base& base, Vec2 p);
// Nearest-point parameter u on an epigraph profile for a local point q.
double epigraph_nearest_u(const Profile& g, Vec2 q);
Interval clip_interval(const HalfPlane& h, Vec2 origin, Vec2 dir);
// Derivative-free local maximization of f on the plane.
template <class F>
std::pair<Vec2, double> nelder_mead_max(F f, Vec2 start, double step, int iterations = 400);

}  // namespace detail

}  // namespace qcext

#include "qcext/body_inl.hpp"
