#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qcext/vec2.hpp"

namespace qcext {

// Scalar samples on a regular grid; value(i, j) sits at x_i, y_j.
struct Grid {
  Vec2 lo;
  Vec2 hi;
  int nx = 0;
  int ny = 0;
  std::vector<double> values;  // row-major: j * nx + i
  double x(int i) const { return lo.x + (hi.x - lo.x) * i / (nx - 1); }
  double y(int j) const { return lo.y + (hi.y - lo.y) * j / (ny - 1); }
  double value(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
};

Grid sample_grid(const std::function<double(Vec2)>& f, Vec2 lo, Vec2 hi, int nx, int ny);

// Line segments of the iso-line {f = level} from marching squares.
std::vector<std::array<Vec2, 2>> iso_segments(const Grid& g, double level);

struct SvgOverlay {
  std::vector<Vec2> points;  // polyline
  bool closed = false;
  std::string stroke = "#222222";
};

struct SvgOptions {
  int width = 640;
  std::string title;
  std::vector<SvgOverlay> overlays;
};

std::string contour_svg(const Grid& g, const std::vector<double>& levels, const SvgOptions& opt = {});

}  // namespace qcext
