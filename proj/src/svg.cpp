#include "qcext/svg.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace qcext {

Grid sample_grid(const std::function<double(Vec2)>& f, Vec2 lo, Vec2 hi, int nx, int ny) {
  if (nx < 2 || ny < 2) throw Error("grid needs at least 2 x 2 samples");
  Grid g{lo, hi, nx, ny, {}};
  g.values.resize(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) g.values[static_cast<std::size_t>(j) * nx + i] = f({g.x(i), g.y(j)});
  return g;
}

std::vector<std::array<Vec2, 2>> iso_segments(const Grid& g, double level) {
  std::vector<std::array<Vec2, 2>> out;
  auto cross_point = [&](Vec2 a, double fa, Vec2 b, double fb) {
    const double s = fb != fa ? (level - fa) / (fb - fa) : 0.5;
    return lerp(a, b, std::clamp(s, 0.0, 1.0));
  };
  for (int j = 0; j + 1 < g.ny; ++j) {
    for (int i = 0; i + 1 < g.nx; ++i) {
      const Vec2 p[4] = {{g.x(i), g.y(j)}, {g.x(i + 1), g.y(j)}, {g.x(i + 1), g.y(j + 1)}, {g.x(i), g.y(j + 1)}};
      const double v[4] = {g.value(i, j), g.value(i + 1, j), g.value(i + 1, j + 1), g.value(i, j + 1)};
      bool finite = true;
      for (double t : v) finite = finite && std::isfinite(t);
      if (!finite) continue;
      // edge e joins corner e and corner e+1
      std::vector<Vec2> hits;
      for (int e = 0; e < 4; ++e) {
        const int a = e, b = (e + 1) % 4;
        if ((v[a] < level) != (v[b] < level)) hits.push_back(cross_point(p[a], v[a], p[b], v[b]));
      }
      if (hits.size() == 2) {
        out.push_back({hits[0], hits[1]});
      } else if (hits.size() == 4) {
        // saddle: pair by the sign of the cell average
        const double c = 0.25 * (v[0] + v[1] + v[2] + v[3]);
        if ((c < level) == (v[0] < level)) {
          out.push_back({hits[0], hits[1]});  // corners 1 and 3 are cut off
          out.push_back({hits[2], hits[3]});
        } else {
          out.push_back({hits[0], hits[3]});
          out.push_back({hits[1], hits[2]});
        }
      }
    }
  }
  return out;
}

std::string contour_svg(const Grid& g, const std::vector<double>& levels, const SvgOptions& opt) {
  const double wx = g.hi.x - g.lo.x, wy = g.hi.y - g.lo.y;
  const int w = opt.width;
  const int h = static_cast<int>(std::lround(w * wy / wx));
  auto sx = [&](double x) { return (x - g.lo.x) / wx * w; };
  auto sy = [&](double y) { return (g.hi.y - y) / wy * h; };
  std::ostringstream os;
  char buf[160];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
     << ' ' << h << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opt.title.empty()) os << "<title>" << opt.title << "</title>\n";
  const std::size_t n = levels.size();
  for (std::size_t k = 0; k < n; ++k) {
    // blue to red across the listed levels
    const double t = n > 1 ? static_cast<double>(k) / (n - 1) : 0.0;
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(40 + 200 * t), 60, static_cast<int>(220 - 180 * t));
    os << "<path fill=\"none\" stroke=\"" << buf << "\" stroke-width=\"1\" data-level=\"" << levels[k] << "\" d=\"";
    for (const auto& s : iso_segments(g, levels[k])) {
      std::snprintf(buf, sizeof buf, "M%.2f %.2fL%.2f %.2f", sx(s[0].x), sy(s[0].y), sx(s[1].x), sy(s[1].y));
      os << buf;
    }
    os << "\"/>\n";
  }
  for (const SvgOverlay& o : opt.overlays) {
    if (o.points.empty()) continue;
    os << "<path fill=\"none\" stroke=\"" << o.stroke << "\" stroke-width=\"1.5\" d=\"";
    for (std::size_t i = 0; i < o.points.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%c%.2f %.2f", i ? 'L' : 'M', sx(o.points[i].x), sy(o.points[i].y));
      os << buf;
    }
    if (o.closed) os << 'Z';
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace qcext
