#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "battn/geometry.hpp"
#include "battn/grid.hpp"

namespace battn {

namespace detail {

// floor/ceil division for positive divisors
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  const std::int64_t q = a / b;
  return (a % b != 0 && a < 0) ? q - 1 : q;
}
inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  const std::int64_t q = a / b;
  return (a % b != 0 && a > 0) ? q + 1 : q;
}

// mirror reflection without duplicating the edge sample: -1 -> 1, n -> n-2
inline int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

}  // namespace detail

// Integer rasterization of the segment a->b, both endpoints included,
// consecutive pixels 8-connected. The minor coordinate is the round-half-up
// of the ideal line, evaluated in exact integer arithmetic, so the pixel
// chain never strays more than half a pixel from the segment per axis.
// Computed from the lexicographically smaller endpoint and reversed as
// needed, which makes the pixel set direction-symmetric.
inline std::vector<Point> bresenham(Point a, Point b) {
  const bool flipped = b < a;
  if (flipped) std::swap(a, b);

  const std::int64_t dx = std::int64_t(b.x) - a.x;  // >= 0 after the swap
  const std::int64_t dy = std::int64_t(b.y) - a.y;
  const std::int64_t ady = dy < 0 ? -dy : dy;
  const std::int32_t sy = dy < 0 ? -1 : 1;

  std::vector<Point> pts;
  if (dx >= ady) {
    pts.reserve(std::size_t(dx) + 1);
    for (std::int64_t k = 0; k <= dx; ++k) {
      const std::int64_t off = dx == 0 ? 0 : detail::floor_div(2 * dy * k + dx, 2 * dx);
      pts.push_back({a.x + std::int32_t(k), a.y + std::int32_t(off)});
    }
  } else {
    pts.reserve(std::size_t(ady) + 1);
    for (std::int64_t k = 0; k <= ady; ++k) {
      const std::int64_t off = detail::floor_div(2 * dx * k + ady, 2 * ady);
      pts.push_back({a.x + std::int32_t(off), a.y + sy * std::int32_t(k)});
    }
  }
  if (flipped) std::reverse(pts.begin(), pts.end());
  return pts;
}

// Binary mask of the boundary: 1 wherever a Bresenham pixel of some edge
// lands, clipped to the grid. Vertices are stamped as well, which is what
// keeps a single-point boundary visible (it has no edges).
inline Grid rasterize_boundary(const ConvexBoundary& boundary, int width, int height) {
  Grid out(width, height, 0.0);
  for (const Edge& e : boundary.edges) {
    for (const Point p : bresenham(e.a, e.b)) {
      if (out.in_bounds(p.x, p.y)) out.at(p.x, p.y) = 1.0;
    }
  }
  for (const Point v : boundary.vertices) {
    if (out.in_bounds(v.x, v.y)) out.at(v.x, v.y) = 1.0;
  }
  return out;
}

// Interior fill. Scanlines sample at pixel centers (y + 0.5); with integer
// vertices no vertex can sit on a scanline, so the crossing parity is
// unambiguous. Crossings are intersected on the polygon's vertex edges (not
// the rasterized pixels: parity over thick Bresenham diagonals miscounts)
// and the span ends are resolved in exact integer arithmetic with doubled
// coordinates. A pixel is filled when its center lies on or between the
// crossings of its row. The result is unioned with rasterize_boundary, so
// every drawn boundary pixel is covered; zero-area boundaries fall back to
// just the rasterized boundary.
inline Grid scanline_fill(const ConvexBoundary& boundary, int width, int height) {
  Grid out = rasterize_boundary(boundary, width, height);
  if (boundary.degenerate()) return out;

  std::int64_t twice_area = 0;
  for (std::size_t i = 0; i + 2 < boundary.vertices.size(); ++i) {
    twice_area += orientation(boundary.vertices[0], boundary.vertices[i + 1], boundary.vertices[i + 2]);
  }
  if (twice_area == 0) return out;

  for (int y = 0; y < height; ++y) {
    const std::int64_t yd = 2 * std::int64_t(y) + 1;  // scanline y + 0.5, doubled
    std::int64_t first = std::numeric_limits<std::int64_t>::max();
    std::int64_t last = std::numeric_limits<std::int64_t>::min();
    bool any = false;
    for (const Edge& e : boundary.edges) {
      const std::int64_t ay = e.a.y, by = e.b.y;
      if (ay == by) continue;
      if (yd <= 2 * std::min(ay, by) || yd >= 2 * std::max(ay, by)) continue;
      // crossing x = num/den with den > 0
      std::int64_t den = 2 * (by - ay);
      std::int64_t num = e.a.x * den + (yd - 2 * ay) * (std::int64_t(e.b.x) - e.a.x);
      if (den < 0) {
        den = -den;
        num = -num;
      }
      // smallest pixel whose center >= crossing, largest whose center <= crossing
      first = std::min(first, detail::ceil_div(2 * num - den, 2 * den));
      last = std::max(last, detail::floor_div(2 * num - den, 2 * den));
      any = true;
    }
    if (!any) continue;
    const int x0 = int(std::max<std::int64_t>(first, 0));
    const int x1 = int(std::min<std::int64_t>(last, width - 1));
    for (int x = x0; x <= x1; ++x) out.at(x, y) = 1.0;
  }
  return out;
}

// Blur configuration. sigma <= 0 collapses to the identity; the "auto"
// sentinel resolves to 0.05 * min(W, H), clamped to at least half a pixel.
struct BlurConfig {
  double sigma = 0.0;
  bool auto_sigma = false;

  static BlurConfig automatic() { return BlurConfig{0.0, true}; }
  static BlurConfig fixed(double s) { return BlurConfig{s, false}; }

  double resolve_sigma(int width, int height) const {
    if (!auto_sigma) return sigma;
    return std::max(0.5, 0.05 * std::min(width, height));
  }
  static int radius_for(double s) { return s > 0.0 ? int(std::ceil(3.0 * s)) : 0; }
};

// Sampled 1-D Gaussian exp(-k^2 / (2 sigma^2)), k in [-radius, radius],
// normalized to unit sum.
inline std::vector<double> gaussian_kernel(double sigma, int radius) {
  std::vector<double> w(std::size_t(2 * radius) + 1, 1.0);
  if (radius == 0) return w;
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double v = std::exp(-double(k) * k / (2.0 * sigma * sigma));
    w[std::size_t(k + radius)] = v;
    sum += v;
  }
  for (double& v : w) v /= sum;
  return w;
}

// Separable convolution, horizontal then vertical, borders mirrored without
// duplicating the edge pixel so constant grids pass through unchanged.
inline Grid gaussian_blur(const Grid& grid, const BlurConfig& cfg) {
  const double sigma = cfg.resolve_sigma(grid.width, grid.height);
  const int radius = BlurConfig::radius_for(sigma);
  if (radius == 0) return grid;
  const std::vector<double> w = gaussian_kernel(sigma, radius);

  Grid mid(grid.width, grid.height, 0.0);
  for (int y = 0; y < grid.height; ++y) {
    for (int x = 0; x < grid.width; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += w[std::size_t(k + radius)] * grid.at(detail::reflect_index(x + k, grid.width), y);
      }
      mid.at(x, y) = acc;
    }
  }
  Grid out(grid.width, grid.height, 0.0);
  for (int y = 0; y < grid.height; ++y) {
    for (int x = 0; x < grid.width; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        acc += w[std::size_t(k + radius)] * mid.at(x, detail::reflect_index(y + k, grid.height));
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

// Bilinear resampling with half-pixel-center alignment; exact identity when
// the dimensions already match.
inline Grid resample_bilinear(const Grid& grid, int out_width, int out_height) {
  if (out_width < 1 || out_height < 1) throw std::invalid_argument("bad resample dimensions");
  if (out_width == grid.width && out_height == grid.height) return grid;

  Grid out(out_width, out_height, 0.0);
  const double sx = double(grid.width) / out_width;
  const double sy = double(grid.height) / out_height;
  for (int y = 0; y < out_height; ++y) {
    const double fy = (y + 0.5) * sy - 0.5;
    const int y0 = int(std::floor(fy));
    const double ty = fy - y0;
    const int ya = std::clamp(y0, 0, grid.height - 1);
    const int yb = std::clamp(y0 + 1, 0, grid.height - 1);
    for (int x = 0; x < out_width; ++x) {
      const double fx = (x + 0.5) * sx - 0.5;
      const int x0 = int(std::floor(fx));
      const double tx = fx - x0;
      const int xa = std::clamp(x0, 0, grid.width - 1);
      const int xb = std::clamp(x0 + 1, 0, grid.width - 1);
      const double top = (1.0 - tx) * grid.at(xa, ya) + tx * grid.at(xb, ya);
      const double bot = (1.0 - tx) * grid.at(xa, yb) + tx * grid.at(xb, yb);
      out.at(x, y) = (1.0 - ty) * top + ty * bot;
    }
  }
  return out;
}

// Divide by the max when it is positive; all-zero (or all non-positive)
// grids pass through. Idempotent.
inline Grid normalize(const Grid& grid) {
  Grid out = grid;
  double mx = 0.0;
  for (double v : out.values) mx = std::max(mx, v);
  if (mx > 0.0) {
    for (double& v : out.values) v /= mx;
  }
  return out;
}

// Binary PGM ("P5"), maxval 255, one byte per pixel row-major,
// pixel = round(value * 255) clamped to [0, 255].
inline std::string encode_pgm(const Grid& grid) {
  std::string out = "P5\n" + std::to_string(grid.width) + " " + std::to_string(grid.height) + "\n255\n";
  out.reserve(out.size() + grid.values.size());
  for (double v : grid.values) {
    const long long b = std::llround(v * 255.0);
    out.push_back(char(static_cast<unsigned char>(std::clamp(b, 0LL, 255LL))));
  }
  return out;
}

}  // namespace battn
