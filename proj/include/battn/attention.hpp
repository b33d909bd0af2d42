#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "battn/geometry.hpp"
#include "battn/grid.hpp"
#include "battn/landmark.hpp"
#include "battn/raster.hpp"

namespace battn {

struct AttentionConfig {
  // Occluded garment corners still bound the garment's extent, so they
  // participate in hull construction by default. Missing points never do.
  bool include_occluded = true;
  BlurConfig blur = BlurConfig::automatic();
  double floor = 0.0;           // output range becomes [floor, 1]
  double fallback_sigma = 8.0;  // stamp width for degenerate configurations
};

// Which route produced a map: the hull pipeline, the Gaussian-stamp
// fallback for degenerate landmark configurations, or no usable points.
enum class MapPath { hull, stamps, empty };

// round-half-up per axis onto the pixel lattice
inline Point quantize(double x, double y) {
  return Point{std::int32_t(std::floor(x + 0.5)), std::int32_t(std::floor(y + 0.5))};
}

namespace detail {

inline std::vector<Point> usable_points(const LandmarkSet& lm, bool include_occluded) {
  std::vector<Point> pts;
  pts.reserve(lm.points.size());
  for (const Landmark& p : lm.points) {
    if (p.v == Visibility::missing) continue;
    if (p.v == Visibility::occluded && !include_occluded) continue;
    pts.push_back(quantize(p.x, p.y));
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// Sum of isotropic Gaussians centered on the stamp pixels, accumulated as a
// rank-1 outer product per stamp.
inline Grid stamp_gaussians(const std::vector<Point>& stamps, int width, int height, double sigma) {
  Grid acc(width, height, 0.0);
  const double inv = 1.0 / (2.0 * sigma * sigma);
  std::vector<double> col(std::size_t(height));
  std::vector<double> row(std::size_t(width));
  for (const Point s : stamps) {
    for (int y = 0; y < height; ++y) col[std::size_t(y)] = std::exp(-double(y - s.y) * (y - s.y) * inv);
    for (int x = 0; x < width; ++x) row[std::size_t(x)] = std::exp(-double(x - s.x) * (x - s.x) * inv);
    for (int y = 0; y < height; ++y) {
      const double cy = col[std::size_t(y)];
      for (int x = 0; x < width; ++x) acc.at(x, y) += cy * row[std::size_t(x)];
    }
  }
  return acc;
}

inline Grid remap_floor(Grid g, double floor) {
  if (floor != 0.0) {
    // min() keeps the top of the range at exactly 1 under fp rounding
    for (double& v : g.values) v = std::min(1.0, floor + (1.0 - floor) * v);
  }
  return g;
}

}  // namespace detail

// Landmarks -> attention map. With three or more non-collinear usable points
// this is the hull route: convex_boundary -> scanline_fill -> gaussian_blur
// -> normalize -> remap to [floor, 1]. Degenerate configurations (fewer than
// three usable points, duplicates collapsing below three, or everything
// collinear) fall back to normalized Gaussian stamps at each usable point;
// with exactly two points the whole Bresenham segment between them is
// stamped. No usable points at all yields the all-floor map. Total by
// construction: never throws for valid grid dimensions.
inline Grid build_attention_map(const LandmarkSet& lm, int width, int height,
                                const AttentionConfig& cfg = {}, MapPath* path = nullptr) {
  if (width < 1 || height < 1) throw std::invalid_argument("grid dimensions must be positive");
  const std::vector<Point> usable = detail::usable_points(lm, cfg.include_occluded);

  if (usable.empty()) {
    if (path) *path = MapPath::empty;
    return Grid(width, height, cfg.floor);
  }

  if (usable.size() >= 3) {
    const ConvexBoundary hull = convex_boundary(usable);
    if (!hull.degenerate()) {
      if (path) *path = MapPath::hull;
      const Grid mask = scanline_fill(hull, width, height);
      return detail::remap_floor(normalize(gaussian_blur(mask, cfg.blur)), cfg.floor);
    }
  }

  if (path) *path = MapPath::stamps;
  std::vector<Point> stamps = usable;
  if (usable.size() == 2) stamps = bresenham(usable[0], usable[1]);
  return detail::remap_floor(normalize(detail::stamp_gaussians(stamps, width, height, cfg.fallback_sigma)),
                             cfg.floor);
}

enum class ApplyMode { multiply, residual };

// Modulate features with an attention map: multiply f' = f * A, or
// residual f' = f * (1 + A). The map must already match the feature grid
// spatially; resample_bilinear it first when it does not.
inline FeatureGrid apply_attention(const FeatureGrid& features, const Grid& map,
                                   ApplyMode mode = ApplyMode::residual) {
  if (map.width != features.width || map.height != features.height) {
    throw std::invalid_argument("attention map size mismatch: resample_bilinear to the feature size first");
  }
  FeatureGrid out = features;
  for (int c = 0; c < out.channels; ++c) {
    for (int y = 0; y < out.height; ++y) {
      for (int x = 0; x < out.width; ++x) {
        const double a = map.at(x, y);
        out.at(c, x, y) *= (mode == ApplyMode::multiply) ? a : 1.0 + a;
      }
    }
  }
  return out;
}

// Channel concatenation, a's planes first, values copied verbatim.
inline FeatureGrid concat_channels(const FeatureGrid& a, const FeatureGrid& b) {
  if (a.width != b.width || a.height != b.height) {
    throw std::invalid_argument("spatial size mismatch: resample inputs to a common size first");
  }
  FeatureGrid out(a.channels + b.channels, a.width, a.height);
  std::copy(a.values.begin(), a.values.end(), out.values.begin());
  std::copy(b.values.begin(), b.values.end(), out.values.begin() + std::ptrdiff_t(a.values.size()));
  return out;
}

}  // namespace battn
