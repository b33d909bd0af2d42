#pragma once

#include <stdexcept>
#include <vector>

namespace battn {

// W x H raster of doubles, row-major. Binary masks are stored as 0.0/1.0 in
// the same type; attention maps live in [0, 1] after normalization.
struct Grid {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  Grid() = default;
  Grid(int w, int h, double fill = 0.0) : width(w), height(h) {
    if (w < 1 || h < 1) throw std::invalid_argument("grid dimensions must be positive");
    values.assign(std::size_t(w) * h, fill);
  }

  bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
  double& at(int x, int y) { return values[std::size_t(y) * width + x]; }
  double at(int x, int y) const { return values[std::size_t(y) * width + x]; }

  friend bool operator==(const Grid&, const Grid&) = default;
};

// C x H x W feature volume, channel-major.
struct FeatureGrid {
  int channels = 0;
  int width = 0;
  int height = 0;
  std::vector<double> values;

  FeatureGrid() = default;
  FeatureGrid(int c, int w, int h, double fill = 0.0) : channels(c), width(w), height(h) {
    if (c < 0 || w < 1 || h < 1) throw std::invalid_argument("bad feature grid dimensions");
    values.assign(std::size_t(c) * w * h, fill);
  }

  std::size_t plane_size() const { return std::size_t(width) * height; }
  double& at(int c, int x, int y) { return values[c * plane_size() + std::size_t(y) * width + x]; }
  double at(int c, int x, int y) const { return values[c * plane_size() + std::size_t(y) * width + x]; }

  friend bool operator==(const FeatureGrid&, const FeatureGrid&) = default;
};

}  // namespace battn
