#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "battn/grid.hpp"
#include "battn/landmark.hpp"

namespace battn {

struct HeatmapTargetConfig {
  int out_width = 64;
  int out_height = 64;
  double sigma = 1.0;
};

struct LossConfig {
  // positive-term weight against the heavy positive/negative imbalance of
  // multi-label attribute data
  double pos_weight = 332.0;
};

struct ScalarLoss {
  double loss = 0.0;
  std::vector<double> grad;
};

struct GridLoss {
  double loss = 0.0;
  FeatureGrid grad;
};

// Gaussian heatmap targets for the landmark stream: one channel per
// landmark, channel k = exp(-((x-xk)^2 + (y-yk)^2) / (2 sigma^2)) on the
// output lattice. Missing landmarks produce an all-zero channel. Landmark
// coordinates must already be in output-grid space.
inline FeatureGrid heatmap_target(const LandmarkSet& lm, const HeatmapTargetConfig& cfg = {}) {
  if (cfg.sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
  FeatureGrid out(int(lm.points.size()), cfg.out_width, cfg.out_height, 0.0);
  const double inv = 1.0 / (2.0 * cfg.sigma * cfg.sigma);
  for (std::size_t k = 0; k < lm.points.size(); ++k) {
    const Landmark& p = lm.points[k];
    if (p.v == Visibility::missing) continue;
    for (int y = 0; y < cfg.out_height; ++y) {
      for (int x = 0; x < cfg.out_width; ++x) {
        const double dx = x - p.x;
        const double dy = y - p.y;
        out.at(int(k), x, y) = std::exp(-(dx * dx + dy * dy) * inv);
      }
    }
  }
  return out;
}

// Mean squared error with analytic gradient 2 (p - t) / N.
inline GridLoss mse_loss(const FeatureGrid& pred, const FeatureGrid& target) {
  if (pred.channels != target.channels || pred.width != target.width || pred.height != target.height) {
    throw std::invalid_argument("mse_loss shape mismatch");
  }
  GridLoss out;
  out.grad = FeatureGrid(pred.channels, pred.width, pred.height, 0.0);
  const double n = double(pred.values.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.values.size(); ++i) {
    const double d = pred.values[i] - target.values[i];
    acc += d * d;
    out.grad.values[i] = 2.0 * d / n;
  }
  out.loss = acc / n;
  return out;
}

// Softmax cross-entropy over class logits, computed through log-sum-exp with
// the max subtracted. grad = softmax(logits) - onehot(label).
inline ScalarLoss softmax_cross_entropy(const std::vector<double>& logits, int label) {
  if (logits.size() < 2) throw std::invalid_argument("need at least two logits");
  if (label < 0 || std::size_t(label) >= logits.size()) throw std::invalid_argument("label out of range");

  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double x : logits) sum += std::exp(x - mx);
  const double lse = mx + std::log(sum);

  ScalarLoss out;
  out.loss = lse - logits[std::size_t(label)];
  out.grad.resize(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out.grad[i] = std::exp(logits[i] - lse);
  }
  out.grad[std::size_t(label)] -= 1.0;
  return out;
}

namespace detail {

// log(1 + exp(t)) without overflow
inline double softplus(double t) {
  return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t)));
}

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace detail

// Asymmetric weighted binary cross-entropy over multi-label logits:
// l_i = -(W y_i log s(x_i) + (1 - y_i) log(1 - s(x_i))), mean-reduced, in
// log-sigmoid form so nothing overflows for |x| up to ~700. W = 1 recovers
// standard mean BCE.
inline ScalarLoss asym_weighted_bce(const std::vector<double>& logits, const std::vector<int>& labels,
                                    const LossConfig& cfg = {}) {
  if (logits.size() != labels.size()) throw std::invalid_argument("logits/labels length mismatch");
  if (logits.empty()) throw std::invalid_argument("empty input");

  const double w = cfg.pos_weight;
  const double n = double(logits.size());
  ScalarLoss out;
  out.grad.resize(logits.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const double x = logits[i];
    const double y = labels[i] ? 1.0 : 0.0;
    acc += w * y * detail::softplus(-x) + (1.0 - y) * detail::softplus(x);
    const double s = detail::sigmoid(x);
    out.grad[i] = ((1.0 - y) * s - w * y * (1.0 - s)) / n;
  }
  out.loss = acc / n;
  return out;
}

}  // namespace battn
