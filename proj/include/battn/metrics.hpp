#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "battn/landmark.hpp"

namespace battn {

// Per-sample prediction payloads; at least one of the optionals is set.
struct ScoreRecord {
  std::string image_id;
  std::optional<std::vector<double>> category_scores;
  std::optional<std::vector<double>> attribute_scores;
  std::optional<std::vector<std::pair<double, double>>> predicted_landmarks;
};

struct GroundTruth {
  std::string image_id;
  int category = -1;
  std::vector<int> attributes;  // ascending, unique
  LandmarkSet landmarks;
  int image_width = 0;
  int image_height = 0;
};

// Thrown when prediction and ground-truth ids do not pair up one to one.
class IdMismatchError : public std::runtime_error {
 public:
  explicit IdMismatchError(std::vector<std::string> offenders)
      : std::runtime_error("prediction/ground-truth id mismatch"), offenders_(std::move(offenders)) {}
  const std::vector<std::string>& offenders() const { return offenders_; }

 private:
  std::vector<std::string> offenders_;
};

namespace detail {

// Pair each record with its ground truth; ids must match one to one.
inline std::vector<std::pair<const ScoreRecord*, const GroundTruth*>> pair_by_id(
    const std::vector<ScoreRecord>& records, const std::vector<GroundTruth>& truths) {
  std::unordered_map<std::string, const GroundTruth*> by_id;
  by_id.reserve(truths.size());
  for (const GroundTruth& t : truths) by_id.emplace(t.image_id, &t);

  std::vector<std::string> offenders;
  std::vector<std::pair<const ScoreRecord*, const GroundTruth*>> pairs;
  pairs.reserve(records.size());
  std::unordered_map<std::string, bool> used;
  for (const ScoreRecord& r : records) {
    auto it = by_id.find(r.image_id);
    if (it == by_id.end()) {
      offenders.push_back(r.image_id);
      continue;
    }
    used[r.image_id] = true;
    pairs.emplace_back(&r, it->second);
  }
  for (const GroundTruth& t : truths) {
    if (!used.count(t.image_id)) offenders.push_back(t.image_id);
  }
  if (!offenders.empty()) throw IdMismatchError(std::move(offenders));
  return pairs;
}

// indices of the k largest scores, ties broken by lower index
inline std::vector<std::size_t> topk_indices(const std::vector<double>& scores, int k) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b] || (scores[a] == scores[b] && a < b);
  });
  idx.resize(std::size_t(k));
  return idx;
}

// Neumaier-compensated accumulator; keeps dataset means independent of
// evaluation order.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace detail

// Fraction of samples whose true category lands in the k highest scores.
inline double topk_accuracy(const std::vector<ScoreRecord>& records, const std::vector<GroundTruth>& truths,
                            int k) {
  const auto pairs = detail::pair_by_id(records, truths);
  if (pairs.empty()) throw std::invalid_argument("no samples");
  if (k < 1) throw std::invalid_argument("k must be >= 1");

  std::int64_t hits = 0;
  for (const auto& [rec, gt] : pairs) {
    if (!rec->category_scores) throw std::invalid_argument("record lacks category scores: " + rec->image_id);
    const std::vector<double>& s = *rec->category_scores;
    if (std::size_t(k) > s.size()) throw std::invalid_argument("k exceeds class count");
    const auto top = detail::topk_indices(s, k);
    if (std::find(top.begin(), top.end(), std::size_t(gt->category)) != top.end()) ++hits;
  }
  return double(hits) / double(pairs.size());
}

// Micro-averaged top-k attribute recall: sum over the dataset of recovered
// ground-truth attributes divided by the total ground-truth attribute count.
// Samples without positive attributes contribute to neither sum. The
// macro flag switches to a per-sample mean of recall.
inline double topk_recall(const std::vector<ScoreRecord>& records, const std::vector<GroundTruth>& truths,
                          int k, bool macro = false) {
  const auto pairs = detail::pair_by_id(records, truths);
  if (k < 1) throw std::invalid_argument("k must be >= 1");

  std::int64_t hit_total = 0, positive_total = 0;
  detail::CompensatedSum macro_sum;
  std::int64_t macro_n = 0;
  for (const auto& [rec, gt] : pairs) {
    if (gt->attributes.empty()) continue;
    if (!rec->attribute_scores) throw std::invalid_argument("record lacks attribute scores: " + rec->image_id);
    const std::vector<double>& s = *rec->attribute_scores;
    if (std::size_t(k) > s.size()) throw std::invalid_argument("k exceeds attribute count");
    const auto top = detail::topk_indices(s, k);
    std::int64_t hits = 0;
    for (std::size_t i : top) {
      if (std::binary_search(gt->attributes.begin(), gt->attributes.end(), int(i))) ++hits;
    }
    hit_total += hits;
    positive_total += std::int64_t(gt->attributes.size());
    macro_sum.add(double(hits) / double(gt->attributes.size()));
    ++macro_n;
  }
  if (positive_total == 0) throw std::invalid_argument("no positive attributes");
  if (macro) return macro_sum.value() / double(macro_n);
  return double(hit_total) / double(positive_total);
}

// Mean per-axis-normalized Euclidean landmark error over the dataset:
// sqrt((dx / W_img)^2 + (dy / H_img)^2), averaged across every evaluated
// landmark. visible_only restricts to v = 0; otherwise v in {0, 1}. Missing
// (v = 2) landmarks are never evaluated.
inline double normalized_error(const std::vector<ScoreRecord>& records, const std::vector<GroundTruth>& truths,
                               bool visible_only = false) {
  const auto pairs = detail::pair_by_id(records, truths);

  detail::CompensatedSum sum;
  std::int64_t count = 0;
  for (const auto& [rec, gt] : pairs) {
    if (!rec->predicted_landmarks) throw std::invalid_argument("record lacks landmarks: " + rec->image_id);
    if (gt->image_width < 1 || gt->image_height < 1) {
      throw std::invalid_argument("ground truth lacks image dimensions: " + gt->image_id);
    }
    const auto& preds = *rec->predicted_landmarks;
    for (std::size_t i = 0; i < gt->landmarks.points.size(); ++i) {
      const Landmark& t = gt->landmarks.points[i];
      if (t.v == Visibility::missing) continue;
      if (visible_only && t.v != Visibility::visible) continue;
      if (i >= preds.size()) {
        throw std::invalid_argument("missing landmark prediction for " + rec->image_id);
      }
      const double dx = (preds[i].first - t.x) / double(gt->image_width);
      const double dy = (preds[i].second - t.y) / double(gt->image_height);
      sum.add(std::sqrt(dx * dx + dy * dy));
      ++count;
    }
  }
  if (count == 0) throw std::invalid_argument("no evaluated landmarks");
  return sum.value() / double(count);
}

}  // namespace battn
