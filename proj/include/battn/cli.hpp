#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "battn/attention.hpp"
#include "battn/ingest.hpp"
#include "battn/metrics.hpp"
#include "battn/raster.hpp"

namespace battn {

// Exit codes shared by every subcommand: 0 success, 2 I/O, 3 parse,
// 4 data mismatch.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 2;
inline constexpr int kExitParse = 3;
inline constexpr int kExitData = 4;

struct CliConfig {
  int threads = 0;  // 0 = resolve from BATTN_THREADS, then hardware
  std::string output_dir = ".";
  std::string format = "pgm";
  std::uint64_t seed = 0;
};

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("BATTN_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? int(hc) : 1;
}

// Index-parallel map over [0, count). Tasks write only their own slot, so
// results are identical no matter how many workers run.
template <typename Fn>
inline void parallel_for(std::size_t count, int threads, Fn&& fn) {
  if (count == 0) return;
  const int workers = std::max(1, std::min<int>(threads, int(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true);
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

namespace detail {

inline bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) return false;
  out = std::move(data);
  return true;
}

inline std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

}  // namespace detail

struct MapOptions {
  std::string landmarks_path;
  int width = 256;
  int height = 256;
  std::optional<double> sigma;  // absent = auto blur
  double floor = 0.0;
  bool include_occluded = true;
  double fallback_sigma = 8.0;
  int threads = 0;
  std::string out_dir = ".";
};

// Generate one PGM attention map per landmark row. Status lines go to
// `out` in input order regardless of thread count.
inline int cmd_map(const MapOptions& opts, std::ostream& out, std::ostream& err) {
  std::string text;
  if (!detail::read_file(opts.landmarks_path, text)) {
    err << "cannot read " << opts.landmarks_path << "\n";
    return kExitIo;
  }
  std::vector<LandmarkSet> rows;
  try {
    rows = parse_landmarks(text);
  } catch (const ParseError& e) {
    err << opts.landmarks_path << ": " << e.what() << "\n";
    return kExitParse;
  }

  std::error_code ec;
  std::filesystem::create_directories(opts.out_dir, ec);
  if (ec) {
    err << "cannot create output dir " << opts.out_dir << ": " << ec.message() << "\n";
    return kExitIo;
  }

  AttentionConfig cfg;
  cfg.include_occluded = opts.include_occluded;
  cfg.blur = opts.sigma ? BlurConfig::fixed(*opts.sigma) : BlurConfig::automatic();
  cfg.floor = opts.floor;
  cfg.fallback_sigma = opts.fallback_sigma;

  struct Result {
    std::string status;
    std::string pgm;
  };
  std::vector<Result> results(rows.size());
  parallel_for(rows.size(), resolve_threads(opts.threads), [&](std::size_t i) {
    MapPath path = MapPath::hull;
    const Grid map = build_attention_map(rows[i], opts.width, opts.height, cfg, &path);
    Result& r = results[i];
    r.pgm = encode_pgm(map);
    switch (path) {
      case MapPath::hull: r.status = "OK " + rows[i].image_id; break;
      case MapPath::stamps: r.status = "FALLBACK " + rows[i].image_id + " degenerate"; break;
      case MapPath::empty: r.status = "FALLBACK " + rows[i].image_id + " empty"; break;
    }
  });

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::filesystem::path file = std::filesystem::path(opts.out_dir) / (rows[i].image_id + ".pgm");
    std::ofstream o(file, std::ios::binary | std::ios::trunc);
    o.write(results[i].pgm.data(), std::streamsize(results[i].pgm.size()));
    if (!o) {
      err << "cannot write " << file.string() << "\n";
      return kExitIo;
    }
    out << results[i].status << "\n";
  }
  return kExitOk;
}

struct HullOptions {
  std::string landmarks_path;
  bool include_occluded = true;
};

// Dump hull vertices per row: <image_id> <k> {<x> <y>}xk dropped=<m>.
inline int cmd_hull(const HullOptions& opts, std::ostream& out, std::ostream& err) {
  std::string text;
  if (!detail::read_file(opts.landmarks_path, text)) {
    err << "cannot read " << opts.landmarks_path << "\n";
    return kExitIo;
  }
  std::vector<LandmarkSet> rows;
  try {
    rows = parse_landmarks(text);
  } catch (const ParseError& e) {
    err << opts.landmarks_path << ": " << e.what() << "\n";
    return kExitParse;
  }

  for (const LandmarkSet& lm : rows) {
    const std::vector<Point> usable = detail::usable_points(lm, opts.include_occluded);
    if (usable.empty()) {
      out << lm.image_id << " 0 dropped=0\n";
      continue;
    }
    const ConvexBoundary hull = convex_boundary(usable);
    out << lm.image_id << " " << hull.vertices.size();
    for (const Point v : hull.vertices) out << " " << v.x << " " << v.y;
    out << " dropped=" << hull.dropped.size() << "\n";
  }
  return kExitOk;
}

enum class EvalTask { category, attribute, landmark };

struct EvalOptions {
  EvalTask task = EvalTask::category;
  std::string pred_path;
  std::string gt_path;
  std::vector<int> topk = {3, 5};
  bool visible_only = false;
  bool macro_recall = false;
  int width = 256;   // landmark task: dimensions of the coordinate space
  int height = 256;
};

// Score a prediction file against ground truth. Classification tasks print
// one "top-<k> <percent>" line per requested k (two decimals); the landmark
// task prints "NE <value>" with four decimals.
inline int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err) {
  std::string pred_text, gt_text;
  if (!detail::read_file(opts.pred_path, pred_text)) {
    err << "cannot read " << opts.pred_path << "\n";
    return kExitIo;
  }
  if (!detail::read_file(opts.gt_path, gt_text)) {
    err << "cannot read " << opts.gt_path << "\n";
    return kExitIo;
  }

  try {
    if (opts.task == EvalTask::category) {
      const CategoryFile gt = parse_categories(gt_text);
      const auto records = parse_scores(pred_text, gt.num_classes, ScorePayload::category);
      const auto truths = category_ground_truth(gt);
      for (int k : opts.topk) {
        out << "top-" << k << " " << detail::format_fixed(100.0 * topk_accuracy(records, truths, k), 2) << "\n";
      }
    } else if (opts.task == EvalTask::attribute) {
      const AttributeFile gt = parse_attributes(gt_text);
      const auto records = parse_scores(pred_text, gt.num_attributes, ScorePayload::attribute);
      const auto truths = attribute_ground_truth(gt);
      for (int k : opts.topk) {
        out << "top-" << k << " "
            << detail::format_fixed(100.0 * topk_recall(records, truths, k, opts.macro_recall), 2) << "\n";
      }
    } else {
      const auto records = landmark_records(parse_landmarks(pred_text));
      const auto truths = landmark_ground_truth(parse_landmarks(gt_text), opts.width, opts.height);
      out << "NE " << detail::format_fixed(normalized_error(records, truths, opts.visible_only), 4) << "\n";
    }
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return kExitParse;
  } catch (const IdMismatchError& e) {
    err << "id mismatch between prediction and ground truth; offenders:";
    const std::size_t shown = std::min<std::size_t>(e.offenders().size(), 10);
    for (std::size_t i = 0; i < shown; ++i) err << " " << e.offenders()[i];
    err << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace battn
