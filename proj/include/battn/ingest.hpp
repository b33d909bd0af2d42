#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "battn/landmark.hpp"
#include "battn/metrics.hpp"

// Plain whitespace-separated text formats, LF line endings:
//
//   Landmark file:   "LANDMARKS v1\n<max_points>\n" then per image
//                    <image_id> <n> {<v> <x> <y>}xn
//   Score file:      "SCORES v1\n<vector_len>\n" then per image
//                    <image_id> <s_1> ... <s_len>
//   Category file:   "CATEGORIES v1\n<num_classes>\n" then <image_id> <cat>
//   Attribute file:  "ATTRIBUTES v1\n<num_attributes>\n" then
//                    <image_id> <m> <a_1> ... <a_m>
//
// Visibility codes: 0 visible, 1 occluded, 2 missing (coordinates of a
// missing landmark are placeholders and carry no meaning).

namespace battn {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", col " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

namespace detail {

struct Token {
  std::string_view text;
  int column;  // 1-based character column
};

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back({line.substr(start, i - start), int(start) + 1});
  }
  return out;
}

inline long long parse_int(const Token& tok, int line) {
  long long v = 0;
  const char* begin = tok.text.data();
  const char* end = begin + tok.text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError(line, tok.column, "expected integer, got '" + std::string(tok.text) + "'");
  }
  return v;
}

inline double parse_real(const Token& tok, int line) {
  double v = 0.0;
  const char* begin = tok.text.data();
  const char* end = begin + tok.text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw ParseError(line, tok.column, "expected finite number, got '" + std::string(tok.text) + "'");
  }
  return v;
}

inline void expect_header(const std::vector<std::string_view>& lines, std::string_view magic) {
  if (lines.empty()) throw ParseError(1, 1, "empty file, expected '" + std::string(magic) + " v1' header");
  const auto toks = tokenize(lines[0]);
  if (toks.size() != 2 || toks[0].text != magic || toks[1].text != "v1") {
    throw ParseError(1, 1, "expected '" + std::string(magic) + " v1' header");
  }
  if (lines.size() < 2) throw ParseError(2, 1, "missing header parameter line");
}

inline long long header_param(const std::vector<std::string_view>& lines, const char* what) {
  const auto toks = tokenize(lines[1]);
  if (toks.size() != 1) throw ParseError(2, 1, std::string("expected ") + what);
  const long long v = parse_int(toks[0], 2);
  if (v < 1) throw ParseError(2, toks[0].column, std::string(what) + " must be >= 1");
  return v;
}

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline std::vector<LandmarkSet> parse_landmarks(std::string_view text) {
  const auto lines = detail::split_lines(text);
  detail::expect_header(lines, "LANDMARKS");
  const long long max_points = detail::header_param(lines, "max landmark count");

  std::vector<LandmarkSet> out;
  std::unordered_set<std::string> seen;
  for (std::size_t li = 2; li < lines.size(); ++li) {
    const int line = int(li) + 1;
    const auto toks = detail::tokenize(lines[li]);
    if (toks.empty()) continue;
    if (toks.size() < 2) throw ParseError(line, toks[0].column, "expected <image_id> <n> ...");

    LandmarkSet lm;
    lm.image_id = std::string(toks[0].text);
    if (!seen.insert(lm.image_id).second) {
      throw ParseError(line, toks[0].column, "duplicate image id '" + lm.image_id + "'");
    }
    const long long n = detail::parse_int(toks[1], line);
    if (n < 0 || n > max_points) {
      throw ParseError(line, toks[1].column,
                       "landmark count " + std::to_string(n) + " outside [0, " + std::to_string(max_points) + "]");
    }
    if (toks.size() != std::size_t(2 + 3 * n)) {
      throw ParseError(line, toks.back().column,
                       "expected " + std::to_string(3 * n) + " values after the count, got " +
                           std::to_string(toks.size() - 2));
    }
    for (long long i = 0; i < n; ++i) {
      const detail::Token& vt = toks[std::size_t(2 + 3 * i)];
      const long long v = detail::parse_int(vt, line);
      if (v < 0 || v > 2) throw ParseError(line, vt.column, "visibility must be 0, 1 or 2");
      Landmark p;
      p.v = Visibility(int(v));
      p.x = detail::parse_real(toks[std::size_t(3 + 3 * i)], line);
      p.y = detail::parse_real(toks[std::size_t(4 + 3 * i)], line);
      if (p.v != Visibility::missing && (p.x < 0.0 || p.y < 0.0)) {
        throw ParseError(line, toks[std::size_t(3 + 3 * i)].column, "non-missing landmark with negative coordinate");
      }
      lm.points.push_back(p);
    }
    out.push_back(std::move(lm));
  }
  return out;
}

inline std::string serialize_landmarks(const std::vector<LandmarkSet>& sets, int max_points) {
  std::string out = "LANDMARKS v1\n" + std::to_string(max_points) + "\n";
  for (const LandmarkSet& lm : sets) {
    out += lm.image_id + " " + std::to_string(lm.points.size());
    for (const Landmark& p : lm.points) {
      out += " " + std::to_string(int(p.v)) + " " + detail::format_real(p.x) + " " + detail::format_real(p.y);
    }
    out += "\n";
  }
  return out;
}

enum class ScorePayload { category, attribute };

// expected_len < 0 accepts whatever length the header declares.
inline std::vector<ScoreRecord> parse_scores(std::string_view text, int expected_len,
                                             ScorePayload payload = ScorePayload::category) {
  const auto lines = detail::split_lines(text);
  detail::expect_header(lines, "SCORES");
  const long long len = detail::header_param(lines, "vector length");
  if (expected_len >= 0 && len != expected_len) {
    throw ParseError(2, 1, "score vector length " + std::to_string(len) + " does not match expected " +
                               std::to_string(expected_len));
  }

  std::vector<ScoreRecord> out;
  std::unordered_set<std::string> seen;
  for (std::size_t li = 2; li < lines.size(); ++li) {
    const int line = int(li) + 1;
    const auto toks = detail::tokenize(lines[li]);
    if (toks.empty()) continue;

    ScoreRecord rec;
    rec.image_id = std::string(toks[0].text);
    if (!seen.insert(rec.image_id).second) {
      throw ParseError(line, toks[0].column, "duplicate image id '" + rec.image_id + "'");
    }
    if (toks.size() != std::size_t(len) + 1) {
      throw ParseError(line, toks[0].column,
                       "row '" + rec.image_id + "' has " + std::to_string(toks.size() - 1) + " scores, expected " +
                           std::to_string(len));
    }
    std::vector<double> scores(std::size_t(len));
    for (long long i = 0; i < len; ++i) scores[std::size_t(i)] = detail::parse_real(toks[std::size_t(i + 1)], line);
    if (payload == ScorePayload::category) {
      rec.category_scores = std::move(scores);
    } else {
      rec.attribute_scores = std::move(scores);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

inline std::string serialize_scores(const std::vector<ScoreRecord>& records, int vector_len,
                                    ScorePayload payload = ScorePayload::category) {
  std::string out = "SCORES v1\n" + std::to_string(vector_len) + "\n";
  for (const ScoreRecord& rec : records) {
    out += rec.image_id;
    const std::vector<double>& s =
        payload == ScorePayload::category ? *rec.category_scores : *rec.attribute_scores;
    for (double v : s) out += " " + detail::format_real(v);
    out += "\n";
  }
  return out;
}

struct CategoryFile {
  int num_classes = 0;
  std::vector<std::pair<std::string, int>> rows;  // (image_id, category)
};

inline CategoryFile parse_categories(std::string_view text) {
  const auto lines = detail::split_lines(text);
  detail::expect_header(lines, "CATEGORIES");
  CategoryFile out;
  out.num_classes = int(detail::header_param(lines, "class count"));

  std::unordered_set<std::string> seen;
  for (std::size_t li = 2; li < lines.size(); ++li) {
    const int line = int(li) + 1;
    const auto toks = detail::tokenize(lines[li]);
    if (toks.empty()) continue;
    if (toks.size() != 2) throw ParseError(line, toks[0].column, "expected <image_id> <category>");
    std::string id(toks[0].text);
    if (!seen.insert(id).second) throw ParseError(line, toks[0].column, "duplicate image id '" + id + "'");
    const long long cat = detail::parse_int(toks[1], line);
    if (cat < 0 || cat >= out.num_classes) {
      throw ParseError(line, toks[1].column, "category " + std::to_string(cat) + " out of range");
    }
    out.rows.emplace_back(std::move(id), int(cat));
  }
  return out;
}

struct AttributeFile {
  int num_attributes = 0;
  std::vector<std::pair<std::string, std::vector<int>>> rows;  // (image_id, sorted attribute indices)
};

inline AttributeFile parse_attributes(std::string_view text) {
  const auto lines = detail::split_lines(text);
  detail::expect_header(lines, "ATTRIBUTES");
  AttributeFile out;
  out.num_attributes = int(detail::header_param(lines, "attribute count"));

  std::unordered_set<std::string> seen;
  for (std::size_t li = 2; li < lines.size(); ++li) {
    const int line = int(li) + 1;
    const auto toks = detail::tokenize(lines[li]);
    if (toks.empty()) continue;
    if (toks.size() < 2) throw ParseError(line, toks[0].column, "expected <image_id> <m> ...");
    std::string id(toks[0].text);
    if (!seen.insert(id).second) throw ParseError(line, toks[0].column, "duplicate image id '" + id + "'");
    const long long m = detail::parse_int(toks[1], line);
    if (m < 0 || m > out.num_attributes) {
      throw ParseError(line, toks[1].column, "attribute count out of range");
    }
    if (toks.size() != std::size_t(2 + m)) {
      throw ParseError(line, toks.back().column, "expected " + std::to_string(m) + " attribute indices");
    }
    std::vector<int> attrs;
    attrs.reserve(std::size_t(m));
    for (long long i = 0; i < m; ++i) {
      const detail::Token& t = toks[std::size_t(2 + i)];
      const long long a = detail::parse_int(t, line);
      if (a < 0 || a >= out.num_attributes) throw ParseError(line, t.column, "attribute index out of range");
      attrs.push_back(int(a));
    }
    std::sort(attrs.begin(), attrs.end());
    if (std::adjacent_find(attrs.begin(), attrs.end()) != attrs.end()) {
      throw ParseError(line, toks[2].column, "duplicate attribute index");
    }
    out.rows.emplace_back(std::move(id), std::move(attrs));
  }
  return out;
}

// Ground-truth adapters for the metrics module.

inline std::vector<GroundTruth> category_ground_truth(const CategoryFile& file) {
  std::vector<GroundTruth> out;
  out.reserve(file.rows.size());
  for (const auto& [id, cat] : file.rows) {
    GroundTruth gt;
    gt.image_id = id;
    gt.category = cat;
    out.push_back(std::move(gt));
  }
  return out;
}

inline std::vector<GroundTruth> attribute_ground_truth(const AttributeFile& file) {
  std::vector<GroundTruth> out;
  out.reserve(file.rows.size());
  for (const auto& [id, attrs] : file.rows) {
    GroundTruth gt;
    gt.image_id = id;
    gt.attributes = attrs;
    out.push_back(std::move(gt));
  }
  return out;
}

inline std::vector<GroundTruth> landmark_ground_truth(const std::vector<LandmarkSet>& sets, int image_width,
                                                      int image_height) {
  std::vector<GroundTruth> out;
  out.reserve(sets.size());
  for (const LandmarkSet& lm : sets) {
    GroundTruth gt;
    gt.image_id = lm.image_id;
    gt.landmarks = lm;
    gt.image_width = image_width;
    gt.image_height = image_height;
    out.push_back(std::move(gt));
  }
  return out;
}

// Landmark predictions reuse the landmark file format; visibility codes on
// the prediction side carry no meaning.
inline std::vector<ScoreRecord> landmark_records(const std::vector<LandmarkSet>& sets) {
  std::vector<ScoreRecord> out;
  out.reserve(sets.size());
  for (const LandmarkSet& lm : sets) {
    ScoreRecord rec;
    rec.image_id = lm.image_id;
    std::vector<std::pair<double, double>> pts;
    pts.reserve(lm.points.size());
    for (const Landmark& p : lm.points) pts.emplace_back(p.x, p.y);
    rec.predicted_landmarks = std::move(pts);
    out.push_back(std::move(rec));
  }
  return out;
}

// Unified annotation loader: dispatches on the header magic and wraps the
// rows as GroundTruth entries. Landmark files need the image dimensions the
// coordinates live in.
struct AnnotationFile {
  std::string format;  // "LANDMARKS", "CATEGORIES" or "ATTRIBUTES"
  std::vector<GroundTruth> entries;
};

inline AnnotationFile parse_annotation_file(std::string_view text, int image_width = 0, int image_height = 0) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) throw ParseError(1, 1, "empty file");
  const auto toks = detail::tokenize(lines[0]);
  if (toks.empty()) throw ParseError(1, 1, "missing header");
  AnnotationFile out;
  if (toks[0].text == "LANDMARKS") {
    out.format = "LANDMARKS";
    out.entries = landmark_ground_truth(parse_landmarks(text), image_width, image_height);
  } else if (toks[0].text == "CATEGORIES") {
    out.format = "CATEGORIES";
    out.entries = category_ground_truth(parse_categories(text));
  } else if (toks[0].text == "ATTRIBUTES") {
    out.format = "ATTRIBUTES";
    out.entries = attribute_ground_truth(parse_attributes(text));
  } else {
    throw ParseError(1, toks[0].column, "unknown header '" + std::string(toks[0].text) + "'");
  }
  return out;
}

// Axis-aligned crop box in source-image pixels.
struct BBox {
  double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;
};

struct MappedPoint {
  double x = 0.0;
  double y = 0.0;
  bool inside = true;  // false when the source point fell outside the box
};

// Crop-and-resize coordinate transform onto a target x target output:
// x' = (x - x1) * S / (x2 - x1), same for y. Points outside the box map
// outside [0, S) and are flagged rather than clamped.
inline MappedPoint bbox_transform(double x, double y, const BBox& box, int target) {
  if (target < 1) throw std::invalid_argument("target size must be >= 1");
  if (!(box.x2 > box.x1) || !(box.y2 > box.y1)) throw std::invalid_argument("degenerate bounding box");
  MappedPoint out;
  out.x = (x - box.x1) * double(target) / (box.x2 - box.x1);
  out.y = (y - box.y1) * double(target) / (box.y2 - box.y1);
  out.inside = out.x >= 0.0 && out.x < double(target) && out.y >= 0.0 && out.y < double(target);
  return out;
}

}  // namespace battn
