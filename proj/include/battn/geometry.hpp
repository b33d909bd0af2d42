#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace battn {

// Integer pixel coordinates. Landmarks are quantized to the pixel lattice
// before hull construction, so every orientation decision below is exact.
// Coordinates are expected to stay within +/-2^20; all intermediates are
// evaluated in 64-bit, which leaves ample headroom at that range.
struct Point {
  std::int32_t x = 0;
  std::int32_t y = 0;

  friend bool operator==(const Point&, const Point&) = default;
  // lexicographic (x, then y)
  friend auto operator<=>(const Point&, const Point&) = default;
};

// Cross product (b-a) x (c-a). Positive = left turn, negative = right turn,
// zero = collinear. No tolerance: inputs are integers.
inline std::int64_t orientation(Point a, Point b, Point c) {
  const std::int64_t abx = std::int64_t(b.x) - a.x;
  const std::int64_t aby = std::int64_t(b.y) - a.y;
  const std::int64_t acx = std::int64_t(c.x) - a.x;
  const std::int64_t acy = std::int64_t(c.y) - a.y;
  return abx * acy - aby * acx;
}

inline std::int64_t squared_distance(Point a, Point b) {
  const std::int64_t dx = std::int64_t(b.x) - a.x;
  const std::int64_t dy = std::int64_t(b.y) - a.y;
  return dx * dx + dy * dy;
}

struct Edge {
  Point a;
  Point b;

  Edge(Point a_, Point b_) : a(a_), b(b_) {
    if (a == b) throw std::invalid_argument("zero-length edge");
  }
};

// Closed convex boundary over a landmark set. `vertices` are in hull order
// starting at select_start(); `edges` walk consecutive vertices and include
// the closing edge; `dropped` holds deduplicated input points that never
// became a vertex (interior points and points sitting on a hull edge).
struct ConvexBoundary {
  std::vector<Point> vertices;
  std::vector<Edge> edges;
  std::vector<Point> dropped;

  // 1 vertex: isolated point, no edges. 2 vertices: zero-area cycle
  // (segment there and back).
  bool degenerate() const { return vertices.size() < 3; }
};

// Start vertex: minimal y, ties broken by minimal x. Always extreme, so the
// hull walk can never begin on an interior point.
inline Point select_start(const std::vector<Point>& points) {
  if (points.empty()) throw std::invalid_argument("no landmarks");
  return *std::min_element(points.begin(), points.end(), [](Point a, Point b) {
    return a.y < b.y || (a.y == b.y && a.x < b.x);
  });
}

// Gift-wrap step: the candidate leaving every other candidate on the
// non-negative orientation side of (current -> candidate). Collinear ties go
// to the farthest point so points sitting on a hull edge are skipped.
// `current` must be a hull vertex and must not appear in `remaining`.
inline Point next_hull_vertex(Point current, const std::vector<Point>& remaining) {
  if (remaining.empty()) throw std::invalid_argument("no candidates");
  Point best = remaining.front();
  for (std::size_t i = 1; i < remaining.size(); ++i) {
    const Point c = remaining[i];
    const std::int64_t o = orientation(current, best, c);
    if (o < 0 || (o == 0 && squared_distance(current, c) > squared_distance(current, best))) {
      best = c;
    }
  }
  return best;
}

// Convex boundary by gift wrapping, counter-clockwise winding in the sense
// that orientation(a, b, p) >= 0 for every hull edge (a, b) and input p.
// The walk terminates when the chosen vertex equals the start point (the
// closing edge has been appended at that moment); points that never get
// connected end up in `dropped`. Duplicates are removed up front.
inline ConvexBoundary convex_boundary(std::vector<Point> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.empty()) throw std::invalid_argument("no landmarks");

  ConvexBoundary out;
  if (points.size() == 1) {
    out.vertices = {points.front()};
    return out;
  }

  const Point start = select_start(points);
  std::vector<Point> unconnected;
  unconnected.reserve(points.size() - 1);
  for (const Point p : points) {
    if (p != start) unconnected.push_back(p);
  }

  out.vertices.push_back(start);
  Point current = start;
  for (;;) {
    std::vector<Point> candidates = unconnected;
    if (current != start) candidates.push_back(start);
    const Point next = next_hull_vertex(current, candidates);
    out.edges.emplace_back(current, next);
    if (next == start) break;
    unconnected.erase(std::find(unconnected.begin(), unconnected.end(), next));
    out.vertices.push_back(next);
    current = next;
  }
  out.dropped = std::move(unconnected);
  return out;
}

}  // namespace battn
