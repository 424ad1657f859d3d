#pragma once

// Reduced prediction graph between an odd (reference) frame and an even
// (current) frame. Every even pixel i keeps exactly one edge, of weight 1, to
// an end pixel j(i) of the odd frame inside a square neighbourhood.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "gwl/plane.hpp"

namespace gwl {

class ReducedAdjacency {
public:
  ReducedAdjacency() = default;
  ReducedAdjacency(int width, int height) : offsets_(width, height) {}

  static ReducedAdjacency identity(int width, int height) { return {width, height}; }

  int width() const noexcept { return offsets_.width(); }
  int height() const noexcept { return offsets_.height(); }
  std::size_t size() const noexcept { return offsets_.size(); }

  Offset offset(int x, int y) const noexcept { return offsets_(x, y); }
  Offset offset(std::size_t i) const noexcept { return offsets_[i]; }

  // Sets the edge of start pixel (x, y). The end pixel must lie in the frame.
  void set(int x, int y, Offset o) {
    if (!offsets_.contains(x + o.dx, y + o.dy))
      throw std::out_of_range("adjacency end node outside frame");
    offsets_(x, y) = o;
  }

  // Linear index of the end node j(i) for linear start index i.
  std::size_t end_index(std::size_t i) const noexcept {
    const int w = width();
    const int x = static_cast<int>(i % static_cast<std::size_t>(w));
    const int y = static_cast<int>(i / static_cast<std::size_t>(w));
    const Offset o = offsets_[i];
    return offsets_.index(x + o.dx, y + o.dy);
  }

  // Largest Chebyshev length of any edge.
  int max_radius() const noexcept {
    int r = 0;
    for (Offset o : offsets_)
      r = std::max(r, chebyshev(o));
    return r;
  }

  const Plane<Offset>& offsets() const noexcept { return offsets_; }

  friend bool operator==(const ReducedAdjacency&, const ReducedAdjacency&) = default;

private:
  Plane<Offset> offsets_;
};

// Per-pixel search radius.
using RadiusMap = Plane<std::uint8_t>;

// Similarity of two connected nodes; only its argmax matters after reduction.
inline double similarity_weight(int even_value, int odd_value) noexcept {
  return 1.0 / (1.0 + std::abs(even_value - odd_value));
}

// Number of edges of the fully connected radius-r neighbourhood graph,
// with windows clipped to the frame.
inline std::int64_t count_candidates(int width, int height, int r) {
  if (r < 1)
    throw std::invalid_argument("count_candidates: radius must be >= 1");
  // Separable: sum over x of clipped span times sum over y of clipped span.
  auto axis = [r](int n) {
    std::int64_t total = 0;
    for (int p = 0; p < n; ++p)
      total += std::min(n - 1, p + r) - std::max(0, p - r) + 1;
    return total;
  };
  return axis(width) * axis(height);
}

// Edges kept after reduction: one per start node.
inline std::int64_t count_reduced_edges(const ReducedAdjacency& adjacency) {
  return static_cast<std::int64_t>(adjacency.size());
}

// For each even pixel, the odd pixel within its clipped (2r+1)^2 window that
// maximises the similarity weight. Ties go to the smallest Chebyshev length,
// then to the smallest (dx, dy) in lexicographic order, which is the order of
// the embedded motion-map index.
template <typename S>
ReducedAdjacency estimate_motion(const Plane<S>& odd, const Plane<S>& even, const RadiusMap& radius) {
  require_same_shape(odd, even, "estimate_motion");
  require_same_shape(odd, radius, "estimate_motion");
  const int w = odd.width();
  const int h = odd.height();
  ReducedAdjacency adj(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int r = radius(x, y);
      const int target = static_cast<int>(even(x, y));
      int best_diff = std::numeric_limits<int>::max();
      int best_cheb = 0;
      Offset best{};
      for (int dx = -r; dx <= r; ++dx) {
        const int jx = x + dx;
        if (jx < 0 || jx >= w)
          continue;
        for (int dy = -r; dy <= r; ++dy) {
          const int jy = y + dy;
          if (jy < 0 || jy >= h)
            continue;
          const int diff = std::abs(target - static_cast<int>(odd(jx, jy)));
          const int cheb = chebyshev({dx, dy});
          // Candidates are visited in (dx, dy) lexicographic order, so a strict
          // comparison keeps the smallest embedded index among equals.
          if (diff < best_diff || (diff == best_diff && cheb < best_cheb)) {
            best_diff = diff;
            best_cheb = cheb;
            best = {dx, dy};
          }
        }
      }
      adj.set(x, y, best);
    }
  }
  return adj;
}

// output(i) = frame(j(i)).
template <typename S>
Plane<S> warp(const Plane<S>& frame, const ReducedAdjacency& adjacency) {
  if (frame.width() != adjacency.width() || frame.height() != adjacency.height())
    throw std::invalid_argument("warp: dimension mismatch");
  Plane<S> out(frame.width(), frame.height());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = frame[adjacency.end_index(i)];
  return out;
}

// d_j: number of start nodes whose edge ends at odd pixel j.
inline Plane<std::int32_t> column_counts(const ReducedAdjacency& adjacency) {
  Plane<std::int32_t> counts(adjacency.width(), adjacency.height());
  for (std::size_t i = 0; i < adjacency.size(); ++i)
    ++counts[adjacency.end_index(i)];
  return counts;
}

} // namespace gwl
