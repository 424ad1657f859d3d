#pragma once

// Block-matching MCTF, the comparison baseline. Each s_b x s_b block gets one
// integer vector found by full-search SAD; the vector field then induces a
// per-pixel reduced adjacency and the usual lifting machinery takes over.

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "gwl/entropy.hpp"
#include "gwl/graph_mc.hpp"
#include "gwl/lifting.hpp"
#include "gwl/plane.hpp"

namespace gwl {

inline void check_block_size(int s_b) {
  if (s_b != 2 && s_b != 4 && s_b != 8)
    throw std::invalid_argument("block size must be 2, 4 or 8");
}

struct MotionVectorField {
  int block_size = 4;
  int search_range = 3;
  Plane<Offset> vectors; // one entry per block, partial edge blocks included

  friend bool operator==(const MotionVectorField&, const MotionVectorField&) = default;
};

inline int blocks_along(int pixels, int s_b) { return (pixels + s_b - 1) / s_b; }

// Vectors point from an even-frame block into f_odd: the prediction of even
// pixel p is f_odd(clamp(p + v)). Reference pixels outside the frame repeat
// the nearest edge sample.
template <typename S>
MotionVectorField block_search(const Plane<S>& odd, const Plane<S>& even, int s_b, int search_range) {
  require_same_shape(odd, even, "block_search");
  check_block_size(s_b);
  if (search_range < 0)
    throw std::invalid_argument("block_search: negative search range");
  const int w = odd.width();
  const int h = odd.height();
  MotionVectorField field{s_b, search_range, Plane<Offset>(blocks_along(w, s_b), blocks_along(h, s_b))};
  auto ref = [&](int x, int y) {
    return static_cast<std::int64_t>(odd(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1)));
  };
  for (int by = 0; by < field.vectors.height(); ++by)
    for (int bx = 0; bx < field.vectors.width(); ++bx) {
      const int x0 = bx * s_b, y0 = by * s_b;
      const int x1 = std::min(x0 + s_b, w), y1 = std::min(y0 + s_b, h);
      std::int64_t best_sad = std::numeric_limits<std::int64_t>::max();
      int best_cheb = 0;
      Offset best{};
      // Row-major candidate order; strict comparisons keep the earliest tie.
      for (int vy = -search_range; vy <= search_range; ++vy)
        for (int vx = -search_range; vx <= search_range; ++vx) {
          std::int64_t sad = 0;
          for (int y = y0; y < y1; ++y)
            for (int x = x0; x < x1; ++x)
              sad += std::llabs(static_cast<std::int64_t>(even(x, y)) - ref(x + vx, y + vy));
          const int cheb = chebyshev({vx, vy});
          if (sad < best_sad || (sad == best_sad && cheb < best_cheb)) {
            best_sad = sad;
            best_cheb = cheb;
            best = {vx, vy};
          }
        }
      field.vectors(bx, by) = best;
    }
  return field;
}

inline ReducedAdjacency block_adjacency(const MotionVectorField& field, int width, int height) {
  check_block_size(field.block_size);
  if (field.vectors.width() != blocks_along(width, field.block_size) ||
      field.vectors.height() != blocks_along(height, field.block_size))
    throw std::invalid_argument("block_adjacency: field does not cover the frame");
  ReducedAdjacency adj(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const Offset v = field.vectors(x / field.block_size, y / field.block_size);
      const int jx = std::clamp(x + v.dx, 0, width - 1);
      const int jy = std::clamp(y + v.dy, 0, height - 1);
      adj.set(x, y, {jx - x, jy - y});
    }
  return adj;
}

template <typename S>
SubbandPair block_mctf_forward(const Plane<S>& odd, const Plane<S>& even, const MotionVectorField& field) {
  require_same_shape(odd, even, "block_mctf_forward");
  return mctf_forward(odd, even, block_adjacency(field, odd.width(), odd.height()));
}

inline FramePair block_mctf_inverse(const SubbandPair& pair, const MotionVectorField& field) {
  return mctf_inverse(pair, block_adjacency(field, pair.lp.width(), pair.lp.height()));
}

// Components are shifted to [0, 2R] and interleaved (dx, dy) in block raster
// order, then coded with the previous-symbol context coder.
inline CodedBlob mv_encode(const MotionVectorField& field) {
  const int r = field.search_range;
  std::vector<std::uint16_t> symbols;
  symbols.reserve(field.vectors.size() * 2);
  for (const Offset& v : field.vectors) {
    if (std::abs(v.dx) > r || std::abs(v.dy) > r)
      throw std::invalid_argument("mv_encode: vector outside search range");
    symbols.push_back(static_cast<std::uint16_t>(v.dx + r));
    symbols.push_back(static_cast<std::uint16_t>(v.dy + r));
  }
  return ac_encode(symbols, 2 * r + 1);
}

inline MotionVectorField mv_decode(const CodedBlob& blob, int block_size, int search_range, int width,
                                   int height) {
  check_block_size(block_size);
  MotionVectorField field{block_size, search_range,
                          Plane<Offset>(blocks_along(width, block_size), blocks_along(height, block_size))};
  if (blob.count != field.vectors.size() * 2)
    throw corrupt_stream("mv_decode: vector count mismatch");
  const auto symbols = ac_decode(blob, 2 * search_range + 1);
  for (std::size_t i = 0; i < field.vectors.size(); ++i)
    field.vectors[i] = {symbols[2 * i] - search_range, symbols[2 * i + 1] - search_range};
  return field;
}

} // namespace gwl
