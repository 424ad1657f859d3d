#pragma once

// Motion maps: per-pixel end-node indices embedded in the neighbourhood of the
// maximum radius, plus the smoothing (per-pixel radius) and binary masking
// steps that decide what is transmitted.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "gwl/graph_mc.hpp"
#include "gwl/plane.hpp"

namespace gwl {

// 0 = not transmitted; 1..(2 r_max + 1)^2 = embedded end-node index.
using MotionMap = Plane<std::uint16_t>;
using BinaryMask = BitPlane;

inline constexpr int max_supported_radius = 7;

constexpr int alphabet_size(int r_max) noexcept { return (2 * r_max + 1) * (2 * r_max + 1); }

inline void check_radius(int r_max) {
  if (r_max < 1 || r_max > max_supported_radius)
    throw std::invalid_argument("r_max out of range");
}

// Column-major numbering of the (2 r_max + 1)^2 box: dx selects the column,
// dy runs fastest. Indices of smaller radii are the inner part of this box.
inline std::uint16_t embed_index(Offset o, int r_max) {
  check_radius(r_max);
  if (chebyshev(o) > r_max)
    throw std::invalid_argument("embed_index: offset outside r_max box");
  const int side = 2 * r_max + 1;
  return static_cast<std::uint16_t>((o.dx + r_max) * side + (o.dy + r_max) + 1);
}

inline Offset decode_index(std::uint16_t symbol, int r_max) {
  check_radius(r_max);
  if (symbol < 1 || symbol > alphabet_size(r_max))
    throw std::invalid_argument("decode_index: symbol outside alphabet");
  const int side = 2 * r_max + 1;
  const int v = symbol - 1;
  return {v / side - r_max, v % side - r_max};
}

inline std::uint16_t identity_symbol(int r_max) { return embed_index({0, 0}, r_max); }

inline MotionMap adjacency_to_map(const ReducedAdjacency& adjacency, int r_max) {
  MotionMap map(adjacency.width(), adjacency.height());
  for (std::size_t i = 0; i < map.size(); ++i)
    map[i] = embed_index(adjacency.offset(i), r_max);
  return map;
}

// Symbol 0 means "connect to the co-located pixel" (main diagonal).
inline ReducedAdjacency map_to_adjacency(const MotionMap& map, int r_max) {
  ReducedAdjacency adj(map.width(), map.height());
  for (int y = 0; y < map.height(); ++y)
    for (int x = 0; x < map.width(); ++x) {
      const std::uint16_t s = map(x, y);
      if (s != 0)
        adj.set(x, y, decode_index(s, r_max));
    }
  return adj;
}

// ---------------------------------------------------------------------------
// Smoothing

// Breakpoints of the normalised absolute difference:
// [0, low) -> 1, [low, high) -> 2, [high, 1] -> 3 for r_max = 3.
// Smaller r_max merges the upper intervals; larger r_max shifts all three
// up so they cover the top three radii.
struct RadiusIntervals {
  double low = 0.12;
  double high = 0.29;
};

// |f_odd - f_even| / max |f_odd - f_even|; all zeros when the frames agree.
template <typename S>
Plane<double> normalized_difference(const Plane<S>& odd, const Plane<S>& even) {
  require_same_shape(odd, even, "normalized_difference");
  Plane<double> n(odd.width(), odd.height());
  std::int64_t peak = 0;
  for (std::size_t i = 0; i < odd.size(); ++i)
    peak = std::max<std::int64_t>(peak, std::llabs(static_cast<std::int64_t>(odd[i]) - even[i]));
  if (peak == 0)
    return n;
  for (std::size_t i = 0; i < odd.size(); ++i)
    n[i] = static_cast<double>(std::llabs(static_cast<std::int64_t>(odd[i]) - even[i])) /
           static_cast<double>(peak);
  return n;
}

inline int radius_for(double n, int r_max, const RadiusIntervals& iv = {}) {
  const int r3 = n < iv.low ? 1 : (n < iv.high ? 2 : 3);
  return r_max <= 3 ? std::min(r3, r_max) : r3 + (r_max - 3);
}

template <typename S>
RadiusMap radius_assignment(const Plane<S>& odd, const Plane<S>& even, int r_max,
                            const RadiusIntervals& iv = {}) {
  check_radius(r_max);
  const Plane<double> n = normalized_difference(odd, even);
  RadiusMap radius(odd.width(), odd.height());
  for (std::size_t i = 0; i < n.size(); ++i)
    radius[i] = static_cast<std::uint8_t>(radius_for(n[i], r_max, iv));
  return radius;
}

inline RadiusMap uniform_radius(int width, int height, int r) {
  return RadiusMap(width, height, static_cast<std::uint8_t>(r));
}

// ---------------------------------------------------------------------------
// Masking

template <typename A, typename B>
double mean_squared_error(const Plane<A>& a, const Plane<B>& b) {
  require_same_shape(a, b, "mean_squared_error");
  if (a.empty())
    return 0.0;
  long double acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long double d = static_cast<long double>(a[i]) - static_cast<long double>(b[i]);
    acc += d * d;
  }
  return static_cast<double>(acc / static_cast<long double>(a.size()));
}

inline double mse_target(double psnr_target_db, double a_max) {
  return a_max * a_max / std::pow(10.0, psnr_target_db / 10.0);
}

// tau = MSE_target / MSE(f_odd, f_even); +inf when the frames are identical.
template <typename S>
double compute_threshold(const Plane<S>& odd, const Plane<S>& even, double psnr_target_db,
                         double a_max) {
  if (!(psnr_target_db > 0))
    throw std::invalid_argument("psnr_target must be positive");
  const double mse = mean_squared_error(odd, even);
  if (mse == 0.0)
    return std::numeric_limits<double>::infinity();
  return mse_target(psnr_target_db, a_max) / mse;
}

// B = 1 where the normalised difference reaches tau. tau >= 1 yields an
// empty mask, tau = 0 a full one.
template <typename S>
BinaryMask build_binary_mask(const Plane<S>& odd, const Plane<S>& even, double tau) {
  if (!(tau >= 0))
    throw std::invalid_argument("build_binary_mask: tau must be >= 0");
  BinaryMask mask(odd.width(), odd.height());
  if (tau >= 1.0) {
    require_same_shape(odd, even, "build_binary_mask");
    return mask;
  }
  const Plane<double> n = normalized_difference(odd, even);
  for (std::size_t i = 0; i < n.size(); ++i)
    mask[i] = n[i] >= tau ? 1 : 0;
  return mask;
}

inline MotionMap apply_mask(const MotionMap& map, const BinaryMask& mask) {
  require_same_shape(map, mask, "apply_mask");
  MotionMap out = map;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!mask[i])
      out[i] = 0;
  return out;
}

inline MotionMap fill_identity(const MotionMap& map, int r_max) {
  const std::uint16_t centre = identity_symbol(r_max);
  MotionMap out = map;
  for (auto& s : out)
    if (s == 0)
      s = centre;
  return out;
}

inline std::size_t popcount(const BitPlane& mask) {
  std::size_t n = 0;
  for (auto b : mask)
    n += b ? 1 : 0;
  return n;
}

} // namespace gwl
