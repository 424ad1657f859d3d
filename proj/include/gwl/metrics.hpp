#pragma once

// Quality and rate figures for benchmark reports.
//
// PSNR_LP_t measures how well an LP frame stands in for both frames of its
// pair. The LP frame is compared with f_odd directly and, after warping along
// the decoded motion (LP(j(i)) at even pixel i), with f_even:
//
//   PSNR_LP_t = 10 log10( A^2 / ((MSE(LP, f_odd) + MSE(warp(LP), f_even)) / 2) )
//
// Over a whole volume the bracketed combined MSE is averaged across all pairs
// before taking the logarithm.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "gwl/codec.hpp"
#include "gwl/graph_mc.hpp"
#include "gwl/motion_map.hpp"
#include "gwl/plane.hpp"

namespace gwl {

inline double psnr_from_mse(double mse, double a_max) {
  if (mse < 0)
    throw std::invalid_argument("psnr: negative MSE");
  if (mse == 0)
    return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(a_max * a_max / mse);
}

template <typename A, typename B>
double psnr(const Plane<A>& a, const Plane<B>& b, double a_max) {
  return psnr_from_mse(mean_squared_error(a, b), a_max);
}

template <typename L, typename S>
double combined_lp_mse(const Plane<L>& lp, const Plane<S>& odd, const Plane<S>& even,
                       const ReducedAdjacency& adjacency) {
  require_same_shape(lp, odd, "psnr_lpt");
  require_same_shape(lp, even, "psnr_lpt");
  const Plane<L> warped = warp(lp, adjacency);
  return (mean_squared_error(lp, odd) + mean_squared_error(warped, even)) / 2.0;
}

template <typename L, typename S>
double psnr_lpt(const Plane<L>& lp, const Plane<S>& odd, const Plane<S>& even,
                const ReducedAdjacency& adjacency, double a_max) {
  return psnr_from_mse(combined_lp_mse(lp, odd, even, adjacency), a_max);
}

// Pooled PSNR_LP_t of a decoded volume against its source. Needs a decode in
// full mode so the per-pair adjacencies are available.
inline double volume_psnr_lpt(const DecodedVolume& decoded, const Volume& original) {
  const VolumeHeader& h = original.header();
  if (decoded.adjacency.size() != static_cast<std::size_t>(h.slices))
    throw std::invalid_argument("volume_psnr_lpt: decoded volume lacks adjacency data");
  double sum = 0;
  std::size_t pairs = 0;
  for (int z = 0; z < h.slices; ++z) {
    const auto& adj = decoded.adjacency[static_cast<std::size_t>(z)];
    const auto& lp = decoded.lp[static_cast<std::size_t>(z)];
    if (adj.size() != lp.size() || adj.size() != static_cast<std::size_t>(h.frames / 2))
      throw std::invalid_argument("volume_psnr_lpt: pair count mismatch");
    for (std::size_t t = 0; t < adj.size(); ++t) {
      const int f = static_cast<int>(2 * t);
      sum += combined_lp_mse(lp[t], original.frame(z, f), original.frame(z, f + 1), adj[t]);
      ++pairs;
    }
  }
  if (pairs == 0)
    return std::numeric_limits<double>::infinity();
  return psnr_from_mse(sum / static_cast<double>(pairs), static_cast<double>(h.max_sample()));
}

// Byte counts per stream. m_tx covers everything that describes motion:
// masks plus symbol or vector payloads. total is the sum of all section
// contents; container_bytes adds the header and section length prefixes.
struct RateReport {
  std::size_t lp = 0;
  std::size_t hp = 0;
  std::size_t mask = 0;
  std::size_t motion = 0;
  std::size_t m_tx = 0;
  std::size_t total = 0;
  std::size_t container_bytes = 0;
};

inline RateReport rate_report(const Container& c) {
  RateReport r;
  std::size_t sections = 0;
  for (const auto& slice : c.slices) {
    for (const auto& p : slice.pairs) {
      r.mask += p.mask.size();
      r.motion += p.motion.size();
      r.lp += p.lp.size();
      r.hp += p.hp.size();
      sections += 4;
    }
    if (c.header.has_trailing()) {
      r.lp += slice.trailing_lp.size();
      ++sections;
    }
  }
  r.m_tx = r.mask + r.motion;
  r.total = r.lp + r.hp + r.m_tx;
  if (!c.slices.empty())
    r.container_bytes = container_header_size + 4 * sections + r.total;
  return r;
}

} // namespace gwl
