#pragma once

// Integer Haar lifting along time, plain and motion compensated.
//
// Compensated forward transform for a reduced adjacency j(i):
//   HP(i) = f_even(i) - f_odd(j(i))
//   LP(j) = f_odd(j) + floor( sum_{i : j(i)=j} HP(i) / (1 + d_j) )
// The update is the optimal update (I + P^T P)^{-1} P^T for a predictor P
// with a single unit weight per row: P^T P is diagonal with the column
// counts d_j, so the inverse reduces to a per-cluster division.

#include <cstdint>
#include <utility>

#include "gwl/graph_mc.hpp"
#include "gwl/plane.hpp"

namespace gwl {

struct SubbandPair {
  SignedFrame lp;
  SignedFrame hp;

  friend bool operator==(const SubbandPair&, const SubbandPair&) = default;
};

struct FramePair {
  SignedFrame odd;
  SignedFrame even;

  friend bool operator==(const FramePair&, const FramePair&) = default;
};

template <typename S>
SubbandPair haar_forward(const Plane<S>& odd, const Plane<S>& even) {
  require_same_shape(odd, even, "haar_forward");
  SubbandPair out{SignedFrame(odd.width(), odd.height()), SignedFrame(odd.width(), odd.height())};
  for (std::size_t i = 0; i < odd.size(); ++i) {
    const auto hp = static_cast<std::int64_t>(even[i]) - static_cast<std::int64_t>(odd[i]);
    out.hp[i] = static_cast<std::int32_t>(hp);
    out.lp[i] = static_cast<std::int32_t>(static_cast<std::int64_t>(odd[i]) + floor_div(hp, 2));
  }
  return out;
}

inline FramePair haar_inverse(const SubbandPair& pair) {
  require_same_shape(pair.lp, pair.hp, "haar_inverse");
  FramePair out{SignedFrame(pair.lp.width(), pair.lp.height()),
                SignedFrame(pair.lp.width(), pair.lp.height())};
  for (std::size_t i = 0; i < pair.lp.size(); ++i) {
    const std::int64_t odd = pair.lp[i] - floor_div(pair.hp[i], 2);
    out.odd[i] = static_cast<std::int32_t>(odd);
    out.even[i] = static_cast<std::int32_t>(pair.hp[i] + odd);
  }
  return out;
}

// Per odd pixel j: the sum of HP over the cluster {i : j(i) = j} and d_j.
struct ClusterSums {
  Plane<std::int64_t> sum;
  Plane<std::int32_t> count;
};

inline ClusterSums cluster_sums(const SignedFrame& hp, const ReducedAdjacency& adjacency) {
  if (hp.width() != adjacency.width() || hp.height() != adjacency.height())
    throw std::invalid_argument("cluster_sums: dimension mismatch");
  ClusterSums out{Plane<std::int64_t>(hp.width(), hp.height()), column_counts(adjacency)};
  for (std::size_t i = 0; i < hp.size(); ++i)
    out.sum[adjacency.end_index(i)] += hp[i];
  return out;
}

// floor(sum / (1 + d_j)) per odd pixel.
inline SignedFrame optimal_update(const SignedFrame& hp, const ReducedAdjacency& adjacency) {
  const ClusterSums cs = cluster_sums(hp, adjacency);
  SignedFrame update(hp.width(), hp.height());
  for (std::size_t j = 0; j < update.size(); ++j)
    update[j] = static_cast<std::int32_t>(floor_div(cs.sum[j], 1 + cs.count[j]));
  return update;
}

template <typename S>
SubbandPair mctf_forward(const Plane<S>& odd, const Plane<S>& even, const ReducedAdjacency& adjacency) {
  require_same_shape(odd, even, "mctf_forward");
  if (odd.width() != adjacency.width() || odd.height() != adjacency.height())
    throw std::invalid_argument("mctf_forward: adjacency dimension mismatch");
  SubbandPair out{SignedFrame(odd.width(), odd.height()), SignedFrame(odd.width(), odd.height())};
  for (std::size_t i = 0; i < odd.size(); ++i)
    out.hp[i] = static_cast<std::int32_t>(static_cast<std::int64_t>(even[i]) -
                                          static_cast<std::int64_t>(odd[adjacency.end_index(i)]));
  const SignedFrame update = optimal_update(out.hp, adjacency);
  for (std::size_t j = 0; j < odd.size(); ++j)
    out.lp[j] = static_cast<std::int32_t>(static_cast<std::int64_t>(odd[j]) + update[j]);
  return out;
}

inline FramePair mctf_inverse(const SubbandPair& pair, const ReducedAdjacency& adjacency) {
  require_same_shape(pair.lp, pair.hp, "mctf_inverse");
  if (pair.lp.width() != adjacency.width() || pair.lp.height() != adjacency.height())
    throw std::invalid_argument("mctf_inverse: adjacency dimension mismatch");
  FramePair out{SignedFrame(pair.lp.width(), pair.lp.height()),
                SignedFrame(pair.lp.width(), pair.lp.height())};
  const SignedFrame update = optimal_update(pair.hp, adjacency);
  for (std::size_t j = 0; j < out.odd.size(); ++j)
    out.odd[j] = pair.lp[j] - update[j];
  for (std::size_t i = 0; i < out.even.size(); ++i)
    out.even[i] = pair.hp[i] + out.odd[adjacency.end_index(i)];
  return out;
}

} // namespace gwl
