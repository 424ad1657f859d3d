#pragma once

// Periodic density masks for the masked motion map and the decoder-side
// reconstruction of the samples the masks drop.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gwl/detail/delaunay.hpp"
#include "gwl/motion_map.hpp"
#include "gwl/plane.hpp"

namespace gwl {

inline constexpr int max_density_index = 16;

// Acquisition order inside a 2x2 block, shared by positions and quadrants.
inline constexpr std::array<Offset, 4> sampling_order{{{0, 0}, {1, 1}, {1, 0}, {0, 1}}};

// 4x4 patch for density k/16. Step n (1-based) places position
// sampling_order[(n-1)/4] of the inner 2x2 block into quadrant
// sampling_order[(n-1)%4], so the first four steps spread one position over
// all quadrants before the next position starts.
inline std::array<std::uint8_t, 16> sampling_patch(int k) {
  if (k < 1 || k > max_density_index)
    throw std::invalid_argument("density index out of range [1,16]");
  std::array<std::uint8_t, 16> patch{};
  for (int n = 0; n < k; ++n) {
    const Offset pos = sampling_order[static_cast<std::size_t>(n / 4)];
    const Offset quad = sampling_order[static_cast<std::size_t>(n % 4)];
    const int x = quad.dx * 2 + pos.dx;
    const int y = quad.dy * 2 + pos.dy;
    patch[static_cast<std::size_t>(y * 4 + x)] = 1;
  }
  return patch;
}

struct SamplingMask {
  int density_index = max_density_index;
  BitPlane bits;

  double density() const noexcept { return density_index / 16.0; }
};

inline SamplingMask build_sampling_mask(int k, int width, int height) {
  const auto patch = sampling_patch(k);
  SamplingMask mask{k, BitPlane(width, height)};
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      mask.bits(x, y) = patch[static_cast<std::size_t>((y % 4) * 4 + (x % 4))];
  return mask;
}

inline MotionMap subsample(const MotionMap& map, const SamplingMask& s) {
  return apply_mask(map, s.bits);
}

enum class InterpolationMethod : std::uint8_t { nearest = 0, linear = 1, natural = 2 };

inline constexpr std::array<InterpolationMethod, 3> all_interpolation_methods{
    InterpolationMethod::nearest, InterpolationMethod::linear, InterpolationMethod::natural};

inline std::string_view to_string(InterpolationMethod m) {
  switch (m) {
  case InterpolationMethod::nearest: return "nearest";
  case InterpolationMethod::linear: return "linear";
  case InterpolationMethod::natural: return "natural";
  }
  return "unknown";
}

inline InterpolationMethod parse_interpolation_method(std::string_view s) {
  for (auto m : all_interpolation_methods)
    if (to_string(m) == s)
      return m;
  throw std::invalid_argument("unknown interpolation method '" + std::string(s) + "'");
}

inline InterpolationMethod interpolation_method_from_code(int code) {
  if (code < 0 || code > 2)
    throw std::invalid_argument("unknown interpolation method code " + std::to_string(code));
  return static_cast<InterpolationMethod>(code);
}

namespace detail {

// Nearest integer to num/den (den > 0), halves rounded toward zero.
inline std::int64_t round_half_toward_zero(std::int64_t num, std::int64_t den) {
  const bool neg = num < 0;
  const std::int64_t a = neg ? -num : num;
  std::int64_t q = a / den;
  const std::int64_t rem2 = 2 * (a % den);
  if (rem2 > den)
    ++q;
  return neg ? -q : q;
}

// Exact nearest known sample for every pixel (squared Euclidean distance).
// Ties prefer the smaller x, then the smaller y.
struct NearestField {
  Plane<std::int64_t> dist2;
  Plane<std::int32_t> owner; // index into the known-sample list, -1 if none
};

inline NearestField nearest_known(const BitPlane& known, const Plane<std::int32_t>& known_id) {
  const int w = known.width();
  const int h = known.height();
  constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;

  // Column pass: nearest known row in each column, ties to the upper row.
  Plane<std::int64_t> col_d(w, h, inf);
  Plane<std::int32_t> col_row(w, h, -1);
  for (int x = 0; x < w; ++x) {
    int last = -1;
    for (int y = 0; y < h; ++y) {
      if (known(x, y))
        last = y;
      if (last >= 0) {
        col_d(x, y) = y - last;
        col_row(x, y) = last;
      }
    }
    int next = -1;
    for (int y = h - 1; y >= 0; --y) {
      if (known(x, y))
        next = y;
      if (next >= 0 && (next - y) < col_d(x, y)) {
        col_d(x, y) = next - y;
        col_row(x, y) = next;
      }
    }
  }

  // Row pass: lower envelope of parabolas (x - x')^2 + g(x')^2 with exact
  // rational breakpoints. A parabola owns the half-open range (z_k, z_{k+1}],
  // so at an exact tie the smaller x' wins.
  NearestField out{Plane<std::int64_t>(w, h, inf), Plane<std::int32_t>(w, h, -1)};
  struct Ratio {
    std::int64_t num, den; // den > 0
  };
  auto less = [](Ratio a, Ratio b) { return a.num * b.den < b.num * a.den; };
  auto less_equal = [](Ratio a, Ratio b) { return a.num * b.den <= b.num * a.den; };
  std::vector<int> v(static_cast<std::size_t>(w));
  std::vector<Ratio> z(static_cast<std::size_t>(w) + 1);
  std::vector<bool> unbounded_low(static_cast<std::size_t>(w) + 1);
  for (int y = 0; y < h; ++y) {
    auto f = [&](int x) { return col_d(x, y) * col_d(x, y); };
    int k = -1;
    for (int q = 0; q < w; ++q) {
      if (col_d(q, y) >= inf)
        continue;
      const std::int64_t fq = f(q) + static_cast<std::int64_t>(q) * q;
      while (k >= 0) {
        const int p = v[static_cast<std::size_t>(k)];
        const std::int64_t fp = f(p) + static_cast<std::int64_t>(p) * p;
        const Ratio s{fq - fp, 2 * static_cast<std::int64_t>(q - p)};
        if (!unbounded_low[static_cast<std::size_t>(k)] && less_equal(s, z[static_cast<std::size_t>(k)])) {
          --k;
          continue;
        }
        ++k;
        v[static_cast<std::size_t>(k)] = q;
        z[static_cast<std::size_t>(k)] = s;
        unbounded_low[static_cast<std::size_t>(k)] = false;
        break;
      }
      if (k < 0) {
        k = 0;
        v[0] = q;
        unbounded_low[0] = true;
      }
    }
    if (k < 0)
      continue;
    const int count = k + 1;
    int j = 0;
    for (int x = 0; x < w; ++x) {
      while (j + 1 < count && less(z[static_cast<std::size_t>(j + 1)], Ratio{x, 1}))
        ++j;
      const int src = v[static_cast<std::size_t>(j)];
      const std::int64_t dx = x - src;
      out.dist2(x, y) = dx * dx + f(src);
      out.owner(x, y) = known_id(src, col_row(src, y));
    }
  }
  return out;
}

struct KnownSamples {
  std::vector<Offset> offsets;
  std::vector<LatticePoint> points;
  BitPlane mask;
  Plane<std::int32_t> id;
};

inline KnownSamples collect_known(const MotionMap& sampled, const BinaryMask& b, const BitPlane& s,
                                  int r_max) {
  KnownSamples k{{}, {}, BitPlane(sampled.width(), sampled.height()),
                 Plane<std::int32_t>(sampled.width(), sampled.height(), -1)};
  for (int y = 0; y < sampled.height(); ++y)
    for (int x = 0; x < sampled.width(); ++x) {
      if (!(b(x, y) && s(x, y)))
        continue;
      const std::uint16_t sym = sampled(x, y);
      if (sym == 0)
        throw std::invalid_argument("interpolate: missing symbol at a transmitted position");
      k.id(x, y) = static_cast<std::int32_t>(k.offsets.size());
      k.offsets.push_back(decode_index(sym, r_max));
      k.points.push_back({x, y});
      k.mask(x, y) = 1;
    }
  return k;
}

} // namespace detail

// Reconstructs the decoder-side motion map. Known samples are positions with
// B = 1 and S = 1; positions with B = 1 and S = 0 are interpolated from them
// on the separate dx and dy planes, rounded, clamped to the r_max box and to
// the frame, and re-embedded. Positions with B = 0 take the identity symbol.
inline MotionMap interpolate(const MotionMap& sampled, const BinaryMask& b, const SamplingMask& s,
                             int r_max, InterpolationMethod method) {
  require_same_shape(sampled, b, "interpolate");
  require_same_shape(sampled, s.bits, "interpolate");
  check_radius(r_max);
  const int w = sampled.width();
  const int h = sampled.height();
  const std::uint16_t centre = identity_symbol(r_max);

  MotionMap out(w, h, centre);
  const detail::KnownSamples known = detail::collect_known(sampled, b, s.bits, r_max);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (known.mask(x, y))
        out(x, y) = sampled(x, y);
  if (known.offsets.empty())
    return out;

  bool any_missing = false;
  for (std::size_t i = 0; i < b.size(); ++i)
    any_missing = any_missing || (b[i] && !s.bits[i]);
  if (!any_missing)
    return out;

  auto store = [&](int x, int y, std::int64_t dx, std::int64_t dy) {
    const auto lo_x = std::max<std::int64_t>(-r_max, -x);
    const auto hi_x = std::min<std::int64_t>(r_max, w - 1 - x);
    const auto lo_y = std::max<std::int64_t>(-r_max, -y);
    const auto hi_y = std::min<std::int64_t>(r_max, h - 1 - y);
    const Offset o{static_cast<int>(std::clamp(dx, lo_x, hi_x)),
                   static_cast<int>(std::clamp(dy, lo_y, hi_y))};
    out(x, y) = embed_index(o, r_max);
  };

  const detail::NearestField nearest = detail::nearest_known(known.mask, known.id);
  auto nearest_value = [&](int x, int y) {
    const Offset o = known.offsets[static_cast<std::size_t>(nearest.owner(x, y))];
    store(x, y, o.dx, o.dy);
  };

  switch (method) {
  case InterpolationMethod::nearest: {
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        if (b(x, y) && !s.bits(x, y))
          nearest_value(x, y);
    break;
  }
  case InterpolationMethod::linear: {
    const detail::Delaunay tri(known.points, std::max(w, h));
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        if (!(b(x, y) && s.bits(x, y) == 0))
          continue;
        const detail::LatticePoint p{x, y};
        const auto& t = tri.triangles()[static_cast<std::size_t>(tri.locate(p))];
        // Barycentric weights as integer sub-triangle areas. A point on a
        // hull edge gives the outer (super) vertex weight zero, so it is
        // still interpolated along that edge.
        std::int64_t den = 0, num_x = 0, num_y = 0;
        bool outside_hull = false;
        for (int k = 0; k < 3; ++k) {
          const int v = t.v[static_cast<std::size_t>(k)];
          const auto& a = tri.point(t.v[static_cast<std::size_t>((k + 1) % 3)]);
          const auto& c = tri.point(t.v[static_cast<std::size_t>((k + 2) % 3)]);
          const std::int64_t weight = detail::orient(a, c, p);
          if (tri.is_super(v)) {
            outside_hull = outside_hull || weight != 0;
            continue;
          }
          const Offset o = known.offsets[static_cast<std::size_t>(v)];
          den += weight;
          num_x += weight * o.dx;
          num_y += weight * o.dy;
        }
        if (outside_hull || den == 0) {
          nearest_value(x, y);
          continue;
        }
        store(x, y, detail::round_half_toward_zero(num_x, den),
              detail::round_half_toward_zero(num_y, den));
      }
    break;
  }
  case InterpolationMethod::natural: {
    // Discrete Sibson weights: insert the query as a new site and count, per
    // known sample, the pixels it loses to the query. The stolen region is
    // grown 8-connected from the query pixel.
    std::vector<std::int64_t> weight(known.offsets.size(), 0);
    std::vector<std::int32_t> touched;
    Plane<std::uint32_t> visit_stamp(w, h, 0);
    std::uint32_t stamp = 0;
    std::vector<std::pair<int, int>> queue;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        if (!(b(x, y) && s.bits(x, y) == 0))
          continue;
        ++stamp;
        queue.clear();
        queue.emplace_back(x, y);
        visit_stamp(x, y) = stamp;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
          const auto [px, py] = queue[qi];
          const std::int32_t owner = nearest.owner(px, py);
          if (weight[static_cast<std::size_t>(owner)] == 0)
            touched.push_back(owner);
          ++weight[static_cast<std::size_t>(owner)];
          for (int ny = py - 1; ny <= py + 1; ++ny)
            for (int nx = px - 1; nx <= px + 1; ++nx) {
              if (!visit_stamp.contains(nx, ny) || visit_stamp(nx, ny) == stamp)
                continue;
              const std::int64_t ddx = nx - x, ddy = ny - y;
              if (ddx * ddx + ddy * ddy < nearest.dist2(nx, ny)) {
                visit_stamp(nx, ny) = stamp;
                queue.emplace_back(nx, ny);
              }
            }
        }
        std::int64_t den = 0, num_x = 0, num_y = 0;
        for (std::int32_t id : touched) {
          const std::int64_t wgt = weight[static_cast<std::size_t>(id)];
          const Offset o = known.offsets[static_cast<std::size_t>(id)];
          den += wgt;
          num_x += wgt * o.dx;
          num_y += wgt * o.dy;
          weight[static_cast<std::size_t>(id)] = 0;
        }
        touched.clear();
        store(x, y, detail::round_half_toward_zero(num_x, den),
              detail::round_half_toward_zero(num_y, den));
      }
    break;
  }
  default:
    throw std::invalid_argument("unknown interpolation method");
  }
  return out;
}

} // namespace gwl
