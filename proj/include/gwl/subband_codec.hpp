#pragma once

// Lossless spatial coding of LP and HP frames: reversible integer 5/3
// wavelet (separable, symmetric extension, Mallat layout) followed by
// context-coded magnitude classes with raw refinement bits.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "gwl/entropy.hpp"
#include "gwl/plane.hpp"
#include "gwl/range_coder.hpp"

namespace gwl {

inline constexpr int default_spatial_levels = 4;

namespace detail {

// In-place 1-D forward 5/3 on n samples at data[0], data[stride], ...
// Output: ceil(n/2) lowpass samples followed by floor(n/2) highpass samples.
inline void dwt53_forward_1d(std::int32_t* data, int n, int stride, std::vector<std::int32_t>& tmp) {
  if (n < 2)
    return;
  const int nl = (n + 1) / 2;
  const int nh = n / 2;
  tmp.resize(static_cast<std::size_t>(n));
  auto x = [&](int i) { return data[static_cast<std::ptrdiff_t>(i) * stride]; };
  std::int32_t* low = tmp.data();
  std::int32_t* high = tmp.data() + nl;
  for (int i = 0; i < nh; ++i) {
    const int right = (2 * i + 2 < n) ? 2 * i + 2 : 2 * i;
    high[i] = x(2 * i + 1) - ((x(2 * i) + x(right)) >> 1);
  }
  for (int i = 0; i < nl; ++i) {
    const std::int32_t dl = high[std::max(i - 1, 0)];
    const std::int32_t dr = high[std::min(i, nh - 1)];
    low[i] = x(2 * i) + ((dl + dr + 2) >> 2);
  }
  for (int i = 0; i < n; ++i)
    data[static_cast<std::ptrdiff_t>(i) * stride] = tmp[static_cast<std::size_t>(i)];
}

inline void dwt53_inverse_1d(std::int32_t* data, int n, int stride, std::vector<std::int32_t>& tmp) {
  if (n < 2)
    return;
  const int nl = (n + 1) / 2;
  const int nh = n / 2;
  tmp.resize(static_cast<std::size_t>(n));
  auto at = [&](int i) -> std::int32_t& { return data[static_cast<std::ptrdiff_t>(i) * stride]; };
  auto high = [&](int i) { return at(nl + i); };
  for (int i = 0; i < nl; ++i) {
    const std::int32_t dl = high(std::max(i - 1, 0));
    const std::int32_t dr = high(std::min(i, nh - 1));
    tmp[static_cast<std::size_t>(2 * i)] = at(i) - ((dl + dr + 2) >> 2);
  }
  for (int i = 0; i < nh; ++i) {
    const int right = (2 * i + 2 < n) ? 2 * i + 2 : 2 * i;
    tmp[static_cast<std::size_t>(2 * i + 1)] =
        high(i) + ((tmp[static_cast<std::size_t>(2 * i)] + tmp[static_cast<std::size_t>(right)]) >> 1);
  }
  for (int i = 0; i < n; ++i)
    at(i) = tmp[static_cast<std::size_t>(i)];
}

} // namespace detail

// Region sizes (lowpass extent) before each decomposition level.
inline std::vector<std::pair<int, int>> dwt53_regions(int width, int height, int levels) {
  std::vector<std::pair<int, int>> regions;
  int w = width, h = height;
  for (int l = 0; l < levels; ++l) {
    regions.emplace_back(w, h);
    w = (w + 1) / 2;
    h = (h + 1) / 2;
  }
  return regions;
}

inline SignedFrame dwt53_forward(const SignedFrame& frame, int levels) {
  if (levels < 0)
    throw std::invalid_argument("dwt53: negative level count");
  SignedFrame c = frame;
  std::vector<std::int32_t> tmp;
  const int w_full = c.width();
  for (auto [w, h] : dwt53_regions(c.width(), c.height(), levels)) {
    for (int y = 0; y < h; ++y)
      detail::dwt53_forward_1d(&c(0, y), w, 1, tmp);
    for (int x = 0; x < w; ++x)
      detail::dwt53_forward_1d(&c(x, 0), h, w_full, tmp);
  }
  return c;
}

inline SignedFrame dwt53_inverse(const SignedFrame& coeffs, int levels) {
  if (levels < 0)
    throw std::invalid_argument("dwt53: negative level count");
  SignedFrame f = coeffs;
  std::vector<std::int32_t> tmp;
  const int w_full = f.width();
  auto regions = dwt53_regions(f.width(), f.height(), levels);
  for (auto it = regions.rbegin(); it != regions.rend(); ++it) {
    const auto [w, h] = *it;
    for (int x = 0; x < w; ++x)
      detail::dwt53_inverse_1d(&f(x, 0), h, w_full, tmp);
    for (int y = 0; y < h; ++y)
      detail::dwt53_inverse_1d(&f(0, y), w, 1, tmp);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Coefficient coding

enum class SubbandRole : std::uint8_t { lp = 0, hp = 1 };

struct SubbandRect {
  int x0, y0, w, h;
  int group; // 0 = LL, 1 = coarse details, 2 = level 2, 3 = finest
};

// Subbands in coding order: LL, then details from the coarsest level down.
inline std::vector<SubbandRect> subband_layout(int width, int height, int levels) {
  std::vector<SubbandRect> bands;
  const auto regions = dwt53_regions(width, height, levels);
  int llw = width, llh = height;
  if (!regions.empty()) {
    llw = (regions.back().first + 1) / 2;
    llh = (regions.back().second + 1) / 2;
  }
  bands.push_back({0, 0, llw, llh, 0});
  for (int l = levels - 1; l >= 0; --l) {
    const auto [w, h] = regions[static_cast<std::size_t>(l)];
    const int lw = (w + 1) / 2, lh = (h + 1) / 2;
    const int group = l == 0 ? 3 : (l == 1 ? 2 : 1);
    bands.push_back({lw, 0, w - lw, lh, group});     // HL
    bands.push_back({0, lh, lw, h - lh, group});     // LH
    bands.push_back({lw, lh, w - lw, h - lh, group}); // HH
  }
  return bands;
}

namespace detail {

inline constexpr int magnitude_classes = 33;
inline constexpr int band_groups = 4;

inline std::uint32_t zigzag(std::int32_t v) {
  const auto w = static_cast<std::int64_t>(v);
  return static_cast<std::uint32_t>(w >= 0 ? 2 * w : -2 * w - 1);
}

inline std::int32_t unzigzag(std::uint32_t u) {
  const auto w = static_cast<std::int64_t>(u);
  return static_cast<std::int32_t>((w & 1) ? -(w + 1) / 2 : w / 2);
}

inline std::vector<AdaptiveModel> coefficient_models() {
  return std::vector<AdaptiveModel>(static_cast<std::size_t>(band_groups * (magnitude_classes + 1)),
                                    AdaptiveModel(magnitude_classes));
}

} // namespace detail

struct SubbandFrame {
  SubbandRole role = SubbandRole::lp;
  SignedFrame frame;
};

// Blob: role u8, levels u8, width u32, height u32, then a CodedBlob
// (coefficient count + range-coder payload).
inline std::vector<std::uint8_t> encode_subband_frame(const SignedFrame& frame, SubbandRole role,
                                                      int levels = default_spatial_levels) {
  if (levels < 0 || levels > 31)
    throw std::invalid_argument("encode_subband_frame: level count out of range");
  const SignedFrame c = dwt53_forward(frame, levels);
  std::vector<std::uint8_t> out;
  out.push_back(static_cast<std::uint8_t>(role));
  out.push_back(static_cast<std::uint8_t>(levels));
  put_u32(out, static_cast<std::uint32_t>(frame.width()));
  put_u32(out, static_cast<std::uint32_t>(frame.height()));

  CodedBlob blob;
  blob.count = static_cast<std::uint32_t>(c.size());
  if (!c.empty()) {
    auto models = detail::coefficient_models();
    RangeEncoder enc;
    for (const auto& band : subband_layout(c.width(), c.height(), levels)) {
      int prev = 0;
      for (int y = band.y0; y < band.y0 + band.h; ++y)
        for (int x = band.x0; x < band.x0 + band.w; ++x) {
          const std::uint32_t u = detail::zigzag(c(x, y));
          const int cls = std::bit_width(u);
          models[static_cast<std::size_t>(band.group * (detail::magnitude_classes + 1) + prev)].encode(enc, cls);
          int remaining = cls - 1;
          while (remaining > 0) {
            const int chunk = std::min(remaining, 16);
            remaining -= chunk;
            enc.encode_bits((u >> remaining) & ((1u << chunk) - 1u), chunk);
          }
          prev = cls;
        }
    }
    blob.payload = enc.finish();
  }
  const auto bytes = blob.bytes();
  out.insert(out.end(), bytes.begin(), bytes.end());
  return out;
}

inline SubbandFrame decode_subband_frame(std::span<const std::uint8_t> in) {
  if (in.size() < 14)
    throw corrupt_stream("subband frame: header truncated");
  const auto role_code = in[0];
  if (role_code > 1)
    throw corrupt_stream("subband frame: unknown role");
  const int levels = in[1];
  if (levels > 31)
    throw corrupt_stream("subband frame: level count out of range");
  const std::uint32_t width = get_u32(in, 2);
  const std::uint32_t height = get_u32(in, 6);
  if (width > (1u << 16) || height > (1u << 16))
    throw corrupt_stream("subband frame: implausible dimensions");
  const CodedBlob blob = CodedBlob::parse(in.subspan(10));
  if (blob.count != static_cast<std::uint64_t>(width) * height)
    throw corrupt_stream("subband frame: coefficient count mismatch");

  SignedFrame c(static_cast<int>(width), static_cast<int>(height));
  if (!c.empty()) {
    auto models = detail::coefficient_models();
    RangeDecoder dec(blob.payload);
    for (const auto& band : subband_layout(c.width(), c.height(), levels)) {
      int prev = 0;
      for (int y = band.y0; y < band.y0 + band.h; ++y)
        for (int x = band.x0; x < band.x0 + band.w; ++x) {
          const int cls =
              models[static_cast<std::size_t>(band.group * (detail::magnitude_classes + 1) + prev)].decode(dec);
          std::uint32_t u = 0;
          if (cls > 0) {
            u = 1;
            int remaining = cls - 1;
            while (remaining > 0) {
              const int chunk = std::min(remaining, 16);
              remaining -= chunk;
              u = (u << chunk) | dec.decode_bits(chunk);
            }
          }
          c(x, y) = detail::unzigzag(u);
          prev = cls;
        }
    }
    dec.finish();
  } else if (!blob.payload.empty()) {
    throw corrupt_stream("subband frame: payload present for an empty frame");
  }
  return {static_cast<SubbandRole>(role_code), dwt53_inverse(c, levels)};
}

} // namespace gwl
