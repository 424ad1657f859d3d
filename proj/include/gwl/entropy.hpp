#pragma once

// Scanning and entropy coding of motion information:
//   - Hilbert scan of a map over the enclosing 2^n x 2^n curve, skipping
//     positions outside the frame
//   - zero deletion driven by B and S, which both sides know
//   - previous-symbol context adaptive arithmetic coding of the symbol stream
//   - template-context binary arithmetic coding of bi-level masks
//
// Blob layout: 4-byte little-endian symbol count, then the coder payload.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gwl/plane.hpp"
#include "gwl/range_coder.hpp"

namespace gwl {

// ---------------------------------------------------------------------------
// Byte helpers

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  if (at + 4 > in.size())
    throw corrupt_stream("unexpected end of data");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(in[at + static_cast<std::size_t>(i)]) << (8 * i);
  return v;
}

struct CodedBlob {
  std::uint32_t count = 0;
  std::vector<std::uint8_t> payload;

  std::vector<std::uint8_t> bytes() const {
    std::vector<std::uint8_t> out;
    out.reserve(4 + payload.size());
    put_u32(out, count);
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
  }

  static CodedBlob parse(std::span<const std::uint8_t> in) {
    CodedBlob b;
    b.count = get_u32(in, 0);
    b.payload.assign(in.begin() + 4, in.end());
    return b;
  }

  friend bool operator==(const CodedBlob&, const CodedBlob&) = default;
};

// ---------------------------------------------------------------------------
// Hilbert scan

inline int hilbert_order(int width, int height) {
  const int m = std::max(width, height);
  int n = 1;
  while (n < m)
    n <<= 1;
  return n;
}

// Position of step d on the n x n Hilbert curve (n a power of two). The curve
// starts at (0, 0) and always takes its first step along +y.
inline std::pair<int, int> hilbert_point(int n, std::uint64_t d) {
  int x = 0, y = 0;
  int levels = 0;
  for (int s = 1; s < n; s <<= 1) {
    const int rx = static_cast<int>(1 & (d / 2));
    const int ry = static_cast<int>(1 & (d ^ static_cast<std::uint64_t>(rx)));
    if (ry == 0) {
      if (rx == 1) {
        x = s - 1 - x;
        y = s - 1 - y;
      }
      std::swap(x, y);
    }
    x += s * rx;
    y += s * ry;
    d /= 4;
    ++levels;
  }
  if (levels % 2 == 0)
    std::swap(x, y);
  return {x, y};
}

// Linear (row-major) indices of the in-frame pixels in curve order.
inline std::vector<std::uint32_t> hilbert_scan_order(int width, int height) {
  std::vector<std::uint32_t> order;
  if (width < 1 || height < 1)
    return order;
  order.reserve(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  const int n = hilbert_order(width, height);
  const std::uint64_t steps = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n);
  for (std::uint64_t d = 0; d < steps; ++d) {
    const auto [x, y] = hilbert_point(n, d);
    if (x < width && y < height)
      order.push_back(static_cast<std::uint32_t>(y * width + x));
  }
  return order;
}

template <typename T>
std::vector<T> hilbert_scan(const Plane<T>& map) {
  std::vector<T> out;
  out.reserve(map.size());
  for (std::uint32_t i : hilbert_scan_order(map.width(), map.height()))
    out.push_back(map[i]);
  return out;
}

template <typename T>
Plane<T> hilbert_unscan(std::span<const T> symbols, int width, int height) {
  Plane<T> map(width, height);
  const auto order = hilbert_scan_order(width, height);
  if (symbols.size() != order.size())
    throw std::invalid_argument("hilbert_unscan: symbol count does not match frame");
  for (std::size_t k = 0; k < order.size(); ++k)
    map[order[k]] = symbols[k];
  return map;
}

// ---------------------------------------------------------------------------
// Zero deletion

// Keeps the scanned symbols at positions with B = 1 and S = 1.
inline std::vector<std::uint16_t> delete_zeros(std::span<const std::uint16_t> scanned,
                                               const BitPlane& b, const BitPlane& s) {
  require_same_shape(b, s, "delete_zeros");
  const auto order = hilbert_scan_order(b.width(), b.height());
  if (scanned.size() != order.size())
    throw std::invalid_argument("delete_zeros: scan length does not match masks");
  std::vector<std::uint16_t> stream;
  for (std::size_t k = 0; k < order.size(); ++k)
    if (b[order[k]] && s[order[k]])
      stream.push_back(scanned[k]);
  return stream;
}

inline std::vector<std::uint16_t> reinsert_zeros(std::span<const std::uint16_t> stream,
                                                 const BitPlane& b, const BitPlane& s) {
  require_same_shape(b, s, "reinsert_zeros");
  const auto order = hilbert_scan_order(b.width(), b.height());
  std::vector<std::uint16_t> scanned(order.size(), 0);
  std::size_t next = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (!(b[order[k]] && s[order[k]]))
      continue;
    if (next >= stream.size())
      throw corrupt_stream("reinsert_zeros: stream shorter than mask support");
    scanned[k] = stream[next++];
  }
  if (next != stream.size())
    throw corrupt_stream("reinsert_zeros: stream longer than mask support");
  return scanned;
}

// ---------------------------------------------------------------------------
// Multi-context adaptive arithmetic coding

// Context of symbol n is symbol n-1; the first symbol uses a start context.
inline CodedBlob ac_encode(std::span<const std::uint16_t> symbols, int alphabet) {
  CodedBlob blob;
  blob.count = static_cast<std::uint32_t>(symbols.size());
  if (symbols.empty())
    return blob;
  std::vector<AdaptiveModel> models(static_cast<std::size_t>(alphabet) + 1, AdaptiveModel(alphabet));
  RangeEncoder enc;
  std::size_t context = static_cast<std::size_t>(alphabet);
  for (std::uint16_t s : symbols) {
    models[context].encode(enc, s);
    context = s;
  }
  blob.payload = enc.finish();
  return blob;
}

inline std::vector<std::uint16_t> ac_decode(const CodedBlob& blob, int alphabet) {
  std::vector<std::uint16_t> out;
  if (blob.count == 0) {
    if (!blob.payload.empty())
      throw corrupt_stream("ac_decode: payload present for an empty stream");
    return out;
  }
  out.reserve(blob.count);
  std::vector<AdaptiveModel> models(static_cast<std::size_t>(alphabet) + 1, AdaptiveModel(alphabet));
  RangeDecoder dec(blob.payload);
  std::size_t context = static_cast<std::size_t>(alphabet);
  for (std::uint32_t n = 0; n < blob.count; ++n) {
    const int s = models[context].decode(dec);
    out.push_back(static_cast<std::uint16_t>(s));
    context = static_cast<std::size_t>(s);
  }
  dec.finish();
  return out;
}

// ---------------------------------------------------------------------------
// Bi-level masks

namespace detail {

// Ten-pixel causal template: three pixels two rows up, five one row up and
// two to the left on the current row. Pixels outside the frame read as 0.
inline std::uint32_t bilevel_context(const BitPlane& m, int x, int y) {
  auto px = [&](int xx, int yy) -> std::uint32_t {
    return m.contains(xx, yy) ? (m(xx, yy) ? 1u : 0u) : 0u;
  };
  std::uint32_t c = 0;
  c = (c << 1) | px(x - 1, y - 2);
  c = (c << 1) | px(x, y - 2);
  c = (c << 1) | px(x + 1, y - 2);
  c = (c << 1) | px(x - 2, y - 1);
  c = (c << 1) | px(x - 1, y - 1);
  c = (c << 1) | px(x, y - 1);
  c = (c << 1) | px(x + 1, y - 1);
  c = (c << 1) | px(x + 2, y - 1);
  c = (c << 1) | px(x - 2, y);
  c = (c << 1) | px(x - 1, y);
  return c;
}

inline constexpr std::uint32_t bilevel_increment = 32;
inline constexpr std::uint32_t bilevel_limit = 1u << 15;

inline std::vector<AdaptiveModel> bilevel_models() {
  return std::vector<AdaptiveModel>(1u << 10, AdaptiveModel(2, bilevel_increment, bilevel_limit));
}

} // namespace detail

inline CodedBlob bilevel_encode(const BitPlane& mask) {
  CodedBlob blob;
  blob.count = static_cast<std::uint32_t>(mask.size());
  if (mask.empty())
    return blob;
  auto models = detail::bilevel_models();
  RangeEncoder enc;
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      models[detail::bilevel_context(mask, x, y)].encode(enc, mask(x, y) ? 1 : 0);
  blob.payload = enc.finish();
  return blob;
}

inline BitPlane bilevel_decode(const CodedBlob& blob, int width, int height) {
  BitPlane mask(width, height);
  if (blob.count != mask.size())
    throw corrupt_stream("bilevel_decode: pixel count mismatch");
  if (mask.empty()) {
    if (!blob.payload.empty())
      throw corrupt_stream("bilevel_decode: payload present for an empty mask");
    return mask;
  }
  auto models = detail::bilevel_models();
  RangeDecoder dec(blob.payload);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      mask(x, y) = static_cast<std::uint8_t>(models[detail::bilevel_context(mask, x, y)].decode(dec));
  dec.finish();
  return mask;
}

} // namespace gwl
