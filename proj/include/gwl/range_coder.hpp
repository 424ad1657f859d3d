#pragma once

// 32-bit range coder with carry propagation and adaptive frequency models.
//
// The encoder keeps a 64-bit low register; bytes that may still receive a
// carry are held back (one cached byte plus a run of 0xFF) until the carry
// is resolved. The decoder consumes exactly the bytes the encoder produced,
// which lets it reject truncated or padded payloads.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "gwl/plane.hpp"

namespace gwl {

inline constexpr std::uint32_t range_top = 1u << 24;

class RangeEncoder {
public:
  void encode(std::uint32_t start, std::uint32_t size, std::uint32_t total) {
    range_ /= total;
    low_ += static_cast<std::uint64_t>(start) * range_;
    range_ *= size;
    normalize();
  }

  // Equiprobable bits, most significant first. nbits <= 16.
  void encode_bits(std::uint32_t value, int nbits) {
    for (int i = nbits - 1; i >= 0; --i) {
      range_ >>= 1;
      if ((value >> i) & 1u)
        low_ += range_;
      normalize();
    }
  }

  std::vector<std::uint8_t> finish() {
    for (int i = 0; i < 5; ++i)
      shift_low();
    return std::move(out_);
  }

private:
  void normalize() {
    while (range_ < range_top) {
      range_ <<= 8;
      shift_low();
    }
  }

  void shift_low() {
    if (static_cast<std::uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
      const auto carry = static_cast<std::uint8_t>(low_ >> 32);
      std::uint8_t pending = cache_;
      do {
        out_.push_back(static_cast<std::uint8_t>(pending + carry));
        pending = 0xFF;
      } while (--cache_size_ != 0);
      cache_ = static_cast<std::uint8_t>(static_cast<std::uint32_t>(low_) >> 24);
    }
    ++cache_size_;
    low_ = (low_ & 0x00FFFFFFu) << 8;
  }

  std::uint64_t low_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint8_t cache_ = 0;
  std::uint64_t cache_size_ = 1;
  std::vector<std::uint8_t> out_;
};

class RangeDecoder {
public:
  explicit RangeDecoder(std::span<const std::uint8_t> in) : in_(in) {
    for (int i = 0; i < 5; ++i)
      code_ = (code_ << 8) | next_byte();
  }

  // Returns the cumulative frequency the next symbol falls into.
  std::uint32_t decode_freq(std::uint32_t total) {
    range_ /= total;
    const std::uint32_t v = code_ / range_;
    if (v >= total)
      throw corrupt_stream("range decoder: value outside model");
    return v;
  }

  void consume(std::uint32_t start, std::uint32_t size) {
    code_ -= start * range_;
    range_ *= size;
    normalize();
  }

  std::uint32_t decode_bits(int nbits) {
    std::uint32_t value = 0;
    for (int i = 0; i < nbits; ++i) {
      range_ >>= 1;
      std::uint32_t bit = 0;
      if (code_ >= range_) {
        code_ -= range_;
        bit = 1;
      }
      value = (value << 1) | bit;
      normalize();
    }
    return value;
  }

  std::size_t consumed() const noexcept { return pos_; }

  // Every payload byte must have been read, and no more.
  void finish() const {
    if (pos_ != in_.size())
      throw corrupt_stream("range decoder: payload length mismatch");
  }

private:
  std::uint32_t next_byte() {
    if (pos_ >= in_.size())
      throw corrupt_stream("range decoder: truncated payload");
    return in_[pos_++];
  }

  void normalize() {
    while (range_ < range_top) {
      code_ = (code_ << 8) | next_byte();
      range_ <<= 8;
    }
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
  std::uint32_t code_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
};

// Frequency-count model: counts start at 1, grow by `increment` per coded
// symbol and are halved (rounding up) once the total exceeds `limit`.
class AdaptiveModel {
public:
  AdaptiveModel(int alphabet, std::uint32_t increment = 1, std::uint32_t limit = 1u << 14)
      : freq_(static_cast<std::size_t>(alphabet), 1u), total_(static_cast<std::uint32_t>(alphabet)),
        increment_(increment), limit_(limit) {
    if (alphabet < 1)
      throw std::invalid_argument("AdaptiveModel: empty alphabet");
    if (limit + increment > (1u << 16))
      throw std::invalid_argument("AdaptiveModel: limit too large for the coder");
  }

  int alphabet() const noexcept { return static_cast<int>(freq_.size()); }
  std::uint32_t total() const noexcept { return total_; }

  void encode(RangeEncoder& enc, int symbol) {
    if (symbol < 0 || symbol >= alphabet())
      throw std::invalid_argument("AdaptiveModel: symbol outside alphabet");
    std::uint32_t start = 0;
    for (int s = 0; s < symbol; ++s)
      start += freq_[static_cast<std::size_t>(s)];
    enc.encode(start, freq_[static_cast<std::size_t>(symbol)], total_);
    update(symbol);
  }

  int decode(RangeDecoder& dec) {
    const std::uint32_t target = dec.decode_freq(total_);
    std::uint32_t start = 0;
    int symbol = 0;
    while (start + freq_[static_cast<std::size_t>(symbol)] <= target) {
      start += freq_[static_cast<std::size_t>(symbol)];
      ++symbol;
    }
    dec.consume(start, freq_[static_cast<std::size_t>(symbol)]);
    update(symbol);
    return symbol;
  }

private:
  void update(int symbol) {
    freq_[static_cast<std::size_t>(symbol)] += increment_;
    total_ += increment_;
    if (total_ > limit_) {
      total_ = 0;
      for (auto& f : freq_) {
        f = (f + 1) / 2;
        total_ += f;
      }
    }
  }

  std::vector<std::uint32_t> freq_;
  std::uint32_t total_;
  std::uint32_t increment_;
  std::uint32_t limit_;
};

} // namespace gwl
