#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gwl {

// Raised when a coded buffer cannot be decoded.
class corrupt_stream : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Integer pixel displacement. dx runs along x (columns), dy along y (rows).
struct Offset {
  int dx = 0;
  int dy = 0;

  friend constexpr bool operator==(Offset, Offset) = default;
};

// Dense row-major 2-D grid, x fastest.
template <typename T>
class Plane {
public:
  using value_type = T;

  Plane() = default;
  Plane(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    if (width < 0 || height < 0)
      throw std::invalid_argument("Plane: negative dimension");
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  T& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const noexcept { return data_[index(x, y)]; }

  T& operator[](std::size_t i) noexcept { return data_[i]; }
  const T& operator[](std::size_t i) const noexcept { return data_[i]; }

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  std::span<T> samples() noexcept { return data_; }
  std::span<const T> samples() const noexcept { return data_; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  friend bool operator==(const Plane&, const Plane&) = default;

private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

// Unsigned source samples (bit depth <= 16).
using Frame = Plane<std::uint16_t>;
// Signed subband samples and intermediate results.
using SignedFrame = Plane<std::int32_t>;
using BitPlane = Plane<std::uint8_t>;

template <typename A, typename B>
bool same_shape(const Plane<A>& a, const Plane<B>& b) noexcept {
  return a.width() == b.width() && a.height() == b.height();
}

template <typename A, typename B>
void require_same_shape(const Plane<A>& a, const Plane<B>& b, const char* what) {
  if (!same_shape(a, b))
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

template <typename To, typename From>
Plane<To> plane_cast(const Plane<From>& in) {
  Plane<To> out(in.width(), in.height());
  for (std::size_t i = 0; i < in.size(); ++i)
    out[i] = static_cast<To>(in[i]);
  return out;
}

// floor(num / den) for den > 0, rounding toward negative infinity.
constexpr std::int64_t floor_div(std::int64_t num, std::int64_t den) noexcept {
  std::int64_t q = num / den;
  if ((num % den != 0) && (num < 0))
    --q;
  return q;
}

constexpr int chebyshev(Offset o) noexcept {
  const int ax = o.dx < 0 ? -o.dx : o.dx;
  const int ay = o.dy < 0 ? -o.dy : o.dy;
  return ax > ay ? ax : ay;
}

} // namespace gwl
