#pragma once

// Raw dynamic-volume storage and synthetic phantoms.
//
// A volume is stored as two files:
//   <path>      little-endian uint16 samples, x fastest, then y, z, t
//   <path>.hdr  plain-text "key = value" lines: width, height, slices,
//               frames, bit_depth
// Samples of bit depth < 16 are zero-extended to 16 bits.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gwl/plane.hpp"

namespace gwl {

struct VolumeHeader {
  int width = 0;
  int height = 0;
  int slices = 1;
  int frames = 1;
  int bit_depth = 12;

  std::size_t frame_samples() const noexcept {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  std::size_t total_samples() const noexcept {
    return frame_samples() * static_cast<std::size_t>(slices) * static_cast<std::size_t>(frames);
  }
  std::uint32_t max_sample() const noexcept { return (1u << bit_depth) - 1u; }

  void validate() const {
    if (width < 1 || height < 1 || slices < 1 || frames < 1)
      throw std::invalid_argument("volume header: dimensions must be >= 1");
    if (bit_depth < 1 || bit_depth > 16)
      throw std::invalid_argument("volume header: bit_depth out of range [1,16]");
  }

  friend bool operator==(const VolumeHeader&, const VolumeHeader&) = default;
};

// Frames at a fixed slice, in acquisition order.
struct TemporalSequence {
  int bit_depth = 12;
  std::vector<Frame> frames;
};

// All samples of a X*Y*Z*T volume, frame-major: frame (z, t) at index t*Z + z.
class Volume {
public:
  Volume() = default;
  explicit Volume(VolumeHeader header) : header_(header) {
    header_.validate();
    frames_.assign(static_cast<std::size_t>(header_.slices) * header_.frames,
                   Frame(header_.width, header_.height));
  }

  const VolumeHeader& header() const noexcept { return header_; }

  Frame& frame(int z, int t) { return frames_.at(slot(z, t)); }
  const Frame& frame(int z, int t) const { return frames_.at(slot(z, t)); }

  friend bool operator==(const Volume&, const Volume&) = default;

private:
  std::size_t slot(int z, int t) const {
    if (z < 0 || z >= header_.slices || t < 0 || t >= header_.frames)
      throw std::out_of_range("volume frame index out of range");
    return static_cast<std::size_t>(t) * header_.slices + static_cast<std::size_t>(z);
  }

  VolumeHeader header_;
  std::vector<Frame> frames_;
};

inline std::filesystem::path header_path(const std::filesystem::path& raw) {
  return std::filesystem::path(raw.string() + ".hdr");
}

inline void save_volume(const Volume& volume, const std::filesystem::path& path) {
  const auto& h = volume.header();
  {
    std::ofstream hdr(header_path(path));
    if (!hdr)
      throw std::runtime_error("cannot write " + header_path(path).string());
    hdr << "width = " << h.width << "\n"
        << "height = " << h.height << "\n"
        << "slices = " << h.slices << "\n"
        << "frames = " << h.frames << "\n"
        << "bit_depth = " << h.bit_depth << "\n";
  }
  std::vector<char> bytes;
  bytes.reserve(h.total_samples() * 2);
  for (int t = 0; t < h.frames; ++t)
    for (int z = 0; z < h.slices; ++z)
      for (std::uint16_t s : volume.frame(z, t)) {
        bytes.push_back(static_cast<char>(s & 0xFF));
        bytes.push_back(static_cast<char>(s >> 8));
      }
  std::ofstream raw(path, std::ios::binary);
  if (!raw)
    throw std::runtime_error("cannot write " + path.string());
  raw.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

inline VolumeHeader parse_volume_header(std::istream& in) {
  std::map<std::string, long long> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      kv[key] = std::stoll(value);
    } catch (const std::exception&) {
      throw std::runtime_error("volume header: bad value for '" + key + "'");
    }
  }
  auto get = [&](const char* key) -> int {
    auto it = kv.find(key);
    if (it == kv.end())
      throw std::runtime_error(std::string("volume header: missing key '") + key + "'");
    if (it->second < -1000000000LL || it->second > 1000000000LL)
      throw std::runtime_error(std::string("volume header: value out of range for '") + key + "'");
    return static_cast<int>(it->second);
  };
  VolumeHeader h;
  h.width = get("width");
  h.height = get("height");
  h.slices = get("slices");
  h.frames = get("frames");
  h.bit_depth = get("bit_depth");
  h.validate();
  return h;
}

inline Volume load_volume(const std::filesystem::path& path) {
  std::ifstream hdr(header_path(path));
  if (!hdr)
    throw std::runtime_error("cannot read header " + header_path(path).string());
  const VolumeHeader h = parse_volume_header(hdr);

  std::ifstream raw(path, std::ios::binary);
  if (!raw)
    throw std::runtime_error("cannot read " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(raw)), std::istreambuf_iterator<char>());
  if (bytes.size() != h.total_samples() * 2)
    throw std::runtime_error("volume size mismatch: header declares " +
                             std::to_string(h.total_samples()) + " samples, payload holds " +
                             std::to_string(bytes.size()) + " bytes");

  Volume volume(h);
  std::size_t pos = 0;
  for (int t = 0; t < h.frames; ++t)
    for (int z = 0; z < h.slices; ++z)
      for (auto& s : volume.frame(z, t)) {
        const auto lo = static_cast<std::uint8_t>(bytes[pos]);
        const auto hi = static_cast<std::uint8_t>(bytes[pos + 1]);
        pos += 2;
        s = static_cast<std::uint16_t>(lo | (hi << 8));
        if (s > h.max_sample())
          throw std::runtime_error("volume sample exceeds declared bit depth");
      }
  return volume;
}

inline TemporalSequence extract_temporal_sequence(const Volume& volume, int z) {
  const auto& h = volume.header();
  if (z < 0 || z >= h.slices)
    throw std::out_of_range("slice index out of range");
  TemporalSequence seq;
  seq.bit_depth = h.bit_depth;
  seq.frames.reserve(static_cast<std::size_t>(h.frames));
  for (int t = 0; t < h.frames; ++t)
    seq.frames.push_back(volume.frame(z, t));
  return seq;
}

// Builds a single-slice volume from a sequence.
inline Volume volume_from_sequence(const TemporalSequence& seq) {
  if (seq.frames.empty())
    throw std::invalid_argument("empty sequence");
  VolumeHeader h{seq.frames[0].width(), seq.frames[0].height(), 1,
                 static_cast<int>(seq.frames.size()), seq.bit_depth};
  Volume v(h);
  for (int t = 0; t < h.frames; ++t) {
    require_same_shape(seq.frames[static_cast<std::size_t>(t)], v.frame(0, t), "volume_from_sequence");
    v.frame(0, t) = seq.frames[static_cast<std::size_t>(t)];
  }
  return v;
}

// ---------------------------------------------------------------------------
// Phantoms

enum class ShapeKind { rectangle, ellipse };

// A bright textured structure. Its texture is attached to the object, so a
// translation moves the texture with it.
struct PhantomObject {
  ShapeKind shape = ShapeKind::rectangle;
  int x = 0;        // top-left corner at frame 0
  int y = 0;
  int width = 8;
  int height = 8;
  int intensity = 2000;
  int velocity_x = 0; // pixels per frame
  int velocity_y = 0;
  int growth = 0;     // extra pixels of half-extent per frame (ellipses only)
};

struct MotionSpec {
  std::vector<PhantomObject> objects;
  int background_level = 600;
  int noise_amplitude = 0; // uniform integer noise in [-a, a]
};

namespace detail {

// Locally injective texture: neighbours within +/-6 pixels never repeat a value.
inline int object_texture(int u, int v) {
  const int m = ((u * 13 + v * 71) % 256 + 256) % 256;
  return m * 2;
}

inline int background_texture(int x, int y) {
  return static_cast<int>(std::lround(80.0 * std::sin(0.21 * x) * std::cos(0.17 * y) +
                                      40.0 * std::sin(0.05 * (x + 2 * y))));
}

} // namespace detail

inline TemporalSequence generate_phantom(int width, int height, int frames, int bit_depth,
                                         const MotionSpec& motion, std::uint64_t noise_seed) {
  if (width < 8 || height < 8)
    throw std::invalid_argument("phantom must be at least 8x8");
  if (frames < 1)
    throw std::invalid_argument("phantom needs at least one frame");
  if (bit_depth < 1 || bit_depth > 16)
    throw std::invalid_argument("bit_depth out of range [1,16]");

  const int max_value = (1 << bit_depth) - 1;
  std::mt19937_64 rng(noise_seed);
  TemporalSequence seq;
  seq.bit_depth = bit_depth;

  for (int t = 0; t < frames; ++t) {
    Plane<int> canvas(width, height);
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x)
        canvas(x, y) = motion.background_level + detail::background_texture(x, y);

    for (const auto& obj : motion.objects) {
      const int ox = obj.x + obj.velocity_x * t;
      const int oy = obj.y + obj.velocity_y * t;
      const int grow = obj.growth * t;
      const int x0 = ox - grow;
      const int y0 = oy - grow;
      const int w = obj.width + 2 * grow;
      const int h = obj.height + 2 * grow;
      if (w <= 0 || h <= 0)
        continue;
      const double cx = x0 + (w - 1) / 2.0;
      const double cy = y0 + (h - 1) / 2.0;
      for (int y = std::max(0, y0); y < std::min(height, y0 + h); ++y)
        for (int x = std::max(0, x0); x < std::min(width, x0 + w); ++x) {
          if (obj.shape == ShapeKind::ellipse) {
            const double nx = (x - cx) / (w / 2.0);
            const double ny = (y - cy) / (h / 2.0);
            if (nx * nx + ny * ny > 1.0)
              continue;
          }
          // Texture coordinates follow the object's translation.
          canvas(x, y) = obj.intensity + detail::object_texture(x - ox, y - oy);
        }
    }

    Frame frame(width, height);
    for (std::size_t i = 0; i < frame.size(); ++i) {
      int v = canvas[i];
      if (motion.noise_amplitude > 0) {
        const auto span = static_cast<std::uint64_t>(2 * motion.noise_amplitude + 1);
        v += static_cast<int>(rng() % span) - motion.noise_amplitude;
      }
      frame[i] = static_cast<std::uint16_t>(std::clamp(v, 0, max_value));
    }
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

} // namespace gwl
