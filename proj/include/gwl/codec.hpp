#pragma once

// Volume encoder/decoder and the .gwl container.
//
// Container layout (all integers little-endian):
//
//   "GWLC"  magic
//   u16     version (1)
//   u32 x4  width, height, slices, frames
//   u8  x6  bit_depth, r_max, density k, interpolation method, mc mode, block size
//   for each slice z, for each frame pair t:
//     section mask, section motion, section lp, section hp
//   for each slice z when frames is odd:
//     section lp (the unpaired trailing frame)
//
// A section is a u32 byte length followed by that many bytes. Frame pair t
// holds frames 2t (odd-indexed in one-based counting) and 2t+1.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gwl/baseline_block.hpp"
#include "gwl/entropy.hpp"
#include "gwl/graph_mc.hpp"
#include "gwl/lifting.hpp"
#include "gwl/motion_map.hpp"
#include "gwl/sparse_sampling.hpp"
#include "gwl/subband_codec.hpp"
#include "gwl/volume_io.hpp"

namespace gwl {

inline constexpr std::array<char, 4> container_magic{'G', 'W', 'L', 'C'};
inline constexpr std::uint16_t container_version = 1;
inline constexpr std::size_t container_header_size = 4 + 2 + 16 + 6;

enum class McMode : std::uint8_t { none = 0, graph = 1, block = 2 };

inline constexpr std::array<McMode, 3> all_mc_modes{McMode::graph, McMode::block, McMode::none};

inline std::string_view to_string(McMode m) {
  switch (m) {
  case McMode::none: return "none";
  case McMode::graph: return "graph";
  case McMode::block: return "block";
  }
  return "?";
}

inline McMode parse_mc_mode(std::string_view s) {
  if (s == "none") return McMode::none;
  if (s == "graph") return McMode::graph;
  if (s == "block") return McMode::block;
  throw std::invalid_argument("unknown mc mode: " + std::string(s));
}

struct EncoderConfig {
  int r_max = 3;
  double psnr_target = 50.0;
  int k = max_density_index;
  InterpolationMethod method = InterpolationMethod::nearest;
  McMode mc = McMode::graph;
  int block_size = 4;
  bool mask = true;       // false: B = 1 everywhere
  bool smoothing = true;  // false: every pixel searches the full r_max window
  RadiusIntervals intervals{};

  void validate() const {
    if (r_max < 1 || r_max > 3)
      throw std::invalid_argument("r_max must be in [1,3]");
    if (k < 1 || k > max_density_index)
      throw std::invalid_argument("density index k must be in [1,16]");
    if (!(psnr_target > 0))
      throw std::invalid_argument("psnr_target must be positive");
    check_block_size(block_size);
    if (!(intervals.low >= 0 && intervals.low <= intervals.high && intervals.high <= 1))
      throw std::invalid_argument("radius intervals must satisfy 0 <= low <= high <= 1");
  }
};

struct ContainerHeader {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t slices = 0;
  std::uint32_t frames = 0;
  std::uint8_t bit_depth = 12;
  std::uint8_t r_max = 3;
  std::uint8_t k = 16;
  InterpolationMethod method = InterpolationMethod::nearest;
  McMode mc = McMode::graph;
  std::uint8_t block_size = 4;

  std::uint32_t pairs() const noexcept { return frames / 2; }
  bool has_trailing() const noexcept { return frames % 2 == 1; }
  std::uint32_t max_sample() const noexcept { return (1u << bit_depth) - 1u; }

  friend bool operator==(const ContainerHeader&, const ContainerHeader&) = default;
};

using Section = std::vector<std::uint8_t>;

struct PairSections {
  Section mask;
  Section motion;
  Section lp;
  Section hp;

  friend bool operator==(const PairSections&, const PairSections&) = default;
};

struct SliceSections {
  std::vector<PairSections> pairs;
  Section trailing_lp; // only meaningful when frames is odd

  friend bool operator==(const SliceSections&, const SliceSections&) = default;
};

struct Container {
  ContainerHeader header;
  std::vector<SliceSections> slices;

  friend bool operator==(const Container&, const Container&) = default;
};

// ---------------------------------------------------------------------------
// Serialisation

namespace detail {

inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline void put_section(std::vector<std::uint8_t>& out, const Section& s) {
  if (s.size() > std::numeric_limits<std::uint32_t>::max())
    throw std::length_error("section too large");
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.insert(out.end(), s.begin(), s.end());
}

class SectionReader {
public:
  explicit SectionReader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    const auto v = static_cast<std::uint16_t>(in_[pos_] | (in_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    const std::uint32_t v = get_u32(in_, pos_);
    pos_ += 4;
    return v;
  }
  Section section() {
    const std::uint32_t n = u32();
    need(n);
    Section s(in_.begin() + static_cast<std::ptrdiff_t>(pos_),
              in_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return s;
  }
  std::size_t position() const noexcept { return pos_; }
  bool at_end() const noexcept { return pos_ == in_.size(); }

private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n)
      throw corrupt_stream("container: unexpected end of data");
  }
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

} // namespace detail

inline std::vector<std::uint8_t> serialize(const Container& c) {
  const ContainerHeader& h = c.header;
  if (c.slices.size() != h.slices)
    throw std::invalid_argument("serialize: slice count does not match header");
  std::vector<std::uint8_t> out(container_magic.begin(), container_magic.end());
  detail::put_u16(out, container_version);
  put_u32(out, h.width);
  put_u32(out, h.height);
  put_u32(out, h.slices);
  put_u32(out, h.frames);
  out.push_back(h.bit_depth);
  out.push_back(h.r_max);
  out.push_back(h.k);
  out.push_back(static_cast<std::uint8_t>(h.method));
  out.push_back(static_cast<std::uint8_t>(h.mc));
  out.push_back(h.block_size);
  for (const auto& slice : c.slices) {
    if (slice.pairs.size() != h.pairs())
      throw std::invalid_argument("serialize: pair count does not match header");
    for (const auto& p : slice.pairs) {
      detail::put_section(out, p.mask);
      detail::put_section(out, p.motion);
      detail::put_section(out, p.lp);
      detail::put_section(out, p.hp);
    }
  }
  if (h.has_trailing())
    for (const auto& slice : c.slices)
      detail::put_section(out, slice.trailing_lp);
  return out;
}

inline ContainerHeader parse_container_header(detail::SectionReader& in) {
  std::array<char, 4> magic{};
  for (auto& ch : magic)
    ch = static_cast<char>(in.u8());
  if (magic != container_magic)
    throw corrupt_stream("container: bad magic");
  const std::uint16_t version = in.u16();
  if (version != container_version)
    throw corrupt_stream("container: unsupported version " + std::to_string(version));
  ContainerHeader h;
  h.width = in.u32();
  h.height = in.u32();
  h.slices = in.u32();
  h.frames = in.u32();
  h.bit_depth = in.u8();
  h.r_max = in.u8();
  h.k = in.u8();
  const std::uint8_t method = in.u8();
  const std::uint8_t mc = in.u8();
  h.block_size = in.u8();
  if (h.width < 1 || h.height < 1 || h.slices < 1 || h.frames < 1)
    throw corrupt_stream("container: empty dimension");
  if (h.width > (1u << 16) || h.height > (1u << 16))
    throw corrupt_stream("container: implausible frame size");
  if (h.bit_depth < 1 || h.bit_depth > 16)
    throw corrupt_stream("container: bit depth out of range");
  if (h.r_max < 1 || h.r_max > max_supported_radius)
    throw corrupt_stream("container: r_max out of range");
  if (h.k < 1 || h.k > max_density_index)
    throw corrupt_stream("container: density index out of range");
  if (method > 2)
    throw corrupt_stream("container: unknown interpolation method");
  if (mc > 2)
    throw corrupt_stream("container: unknown mc mode");
  if (h.block_size != 2 && h.block_size != 4 && h.block_size != 8)
    throw corrupt_stream("container: bad block size");
  h.method = static_cast<InterpolationMethod>(method);
  h.mc = static_cast<McMode>(mc);
  return h;
}

inline Container parse_container(std::span<const std::uint8_t> bytes) {
  detail::SectionReader in(bytes);
  Container c;
  c.header = parse_container_header(in);
  const ContainerHeader& h = c.header;
  // Every section costs at least its 4-byte length, which bounds the counts.
  const std::uint64_t sections = static_cast<std::uint64_t>(h.slices) * (4ull * h.pairs() + (h.has_trailing() ? 1 : 0));
  if (sections * 4 > bytes.size())
    throw corrupt_stream("container: section table exceeds data");
  c.slices.resize(h.slices);
  for (auto& slice : c.slices) {
    slice.pairs.resize(h.pairs());
    for (auto& p : slice.pairs) {
      p.mask = in.section();
      p.motion = in.section();
      p.lp = in.section();
      p.hp = in.section();
    }
  }
  if (h.has_trailing())
    for (auto& slice : c.slices)
      slice.trailing_lp = in.section();
  if (!in.at_end())
    throw corrupt_stream("container: trailing bytes");
  return c;
}

// ---------------------------------------------------------------------------
// Per-pair motion side information

namespace detail {

inline std::uint16_t motion_alphabet(int r_max) {
  return static_cast<std::uint16_t>((2 * r_max + 1) * (2 * r_max + 1));
}

// Symbols on B = 1, S = 1 positions in Hilbert order, coded as s - 1.
inline Section encode_motion_symbols(const MotionMap& sampled, const BinaryMask& b, const BitPlane& s,
                                     int r_max) {
  const auto scanned = hilbert_scan(sampled);
  auto stream = delete_zeros(scanned, b, s);
  for (auto& v : stream)
    --v;
  return ac_encode(stream, motion_alphabet(r_max)).bytes();
}

inline MotionMap decode_motion_symbols(std::span<const std::uint8_t> section, const BinaryMask& b,
                                       const BitPlane& s, int r_max) {
  const CodedBlob blob = CodedBlob::parse(section);
  if (blob.count > b.size())
    throw corrupt_stream("motion stream longer than the frame");
  auto stream = ac_decode(blob, motion_alphabet(r_max));
  for (auto& v : stream)
    ++v;
  const auto scanned = reinsert_zeros(stream, b, s);
  return hilbert_unscan<std::uint16_t>(scanned, b.width(), b.height());
}

inline SignedFrame to_signed(const Frame& f) { return plane_cast<std::int32_t>(f); }

} // namespace detail

// What the encoder decided for one pair; handy for tests and diagnostics.
struct PairAnalysis {
  BinaryMask mask;
  MotionMap encoder_map;   // before masking and sampling
  MotionMap decoder_map;   // what the decoder will reconstruct
  ReducedAdjacency adjacency{0, 0};
};

struct EncodedPair {
  PairSections sections;
  PairAnalysis analysis;
};

inline EncodedPair encode_pair(const Frame& odd, const Frame& even, int bit_depth, const EncoderConfig& cfg) {
  cfg.validate();
  require_same_shape(odd, even, "encode_pair");
  const int w = odd.width();
  const int h = odd.height();
  EncodedPair out;
  PairAnalysis& a = out.analysis;

  switch (cfg.mc) {
  case McMode::none:
    a.adjacency = ReducedAdjacency::identity(w, h);
    break;
  case McMode::block: {
    const MotionVectorField field = block_search(odd, even, cfg.block_size, cfg.r_max);
    out.sections.motion = mv_encode(field).bytes();
    a.adjacency = block_adjacency(field, w, h);
    break;
  }
  case McMode::graph: {
    const RadiusMap radius =
        cfg.smoothing ? radius_assignment(odd, even, cfg.r_max, cfg.intervals) : uniform_radius(w, h, cfg.r_max);
    a.encoder_map = adjacency_to_map(estimate_motion(odd, even, radius), cfg.r_max);
    const double a_max = static_cast<double>((1u << bit_depth) - 1u);
    a.mask = cfg.mask ? build_binary_mask(odd, even, compute_threshold(odd, even, cfg.psnr_target, a_max))
                      : BinaryMask(w, h, 1);
    const SamplingMask s = build_sampling_mask(cfg.k, w, h);
    const MotionMap sampled = subsample(apply_mask(a.encoder_map, a.mask), s);
    // Closed loop: transform with exactly the map the decoder will rebuild.
    a.decoder_map = interpolate(sampled, a.mask, s, cfg.r_max, cfg.method);
    a.adjacency = map_to_adjacency(a.decoder_map, cfg.r_max);
    out.sections.mask = bilevel_encode(a.mask).bytes();
    out.sections.motion = detail::encode_motion_symbols(sampled, a.mask, s.bits, cfg.r_max);
    break;
  }
  }

  const SubbandPair sub = mctf_forward(odd, even, a.adjacency);
  out.sections.lp = encode_subband_frame(sub.lp, SubbandRole::lp);
  out.sections.hp = encode_subband_frame(sub.hp, SubbandRole::hp);
  return out;
}

inline Container encode_volume(const Volume& volume, const EncoderConfig& cfg = {}) {
  cfg.validate();
  const VolumeHeader& vh = volume.header();
  vh.validate();
  Container c;
  ContainerHeader& h = c.header;
  h.width = static_cast<std::uint32_t>(vh.width);
  h.height = static_cast<std::uint32_t>(vh.height);
  h.slices = static_cast<std::uint32_t>(vh.slices);
  h.frames = static_cast<std::uint32_t>(vh.frames);
  h.bit_depth = static_cast<std::uint8_t>(vh.bit_depth);
  h.r_max = static_cast<std::uint8_t>(cfg.r_max);
  h.k = static_cast<std::uint8_t>(cfg.k);
  h.method = cfg.method;
  h.mc = cfg.mc;
  h.block_size = static_cast<std::uint8_t>(cfg.block_size);

  c.slices.resize(h.slices);
  for (int z = 0; z < vh.slices; ++z) {
    SliceSections& slice = c.slices[static_cast<std::size_t>(z)];
    for (std::uint32_t t = 0; t < h.pairs(); ++t) {
      const int f = static_cast<int>(2 * t);
      slice.pairs.push_back(encode_pair(volume.frame(z, f), volume.frame(z, f + 1), vh.bit_depth, cfg).sections);
    }
    if (h.has_trailing())
      slice.trailing_lp = encode_subband_frame(detail::to_signed(volume.frame(z, vh.frames - 1)), SubbandRole::lp);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Decoding

enum class DecodeMode { full, bl_only };

// Bytes of section content actually handed to a stream decoder.
struct ReadAccounting {
  std::size_t mask = 0;
  std::size_t motion = 0;
  std::size_t lp = 0;
  std::size_t hp = 0;
};

struct DecodedVolume {
  // full: the original volume. bl_only: ceil(T/2) frames per slice, the LP
  // frames followed by the unpaired trailing frame if T is odd.
  Volume volume;
  // Adjacency used for each pair, indexed [z][t]. Empty in bl_only mode.
  std::vector<std::vector<ReducedAdjacency>> adjacency;
  // Decoded LP subbands, indexed [z][t].
  std::vector<std::vector<SignedFrame>> lp;
  ReadAccounting read;
};

namespace detail {

inline SignedFrame decode_expected(std::span<const std::uint8_t> section, SubbandRole role, const ContainerHeader& h) {
  SubbandFrame sf = decode_subband_frame(section);
  if (sf.role != role)
    throw corrupt_stream("subband frame has the wrong role");
  if (sf.frame.width() != static_cast<int>(h.width) || sf.frame.height() != static_cast<int>(h.height))
    throw corrupt_stream("subband frame has the wrong dimensions");
  return std::move(sf.frame);
}

inline Frame to_frame(const SignedFrame& f, std::uint32_t max_sample) {
  Frame out(f.width(), f.height());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] < 0 || static_cast<std::uint32_t>(f[i]) > max_sample)
      throw corrupt_stream("decoded sample outside the bit depth");
    out[i] = static_cast<std::uint16_t>(f[i]);
  }
  return out;
}

inline ReducedAdjacency decode_adjacency(const ContainerHeader& h, const PairSections& p, ReadAccounting& read) {
  const int w = static_cast<int>(h.width);
  const int hh = static_cast<int>(h.height);
  switch (h.mc) {
  case McMode::none:
    if (!p.mask.empty() || !p.motion.empty())
      throw corrupt_stream("motion data present without motion compensation");
    return ReducedAdjacency::identity(w, hh);
  case McMode::block: {
    if (!p.mask.empty())
      throw corrupt_stream("mask present in block mode");
    read.motion += p.motion.size();
    const auto field = mv_decode(CodedBlob::parse(p.motion), h.block_size, h.r_max, w, hh);
    return block_adjacency(field, w, hh);
  }
  case McMode::graph: {
    read.mask += p.mask.size();
    read.motion += p.motion.size();
    const BinaryMask b = bilevel_decode(CodedBlob::parse(p.mask), w, hh);
    const SamplingMask s = build_sampling_mask(h.k, w, hh);
    const MotionMap sampled = decode_motion_symbols(p.motion, b, s.bits, h.r_max);
    const MotionMap map = interpolate(sampled, b, s, h.r_max, h.method);
    try {
      return map_to_adjacency(map, h.r_max);
    } catch (const std::out_of_range&) {
      throw corrupt_stream("motion map points outside the frame");
    }
  }
  }
  throw corrupt_stream("unknown mc mode");
}

} // namespace detail

inline DecodedVolume decode_volume(const Container& c, DecodeMode mode = DecodeMode::full) {
  const ContainerHeader& h = c.header;
  if (c.slices.size() != h.slices)
    throw corrupt_stream("container: slice count mismatch");
  const bool full = mode == DecodeMode::full;
  VolumeHeader vh;
  vh.width = static_cast<int>(h.width);
  vh.height = static_cast<int>(h.height);
  vh.slices = static_cast<int>(h.slices);
  vh.frames = static_cast<int>(full ? h.frames : (h.frames + 1) / 2);
  vh.bit_depth = h.bit_depth;

  DecodedVolume out;
  out.volume = Volume(vh);
  out.adjacency.resize(h.slices);
  out.lp.resize(h.slices);
  for (std::uint32_t z = 0; z < h.slices; ++z) {
    const SliceSections& slice = c.slices[z];
    if (slice.pairs.size() != h.pairs())
      throw corrupt_stream("container: pair count mismatch");
    for (std::uint32_t t = 0; t < h.pairs(); ++t) {
      const PairSections& p = slice.pairs[t];
      out.read.lp += p.lp.size();
      SignedFrame lp = detail::decode_expected(p.lp, SubbandRole::lp, h);
      if (full) {
        ReducedAdjacency adj = detail::decode_adjacency(h, p, out.read);
        out.read.hp += p.hp.size();
        const SignedFrame hp = detail::decode_expected(p.hp, SubbandRole::hp, h);
        const FramePair frames = mctf_inverse(SubbandPair{lp, hp}, adj);
        out.volume.frame(static_cast<int>(z), static_cast<int>(2 * t)) = detail::to_frame(frames.odd, h.max_sample());
        out.volume.frame(static_cast<int>(z), static_cast<int>(2 * t + 1)) =
            detail::to_frame(frames.even, h.max_sample());
        out.adjacency[z].push_back(std::move(adj));
      } else {
        out.volume.frame(static_cast<int>(z), static_cast<int>(t)) = detail::to_frame(lp, h.max_sample());
      }
      out.lp[z].push_back(std::move(lp));
    }
    if (h.has_trailing()) {
      out.read.lp += slice.trailing_lp.size();
      const SignedFrame last = detail::decode_expected(slice.trailing_lp, SubbandRole::lp, h);
      const int slot = full ? static_cast<int>(h.frames) - 1 : static_cast<int>(h.pairs());
      out.volume.frame(static_cast<int>(z), slot) = detail::to_frame(last, h.max_sample());
    }
  }
  return out;
}

inline DecodedVolume decode_volume(std::span<const std::uint8_t> bytes, DecodeMode mode = DecodeMode::full) {
  return decode_volume(parse_container(bytes), mode);
}

} // namespace gwl
