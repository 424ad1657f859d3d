#pragma once

// Benchmark sweeps over encoder settings, reported as plain-text tables and
// CSV. Each row encodes, decodes, checks losslessness and records PSNR_LP_t
// together with the per-stream byte counts.

#include <cstdio>
#include <limits>
#include <stdexcept>
#include <ostream>
#include <string>
#include <vector>

#include "gwl/codec.hpp"
#include "gwl/metrics.hpp"
#include "gwl/volume_io.hpp"

namespace gwl {

struct BenchRow {
  EncoderConfig config;
  double psnr_lpt = 0;
  RateReport rate;
  bool lossless = false;
};

inline BenchRow run_bench_case(const Volume& volume, const EncoderConfig& cfg) {
  BenchRow row;
  row.config = cfg;
  const Container c = encode_volume(volume, cfg);
  const auto bytes = serialize(c);
  const DecodedVolume d = decode_volume(bytes);
  row.rate = rate_report(c);
  row.lossless = d.volume == volume;
  row.psnr_lpt = volume_psnr_lpt(d, volume);
  return row;
}

struct BenchPlan {
  std::vector<McMode> mc{McMode::graph, McMode::block};
  std::vector<InterpolationMethod> methods{all_interpolation_methods.begin(), all_interpolation_methods.end()};
  std::vector<int> densities{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16};
  EncoderConfig base{};
};

// Graph mode gets one row per (method, k). Block and none modes ignore both,
// so they get a single row each.
inline std::vector<BenchRow> run_bench(const Volume& volume, const BenchPlan& plan) {
  std::vector<BenchRow> rows;
  for (McMode mc : plan.mc) {
    EncoderConfig cfg = plan.base;
    cfg.mc = mc;
    if (mc != McMode::graph) {
      rows.push_back(run_bench_case(volume, cfg));
      continue;
    }
    for (InterpolationMethod m : plan.methods)
      for (int k : plan.densities) {
        cfg.method = m;
        cfg.k = k;
        rows.push_back(run_bench_case(volume, cfg));
      }
  }
  return rows;
}

namespace detail {

inline std::string format_psnr(double v) {
  if (v == std::numeric_limits<double>::infinity())
    return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

} // namespace detail

inline void write_bench_table(std::ostream& os, const std::vector<BenchRow>& rows) {
  char line[160];
  std::snprintf(line, sizeof line, "%-6s %-8s %3s %5s %5s %10s %10s %10s %10s %10s %8s\n", "mc", "method", "k",
                "block", "r_max", "PSNR_LP_t", "LP", "HP", "m_tx", "total", "lossless");
  os << line;
  for (const auto& r : rows) {
    const bool graph = r.config.mc == McMode::graph;
    const std::string method = graph ? std::string(to_string(r.config.method)) : "-";
    const std::string k = graph ? std::to_string(r.config.k) : "-";
    const std::string block = r.config.mc == McMode::block ? std::to_string(r.config.block_size) : "-";
    std::snprintf(line, sizeof line, "%-6s %-8s %3s %5s %5d %10s %10zu %10zu %10zu %10zu %8s\n",
                  std::string(to_string(r.config.mc)).c_str(), method.c_str(), k.c_str(), block.c_str(), r.config.r_max,
                  detail::format_psnr(r.psnr_lpt).c_str(), r.rate.lp, r.rate.hp, r.rate.m_tx, r.rate.total,
                  r.lossless ? "yes" : "NO");
    os << line;
  }
}

inline void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << "mc,method,k,r_max,block_size,psnr_lpt_db,lp_bytes,hp_bytes,mask_bytes,motion_bytes,m_tx_bytes,total_bytes,"
        "container_bytes,lossless\n";
  for (const auto& r : rows)
    os << to_string(r.config.mc) << ',' << to_string(r.config.method) << ',' << r.config.k << ',' << r.config.r_max
       << ',' << r.config.block_size << ',' << detail::format_psnr(r.psnr_lpt) << ',' << r.rate.lp << ','
       << r.rate.hp << ',' << r.rate.mask << ',' << r.rate.motion << ',' << r.rate.m_tx << ',' << r.rate.total
       << ',' << r.rate.container_bytes << ',' << (r.lossless ? 1 : 0) << '\n';
}

// ---------------------------------------------------------------------------
// Phantom presets shared by the CLI and the test suites.

enum class PhantomPreset { translate, grow, still };

inline PhantomPreset parse_phantom_preset(const std::string& s) {
  if (s == "translate") return PhantomPreset::translate;
  if (s == "grow") return PhantomPreset::grow;
  if (s == "static") return PhantomPreset::still;
  throw std::invalid_argument("unknown phantom preset: " + s);
}

// Two textured objects: one translating by (+1, 0) per frame, one by
// (0, +1); the growing preset adds an expanding ellipse.
inline MotionSpec phantom_motion(PhantomPreset preset, int width, int height, int noise) {
  MotionSpec m;
  m.noise_amplitude = noise;
  if (preset == PhantomPreset::still) {
    m.objects.push_back({ShapeKind::rectangle, width / 4, height / 4, width / 3, height / 3, 1800, 0, 0, 0});
    return m;
  }
  m.objects.push_back({ShapeKind::rectangle, width / 8, height / 5, width / 3, height / 4, 2000, 1, 0, 0});
  m.objects.push_back({ShapeKind::ellipse, width / 2, height / 2, width / 3, height / 3, 2600, 0, 1, 0});
  if (preset == PhantomPreset::grow)
    m.objects.push_back({ShapeKind::ellipse, width / 2, height / 6, 6, 6, 3200, 0, 0, 1});
  return m;
}

inline Volume make_phantom_volume(PhantomPreset preset, int width, int height, int slices, int frames,
                                  int bit_depth, int noise, std::uint64_t seed) {
  VolumeHeader h{width, height, slices, frames, bit_depth};
  Volume v(h);
  for (int z = 0; z < slices; ++z) {
    MotionSpec m = phantom_motion(preset, width, height, noise);
    // Shift the objects a little per slice so slices differ.
    for (auto& o : m.objects)
      o.x += z;
    const TemporalSequence seq = generate_phantom(width, height, frames, bit_depth, m, seed + static_cast<std::uint64_t>(z));
    for (int t = 0; t < frames; ++t)
      v.frame(z, t) = seq.frames[static_cast<std::size_t>(t)];
  }
  return v;
}

} // namespace gwl
