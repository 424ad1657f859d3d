// Acceptance gate: runs every acceptance criterion and prints one PASS/FAIL
// line per criterion. Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dense_oracle.hpp"
#include "gwl/bench.hpp"
#include "gwl/gwl.hpp"
#include "test_support.hpp"

using namespace gwl;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1. Lossless round trip over the full configuration grid.
Outcome lossless_grid() {
  std::mt19937_64 rng(20240601);
  int volumes = 0, failures = 0;
  for (McMode mc : all_mc_modes)
    for (auto method : all_interpolation_methods)
      for (int k = 1; k <= max_density_index; ++k) {
        // Alternate pure noise with noisy moving phantoms so masks and
        // interpolation see both dense and structured motion.
        Volume v;
        if (volumes % 2 == 0) {
          v = fixture::random_volume(32 + static_cast<int>(rng() % 9), 32 + static_cast<int>(rng() % 7), 1, 6, 12, rng);
        } else {
          const auto preset = (volumes % 4 == 1) ? PhantomPreset::translate : PhantomPreset::grow;
          v = make_phantom_volume(preset, 32 + static_cast<int>(rng() % 17), 32 + static_cast<int>(rng() % 11), 1,
                                  6 + static_cast<int>(rng() % 2), 12, static_cast<int>(rng() % 30), rng());
        }
        EncoderConfig cfg;
        cfg.mc = mc;
        cfg.method = method;
        cfg.k = k;
        cfg.block_size = 2 << (volumes % 3);
        const auto bytes = serialize(encode_volume(v, cfg));
        if (!(decode_volume(bytes).volume == v))
          ++failures;
        ++volumes;
      }
  return {volumes >= 100 && failures == 0,
          std::to_string(volumes - failures) + "/" + std::to_string(volumes) +
              " volumes bit-exact (16 densities x 3 methods x 3 mc modes)"};
}

// 2. Closed-form update against the dense matrix oracle.
Outcome update_oracle() {
  std::mt19937_64 rng(77);
  double max_err = 0;
  int pairs = 0;
  for (; pairs < 60; ++pairs) {
    const int w = 2 + static_cast<int>(rng() % 7);
    const int h = 2 + static_cast<int>(rng() % 7);
    const Frame odd = fixture::random_frame(w, h, 12, rng);
    const Frame even = fixture::random_frame(w, h, 12, rng);
    // Half the pairs use estimated motion, half random valid edges.
    const ReducedAdjacency adj = pairs % 2 == 0 ? estimate_motion(odd, even, radius_assignment(odd, even, 3))
                                                : fixture::random_adjacency(w, h, 3, rng);
    const SubbandPair sub = mctf_forward(odd, even, adj);
    const ClusterSums cs = cluster_sums(sub.hp, adj);
    const auto dense = fixture::dense_optimal_update(sub.hp, adj);
    for (std::size_t j = 0; j < dense.size(); ++j)
      max_err = std::max(max_err, std::abs(static_cast<double>(cs.sum[j]) / (1.0 + cs.count[j]) - dense[j]));
  }
  return {max_err <= 1e-9, std::to_string(pairs) + " pairs up to 8x8, max pre-floor error " + fmt("%.3g", max_err)};
}

// 3. Identity adjacency reduces to the integer Haar step, all 12-bit pairs.
Outcome haar_degeneration() {
  const int n = 4096;
  SignedFrame odd(n, 1), even(n, 1);
  for (int b = 0; b < n; ++b)
    even(b, 0) = b;
  const auto id = ReducedAdjacency::identity(n, 1);
  std::uint64_t mismatches = 0;
  for (int a = 0; a < n; ++a) {
    for (auto& v : odd)
      v = a;
    const SubbandPair s = mctf_forward(odd, even, id);
    for (int b = 0; b < n; ++b) {
      const int hp = b - a;
      const int lp = a + (hp >= 0 ? hp / 2 : -((-hp + 1) / 2));
      if (s.hp(b, 0) != hp || s.lp(b, 0) != lp)
        ++mismatches;
    }
    const FramePair back = mctf_inverse(s, id);
    if (back.odd != odd || back.even != even)
      ++mismatches;
  }
  return {mismatches == 0, "4096 x 4096 sample pairs, " + std::to_string(mismatches) + " mismatches"};
}

// 4. Candidate and reduced edge counts on a 5x5 frame.
Outcome adjacency_counts() {
  std::mt19937_64 rng(4);
  const Frame a = fixture::random_frame(5, 5, 12, rng);
  const Frame b = fixture::random_frame(5, 5, 12, rng);
  const auto candidates = count_candidates(5, 5, 1);
  const auto reduced = count_reduced_edges(estimate_motion(a, b, uniform_radius(5, 5, 1)));
  return {candidates == 169 && reduced == 25,
          "5x5, r=1: " + std::to_string(candidates) + " candidate edges, " + std::to_string(reduced) + " after reduction"};
}

// 5. Motion-map embedding constants.
Outcome embedding_constants() {
  const int centre = embed_index({0, 0}, 3);
  const int corner = embed_index({-3, -3}, 3);
  std::vector<int> inner;
  for (int dx = -1; dx <= 1; ++dx)
    for (int dy = -1; dy <= 1; ++dy)
      inner.push_back(embed_index({dx, dy}, 3));
  std::sort(inner.begin(), inner.end());
  const bool ok = centre == 25 && corner == 1 && inner == std::vector<int>{17, 18, 19, 24, 25, 26, 31, 32, 33};
  std::ostringstream os;
  os << "(0,0)->" << centre << ", (-3,-3)->" << corner << ", r=1 box ->";
  for (int v : inner)
    os << ' ' << v;
  return {ok, os.str()};
}

// 6. Scan and coder bijections on randomized shapes.
Outcome coder_bijections() {
  std::mt19937_64 rng(6);
  int checks = 0, failures = 0;
  auto check = [&](bool ok) {
    ++checks;
    failures += ok ? 0 : 1;
  };
  for (auto [w, h] : {std::pair{144, 192}, std::pair{192, 144}, std::pair{37, 23}, std::pair{1, 57},
                      std::pair{64, 64}, std::pair{3, 3}}) {
    const auto map = fixture::random_plane<std::uint16_t>(w, h, 0, 49, rng);
    const auto scanned = hilbert_scan(map);
    check(hilbert_unscan<std::uint16_t>(scanned, w, h) == map);

    const auto b = fixture::random_plane<std::uint8_t>(w, h, 0, 1, rng);
    check(bilevel_decode(CodedBlob::parse(bilevel_encode(b).bytes()), w, h) == b);

    const auto s = build_sampling_mask(1 + static_cast<int>(rng() % 16), w, h);
    std::vector<std::uint16_t> symbols;
    for (auto v : delete_zeros(scanned, b, s.bits))
      symbols.push_back(static_cast<std::uint16_t>(v % 49));
    check(ac_decode(CodedBlob::parse(ac_encode(symbols, 49).bytes()), 49) == symbols);

    std::vector<std::uint16_t> raw(static_cast<std::size_t>(w) * h);
    for (auto& v : raw)
      v = static_cast<std::uint16_t>(rng() % 9);
    check(ac_decode(ac_encode(raw, 9), 9) == raw);

    const auto hp = fixture::random_plane<std::int32_t>(w, h, -32768, 32767, rng);
    check(decode_subband_frame(encode_subband_frame(hp, SubbandRole::hp)).frame == hp);
  }
  return {failures == 0, std::to_string(checks - failures) + "/" + std::to_string(checks) +
                             " round trips (Hilbert, bilevel, symbol, subband) incl. 144x192"};
}

// 7. Threshold arithmetic and mask monotonicity.
Outcome threshold_math() {
  const double target = mse_target(50.0, 4095.0);
  const Volume v = make_phantom_volume(PhantomPreset::grow, 64, 64, 1, 2, 12, 12, 7);
  const Frame& a = v.frame(0, 0);
  const Frame& b = v.frame(0, 1);
  std::size_t prev = 0;
  bool monotone = true;
  std::ostringstream os;
  for (int p = 30; p <= 90; p += 5) {
    const std::size_t support = popcount(build_binary_mask(a, b, compute_threshold(a, b, p, 4095.0)));
    monotone = monotone && support >= prev;
    prev = support;
    if (p % 15 == 0)
      os << ' ' << p << "dB:" << support;
  }
  const bool ok = std::abs(target - 167.69) <= 0.01 && monotone;
  return {ok, "MSE_target " + fmt("%.4f", target) + "; support grows with the target:" + os.str()};
}

Volume trend_phantom() {
  return make_phantom_volume(PhantomPreset::translate, 64, 64, 1, 8, 12, 10, 8);
}

// 8. Density sweep with nearest-neighbour reconstruction.
Outcome density_trend() {
  const Volume v = trend_phantom();
  double prev_psnr = -1;
  std::size_t prev_mtx = 0;
  double worst_dip = 0;
  bool strictly = true;
  std::ostringstream os;
  for (int k = 1; k <= max_density_index; ++k) {
    EncoderConfig cfg;
    cfg.k = k;
    const BenchRow row = run_bench_case(v, cfg);
    if (k > 1) {
      worst_dip = std::max(worst_dip, prev_psnr - row.psnr_lpt);
      strictly = strictly && row.rate.m_tx > prev_mtx;
    }
    prev_psnr = row.psnr_lpt;
    prev_mtx = row.rate.m_tx;
    if (k == 1 || k == 8 || k == 16)
      os << " k=" << k << ":" << fmt("%.2f", row.psnr_lpt) << "dB/" << row.rate.m_tx << "B";
  }
  return {worst_dip <= 0.05 && strictly,
          "largest PSNR_LP_t dip " + fmt("%.3f", std::max(0.0, worst_dip)) + " dB, m_tx strictly increasing: " +
              (strictly ? "yes" : "no") + ";" + os.str()};
}

// 9. Larger search radius helps on fast motion.
Outcome radius_trend() {
  MotionSpec m;
  m.noise_amplitude = 6;
  m.objects.push_back({ShapeKind::rectangle, 6, 10, 22, 18, 2000, 3, 0, 0});
  m.objects.push_back({ShapeKind::ellipse, 30, 34, 24, 20, 2700, -2, -2, 0});
  m.objects.push_back({ShapeKind::rectangle, 40, 6, 14, 12, 1500, 0, 2, 0});
  const TemporalSequence seq = generate_phantom(72, 64, 6, 12, m, 9);
  const Volume v = volume_from_sequence(seq);
  EncoderConfig cfg;
  cfg.mask = false;
  cfg.k = 16;
  cfg.r_max = 1;
  const BenchRow r1 = run_bench_case(v, cfg);
  cfg.r_max = 3;
  const BenchRow r3 = run_bench_case(v, cfg);
  const bool ok = r3.psnr_lpt > r1.psnr_lpt && r3.rate.hp < r1.rate.hp && r1.lossless && r3.lossless;
  return {ok, "r=1: " + fmt("%.2f", r1.psnr_lpt) + " dB, HP " + std::to_string(r1.rate.hp) + " B; r=3: " +
                  fmt("%.2f", r3.psnr_lpt) + " dB, HP " + std::to_string(r3.rate.hp) + " B"};
}

// 10. Graph vs block baseline report.
Outcome baseline_report() {
  const Volume v = trend_phantom();
  std::vector<BenchRow> rows;
  EncoderConfig cfg;
  rows.push_back(run_bench_case(v, cfg));
  for (int s : {2, 4, 8}) {
    EncoderConfig b;
    b.mc = McMode::block;
    b.block_size = s;
    rows.push_back(run_bench_case(v, b));
  }
  EncoderConfig none;
  none.mc = McMode::none;
  rows.push_back(run_bench_case(v, none));
  std::ostringstream table;
  write_bench_table(table, rows);
  std::cout << table.str();
  bool ok = true;
  for (const auto& r : rows)
    ok = ok && r.lossless;
  return {ok, "report emitted for graph, block (s_b = 2, 4, 8) and plain Haar; every row lossless"};
}

} // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"lossless round-trip", lossless_grid},
      {"optimal-update oracle", update_oracle},
      {"Haar degeneration", haar_degeneration},
      {"adjacency counts", adjacency_counts},
      {"embedding constants", embedding_constants},
      {"scan/coder bijections", coder_bijections},
      {"threshold math", threshold_math},
      {"density trend", density_trend},
      {"radius trend", radius_trend},
      {"baseline comparison", baseline_report},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << index << " (" << name << "): " << o.detail << "  ["
              << fmt("%.1f", secs) << " s]" << std::endl;
    failed += o.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all acceptance criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
