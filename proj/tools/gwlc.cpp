// gwlc: command-line front end for the graph-based lossless volume codec.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gwl/bench.hpp"
#include "gwl/codec.hpp"
#include "gwl/metrics.hpp"
#include "gwl/volume_io.hpp"

namespace {

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw std::runtime_error("write failed: " + path);
}

// Encoder flags shared by `encode` and `bench`.
struct ConfigFlags {
  int r_max = 3;
  double psnr_target = 50.0;
  int k = 16;
  std::string method = "nearest";
  std::string mc = "graph";
  int block_size = 4;
  bool no_mask = false;
  bool fixed_radius = false;

  void attach(CLI::App* cmd, bool with_sweep_axes) {
    cmd->add_option("--r-max", r_max, "Maximum motion radius")->check(CLI::Range(1, 3))->capture_default_str();
    cmd->add_option("--psnr-target", psnr_target, "Masking target in dB")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--block-size", block_size, "Block size for --mc block")
        ->check(CLI::IsMember({2, 4, 8}))
        ->capture_default_str();
    cmd->add_flag("--no-mask", no_mask, "Transmit motion for every pixel (B = 1)");
    cmd->add_flag("--fixed-radius", fixed_radius, "Search the full r_max window everywhere");
    if (with_sweep_axes) {
      cmd->add_option("--k", k, "Sampling density index (k/16 of the masked pixels)")
          ->check(CLI::Range(1, 16))
          ->capture_default_str();
      cmd->add_option("--method", method, "Interpolation: nearest, linear, natural")
          ->check(CLI::IsMember({"nearest", "linear", "natural"}))
          ->capture_default_str();
      cmd->add_option("--mc", mc, "Motion compensation: graph, block, none")
          ->check(CLI::IsMember({"graph", "block", "none"}))
          ->capture_default_str();
    }
  }

  gwl::EncoderConfig config() const {
    gwl::EncoderConfig cfg;
    cfg.r_max = r_max;
    cfg.psnr_target = psnr_target;
    cfg.k = k;
    cfg.method = gwl::parse_interpolation_method(method);
    cfg.mc = gwl::parse_mc_mode(mc);
    cfg.block_size = block_size;
    cfg.mask = !no_mask;
    cfg.smoothing = !fixed_radius;
    return cfg;
  }
};

void print_rates(std::ostream& os, const gwl::RateReport& r) {
  os << "  LP bytes        " << r.lp << "\n"
     << "  HP bytes        " << r.hp << "\n"
     << "  mask bytes      " << r.mask << "\n"
     << "  motion bytes    " << r.motion << "\n"
     << "  m_tx bytes      " << r.m_tx << "\n"
     << "  total payload   " << r.total << "\n"
     << "  container bytes " << r.container_bytes << "\n";
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"gwlc - lossless graph-based motion compensated volume codec"};
  app.require_subcommand(1);

  // encode
  auto* enc = app.add_subcommand("encode", "Encode a raw volume into a .gwl container");
  std::string enc_in, enc_out;
  ConfigFlags enc_flags;
  enc->add_option("input", enc_in, "Raw volume (with .hdr sidecar)")->required();
  enc->add_option("output", enc_out, "Container to write")->required();
  enc_flags.attach(enc, true);

  // decode
  auto* dec = app.add_subcommand("decode", "Decode a container back into a raw volume");
  std::string dec_in, dec_out;
  bool bl_only = false;
  dec->add_option("input", dec_in, "Container")->required();
  dec->add_option("output", dec_out, "Raw volume to write (a .hdr sidecar is written too)")->required();
  dec->add_flag("--bl-only", bl_only, "Decode only the base layer (LP frames, half frame rate)");

  // info
  auto* info = app.add_subcommand("info", "Show container header and per-stream sizes");
  std::string info_in;
  info->add_option("input", info_in, "Container")->required();

  // metrics
  auto* met = app.add_subcommand("metrics", "Compare a container against its source volume");
  std::string met_vol, met_gwl;
  met->add_option("volume", met_vol, "Source raw volume")->required();
  met->add_option("container", met_gwl, "Container")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "Sweep densities, methods and mc modes over one volume");
  std::string bench_in, bench_csv;
  std::vector<int> bench_k;
  std::vector<std::string> bench_methods{"nearest", "linear", "natural"};
  std::vector<std::string> bench_mc{"graph", "block"};
  ConfigFlags bench_flags;
  bench->add_option("input", bench_in, "Raw volume")->required();
  bench->add_option("--k", bench_k, "Densities to sweep (default 1..16)")->check(CLI::Range(1, 16));
  bench->add_option("--methods", bench_methods, "Interpolation methods to sweep")
      ->check(CLI::IsMember({"nearest", "linear", "natural"}))
      ->capture_default_str();
  bench->add_option("--mc", bench_mc, "Motion compensation modes to include")
      ->check(CLI::IsMember({"graph", "block", "none"}))
      ->capture_default_str();
  bench->add_option("--csv", bench_csv, "Also write the rows as CSV to this file");
  bench_flags.attach(bench, false);

  // gen-phantom
  auto* gen = app.add_subcommand("gen-phantom", "Write a synthetic moving phantom volume");
  std::string gen_out, gen_preset = "translate";
  int gen_w = 64, gen_h = 64, gen_z = 1, gen_t = 8, gen_bits = 12, gen_noise = 0;
  std::uint64_t gen_seed = 1;
  gen->add_option("output", gen_out, "Raw volume to write")->required();
  gen->add_option("--preset", gen_preset, "translate, grow or static")
      ->check(CLI::IsMember({"translate", "grow", "static"}))
      ->capture_default_str();
  gen->add_option("--width", gen_w)->check(CLI::Range(8, 4096))->capture_default_str();
  gen->add_option("--height", gen_h)->check(CLI::Range(8, 4096))->capture_default_str();
  gen->add_option("--slices", gen_z)->check(CLI::Range(1, 1024))->capture_default_str();
  gen->add_option("--frames", gen_t)->check(CLI::Range(1, 4096))->capture_default_str();
  gen->add_option("--bit-depth", gen_bits)->check(CLI::Range(12, 16))->capture_default_str();
  gen->add_option("--noise", gen_noise, "Uniform noise amplitude")->check(CLI::Range(0, 1000))->capture_default_str();
  gen->add_option("--seed", gen_seed)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*enc) {
      const gwl::Volume v = gwl::load_volume(enc_in);
      const gwl::Container c = gwl::encode_volume(v, enc_flags.config());
      const auto bytes = gwl::serialize(c);
      write_file(enc_out, bytes);
      std::cout << "wrote " << enc_out << " (" << bytes.size() << " bytes, "
                << 2 * v.header().total_samples() << " raw)\n";
    } else if (*dec) {
      const gwl::DecodedVolume d =
          gwl::decode_volume(read_file(dec_in), bl_only ? gwl::DecodeMode::bl_only : gwl::DecodeMode::full);
      gwl::save_volume(d.volume, dec_out);
      const auto& h = d.volume.header();
      std::cout << "wrote " << dec_out << " (" << h.width << "x" << h.height << "x" << h.slices << "x" << h.frames
                << ", read LP " << d.read.lp << " HP " << d.read.hp << " motion " << d.read.mask + d.read.motion
                << " bytes)\n";
    } else if (*info) {
      const gwl::Container c = gwl::parse_container(read_file(info_in));
      const auto& h = c.header;
      std::cout << "size        " << h.width << " x " << h.height << " x " << h.slices << " x " << h.frames << "\n"
                << "bit depth   " << int(h.bit_depth) << "\n"
                << "mc          " << gwl::to_string(h.mc) << "\n"
                << "r_max       " << int(h.r_max) << "\n"
                << "density k   " << int(h.k) << "  (" << int(h.k) * 100 / 16.0 << " %)\n"
                << "method      " << gwl::to_string(h.method) << "\n"
                << "block size  " << int(h.block_size) << "\n"
                << "pairs/slice " << h.pairs() << (h.has_trailing() ? " + trailing LP frame" : "") << "\n";
      print_rates(std::cout, gwl::rate_report(c));
    } else if (*met) {
      const gwl::Volume v = gwl::load_volume(met_vol);
      const gwl::Container c = gwl::parse_container(read_file(met_gwl));
      const gwl::DecodedVolume d = gwl::decode_volume(c);
      const bool lossless = d.volume == v;
      std::cout << "lossless    " << (lossless ? "yes" : "NO") << "\n"
                << "PSNR_LP_t   " << gwl::detail::format_psnr(gwl::volume_psnr_lpt(d, v)) << " dB\n";
      print_rates(std::cout, gwl::rate_report(c));
      return lossless ? 0 : 1;
    } else if (*bench) {
      const gwl::Volume v = gwl::load_volume(bench_in);
      gwl::BenchPlan plan;
      plan.base = bench_flags.config();
      plan.mc.clear();
      for (const auto& m : bench_mc)
        plan.mc.push_back(gwl::parse_mc_mode(m));
      plan.methods.clear();
      for (const auto& m : bench_methods)
        plan.methods.push_back(gwl::parse_interpolation_method(m));
      if (!bench_k.empty())
        plan.densities = bench_k;
      const auto rows = gwl::run_bench(v, plan);
      gwl::write_bench_table(std::cout, rows);
      if (!bench_csv.empty()) {
        std::ofstream csv(bench_csv);
        if (!csv)
          throw std::runtime_error("cannot write " + bench_csv);
        gwl::write_bench_csv(csv, rows);
      }
      for (const auto& r : rows)
        if (!r.lossless)
          return 1;
    } else if (*gen) {
      const gwl::Volume v = gwl::make_phantom_volume(gwl::parse_phantom_preset(gen_preset), gen_w, gen_h, gen_z,
                                                     gen_t, gen_bits, gen_noise, gen_seed);
      gwl::save_volume(v, gen_out);
      std::cout << "wrote " << gen_out << " and " << gwl::header_path(gen_out).string() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "gwlc: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
