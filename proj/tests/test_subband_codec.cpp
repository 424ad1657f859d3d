#include <gtest/gtest.h>

#include "gwl/subband_codec.hpp"
#include "gwl/volume_io.hpp"
#include "test_support.hpp"

using namespace gwl;

TEST(Dwt53, ZeroLevelsIsIdentity) {
  std::mt19937_64 rng(1);
  const auto f = fixture::random_plane<std::int32_t>(9, 7, -2000, 2000, rng);
  EXPECT_EQ(dwt53_forward(f, 0), f);
  EXPECT_EQ(dwt53_inverse(f, 0), f);
}

TEST(Dwt53, OneDimensionalWorkedExample) {
  // x = [1, 2, 3, 4, 5]: d = [2 - 2, 4 - 4] = [0, 0]; s = x_even.
  SignedFrame f(5, 1);
  for (int i = 0; i < 5; ++i)
    f(i, 0) = i + 1;
  const auto c = dwt53_forward(f, 1);
  EXPECT_EQ(c(0, 0), 1);
  EXPECT_EQ(c(1, 0), 3);
  EXPECT_EQ(c(2, 0), 5);
  EXPECT_EQ(c(3, 0), 0);
  EXPECT_EQ(c(4, 0), 0);
  // x = [0, 8, 0, 0]: d0 = 8 - 0 = 8, d1 = 0 - 0 = 0 (mirror), s0 = 0 + (8+8+2)>>2 = 4,
  // s1 = 0 + (8+0+2)>>2 = 2.
  SignedFrame g(4, 1);
  g(1, 0) = 8;
  const auto cg = dwt53_forward(g, 1);
  EXPECT_EQ(cg(0, 0), 4);
  EXPECT_EQ(cg(1, 0), 2);
  EXPECT_EQ(cg(2, 0), 8);
  EXPECT_EQ(cg(3, 0), 0);
}

TEST(Dwt53, Reversible) {
  std::mt19937_64 rng(2);
  for (auto [w, h] : {std::pair{64, 64}, std::pair{37, 21}, std::pair{1, 17}, std::pair{2, 2}, std::pair{144, 192}})
    for (int levels : {1, 4, 6}) {
      const auto f = fixture::random_plane<std::int32_t>(w, h, -32768, 32767, rng);
      EXPECT_EQ(dwt53_inverse(dwt53_forward(f, levels), levels), f) << w << "x" << h;
    }
}

TEST(Dwt53, ConstantFrameHasNoDetail) {
  const SignedFrame f(40, 24, 1234);
  const auto c = dwt53_forward(f, 4);
  const auto bands = subband_layout(40, 24, 4);
  for (std::size_t b = 1; b < bands.size(); ++b)
    for (int y = bands[b].y0; y < bands[b].y0 + bands[b].h; ++y)
      for (int x = bands[b].x0; x < bands[b].x0 + bands[b].w; ++x)
        EXPECT_EQ(c(x, y), 0);
  EXPECT_EQ(c(0, 0), 1234);
}

TEST(SubbandLayout, CoversEveryCoefficientOnce) {
  for (auto [w, h] : {std::pair{37, 21}, std::pair{1, 1}, std::pair{5, 64}})
    for (int levels : {0, 1, 4, 7}) {
      Plane<int> hits(w, h);
      for (const auto& b : subband_layout(w, h, levels))
        for (int y = b.y0; y < b.y0 + b.h; ++y)
          for (int x = b.x0; x < b.x0 + b.w; ++x)
            ++hits(x, y);
      for (int v : hits)
        EXPECT_EQ(v, 1);
    }
}

TEST(SubbandCodec, RoundTripSigned16Bit) {
  std::mt19937_64 rng(3);
  for (auto [w, h] : {std::pair{48, 40}, std::pair{13, 9}, std::pair{1, 1}, std::pair{144, 192}}) {
    const auto f = fixture::random_plane<std::int32_t>(w, h, -32768, 32767, rng);
    const auto bytes = encode_subband_frame(f, SubbandRole::hp);
    const auto back = decode_subband_frame(bytes);
    EXPECT_EQ(back.frame, f);
    EXPECT_EQ(back.role, SubbandRole::hp);
  }
}

TEST(SubbandCodec, AllZeroFrameIsTiny) {
  // The adaptive models still have to learn that only class 0 occurs, which
  // costs a few hundred bits per context. Anything under 0.025 bits per
  // sample shows the zeros are not being paid for one by one.
  const auto bytes = encode_subband_frame(SignedFrame(256, 256), SubbandRole::hp);
  EXPECT_LT(bytes.size() - 14, 256u * 256u / 40u / 8u);
  EXPECT_EQ(decode_subband_frame(bytes).frame, SignedFrame(256, 256));
}

TEST(SubbandCodec, SmoothPhantomCompresses) {
  MotionSpec m;
  m.objects.push_back({ShapeKind::ellipse, 20, 16, 40, 30, 2200, 0, 0, 0});
  const auto seq = generate_phantom(96, 80, 1, 12, m, 1);
  const auto f = plane_cast<std::int32_t>(seq.frames[0]);
  const auto bytes = encode_subband_frame(f, SubbandRole::lp);
  EXPECT_EQ(decode_subband_frame(bytes).frame, f);
  EXPECT_LT(bytes.size() * 8.0 / static_cast<double>(f.size()), 12.0);
}

TEST(SubbandCodec, DeterministicAndCorruptionChecked) {
  std::mt19937_64 rng(4);
  const auto f = fixture::random_plane<std::int32_t>(20, 20, -100, 100, rng);
  auto bytes = encode_subband_frame(f, SubbandRole::lp);
  EXPECT_EQ(bytes, encode_subband_frame(f, SubbandRole::lp));
  auto bad_role = bytes;
  bad_role[0] = 7;
  EXPECT_THROW(decode_subband_frame(bad_role), corrupt_stream);
  auto truncated = bytes;
  truncated.resize(truncated.size() - 3);
  EXPECT_THROW(decode_subband_frame(truncated), corrupt_stream);
  auto wrong_size = bytes;
  wrong_size[2] = 21;
  EXPECT_THROW(decode_subband_frame(wrong_size), corrupt_stream);
}
