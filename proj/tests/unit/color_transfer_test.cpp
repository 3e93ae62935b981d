// Copyright 2026 The HOT Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hot/color_transfer.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "hot/synthetic.hpp"

namespace hot {
namespace {

LabImage Flat(int w, int h, double L, double a, double b) {
  const std::size_t n = static_cast<std::size_t>(w) * h;
  return LabImage{w, h, std::vector<double>(n, L), std::vector<double>(n, a),
                  std::vector<double>(n, b)};
}

TEST(LabTest, WhiteAndBlack) {
  const Lab white = srgb_to_lab(255, 255, 255);
  EXPECT_NEAR(white.L, 100.0, 1e-6);
  EXPECT_LE(std::abs(white.a), 0.01);
  EXPECT_LE(std::abs(white.b), 0.01);
  const Lab black = srgb_to_lab(0, 0, 0);
  EXPECT_NEAR(black.L, 0.0, 1e-9);
  EXPECT_LE(std::abs(black.a), 0.01);
  EXPECT_LE(std::abs(black.b), 0.01);
}

TEST(LabTest, KnownPrimary) {
  // sRGB red in D65 Lab.
  const Lab red = srgb_to_lab(255, 0, 0);
  EXPECT_NEAR(red.L, 53.24, 0.05);
  EXPECT_NEAR(red.a, 80.09, 0.1);
  EXPECT_NEAR(red.b, 67.20, 0.1);
}

TEST(LabTest, RoundTripProbeCube) {
  int worst = 0;
  for (int r = 0; r < 256; r += 17)
    for (int g = 0; g < 256; g += 17)
      for (int b = 0; b < 256; b += 17) {
        std::uint8_t out[3];
        lab_to_srgb(srgb_to_lab(r, g, b), out);
        worst = std::max({worst, std::abs(out[0] - r), std::abs(out[1] - g), std::abs(out[2] - b)});
      }
  EXPECT_LE(worst, 1);
}

TEST(LabTest, OutOfGamutIsClamped) {
  std::uint8_t out[3];
  lab_to_srgb(Lab{50.0, 200.0, -200.0}, out);
  lab_to_srgb(Lab{150.0, 0.0, 0.0}, out);
  EXPECT_EQ(out[0], 255);
  lab_to_srgb(Lab{-10.0, 0.0, 0.0}, out);
  EXPECT_EQ(out[0], 0);
}

TEST(LabTest, ImageRoundTrip) {
  const RgbImage img = make_synthetic_photo(40, 30, 3);
  const LabImage lab = rgb_to_lab(img);
  EXPECT_EQ(lab.width, 40);
  EXPECT_EQ(lab.pixel_count(), 1200u);
  const RgbImage back = lab_to_rgb(lab);
  ASSERT_EQ(back.pixels.size(), img.pixels.size());
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    EXPECT_LE(std::abs(back.pixels[i] - img.pixels[i]), 1);
  }
}

TEST(LuminanceTest, IdentityAndConstant) {
  const std::vector<double> v{3, 1, 4, 1, 5, 9, 2, 6};
  EXPECT_EQ(luminance_transfer(v, v), v);
  const std::vector<double> c(5, 42.0);
  for (double x : luminance_transfer(v, c)) EXPECT_EQ(x, 42.0);
  const std::vector<double> one{7.0};
  for (double x : luminance_transfer(v, one)) EXPECT_EQ(x, 7.0);
  EXPECT_THROW(luminance_transfer({}, v), std::invalid_argument);
  EXPECT_THROW(luminance_transfer(v, {}), std::invalid_argument);
}

TEST(LuminanceTest, MonotoneAndMatchesQuantiles) {
  std::vector<double> src(1000), tgt(357);
  for (std::size_t i = 0; i < src.size(); ++i) src[i] = std::sin(0.37 * i) * 50 + 50;
  for (std::size_t i = 0; i < tgt.size(); ++i) tgt[i] = std::pow(std::cos(0.11 * i), 2) * 80 + 10;
  const auto out = luminance_transfer(src, tgt);
  for (std::size_t i = 0; i < src.size(); ++i)
    for (std::size_t j = i + 1; j < std::min(src.size(), i + 40); ++j) {
      if (src[i] < src[j]) {
        EXPECT_LE(out[i], out[j]);
      }
    }
  auto s_out = out;
  auto s_tgt = tgt;
  std::sort(s_out.begin(), s_out.end());
  std::sort(s_tgt.begin(), s_tgt.end());
  EXPECT_EQ(s_out.front(), s_tgt.front());
  EXPECT_EQ(s_out.back(), s_tgt.back());
  // Quantile q of the output lies between neighbouring target order
  // statistics.
  for (double q : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    const double v = s_out[static_cast<std::size_t>(q * (s_out.size() - 1))];
    const std::size_t lo = static_cast<std::size_t>(std::floor(q * (s_tgt.size() - 1)));
    EXPECT_GE(v, s_tgt[lo > 0 ? lo - 1 : 0]);
    EXPECT_LE(v, s_tgt[std::min(lo + 2, s_tgt.size() - 1)]);
  }
}

TEST(LuminanceTest, EqualCountsGiveExactMatching) {
  const std::vector<double> src{0.5, 0.1, 0.3};
  const std::vector<double> tgt{10, 30, 20};
  EXPECT_EQ(luminance_transfer(src, tgt), (std::vector<double>{30, 10, 20}));
}

TEST(ChromaBinningTest, CoversAllPixels) {
  const LabImage a = rgb_to_lab(make_synthetic_photo(32, 32, 1));
  const LabImage b = rgb_to_lab(make_synthetic_photo(20, 24, 2));
  const LabImage* imgs[] = {&a, &b};
  const ChromaBinning bins = ChromaBinning::Covering(imgs, 16, 12);
  EXPECT_EQ(bins.dims(), GridDims(16, 12));
  for (const LabImage* im : imgs) {
    for (std::size_t p = 0; p < im->pixel_count(); ++p) {
      EXPECT_GT(im->a[p], bins.a_min());
      EXPECT_LT(im->a[p], bins.a_max());
      EXPECT_GT(im->b[p], bins.b_min());
      EXPECT_LT(im->b[p], bins.b_max());
    }
    const auto counts = bins.counts(*im);
    double total = 0.0;
    for (double c : counts) total += c;
    EXPECT_EQ(total, static_cast<double>(im->pixel_count()));
  }
  double mass = 0.0;
  for (double v : bins.histogram(a).mass()) mass += v;
  EXPECT_NEAR(mass, 1.0, 1e-12);
}

TEST(ChromaBinningTest, BinGeometry) {
  const ChromaBinning bins(4, 2, -10.0, 10.0, 0.0, 4.0);
  EXPECT_EQ(bins.bin_of(-9.9, 0.1), bins.dims().node(0, 0));
  EXPECT_EQ(bins.bin_of(9.9, 3.9), bins.dims().node(3, 1));
  EXPECT_EQ(bins.bin_of(-1.0, 2.5), bins.dims().node(1, 1));
  EXPECT_EQ(bins.bin_of(-50.0, 99.0), bins.dims().node(0, 1));
  const auto [ca, cb] = bins.center(bins.dims().node(2, 0));
  EXPECT_DOUBLE_EQ(ca, 2.5);
  EXPECT_DOUBLE_EQ(cb, 1.0);
  EXPECT_THROW(ChromaBinning(0, 2, 0, 1, 0, 1), std::invalid_argument);
  EXPECT_THROW(ChromaBinning(2, 2, 1, 1, 0, 1), std::invalid_argument);
}

TEST(ChromaBinningTest, FlatImagesGetPadding) {
  const LabImage f = Flat(3, 3, 50, 5, -5);
  const LabImage* imgs[] = {&f};
  const ChromaBinning bins = ChromaBinning::Covering(imgs, 8, 8);
  EXPECT_LT(bins.a_min(), 5.0);
  EXPECT_GT(bins.a_max(), 5.0);
  EXPECT_GT(bins.a_max() - bins.a_min(), 0.0);
}

TEST(ChromaTransferTest, ConstantChromaMovesByCenterDifference) {
  const LabImage src = Flat(4, 4, 50, -20.0, 10.0);
  const LabImage tgt = Flat(3, 5, 60, 15.0, -12.0);
  const ChromaBinning bins(8, 8, -30.0, 30.0, -30.0, 30.0);
  const ChromaTransferResult r = chroma_transfer(src, tgt, bins, SolverConfig{});
  const auto [sa, sb] = bins.center(bins.bin_of(-20.0, 10.0));
  const auto [ta, tb] = bins.center(bins.bin_of(15.0, -12.0));
  for (std::size_t p = 0; p < src.pixel_count(); ++p) {
    EXPECT_NEAR(r.a[p], -20.0 + (ta - sa), 1e-3);
    EXPECT_NEAR(r.b[p], 10.0 + (tb - sb), 1e-3);
  }
}

TEST(ChromaTransferTest, SelfTransferBarelyMoves) {
  const LabImage lab = rgb_to_lab(make_synthetic_photo(48, 48, 5));
  const LabImage* imgs[] = {&lab};
  const ChromaBinning bins = ChromaBinning::Covering(imgs, 16, 16);
  const ChromaTransferResult r = chroma_transfer(lab, lab, bins, SolverConfig{});
  const double diag = std::hypot((bins.a_max() - bins.a_min()) / 16, (bins.b_max() - bins.b_min()) / 16);
  const auto counts = bins.counts(lab);
  for (std::size_t node = 0; node < counts.size(); ++node) {
    if (counts[node] == 0.0) continue;
    const auto [ca, cb] = bins.center(node);
    EXPECT_LE(std::hypot(r.bin_target_a[node] - ca, r.bin_target_b[node] - cb), 0.05 * diag);
  }
}

TEST(ChromaTransferTest, MappedHistogramApproachesTarget) {
  const LabImage src = rgb_to_lab(make_synthetic_photo(96, 96, 11));
  const LabImage tgt = rgb_to_lab(make_synthetic_photo(96, 96, 12));
  const LabImage* imgs[] = {&src, &tgt};
  const ChromaBinning bins = ChromaBinning::Covering(imgs, 32, 32);
  const ChromaTransferResult r = chroma_transfer(src, tgt, bins, SolverConfig{});
  LabImage mapped = src;
  mapped.a = r.a;
  mapped.b = r.b;
  const Histogram2D before = bins.histogram(src);
  const Histogram2D after = bins.histogram(mapped);
  const Histogram2D want = bins.histogram(tgt);
  double tv_before = 0.0, tv_after = 0.0;
  for (std::size_t i = 0; i < want.mass().size(); ++i) {
    tv_before += 0.5 * std::abs(before.mass()[i] - want.mass()[i]);
    tv_after += 0.5 * std::abs(after.mass()[i] - want.mass()[i]);
  }
  EXPECT_LT(tv_after, tv_before);
  RecordProperty("tv_after", std::to_string(tv_after));
  std::printf("tv before %.4f after %.4f\n", tv_before, tv_after);
}

TEST(ColorTransferTest, DeterministicAndSized) {
  const RgbImage src = make_synthetic_photo(40, 32, 21);
  const RgbImage tgt = make_synthetic_photo(36, 30, 22);
  TransferOptions opt;
  opt.bins = 12;
  const TransferResult a = color_transfer(src, tgt, opt);
  const TransferResult b = color_transfer(src, tgt, opt);
  EXPECT_EQ(a.image.width, 40);
  EXPECT_EQ(a.image.height, 32);
  EXPECT_EQ(a.image.pixels, b.image.pixels);
  EXPECT_NE(a.image.pixels, src.pixels);
}

}  // namespace
}  // namespace hot
