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

// Color transfer in CIE-Lab: luminance by 1D monotone rearrangement,
// chrominance by a 2D transport plan between binned (a, b) histograms.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hot/grid_model.hpp"
#include "hot/hot_solver.hpp"
#include "hot/image_io.hpp"

namespace hot {

struct LabImage {
  int width = 0;
  int height = 0;
  std::vector<double> L;  // [0, 100]
  std::vector<double> a;
  std::vector<double> b;

  std::size_t pixel_count() const { return L.size(); }
};

// sRGB (D65) <-> CIE-Lab. lab_to_rgb clamps out-of-gamut colors.
LabImage rgb_to_lab(const RgbImage& image);
RgbImage lab_to_rgb(const LabImage& image);

struct Lab {
  double L, a, b;
};
Lab srgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b);
void lab_to_srgb(const Lab& lab, std::uint8_t rgb[3]);

// Source pixel of rank p among n values takes the target quantile
// p / (n - 1), interpolated linearly between target order statistics.
// Equal ranks are broken by pixel index. Throws std::invalid_argument on
// empty input.
std::vector<double> luminance_transfer(std::span<const double> src,
                                       std::span<const double> tgt);

// Uniform bins over a padded (a, b) box. Bin (i, j) covers a along rows and
// b along columns, so the histograms live on a bins_a x bins_b grid.
class ChromaBinning {
 public:
  // Covers the chroma of every given image, padded by 1% of each side's
  // extent (at least 1e-3 when an extent is zero).
  static ChromaBinning Covering(std::span<const LabImage* const> images,
                                int bins_a = 64, int bins_b = 64);

  ChromaBinning(int bins_a, int bins_b, double a_min, double a_max,
                double b_min, double b_max);

  GridDims dims() const { return GridDims(bins_a_, bins_b_); }
  int bins_a() const { return bins_a_; }
  int bins_b() const { return bins_b_; }
  double a_min() const { return a_min_; }
  double a_max() const { return a_max_; }
  double b_min() const { return b_min_; }
  double b_max() const { return b_max_; }

  // Grid node of the bin containing (a, b); values outside the box go to
  // the nearest edge bin.
  std::size_t bin_of(double a, double b) const;
  std::pair<double, double> center(std::size_t node) const;

  // Pixel counts per bin, by node.
  std::vector<double> counts(const LabImage& image) const;
  Histogram2D histogram(const LabImage& image) const;

 private:
  int bins_a_;
  int bins_b_;
  double a_min_, a_max_, b_min_, b_max_;
};

struct ChromaTransferResult {
  std::vector<double> a;  // mapped chroma, one per source pixel
  std::vector<double> b;
  SolveReport solve;
  double repair = 0.0;              // sanitize_flows repair magnitude
  std::size_t plan_entries = 0;
  std::vector<double> bin_target_a;  // barycentric target per source bin
  std::vector<double> bin_target_b;
};

// Solves the binned chroma transport problem and moves every source pixel
// by its bin's barycentric displacement. Solver and sanitize errors
// propagate.
ChromaTransferResult chroma_transfer(const LabImage& src, const LabImage& tgt,
                                     const ChromaBinning& bins,
                                     const SolverConfig& config);

struct TransferOptions {
  int bins = 64;
  SolverConfig solver;
};

struct TransferResult {
  RgbImage image;
  ChromaTransferResult chroma;
};

TransferResult color_transfer(const RgbImage& src, const RgbImage& tgt,
                              const TransferOptions& options = {});

}  // namespace hot
