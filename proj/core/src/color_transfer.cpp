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

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "hot/plan_recovery.hpp"

namespace hot {
namespace {

constexpr double kDelta = 6.0 / 29.0;

const Eigen::Matrix3d& RgbToXyz() {
  static const Eigen::Matrix3d m = (Eigen::Matrix3d() <<
      0.4124564, 0.3575761, 0.1804375,
      0.2126729, 0.7151522, 0.0721750,
      0.0193339, 0.1191920, 0.9503041).finished();
  return m;
}

// D65 white as the image of RGB (1, 1, 1), so white maps to L = 100 exactly.
const Eigen::Vector3d& White() {
  static const Eigen::Vector3d w = RgbToXyz() * Eigen::Vector3d::Ones();
  return w;
}

const Eigen::Matrix3d& XyzToRgb() {
  static const Eigen::Matrix3d m = RgbToXyz().inverse();
  return m;
}

const std::array<double, 256>& LinearTable() {
  static const std::array<double, 256> table = [] {
    std::array<double, 256> t{};
    for (int v = 0; v < 256; ++v) {
      const double c = v / 255.0;
      t[v] = c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
    }
    return t;
  }();
  return table;
}

double Compand(double lin) {
  return lin <= 0.0031308 ? 12.92 * lin : 1.055 * std::pow(lin, 1.0 / 2.4) - 0.055;
}

double LabF(double t) {
  return t > kDelta * kDelta * kDelta ? std::cbrt(t)
                                      : t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

double LabFInv(double f) {
  return f > kDelta ? f * f * f : 3.0 * kDelta * kDelta * (f - 4.0 / 29.0);
}

std::uint8_t ToByte(double unit) {
  return static_cast<std::uint8_t>(
      std::clamp(std::lround(unit * 255.0), 0L, 255L));
}

}  // namespace

Lab srgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const auto& lin = LinearTable();
  const Eigen::Vector3d xyz = RgbToXyz() * Eigen::Vector3d(lin[r], lin[g], lin[b]);
  const double fx = LabF(xyz[0] / White()(0));
  const double fy = LabF(xyz[1] / White()(1));
  const double fz = LabF(xyz[2] / White()(2));
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

void lab_to_srgb(const Lab& lab, std::uint8_t rgb[3]) {
  const double fy = (lab.L + 16.0) / 116.0;
  const double fx = fy + lab.a / 500.0;
  const double fz = fy - lab.b / 200.0;
  const Eigen::Vector3d xyz(White()(0) * LabFInv(fx), White()(1) * LabFInv(fy),
                            White()(2) * LabFInv(fz));
  const Eigen::Vector3d lin = XyzToRgb() * xyz;
  for (int c = 0; c < 3; ++c) rgb[c] = ToByte(Compand(std::max(0.0, lin[c])));
}

LabImage rgb_to_lab(const RgbImage& image) {
  if (image.pixels.size() != 3 * image.pixel_count()) {
    throw std::invalid_argument("rgb_to_lab: pixel buffer size mismatch");
  }
  LabImage out;
  out.width = image.width;
  out.height = image.height;
  const std::size_t count = image.pixel_count();
  out.L.resize(count);
  out.a.resize(count);
  out.b.resize(count);
  for (std::size_t p = 0; p < count; ++p) {
    const std::uint8_t* px = &image.pixels[3 * p];
    const Lab lab = srgb_to_lab(px[0], px[1], px[2]);
    out.L[p] = lab.L;
    out.a[p] = lab.a;
    out.b[p] = lab.b;
  }
  return out;
}

RgbImage lab_to_rgb(const LabImage& image) {
  const std::size_t count = image.pixel_count();
  if (image.a.size() != count || image.b.size() != count ||
      count != static_cast<std::size_t>(image.width) *
                   static_cast<std::size_t>(image.height)) {
    throw std::invalid_argument("lab_to_rgb: channel size mismatch");
  }
  RgbImage out;
  out.width = image.width;
  out.height = image.height;
  out.pixels.resize(3 * count);
  for (std::size_t p = 0; p < count; ++p) {
    lab_to_srgb({image.L[p], image.a[p], image.b[p]}, &out.pixels[3 * p]);
  }
  return out;
}

std::vector<double> luminance_transfer(std::span<const double> src,
                                       std::span<const double> tgt) {
  if (src.empty() || tgt.empty()) {
    throw std::invalid_argument("luminance_transfer: empty pixel set");
  }
  std::vector<std::size_t> order(src.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&src](std::size_t x, std::size_t y) { return src[x] < src[y]; });
  std::vector<double> sorted_tgt(tgt.begin(), tgt.end());
  std::sort(sorted_tgt.begin(), sorted_tgt.end());

  const std::size_t ns = src.size();
  const std::size_t nt = sorted_tgt.size();
  std::vector<double> out(ns);
  for (std::size_t p = 0; p < ns; ++p) {
    double value;
    if (ns == nt) {
      value = sorted_tgt[p];
    } else {
      const double q = ns == 1 ? 0.5 : static_cast<double>(p) / static_cast<double>(ns - 1);
      const double pos = q * static_cast<double>(nt - 1);
      const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
      const std::size_t hi = std::min(lo + 1, nt - 1);
      const double t = pos - static_cast<double>(lo);
      value = (1.0 - t) * sorted_tgt[lo] + t * sorted_tgt[hi];
    }
    out[order[p]] = value;
  }
  return out;
}

ChromaBinning::ChromaBinning(int bins_a, int bins_b, double a_min, double a_max,
                             double b_min, double b_max)
    : bins_a_(bins_a),
      bins_b_(bins_b),
      a_min_(a_min),
      a_max_(a_max),
      b_min_(b_min),
      b_max_(b_max) {
  if (bins_a < 1 || bins_b < 1) {
    throw std::invalid_argument("ChromaBinning: need at least one bin per axis");
  }
  if (!(a_max > a_min) || !(b_max > b_min)) {
    throw std::invalid_argument("ChromaBinning: empty range");
  }
}

ChromaBinning ChromaBinning::Covering(std::span<const LabImage* const> images,
                                      int bins_a, int bins_b) {
  double a_lo = INFINITY, a_hi = -INFINITY, b_lo = INFINITY, b_hi = -INFINITY;
  for (const LabImage* img : images) {
    for (std::size_t p = 0; p < img->pixel_count(); ++p) {
      a_lo = std::min(a_lo, img->a[p]);
      a_hi = std::max(a_hi, img->a[p]);
      b_lo = std::min(b_lo, img->b[p]);
      b_hi = std::max(b_hi, img->b[p]);
    }
  }
  if (!(a_hi >= a_lo) || !(b_hi >= b_lo)) {
    throw std::invalid_argument("ChromaBinning: no pixels");
  }
  const double pad_a = std::max(0.01 * (a_hi - a_lo), 1e-3);
  const double pad_b = std::max(0.01 * (b_hi - b_lo), 1e-3);
  return ChromaBinning(bins_a, bins_b, a_lo - pad_a, a_hi + pad_a,
                       b_lo - pad_b, b_hi + pad_b);
}

std::size_t ChromaBinning::bin_of(double a, double b) const {
  auto index = [](double v, double lo, double hi, int bins) {
    const double t = (v - lo) / (hi - lo) * bins;
    return std::clamp(static_cast<int>(std::floor(t)), 0, bins - 1);
  };
  const int i = index(a, a_min_, a_max_, bins_a_);
  const int j = index(b, b_min_, b_max_, bins_b_);
  return dims().node(i, j);
}

std::pair<double, double> ChromaBinning::center(std::size_t node) const {
  const int i = static_cast<int>(node % bins_a_);
  const int j = static_cast<int>(node / bins_a_);
  return {a_min_ + (i + 0.5) * (a_max_ - a_min_) / bins_a_,
          b_min_ + (j + 0.5) * (b_max_ - b_min_) / bins_b_};
}

std::vector<double> ChromaBinning::counts(const LabImage& image) const {
  std::vector<double> c(dims().nodes(), 0.0);
  for (std::size_t p = 0; p < image.pixel_count(); ++p) {
    c[bin_of(image.a[p], image.b[p])] += 1.0;
  }
  return c;
}

Histogram2D ChromaBinning::histogram(const LabImage& image) const {
  return Histogram2D::FromWeights(dims(), counts(image));
}

ChromaTransferResult chroma_transfer(const LabImage& src, const LabImage& tgt,
                                     const ChromaBinning& bins,
                                     const SolverConfig& config) {
  const Histogram2D mu1 = bins.histogram(src);
  const Histogram2D mu2 = bins.histogram(tgt);
  const ReducedLP lp = make_reduced_lp(mu1, mu2);
  SolveResult solved = solve(lp, config);

  ChromaTransferResult out;
  out.solve = std::move(solved.report);
  const GridDims dims = bins.dims();
  const SanitizeReport clean =
      sanitize_flows(FlowPair::FromPrimal(dims, solved.state.x), config.tol);
  out.repair = clean.repair;
  const SparsePlan plan = recover_plan(clean.flows, 100.0 * config.tol);
  out.plan_entries = plan.entries.size();

  const std::size_t M = dims.nodes();
  std::vector<double> row_mass(M, 0.0);
  std::vector<double> sum_a(M, 0.0);
  std::vector<double> sum_b(M, 0.0);
  for (const PlanEntry& e : plan.entries) {
    const auto [ca, cb] = bins.center(e.dst);
    row_mass[e.src] += e.mass;
    sum_a[e.src] += e.mass * ca;
    sum_b[e.src] += e.mass * cb;
  }
  out.bin_target_a.resize(M);
  out.bin_target_b.resize(M);
  for (std::size_t r = 0; r < M; ++r) {
    const auto [ca, cb] = bins.center(r);
    if (row_mass[r] > 0.0) {
      out.bin_target_a[r] = sum_a[r] / row_mass[r];
      out.bin_target_b[r] = sum_b[r] / row_mass[r];
    } else {
      out.bin_target_a[r] = ca;
      out.bin_target_b[r] = cb;
    }
  }

  const std::size_t count = src.pixel_count();
  out.a.resize(count);
  out.b.resize(count);
  for (std::size_t p = 0; p < count; ++p) {
    const std::size_t r = bins.bin_of(src.a[p], src.b[p]);
    const auto [ca, cb] = bins.center(r);
    out.a[p] = src.a[p] + (out.bin_target_a[r] - ca);
    out.b[p] = src.b[p] + (out.bin_target_b[r] - cb);
  }
  return out;
}

TransferResult color_transfer(const RgbImage& src, const RgbImage& tgt,
                              const TransferOptions& options) {
  const LabImage src_lab = rgb_to_lab(src);
  const LabImage tgt_lab = rgb_to_lab(tgt);
  const LabImage* both[] = {&src_lab, &tgt_lab};
  const ChromaBinning bins =
      ChromaBinning::Covering(both, options.bins, options.bins);

  TransferResult out;
  out.chroma = chroma_transfer(src_lab, tgt_lab, bins, options.solver);
  LabImage mapped;
  mapped.width = src_lab.width;
  mapped.height = src_lab.height;
  mapped.L = luminance_transfer(src_lab.L, tgt_lab.L);
  mapped.a = out.chroma.a;
  mapped.b = out.chroma.b;
  out.image = lab_to_rgb(mapped);
  return out;
}

}  // namespace hot
