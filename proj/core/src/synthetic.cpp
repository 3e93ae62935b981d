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

#include "hot/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace hot {
namespace {

struct Blob {
  double ci, cj;    // center, in [0,1]^2
  double si, sj;    // widths, fraction of the grid
  double weight;
};

std::vector<Blob> RandomBlobs(std::mt19937_64& rng, int count, double min_w,
                              double max_w) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> width(min_w, max_w);
  std::vector<Blob> blobs;
  blobs.reserve(static_cast<std::size_t>(count));
  for (int b = 0; b < count; ++b) {
    blobs.push_back(
        {unit(rng), unit(rng), width(rng), width(rng), 0.2 + unit(rng)});
  }
  return blobs;
}

// Row-major field on the grid.
std::vector<double> Evaluate(const GridDims& dims,
                             const std::vector<Blob>& blobs) {
  const int m = dims.rows();
  const int n = dims.cols();
  std::vector<double> field(dims.nodes(), 0.0);
  for (int i = 0; i < m; ++i) {
    const double u = (i + 0.5) / m;
    for (int j = 0; j < n; ++j) {
      const double v = (j + 0.5) / n;
      double s = 0.0;
      for (const Blob& b : blobs) {
        const double di = (u - b.ci) / b.si;
        const double dj = (v - b.cj) / b.sj;
        s += b.weight * std::exp(-0.5 * (di * di + dj * dj));
      }
      field[static_cast<std::size_t>(i) * n + j] = s;
    }
  }
  return field;
}

std::uint64_t Mix(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint8_t ToByte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

}  // namespace

const char* ToString(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::kClassic:
      return "classic";
    case SyntheticKind::kShapes:
      return "shapes";
    case SyntheticKind::kDiracShift:
      return "dirac-shift";
  }
  return "unknown";
}

SyntheticKind ParseSyntheticKind(const std::string& name) {
  if (name == "classic") return SyntheticKind::kClassic;
  if (name == "shapes") return SyntheticKind::kShapes;
  if (name == "dirac-shift" || name == "dirac") return SyntheticKind::kDiracShift;
  throw std::invalid_argument("unknown synthetic kind '" + name +
                              "' (expected classic, shapes or dirac-shift)");
}

Histogram2D make_classic_like(const GridDims& dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> count(3, 6);
  const auto blobs = RandomBlobs(rng, count(rng), 0.08, 0.35);
  std::vector<double> field = Evaluate(dims, blobs);
  const double peak = *std::max_element(field.begin(), field.end());
  // A faint floor keeps every bin occupied, like natural grayscale images.
  for (double& v : field) v += 0.01 * peak;
  return Histogram2D::FromRowMajorWeights(dims, field);
}

Histogram2D make_shapes_like(const GridDims& dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> count(2, 4);
  const auto blobs = RandomBlobs(rng, count(rng), 0.06, 0.25);
  std::vector<double> field = Evaluate(dims, blobs);
  const double peak = *std::max_element(field.begin(), field.end());
  std::vector<double> mask(field.size());
  for (std::size_t r = 0; r < field.size(); ++r) {
    mask[r] = field[r] >= 0.45 * peak ? 1.0 : 0.0;
  }
  return Histogram2D::FromRowMajorWeights(dims, mask);
}

Histogram2D make_dirac(const GridDims& dims, int row, int col) {
  if (row < 0 || row >= dims.rows() || col < 0 || col >= dims.cols()) {
    throw std::invalid_argument("make_dirac: position outside the grid");
  }
  std::vector<double> mass(dims.nodes(), 0.0);
  mass[dims.node(row, col)] = 1.0;
  return Histogram2D::FromProbabilities(dims, std::move(mass));
}

std::pair<Histogram2D, Histogram2D> make_pair(SyntheticKind kind,
                                              const GridDims& dims,
                                              std::uint64_t seed) {
  switch (kind) {
    case SyntheticKind::kClassic:
      return {make_classic_like(dims, Mix(seed, 0)),
              make_classic_like(dims, Mix(seed, 1))};
    case SyntheticKind::kShapes:
      return {make_shapes_like(dims, Mix(seed, 0)),
              make_shapes_like(dims, Mix(seed, 1))};
    case SyntheticKind::kDiracShift:
      if (dims.cols() < 2) {
        throw std::invalid_argument("dirac-shift needs at least two columns");
      }
      return {make_dirac(dims, 0, 0), make_dirac(dims, 0, 1)};
  }
  throw std::invalid_argument("make_pair: unknown kind");
}

RgbImage make_synthetic_photo(int width, int height, std::uint64_t seed) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("make_synthetic_photo: empty image");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 3.0);

  double corner[4][3];
  for (auto& c : corner) {
    for (double& ch : c) ch = 40.0 + 180.0 * unit(rng);
  }
  struct ColorBlob {
    double cx, cy, radius;
    double rgb[3];
  };
  std::vector<ColorBlob> blobs(4 + static_cast<std::size_t>(rng() % 4));
  for (auto& b : blobs) {
    b.cx = unit(rng);
    b.cy = unit(rng);
    b.radius = 0.08 + 0.2 * unit(rng);
    for (double& ch : b.rgb) ch = 255.0 * unit(rng);
  }

  RgbImage img;
  img.width = width;
  img.height = height;
  img.pixels.resize(img.pixel_count() * 3);
  for (int y = 0; y < height; ++y) {
    const double v = (y + 0.5) / height;
    for (int x = 0; x < width; ++x) {
      const double u = (x + 0.5) / width;
      double px[3];
      for (int ch = 0; ch < 3; ++ch) {
        const double top = corner[0][ch] * (1 - u) + corner[1][ch] * u;
        const double bottom = corner[2][ch] * (1 - u) + corner[3][ch] * u;
        px[ch] = top * (1 - v) + bottom * v;
      }
      for (const auto& b : blobs) {
        const double du = u - b.cx;
        const double dv = v - b.cy;
        const double alpha =
            std::exp(-(du * du + dv * dv) / (2.0 * b.radius * b.radius));
        for (int ch = 0; ch < 3; ++ch) {
          px[ch] = (1 - alpha) * px[ch] + alpha * b.rgb[ch];
        }
      }
      const std::size_t base =
          3 * (static_cast<std::size_t>(y) * width + static_cast<std::size_t>(x));
      for (int ch = 0; ch < 3; ++ch) {
        img.pixels[base + ch] = ToByte(px[ch] + noise(rng));
      }
    }
  }
  return img;
}

}  // namespace hot
