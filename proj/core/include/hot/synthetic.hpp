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

// Seeded instance generators standing in for grid-image benchmark sets.

#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "hot/grid_model.hpp"
#include "hot/image_io.hpp"

namespace hot {

enum class SyntheticKind {
  kClassic,     // smooth, strictly positive Gaussian-mixture field
  kShapes,      // thresholded smooth field: a binary mask with empty bins
  kDiracShift,  // unit mass at (0,0) vs unit mass at (0,1)
};

const char* ToString(SyntheticKind kind);
// Throws std::invalid_argument on unknown names.
SyntheticKind ParseSyntheticKind(const std::string& name);

Histogram2D make_classic_like(const GridDims& dims, std::uint64_t seed);
Histogram2D make_shapes_like(const GridDims& dims, std::uint64_t seed);
Histogram2D make_dirac(const GridDims& dims, int row, int col);

// A pair of histograms of the given kind. The two members use derived seeds
// so (kind, dims, seed) fully determines the pair.
std::pair<Histogram2D, Histogram2D> make_pair(SyntheticKind kind,
                                              const GridDims& dims,
                                              std::uint64_t seed);

// Smooth colorful test picture: a few soft color blobs over a gradient with
// mild per-pixel noise.
RgbImage make_synthetic_photo(int width, int height, std::uint64_t seed);

}  // namespace hot
