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

// Histogram files. All formats hold a row-major m x n grid of nonnegative
// weights that is normalized to unit mass on load.
//   .csv         m lines of n comma-separated reals (blank lines and lines
//                starting with '#' are skipped)
//   .pgm / .png  8- or 16-bit grayscale, pixel (row i, column j) -> bin (i,j)

#pragma once

#include <filesystem>
#include <iosfwd>

#include "hot/grid_model.hpp"

namespace hot {

// Throws IoError for unreadable or malformed files and for grids without
// positive mass.
Histogram2D read_histogram_csv(std::istream& in);
Histogram2D load_histogram(const std::filesystem::path& path);

// Writes the masses row-major with full precision.
void write_histogram_csv(std::ostream& out, const Histogram2D& h);

}  // namespace hot
