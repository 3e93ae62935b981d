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

// Plan export.
//
// CSV: header src_i,src_j,dst_k,dst_l,mass then one 0-based row per entry.
//
// Binary, little-endian:
//   char[4] "HOTP", u32 rows, u32 cols, u32 entry count,
//   then per entry u32 src node, u32 dst node, u32 middle node, f64 mass.
// Node indices are column-major (node(i,j) = j*rows + i); the middle node of
// an entry from (i,j) to (k,l) is node(k,j).

#pragma once

#include <filesystem>
#include <iosfwd>

#include "hot/plan_recovery.hpp"

namespace hot {

void write_plan_csv(std::ostream& out, const SparsePlan& plan);
void write_plan_binary(std::ostream& out, const SparsePlan& plan);

// Both readers throw IoError on malformed input.
SparsePlan read_plan_csv(std::istream& in, const GridDims& dims);
SparsePlan read_plan_binary(std::istream& in);

// Picks the format from the extension: ".csv" or anything else for binary.
void save_plan(const std::filesystem::path& path, const SparsePlan& plan);

}  // namespace hot
