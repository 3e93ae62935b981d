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

#include "hot/plan_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "hot/errors.hpp"

namespace hot {
namespace {

static_assert(std::endian::native == std::endian::little,
              "binary plan I/O assumes a little-endian host");

constexpr std::array<char, 4> kMagic = {'H', 'O', 'T', 'P'};

template <typename T>
void Put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T Get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) {
    throw IoError("binary plan: unexpected end of input");
  }
  return v;
}

}  // namespace

void write_plan_csv(std::ostream& out, const SparsePlan& plan) {
  const unsigned m = static_cast<unsigned>(plan.dims.rows());
  out << "src_i,src_j,dst_k,dst_l,mass\n";
  std::ostringstream line;
  line.precision(17);
  for (const PlanEntry& e : plan.entries) {
    line.str("");
    line << e.src % m << ',' << e.src / m << ',' << e.dst % m << ','
         << e.dst / m << ',' << e.mass << '\n';
    out << line.str();
  }
  if (!out) throw IoError("failed writing plan CSV");
}

void write_plan_binary(std::ostream& out, const SparsePlan& plan) {
  const auto m = static_cast<std::uint32_t>(plan.dims.rows());
  out.write(kMagic.data(), kMagic.size());
  Put<std::uint32_t>(out, m);
  Put<std::uint32_t>(out, static_cast<std::uint32_t>(plan.dims.cols()));
  Put<std::uint32_t>(out, static_cast<std::uint32_t>(plan.entries.size()));
  for (const PlanEntry& e : plan.entries) {
    const std::uint32_t mid = (e.src / m) * m + e.dst % m;
    Put(out, e.src);
    Put(out, e.dst);
    Put(out, mid);
    Put(out, e.mass);
  }
  if (!out) throw IoError("failed writing binary plan");
}

SparsePlan read_plan_csv(std::istream& in, const GridDims& dims) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("src_i,src_j,dst_k,dst_l,mass", 0) != 0) {
    throw IoError("plan CSV: missing header");
  }
  SparsePlan plan;
  plan.dims = dims;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::istringstream s(line);
    long i, j, k, l;
    double mass;
    char c1, c2, c3, c4;
    if (!(s >> i >> c1 >> j >> c2 >> k >> c3 >> l >> c4 >> mass) || c1 != ',' ||
        c2 != ',' || c3 != ',' || c4 != ',') {
      throw IoError("plan CSV: malformed row " + std::to_string(row));
    }
    if (i < 0 || k < 0 || i >= dims.rows() || k >= dims.rows() || j < 0 ||
        l < 0 || j >= dims.cols() || l >= dims.cols()) {
      throw IoError("plan CSV: index out of range on row " + std::to_string(row));
    }
    plan.entries.push_back(
        {static_cast<std::uint32_t>(dims.node(static_cast<int>(i), static_cast<int>(j))),
         static_cast<std::uint32_t>(dims.node(static_cast<int>(k), static_cast<int>(l))),
         mass});
  }
  return plan;
}

SparsePlan read_plan_binary(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw IoError("binary plan: bad magic");
  }
  const auto m = Get<std::uint32_t>(in);
  const auto n = Get<std::uint32_t>(in);
  const auto count = Get<std::uint32_t>(in);
  if (m == 0 || n == 0) throw IoError("binary plan: empty grid");
  SparsePlan plan;
  plan.dims = GridDims(static_cast<int>(m), static_cast<int>(n));
  const std::uint64_t nodes = static_cast<std::uint64_t>(m) * n;
  plan.entries.reserve(count);
  for (std::uint32_t e = 0; e < count; ++e) {
    PlanEntry entry;
    entry.src = Get<std::uint32_t>(in);
    entry.dst = Get<std::uint32_t>(in);
    const auto mid = Get<std::uint32_t>(in);
    entry.mass = Get<double>(in);
    if (entry.src >= nodes || entry.dst >= nodes ||
        mid != (entry.src / m) * m + entry.dst % m) {
      throw IoError("binary plan: inconsistent entry " + std::to_string(e));
    }
    plan.entries.push_back(entry);
  }
  return plan;
}

void save_plan(const std::filesystem::path& path, const SparsePlan& plan) {
  const bool csv = path.extension() == ".csv";
  std::ofstream out(path, csv ? std::ios::out : std::ios::out | std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  if (csv) {
    write_plan_csv(out, plan);
  } else {
    write_plan_binary(out, plan);
  }
}

}  // namespace hot
