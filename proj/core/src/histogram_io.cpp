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

#include "hot/histogram_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hot/errors.hpp"
#include "hot/image_io.hpp"

namespace hot {
namespace {

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

Histogram2D FromGray(const GrayImage& img, const std::filesystem::path& path) {
  std::vector<double> w(img.samples.begin(), img.samples.end());
  try {
    return Histogram2D::FromRowMajorWeights(GridDims(img.height, img.width), w);
  } catch (const std::invalid_argument& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace

Histogram2D read_histogram_csv(std::istream& in) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::size_t count = 0;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || cell.find_first_not_of(" \t", used) != std::string::npos) {
        throw IoError("histogram CSV line " + std::to_string(line_no) +
                      ": bad number '" + cell + "'");
      }
      if (!std::isfinite(v) || v < 0.0) {
        throw IoError("histogram CSV line " + std::to_string(line_no) +
                      ": weights must be finite and nonnegative");
      }
      values.push_back(v);
      ++count;
    }
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      throw IoError("histogram CSV line " + std::to_string(line_no) + ": expected " +
                    std::to_string(cols) + " columns, found " +
                    std::to_string(count));
    }
    ++rows;
  }
  if (rows == 0 || cols == 0) throw IoError("histogram CSV is empty");
  try {
    return Histogram2D::FromRowMajorWeights(
        GridDims(static_cast<int>(rows), static_cast<int>(cols)), values);
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("histogram CSV: ") + e.what());
  }
}

Histogram2D load_histogram(const std::filesystem::path& path) {
  const std::string ext = Lower(path.extension().string());
  if (ext == ".csv" || ext == ".txt") {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    return read_histogram_csv(in);
  }
  if (ext == ".pgm") return FromGray(read_pgm(path), path);
  if (ext == ".png") return FromGray(read_png_gray(path), path);
  throw IoError(path.string() + ": unknown histogram format (use .csv, .pgm or .png)");
}

void write_histogram_csv(std::ostream& out, const Histogram2D& h) {
  std::ostringstream s;
  s.precision(17);
  const GridDims& d = h.dims();
  for (int i = 0; i < d.rows(); ++i) {
    for (int j = 0; j < d.cols(); ++j) {
      if (j) s << ',';
      s << h.at(i, j);
    }
    s << '\n';
  }
  out << s.str();
}

}  // namespace hot
