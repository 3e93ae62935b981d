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

// Reduced flow model of the squared-Euclidean transport problem on an m x n
// pixel grid.
//
// Mass that moves from bin (i,j) to bin (k,l) is routed vertically inside
// column j to the middle node (k,j) (flow f1), then horizontally inside row k
// to (k,l) (flow f2). The LP over x = [f1; f2] reads
//
//     min <c, x>  s.t.  A x = b,  x >= 0
//
// with three constraint blocks: balance at every middle node, the source
// marginal and the target marginal without its last entry (the dropped row
// is implied by total mass and makes A full row rank).
//
// Layouts (0-based here; all external files use the same orders):
//   node(i,j)       = j*m + i                       (column-major)
//   f1 index(i,k,j) = (j*m + k)*m + i               i fastest, then k, then j
//   f2 index(k,j,l) = (l*n + j)*m + k               k fastest, then j, then l

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hot {

class GridDims {
 public:
  // Throws std::invalid_argument unless rows >= 1 and cols >= 1.
  GridDims(int rows, int cols);

  int rows() const { return m_; }
  int cols() const { return n_; }

  // M = m*n.
  std::size_t nodes() const { return nodes_; }
  // M3 = 3M - 1, the row count of A.
  std::size_t num_constraints() const { return 3 * nodes_ - 1; }
  // m^2 n.
  std::size_t f1_size() const { return nodes_ * static_cast<std::size_t>(m_); }
  // m n^2.
  std::size_t f2_size() const { return nodes_ * static_cast<std::size_t>(n_); }
  // N = m^2 n + m n^2, the column count of A.
  std::size_t num_flows() const { return f1_size() + f2_size(); }

  std::size_t node(int i, int j) const {
    return static_cast<std::size_t>(j) * m_ + i;
  }
  std::size_t f1_index(int i, int k, int j) const {
    return (static_cast<std::size_t>(j) * m_ + k) * m_ + i;
  }
  std::size_t f2_index(int k, int j, int l) const {
    return (static_cast<std::size_t>(l) * n_ + j) * m_ + k;
  }

  friend bool operator==(const GridDims&, const GridDims&) = default;

 private:
  int m_;
  int n_;
  std::size_t nodes_;
};

// Nonnegative mass on the grid, summing to one. Stored column-major by node.
class Histogram2D {
 public:
  // Accepts a probability vector whose total is within 1e-9 of one and
  // rescales it to unit mass; rejects anything else.
  static Histogram2D FromProbabilities(GridDims dims, std::vector<double> mass);

  // Normalizes arbitrary nonnegative weights with a positive total (image
  // intensities, counts, ...).
  static Histogram2D FromWeights(GridDims dims, std::vector<double> weights);

  // Same as FromWeights but the input is row-major (row i, column j at
  // i*cols + j), the order images and CSV grids come in.
  static Histogram2D FromRowMajorWeights(GridDims dims,
                                         std::span<const double> weights);

  const GridDims& dims() const { return dims_; }
  std::span<const double> mass() const { return mass_; }
  double at(int i, int j) const { return mass_[dims_.node(i, j)]; }

 private:
  Histogram2D(GridDims dims, std::vector<double> mass)
      : dims_(dims), mass_(std::move(mass)) {}

  GridDims dims_;
  std::vector<double> mass_;
};

struct ReducedLP {
  GridDims dims;
  std::vector<double> cost;  // length N
  std::vector<double> rhs;   // length M3
};

// Reduced flows split into their two families.
struct FlowPair {
  GridDims dims;
  std::vector<double> f1;  // length m^2 n
  std::vector<double> f2;  // length m n^2

  // Splits a primal vector x = [f1; f2].
  static FlowPair FromPrimal(GridDims dims, std::span<const double> x);
  std::vector<double> ToPrimal() const;
};

// c1 at f1_index(i,k,j) is (k-i)^2, c2 at f2_index(k,j,l) is (j-l)^2.
std::vector<double> build_cost(const GridDims& dims);

// b = [0_M; mu1; mu2 without node (m-1, n-1)].
std::vector<double> build_rhs(const Histogram2D& mu1, const Histogram2D& mu2);
// Raw-vector variant; checks sizes, signs and unit mass (|sum - 1| <= 1e-9).
std::vector<double> build_rhs(const GridDims& dims, std::span<const double> mu1,
                              std::span<const double> mu2);

ReducedLP make_reduced_lp(const Histogram2D& mu1, const Histogram2D& mu2);

// out = A x. Matrix-free; x has length N, out has length M3.
void apply_A(const GridDims& dims, std::span<const double> x,
             std::span<double> out);
std::vector<double> apply_A(const GridDims& dims, std::span<const double> x);

// out = A^T y. y has length M3, out has length N.
void apply_AT(const GridDims& dims, std::span<const double> y,
              std::span<double> out);
std::vector<double> apply_AT(const GridDims& dims, std::span<const double> y);

// Dense row-major M3 x N copy of A assembled from its Kronecker-product
// blocks. Meant for verification on tiny grids; refuses m*n > 128.
std::vector<double> dense_constraint_matrix(const GridDims& dims);

}  // namespace hot
