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

#include "hot/grid_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hot {
namespace {

constexpr double kUnitMassTolerance = 1e-9;

void CheckLength(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": expected length " +
                                std::to_string(want) + ", got " +
                                std::to_string(got));
  }
}

void CheckNonnegativeFinite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0) {
      throw std::invalid_argument(std::string(what) +
                                  ": entries must be finite and nonnegative");
    }
  }
}

// Small dense row-major matrix used only to assemble A from its Kronecker
// definitions.
struct Dense {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> v;

  Dense(std::size_t r, std::size_t c) : rows(r), cols(c), v(r * c, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return v[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return v[i * cols + j];
  }
};

Dense Identity(std::size_t n) {
  Dense d(n, n);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = 1.0;
  return d;
}

Dense OnesRow(std::size_t n) {
  Dense d(1, n);
  std::fill(d.v.begin(), d.v.end(), 1.0);
  return d;
}

Dense Kron(const Dense& a, const Dense& b) {
  Dense out(a.rows * b.rows, a.cols * b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) {
      const double s = a(i, j);
      if (s == 0.0) continue;
      for (std::size_t p = 0; p < b.rows; ++p) {
        for (std::size_t q = 0; q < b.cols; ++q) {
          out(i * b.rows + p, j * b.cols + q) = s * b(p, q);
        }
      }
    }
  }
  return out;
}

}  // namespace

GridDims::GridDims(int rows, int cols) : m_(rows), n_(cols), nodes_(0) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("GridDims: rows and cols must be >= 1");
  }
  nodes_ = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
}

Histogram2D Histogram2D::FromProbabilities(GridDims dims,
                                           std::vector<double> mass) {
  CheckLength(mass.size(), dims.nodes(), "Histogram2D");
  CheckNonnegativeFinite(mass, "Histogram2D");
  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  if (std::abs(total - 1.0) > kUnitMassTolerance) {
    throw std::invalid_argument("Histogram2D: total mass " +
                                std::to_string(total) +
                                " is not within 1e-9 of one");
  }
  for (double& x : mass) x /= total;
  return Histogram2D(dims, std::move(mass));
}

Histogram2D Histogram2D::FromWeights(GridDims dims,
                                     std::vector<double> weights) {
  CheckLength(weights.size(), dims.nodes(), "Histogram2D");
  CheckNonnegativeFinite(weights, "Histogram2D");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) {
    throw std::invalid_argument("Histogram2D: total weight must be positive");
  }
  for (double& x : weights) x /= total;
  return Histogram2D(dims, std::move(weights));
}

Histogram2D Histogram2D::FromRowMajorWeights(GridDims dims,
                                             std::span<const double> weights) {
  CheckLength(weights.size(), dims.nodes(), "Histogram2D");
  std::vector<double> col_major(dims.nodes());
  const int m = dims.rows();
  const int n = dims.cols();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      col_major[dims.node(i, j)] =
          weights[static_cast<std::size_t>(i) * n + j];
    }
  }
  return FromWeights(dims, std::move(col_major));
}

FlowPair FlowPair::FromPrimal(GridDims dims, std::span<const double> x) {
  CheckLength(x.size(), dims.num_flows(), "FlowPair::FromPrimal");
  const auto split = x.begin() + static_cast<std::ptrdiff_t>(dims.f1_size());
  return FlowPair{dims, std::vector<double>(x.begin(), split),
                  std::vector<double>(split, x.end())};
}

std::vector<double> FlowPair::ToPrimal() const {
  std::vector<double> x;
  x.reserve(f1.size() + f2.size());
  x.insert(x.end(), f1.begin(), f1.end());
  x.insert(x.end(), f2.begin(), f2.end());
  return x;
}

std::vector<double> build_cost(const GridDims& dims) {
  const int m = dims.rows();
  const int n = dims.cols();
  std::vector<double> c(dims.num_flows());
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < m; ++k) {
      for (int i = 0; i < m; ++i) {
        const double d = k - i;
        c[dims.f1_index(i, k, j)] = d * d;
      }
    }
  }
  double* c2 = c.data() + dims.f1_size();
  for (int l = 0; l < n; ++l) {
    for (int j = 0; j < n; ++j) {
      const double d = j - l;
      for (int k = 0; k < m; ++k) c2[dims.f2_index(k, j, l)] = d * d;
    }
  }
  return c;
}

std::vector<double> build_rhs(const GridDims& dims, std::span<const double> mu1,
                              std::span<const double> mu2) {
  const std::size_t M = dims.nodes();
  CheckLength(mu1.size(), M, "build_rhs(mu1)");
  CheckLength(mu2.size(), M, "build_rhs(mu2)");
  CheckNonnegativeFinite(mu1, "build_rhs(mu1)");
  CheckNonnegativeFinite(mu2, "build_rhs(mu2)");
  for (auto mu : {mu1, mu2}) {
    const double total = std::accumulate(mu.begin(), mu.end(), 0.0);
    if (std::abs(total - 1.0) > kUnitMassTolerance) {
      throw std::invalid_argument("build_rhs: histogram is not normalized");
    }
  }
  std::vector<double> b(dims.num_constraints(), 0.0);
  std::copy(mu1.begin(), mu1.end(), b.begin() + static_cast<std::ptrdiff_t>(M));
  std::copy(mu2.begin(), mu2.end() - 1,
            b.begin() + static_cast<std::ptrdiff_t>(2 * M));
  return b;
}

std::vector<double> build_rhs(const Histogram2D& mu1, const Histogram2D& mu2) {
  if (!(mu1.dims() == mu2.dims())) {
    throw std::invalid_argument("build_rhs: histogram dimensions differ");
  }
  return build_rhs(mu1.dims(), mu1.mass(), mu2.mass());
}

ReducedLP make_reduced_lp(const Histogram2D& mu1, const Histogram2D& mu2) {
  auto rhs = build_rhs(mu1, mu2);
  return ReducedLP{mu1.dims(), build_cost(mu1.dims()), std::move(rhs)};
}

void apply_A(const GridDims& dims, std::span<const double> x,
             std::span<double> out) {
  CheckLength(x.size(), dims.num_flows(), "apply_A(x)");
  CheckLength(out.size(), dims.num_constraints(), "apply_A(out)");
  const std::size_t m = static_cast<std::size_t>(dims.rows());
  const std::size_t n = static_cast<std::size_t>(dims.cols());
  const std::size_t M = dims.nodes();
  const double* f1 = x.data();
  const double* f2 = x.data() + dims.f1_size();
  double* balance = out.data();
  double* source = out.data() + M;
  double* target = out.data() + 2 * M;

  std::fill(out.begin(), out.end(), 0.0);
  // f1: middle node (k,j) collects over i; source node (i,j) sums over k.
  for (std::size_t j = 0; j < n; ++j) {
    double* src_col = source + j * m;
    for (std::size_t k = 0; k < m; ++k) {
      const double* col = f1 + (j * m + k) * m;
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        s += col[i];
        src_col[i] += col[i];
      }
      balance[j * m + k] = s;
    }
  }
  // f2: stored as n slabs (one per l) of length M indexed by middle node.
  for (std::size_t l = 0; l < n; ++l) {
    const double* slab = f2 + l * M;
    for (std::size_t r = 0; r < M; ++r) balance[r] -= slab[r];
    // Target node (k,l), dropped for the last node.
    const std::size_t len = (l + 1 == n) ? m - 1 : m;
    double* tgt = target + l * m;
    for (std::size_t j = 0; j < n; ++j) {
      const double* row = slab + j * m;
      for (std::size_t k = 0; k < len; ++k) tgt[k] += row[k];
    }
  }
}

std::vector<double> apply_A(const GridDims& dims, std::span<const double> x) {
  std::vector<double> out(dims.num_constraints());
  apply_A(dims, x, out);
  return out;
}

void apply_AT(const GridDims& dims, std::span<const double> y,
              std::span<double> out) {
  CheckLength(y.size(), dims.num_constraints(), "apply_AT(y)");
  CheckLength(out.size(), dims.num_flows(), "apply_AT(out)");
  const std::size_t m = static_cast<std::size_t>(dims.rows());
  const std::size_t n = static_cast<std::size_t>(dims.cols());
  const std::size_t M = dims.nodes();
  const double* balance = y.data();
  const double* source = y.data() + M;
  const double* target = y.data() + 2 * M;
  double* f1 = out.data();
  double* f2 = out.data() + dims.f1_size();

  for (std::size_t j = 0; j < n; ++j) {
    const double* src_col = source + j * m;
    for (std::size_t k = 0; k < m; ++k) {
      const double yb = balance[j * m + k];
      double* col = f1 + (j * m + k) * m;
      for (std::size_t i = 0; i < m; ++i) col[i] = yb + src_col[i];
    }
  }
  for (std::size_t l = 0; l < n; ++l) {
    double* slab = f2 + l * M;
    const double* tgt = target + l * m;
    const std::size_t len = (l + 1 == n) ? m - 1 : m;
    for (std::size_t j = 0; j < n; ++j) {
      double* row = slab + j * m;
      const double* yb = balance + j * m;
      for (std::size_t k = 0; k < len; ++k) row[k] = tgt[k] - yb[k];
      if (len < m) row[m - 1] = -yb[m - 1];
    }
  }
}

std::vector<double> apply_AT(const GridDims& dims, std::span<const double> y) {
  std::vector<double> out(dims.num_flows());
  apply_AT(dims, y, out);
  return out;
}

std::vector<double> dense_constraint_matrix(const GridDims& dims) {
  if (dims.nodes() > 128) {
    throw std::invalid_argument(
        "dense_constraint_matrix: m*n must be <= 128 for dense assembly");
  }
  const std::size_t m = static_cast<std::size_t>(dims.rows());
  const std::size_t n = static_cast<std::size_t>(dims.cols());
  const std::size_t M = dims.nodes();

  // A1 = I_M (x) 1_m^T, A2 = -1_n^T (x) I_M,
  // A3 = I_n (x) (1_m^T (x) I_m), A4-hat = I_n (x) (1_n^T (x) I_m).
  const Dense a1 = Kron(Identity(M), OnesRow(m));
  Dense a2 = Kron(OnesRow(n), Identity(M));
  for (double& v : a2.v) v = -v;
  const Dense a3 = Kron(Identity(n), Kron(OnesRow(m), Identity(m)));
  const Dense a4 = Kron(Identity(n), Kron(OnesRow(n), Identity(m)));

  const std::size_t rows = dims.num_constraints();
  const std::size_t cols = dims.num_flows();
  const std::size_t off = dims.f1_size();
  std::vector<double> A(rows * cols, 0.0);
  auto place = [&](const Dense& blk, std::size_t row0, std::size_t col0,
                   std::size_t nrows) {
    for (std::size_t i = 0; i < nrows; ++i) {
      for (std::size_t j = 0; j < blk.cols; ++j) {
        A[(row0 + i) * cols + col0 + j] = blk(i, j);
      }
    }
  };
  place(a1, 0, 0, M);
  place(a2, 0, off, M);
  place(a3, M, 0, M);
  place(a4, 2 * M, off, M - 1);  // last row of A4-hat is the redundant one
  return A;
}

}  // namespace hot
