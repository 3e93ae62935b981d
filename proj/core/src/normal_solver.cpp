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

#include "hot/normal_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hot {
namespace {

constexpr std::size_t kDenseNodeCap = 128;

#ifndef NDEBUG
double Norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void ValidateCache(const NormalSolverCache& cache) {
  const GridDims& dims = cache.dims();
  if (dims.nodes() > 4096) return;
  std::vector<double> probe(dims.num_constraints());
  for (std::size_t i = 0; i < probe.size(); ++i) {
    probe[i] = std::sin(0.37 * static_cast<double>(i) + 0.11);
  }
  const std::vector<double> y = cache.solve(probe);
  const std::vector<double> back = apply_A(dims, apply_AT(dims, y));
  double err = 0.0;
  for (std::size_t i = 0; i < back.size(); ++i) {
    err += (back[i] - probe[i]) * (back[i] - probe[i]);
  }
  assert(std::sqrt(err) <= 1e-9 * Norm2(probe) &&
         "normal solver cache failed the matrix-free residual probe");
  if (dims.nodes() <= kDenseNodeCap) {
    const std::vector<double> ref = dense_solve_AAT(probe, dims);
    double diff = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      diff += (ref[i] - y[i]) * (ref[i] - y[i]);
    }
    assert(std::sqrt(diff) <= 1e-9 * Norm2(ref) &&
           "normal solver cache disagrees with the dense oracle");
  }
  (void)err;
}
#endif

}  // namespace

NormalSolverCache::NormalSolverCache(GridDims dims) : dims_(dims) {
  const int m = dims.rows();
  const double md = m;
  const double frac = 1.0 - 1.0 / dims.cols();  // (n-1)/n

  // W = Qhat W_inner^{-1} Qhat / (m+n) with Qhat = diag(1, ..., sqrt(frac));
  // it collapses to diag(-1/m, ..., -frac/(m+1)) - d d^T / w.
  d_.assign(static_cast<std::size_t>(m), 1.0 / md);
  d_.back() = frac / (md + 1.0);
  w_diag_.assign(static_cast<std::size_t>(m), -1.0 / md);
  w_diag_.back() = -frac / (md + 1.0);
  w_ = 1.0 / md - frac / (md + 1.0);

  w_dense_.assign(static_cast<std::size_t>(m) * m, 0.0);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      double v = -d_[a] * d_[b] / w_;
      if (a == b) v += w_diag_[a];
      w_dense_[static_cast<std::size_t>(a) * m + b] = v;
    }
  }
}

void NormalSolverCache::apply_correction(std::span<const double> v,
                                         std::span<double> out) const {
  const std::size_t m = d_.size();
  const double dv = std::inner_product(d_.begin(), d_.end(), v.begin(), 0.0);
  const double scale = dv / w_;
  for (std::size_t k = 0; k < m; ++k) out[k] = w_diag_[k] * v[k] - d_[k] * scale;
}

void NormalSolverCache::solve(std::span<const double> r,
                              std::span<double> y) const {
  const std::size_t M3 = dims_.num_constraints();
  if (r.size() != M3 || y.size() != M3) {
    throw std::invalid_argument("solve_AAT: expected vectors of length " +
                                std::to_string(M3));
  }
  for (double v : r) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("solve_AAT: right-hand side is not finite");
    }
  }
  const std::size_t m = static_cast<std::size_t>(dims_.rows());
  const std::size_t n = static_cast<std::size_t>(dims_.cols());
  const std::size_t M = dims_.nodes();
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  const double* r1 = r.data();
  const double* r2 = r.data() + M;
  const double* r3 = r.data() + 2 * M;
  double* y1 = y.data();
  double* y2 = y.data() + M;
  double* y3 = y.data() + 2 * M;

  // rho3[k] = sum_l R3[k,l] over the rows that exist.
  std::vector<double> rho3(m, 0.0);
  for (std::size_t l = 0; l < n; ++l) {
    const std::size_t len = (l + 1 == n) ? m - 1 : m;
    const double* col = r3 + l * m;
    for (std::size_t k = 0; k < len; ++k) rho3[k] += col[k];
  }
  for (double& v : rho3) v /= nd;

  // yhat_j = (Rhat_j + (1^T Rhat_j / n) 1) / (m+n), with
  // Rhat_j = R1_j - (1^T R2_j / m) 1 + rho3 / n. Accumulate sum_j yhat_j.
  std::vector<double> yhat_sum(m, 0.0);
  const double inv_mn = 1.0 / (md + nd);
  for (std::size_t j = 0; j < n; ++j) {
    const double* r1j = r1 + j * m;
    const double* r2j = r2 + j * m;
    double* y1j = y1 + j * m;
    const double r2_mean = std::accumulate(r2j, r2j + m, 0.0) / md;
    double col_sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      y1j[k] = r1j[k] - r2_mean + rho3[k];
      col_sum += y1j[k];
    }
    const double shift = col_sum / nd;
    for (std::size_t k = 0; k < m; ++k) {
      y1j[k] = (y1j[k] + shift) * inv_mn;
      yhat_sum[k] += y1j[k];
    }
  }

  // ya = (I + 1 1^T / n) W sum_j yhat_j, subtracted from every block.
  std::vector<double> ya(m);
  apply_correction(yhat_sum, ya);
  const double ya_shift = std::accumulate(ya.begin(), ya.end(), 0.0) / nd;
  for (double& v : ya) v += ya_shift;

  // y1_j = yhat_j - ya; back-substitute y2 = (R2 - E2^T y1)/m and
  // y3 = (R3 - E3^T y1)/n, where E3^T y1 is minus the row sums of y1.
  std::vector<double> row_sum(m, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double* y1j = y1 + j * m;
    double col_sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      y1j[k] -= ya[k];
      col_sum += y1j[k];
      row_sum[k] += y1j[k];
    }
    const double* r2j = r2 + j * m;
    double* y2j = y2 + j * m;
    for (std::size_t i = 0; i < m; ++i) y2j[i] = (r2j[i] - col_sum) / md;
  }
  for (std::size_t l = 0; l < n; ++l) {
    const std::size_t len = (l + 1 == n) ? m - 1 : m;
    const double* r3l = r3 + l * m;
    double* y3l = y3 + l * m;
    for (std::size_t k = 0; k < len; ++k) y3l[k] = (r3l[k] + row_sum[k]) / nd;
  }
}

std::vector<double> NormalSolverCache::solve(std::span<const double> r) const {
  std::vector<double> y(dims_.num_constraints());
  solve(r, y);
  return y;
}

NormalSolverCache build_cache(const GridDims& dims) {
  NormalSolverCache cache(dims);
#ifndef NDEBUG
  ValidateCache(cache);
#endif
  return cache;
}

std::vector<double> solve_AAT(std::span<const double> r,
                              const NormalSolverCache& cache) {
  return cache.solve(r);
}

std::vector<double> dense_normal_matrix(const GridDims& dims) {
  if (dims.nodes() > kDenseNodeCap) {
    throw std::invalid_argument(
        "dense_solve_AAT: m*n = " + std::to_string(dims.nodes()) +
        " exceeds the dense assembly cap of 128");
  }
  const std::vector<double> a = dense_constraint_matrix(dims);
  const auto rows = static_cast<Eigen::Index>(dims.num_constraints());
  const auto cols = static_cast<Eigen::Index>(dims.num_flows());
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      A(a.data(), rows, cols);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> aat =
      A * A.transpose();
  return std::vector<double>(aat.data(), aat.data() + aat.size());
}

std::vector<double> dense_solve_AAT(std::span<const double> r,
                                    const GridDims& dims) {
  if (r.size() != dims.num_constraints()) {
    throw std::invalid_argument("dense_solve_AAT: right-hand side has length " +
                                std::to_string(r.size()) + ", expected " +
                                std::to_string(dims.num_constraints()));
  }
  const std::vector<double> aat = dense_normal_matrix(dims);
  const auto size = static_cast<Eigen::Index>(dims.num_constraints());
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      K(aat.data(), size, size);
  Eigen::Map<const Eigen::VectorXd> rhs(r.data(), size);
  const Eigen::VectorXd sol = K.partialPivLu().solve(rhs);
  return std::vector<double>(sol.data(), sol.data() + sol.size());
}

}  // namespace hot
