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

// Linear-time solver for the normal equations A A^T y = R of the reduced
// transport LP.
//
// A A^T has the block form
//
//     [ E1   E2   E3 ]        E1 = (m+n) I_M,  E4 = m I_M,  E5 = n I_{M-1},
//     [ E2^T E4   0  ]        E2 = blockdiag(1_m 1_m^T),
//     [ E3^T 0    E5 ]        E3 = -1_n (x) [I_m, ..., I_m, Ibar_m^T].
//
// Eliminating y2 and y3 leaves (E1 - E2 E2^T/m - E3 E3^T/n) y1 = R1hat. The
// first two terms are block diagonal with blocks (m+n) I - 1 1^T, whose
// inverse is (I + 1 1^T / n)/(m+n). The E3 term couples the blocks through an
// m x m correction W = diag(...) - d d^T / w that only depends on (m, n); it
// is built once per grid and applied as diagonal plus rank one.

#pragma once

#include <span>
#include <vector>

#include "hot/grid_model.hpp"

namespace hot {

class NormalSolverCache {
 public:
  explicit NormalSolverCache(GridDims dims);

  const GridDims& dims() const { return dims_; }

  // Correction data: W = diag(w_diag) - d d^T / w.
  std::span<const double> d() const { return d_; }
  double w() const { return w_; }
  std::span<const double> w_diag() const { return w_diag_; }
  // The same m x m correction, materialized row-major. Symmetric.
  std::span<const double> correction_matrix() const { return w_dense_; }

  // Solves A A^T y = r. Both spans have length M3. Throws std::invalid_argument
  // on size mismatch or non-finite input. Safe to call concurrently.
  void solve(std::span<const double> r, std::span<double> y) const;
  std::vector<double> solve(std::span<const double> r) const;

  // out = W v for a length-m v, using the diagonal plus rank-one form.
  void apply_correction(std::span<const double> v, std::span<double> out) const;

 private:
  GridDims dims_;
  std::vector<double> d_;
  std::vector<double> w_diag_;
  std::vector<double> w_dense_;
  double w_ = 0.0;
};

// Builds the cache. In debug builds the result is checked on a probe
// right-hand side: against dense_solve_AAT when m*n <= 128 and against the
// matrix-free residual when m*n <= 4096.
NormalSolverCache build_cache(const GridDims& dims);

std::vector<double> solve_AAT(std::span<const double> r,
                              const NormalSolverCache& cache);

// Reference solve: assembles A A^T from the Kronecker definition of A and
// factors it with partial-pivot LU. Refuses m*n > 128.
std::vector<double> dense_solve_AAT(std::span<const double> r,
                                    const GridDims& dims);

// Dense row-major A A^T (M3 x M3). Same size cap as dense_solve_AAT.
std::vector<double> dense_normal_matrix(const GridDims& dims);

}  // namespace hot
