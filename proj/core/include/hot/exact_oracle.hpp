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

// Exact solver for small grid transport problems, used as ground truth.
//
// Transportation simplex on the dense M x M problem: northwest-corner start,
// potentials from the basis tree, entering cell of most negative reduced cost
// (lowest index on ties). After a long run of degenerate pivots the method
// switches to Bland's rule until the objective moves again.

#pragma once

#include <cstdint>
#include <vector>

#include "hot/grid_model.hpp"

namespace hot {

inline constexpr std::size_t kMaxOracleNodes = 1024;

struct DenseOTProblem {
  GridDims dims{1, 1};
  std::vector<double> mu1;  // by node, sums to one
  std::vector<double> mu2;

  // Throws std::invalid_argument if the histograms disagree in shape or the
  // grid has more than kMaxOracleNodes bins.
  static DenseOTProblem FromHistograms(const Histogram2D& mu1,
                                       const Histogram2D& mu2);

  // Squared Euclidean distance between nodes r and s.
  double cost(std::size_t r, std::size_t s) const;
};

struct ExactSolution {
  double value = 0.0;
  std::vector<double> plan;  // M x M row-major, plan[r * M + s]
  std::int64_t pivots = 0;
};

// Throws std::invalid_argument above kMaxOracleNodes and std::runtime_error
// if the pivot guard trips.
ExactSolution exact_solve(const DenseOTProblem& problem);

// Reduced flows of a dense plan: f1[i,k,j] = sum_l plan(i,j -> k,l) and
// f2[k,j,l] = sum_i plan(i,j -> k,l).
FlowPair plan_to_reduced_flows(const GridDims& dims,
                               const std::vector<double>& plan);

// exact_solve followed by plan_to_reduced_flows.
FlowPair exact_reduced_flows(const DenseOTProblem& problem);

}  // namespace hot
