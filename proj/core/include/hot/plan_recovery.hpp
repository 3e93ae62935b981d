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

// Sparse transport plans recovered from reduced flows.
//
// At every middle node (k,j) the inflow f1[., k, j] and the outflow
// f2[k, j, .] carry the same mass. Matching them greedily, sources i in
// ascending order against destinations l in ascending order, yields a
// coupling whose marginals are exactly the two flow vectors and whose cost
// equals the reduced objective.

#pragma once

#include <cstdint>
#include <vector>

#include "hot/grid_model.hpp"

namespace hot {

struct PlanEntry {
  std::uint32_t src = 0;  // node(i, j)
  std::uint32_t dst = 0;  // node(k, l)
  double mass = 0.0;

  friend bool operator==(const PlanEntry&, const PlanEntry&) = default;
};

struct SparsePlan {
  GridDims dims{1, 1};
  // Grouped by middle node (k,j) in node order; within a group sources and
  // destinations appear in ascending order. Masses are strictly positive.
  std::vector<PlanEntry> entries;
};

// Balance tolerance used when none is given: 100 * 1e-6.
inline constexpr double kDefaultBalanceTol = 1e-4;

// Runs the matching sweep at every middle node. Flows must be nonnegative.
// Throws FlowImbalanceError, naming the worst middle node, when some node's
// inflow and outflow differ by more than balance_tol, and
// std::invalid_argument on negative entries or mismatched sizes.
SparsePlan recover_plan(const FlowPair& flows,
                        double balance_tol = kDefaultBalanceTol);

// sum of mass * ((i-k)^2 + (j-l)^2).
double plan_cost(const SparsePlan& plan);

// Row sums (source marginal) and column sums (target marginal), by node.
std::vector<double> plan_source_marginal(const SparsePlan& plan);
std::vector<double> plan_target_marginal(const SparsePlan& plan);

struct SanitizeReport {
  FlowPair flows;
  // Largest single correction: a clamped negative entry or a per-node
  // imbalance that was rescaled away.
  double repair = 0.0;
  double clamped_mass = 0.0;  // total of the clamped negatives
  std::size_t rebalanced_nodes = 0;
};

// Clamps negatives to zero, then at each middle node scales the side with
// less mass up so inflow equals outflow. A node with an empty side has the
// other side zeroed. Throws FlowImbalanceError when the repair exceeds
// 100 * tau_clamp.
SanitizeReport sanitize_flows(const FlowPair& raw, double tau_clamp = 1e-6);

}  // namespace hot
