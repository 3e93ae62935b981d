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

#include "hot/plan_recovery.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hot/errors.hpp"

namespace hot {
namespace {

void CheckFlows(const FlowPair& flows) {
  if (flows.f1.size() != flows.dims.f1_size() ||
      flows.f2.size() != flows.dims.f2_size()) {
    throw std::invalid_argument("FlowPair: lengths do not match grid");
  }
}

std::string NodeName(int k, int j) {
  std::ostringstream s;
  s << "(" << k << ", " << j << ")";
  return s.str();
}

}  // namespace

SparsePlan recover_plan(const FlowPair& flows, double balance_tol) {
  CheckFlows(flows);
  const GridDims& dims = flows.dims;
  const int m = dims.rows();
  const int n = dims.cols();
  for (double v : flows.f1) {
    if (!(v >= 0.0)) throw std::invalid_argument("recover_plan: negative or NaN f1");
  }
  for (double v : flows.f2) {
    if (!(v >= 0.0)) throw std::invalid_argument("recover_plan: negative or NaN f2");
  }

  double worst = 0.0;
  int worst_k = 0;
  int worst_j = 0;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < m; ++k) {
      double in = 0.0;
      for (int i = 0; i < m; ++i) in += flows.f1[dims.f1_index(i, k, j)];
      double out = 0.0;
      for (int l = 0; l < n; ++l) out += flows.f2[dims.f2_index(k, j, l)];
      if (std::abs(in - out) > worst) {
        worst = std::abs(in - out);
        worst_k = k;
        worst_j = j;
      }
    }
  }
  if (worst > balance_tol) {
    std::ostringstream msg;
    msg << "flow imbalance " << worst << " at middle node "
        << NodeName(worst_k, worst_j) << " exceeds " << balance_tol;
    throw FlowImbalanceError(msg.str());
  }

  SparsePlan plan;
  plan.dims = dims;
  std::vector<double> in(static_cast<std::size_t>(m));
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < m; ++k) {
      for (int i = 0; i < m; ++i) in[i] = flows.f1[dims.f1_index(i, k, j)];
      for (int l = 0; l < n; ++l) out[l] = flows.f2[dims.f2_index(k, j, l)];
      int i = 0;
      int l = 0;
      while (true) {
        while (i < m && in[i] <= 0.0) ++i;
        while (l < n && out[l] <= 0.0) ++l;
        if (i == m || l == n) break;
        const double t = std::min(in[i], out[l]);
        plan.entries.push_back(
            {static_cast<std::uint32_t>(dims.node(i, j)),
             static_cast<std::uint32_t>(dims.node(k, l)), t});
        // The exhausted side is set to zero exactly, so the last piece of a
        // source (or destination) absorbs the rounding.
        if (in[i] <= out[l]) {
          out[l] -= in[i];
          in[i] = 0.0;
        } else {
          in[i] -= out[l];
          out[l] = 0.0;
        }
      }
    }
  }
  return plan;
}

double plan_cost(const SparsePlan& plan) {
  const int m = plan.dims.rows();
  double total = 0.0;
  for (const PlanEntry& e : plan.entries) {
    const long di = static_cast<long>(e.src % m) - static_cast<long>(e.dst % m);
    const long dj = static_cast<long>(e.src / m) - static_cast<long>(e.dst / m);
    total += e.mass * static_cast<double>(di * di + dj * dj);
  }
  return total;
}

std::vector<double> plan_source_marginal(const SparsePlan& plan) {
  std::vector<double> mu(plan.dims.nodes(), 0.0);
  for (const PlanEntry& e : plan.entries) mu.at(e.src) += e.mass;
  return mu;
}

std::vector<double> plan_target_marginal(const SparsePlan& plan) {
  std::vector<double> mu(plan.dims.nodes(), 0.0);
  for (const PlanEntry& e : plan.entries) mu.at(e.dst) += e.mass;
  return mu;
}

SanitizeReport sanitize_flows(const FlowPair& raw, double tau_clamp) {
  CheckFlows(raw);
  if (!(tau_clamp > 0.0)) {
    throw std::invalid_argument("sanitize_flows: tau_clamp must be positive");
  }
  const GridDims& dims = raw.dims;
  const int m = dims.rows();
  const int n = dims.cols();
  SanitizeReport report{raw, 0.0, 0.0, 0};
  FlowPair& f = report.flows;

  auto clamp = [&report](std::vector<double>& v) {
    for (double& x : v) {
      if (!std::isfinite(x)) {
        throw std::invalid_argument("sanitize_flows: non-finite flow");
      }
      if (x < 0.0) {
        report.repair = std::max(report.repair, -x);
        report.clamped_mass -= x;
        x = 0.0;
      }
    }
  };
  clamp(f.f1);
  clamp(f.f2);

  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < m; ++k) {
      double in = 0.0;
      for (int i = 0; i < m; ++i) in += f.f1[dims.f1_index(i, k, j)];
      double out = 0.0;
      for (int l = 0; l < n; ++l) out += f.f2[dims.f2_index(k, j, l)];
      if (in == out) continue;
      report.repair = std::max(report.repair, std::abs(in - out));
      ++report.rebalanced_nodes;
      if (in < out) {
        if (in > 0.0) {
          const double s = out / in;
          for (int i = 0; i < m; ++i) f.f1[dims.f1_index(i, k, j)] *= s;
        } else {
          for (int l = 0; l < n; ++l) f.f2[dims.f2_index(k, j, l)] = 0.0;
        }
      } else {
        if (out > 0.0) {
          const double s = in / out;
          for (int l = 0; l < n; ++l) f.f2[dims.f2_index(k, j, l)] *= s;
        } else {
          for (int i = 0; i < m; ++i) f.f1[dims.f1_index(i, k, j)] = 0.0;
        }
      }
    }
  }

  if (report.repair > 100.0 * tau_clamp) {
    std::ostringstream msg;
    msg << "flows too infeasible to sanitize: repair " << report.repair
        << " exceeds " << 100.0 * tau_clamp;
    throw FlowImbalanceError(msg.str());
  }
  return report;
}

}  // namespace hot
