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

#include "hot/exact_oracle.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace hot {
namespace {

constexpr double kPriceTol = 1e-9;
constexpr int kDegenerateStreak = 50;

// Transportation simplex on the occupied rows and columns only.
class TransportSimplex {
 public:
  TransportSimplex(std::vector<double> supply, std::vector<double> demand,
                   std::vector<double> cost)
      : R_(supply.size()),
        C_(demand.size()),
        cost_(std::move(cost)),
        flow_(R_ * C_, 0.0),
        basic_(R_ * C_, 0),
        adj_(R_ + C_),
        parent_(R_ + C_),
        parent_cell_(R_ + C_),
        depth_(R_ + C_),
        pot_(R_ + C_) {
    NorthwestCorner(std::move(supply), std::move(demand));
  }

  std::int64_t Run() {
    std::int64_t pivots = 0;
    const std::int64_t guard =
        50 * static_cast<std::int64_t>(R_ * C_) + 10000;
    int streak = 0;
    while (true) {
      BuildTree();
      const std::size_t enter = streak >= kDegenerateStreak ? BlandEntering()
                                                             : DantzigEntering();
      if (enter == kNone) return pivots;
      if (++pivots > guard) {
        throw std::runtime_error("transportation simplex: pivot guard tripped");
      }
      const bool degenerate = Pivot(enter);
      streak = degenerate ? streak + 1 : 0;
    }
  }

  double flow(std::size_t r, std::size_t s) const { return flow_[r * C_ + s]; }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  std::size_t ColNode(std::size_t s) const { return R_ + s; }

  void AddBasic(std::size_t r, std::size_t s) {
    basic_[r * C_ + s] = 1;
    adj_[r].push_back(ColNode(s));
    adj_[ColNode(s)].push_back(r);
  }

  void RemoveBasic(std::size_t r, std::size_t s) {
    basic_[r * C_ + s] = 0;
    auto drop = [](std::vector<std::size_t>& v, std::size_t x) {
      v.erase(std::find(v.begin(), v.end(), x));
    };
    drop(adj_[r], ColNode(s));
    drop(adj_[ColNode(s)], r);
  }

  void NorthwestCorner(std::vector<double> a, std::vector<double> b) {
    std::size_t r = 0;
    std::size_t s = 0;
    while (true) {
      const bool row_done = a[r] <= b[s];
      const double q = std::min(a[r], b[s]);
      flow_[r * C_ + s] = q;
      AddBasic(r, s);
      a[r] -= q;
      b[s] -= q;
      if (r + 1 == R_ && s + 1 == C_) break;
      if (r + 1 == R_) {
        ++s;
      } else if (s + 1 == C_) {
        ++r;
      } else if (row_done) {
        ++r;
      } else {
        ++s;
      }
    }
  }

  // BFS from row 0: parents, depths and potentials u_r + v_s = c_rs.
  void BuildTree() {
    std::fill(depth_.begin(), depth_.end(), -1);
    queue_.clear();
    queue_.push_back(0);
    depth_[0] = 0;
    pot_[0] = 0.0;
    parent_[0] = kNone;
    for (std::size_t h = 0; h < queue_.size(); ++h) {
      const std::size_t u = queue_[h];
      for (std::size_t v : adj_[u]) {
        if (depth_[v] >= 0) continue;
        depth_[v] = depth_[u] + 1;
        parent_[v] = u;
        const std::size_t r = u < R_ ? u : v;
        const std::size_t s = (u < R_ ? v : u) - R_;
        parent_cell_[v] = r * C_ + s;
        pot_[v] = cost_[r * C_ + s] - pot_[u];
        queue_.push_back(v);
      }
    }
    if (queue_.size() != R_ + C_) {
      throw std::runtime_error("transportation simplex: basis is not a tree");
    }
  }

  std::size_t DantzigEntering() const {
    using Row = Eigen::Map<const Eigen::ArrayXd>;
    const Row v(&pot_[R_], static_cast<Eigen::Index>(C_));
    double best = -kPriceTol;
    std::size_t best_row = kNone;
    for (std::size_t r = 0; r < R_; ++r) {
      const Row c(&cost_[r * C_], static_cast<Eigen::Index>(C_));
      const double d = (c - v).minCoeff() - pot_[r];
      if (d < best) {
        best = d;
        best_row = r;
      }
    }
    if (best_row == kNone) return kNone;
    // Lowest column attaining the minimum of the winning row.
    const double* c = &cost_[best_row * C_];
    std::size_t arg = 0;
    double row_best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < C_; ++s) {
      const double d = c[s] - pot_[R_ + s];
      if (d < row_best) {
        row_best = d;
        arg = s;
      }
    }
    return best_row * C_ + arg;
  }

  std::size_t BlandEntering() const {
    for (std::size_t r = 0; r < R_; ++r) {
      for (std::size_t s = 0; s < C_; ++s) {
        if (cost_[r * C_ + s] - pot_[r] - pot_[R_ + s] < -kPriceTol) {
          return r * C_ + s;
        }
      }
    }
    return kNone;
  }

  // Returns true when the pivot moved no mass.
  bool Pivot(std::size_t enter) {
    const std::size_t er = enter / C_;
    const std::size_t es = enter % C_;
    // Tree path from the entering column back to the entering row; its cells
    // alternate -, +, -, ... starting next to the column.
    std::vector<std::size_t>& from_col = path_a_;
    std::vector<std::size_t>& from_row = path_b_;
    from_col.clear();
    from_row.clear();
    std::size_t a = ColNode(es);
    std::size_t b = er;
    while (depth_[a] > depth_[b]) {
      from_col.push_back(parent_cell_[a]);
      a = parent_[a];
    }
    while (depth_[b] > depth_[a]) {
      from_row.push_back(parent_cell_[b]);
      b = parent_[b];
    }
    while (a != b) {
      from_col.push_back(parent_cell_[a]);
      a = parent_[a];
      from_row.push_back(parent_cell_[b]);
      b = parent_[b];
    }
    from_col.insert(from_col.end(), from_row.rbegin(), from_row.rend());

    double theta = std::numeric_limits<double>::infinity();
    std::size_t leave = kNone;
    for (std::size_t t = 0; t < from_col.size(); t += 2) {
      const std::size_t cell = from_col[t];
      const double f = flow_[cell];
      if (f < theta || (f == theta && cell < leave)) {
        theta = f;
        leave = cell;
      }
    }
    for (std::size_t t = 0; t < from_col.size(); ++t) {
      flow_[from_col[t]] += (t % 2 == 0) ? -theta : theta;
    }
    flow_[leave] = 0.0;
    flow_[enter] = theta;
    RemoveBasic(leave / C_, leave % C_);
    AddBasic(er, es);
    return theta <= 0.0;
  }

  std::size_t R_;
  std::size_t C_;
  std::vector<double> cost_;
  std::vector<double> flow_;
  std::vector<char> basic_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> parent_cell_;
  std::vector<int> depth_;
  std::vector<double> pot_;
  std::vector<std::size_t> queue_;
  std::vector<std::size_t> path_a_;
  std::vector<std::size_t> path_b_;
};

}  // namespace

DenseOTProblem DenseOTProblem::FromHistograms(const Histogram2D& mu1,
                                              const Histogram2D& mu2) {
  if (!(mu1.dims() == mu2.dims())) {
    throw std::invalid_argument("DenseOTProblem: histogram shapes differ");
  }
  if (mu1.dims().nodes() > kMaxOracleNodes) {
    throw std::invalid_argument("exact oracle limited to " +
                                std::to_string(kMaxOracleNodes) + " bins");
  }
  return DenseOTProblem{mu1.dims(),
                        {mu1.mass().begin(), mu1.mass().end()},
                        {mu2.mass().begin(), mu2.mass().end()}};
}

double DenseOTProblem::cost(std::size_t r, std::size_t s) const {
  const std::size_t m = static_cast<std::size_t>(dims.rows());
  const double di = static_cast<double>(r % m) - static_cast<double>(s % m);
  const double dj = static_cast<double>(r / m) - static_cast<double>(s / m);
  return di * di + dj * dj;
}

ExactSolution exact_solve(const DenseOTProblem& problem) {
  const std::size_t M = problem.dims.nodes();
  if (M > kMaxOracleNodes) {
    throw std::invalid_argument("exact oracle limited to " +
                                std::to_string(kMaxOracleNodes) + " bins");
  }
  if (problem.mu1.size() != M || problem.mu2.size() != M) {
    throw std::invalid_argument("DenseOTProblem: marginal lengths");
  }
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  std::vector<double> supply;
  std::vector<double> demand;
  for (std::size_t r = 0; r < M; ++r) {
    if (problem.mu1[r] < 0.0 || problem.mu2[r] < 0.0) {
      throw std::invalid_argument("DenseOTProblem: negative mass");
    }
    if (problem.mu1[r] > 0.0) {
      rows.push_back(r);
      supply.push_back(problem.mu1[r]);
    }
    if (problem.mu2[r] > 0.0) {
      cols.push_back(r);
      demand.push_back(problem.mu2[r]);
    }
  }
  if (rows.empty() || cols.empty()) {
    throw std::invalid_argument("DenseOTProblem: empty marginal");
  }
  std::vector<double> cost(rows.size() * cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) {
      cost[a * cols.size() + b] = problem.cost(rows[a], cols[b]);
    }
  }
  TransportSimplex simplex(std::move(supply), std::move(demand), std::move(cost));
  ExactSolution sol;
  sol.pivots = simplex.Run();
  sol.plan.assign(M * M, 0.0);
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) {
      const double f = simplex.flow(a, b);
      if (f > 0.0) {
        sol.plan[rows[a] * M + cols[b]] = f;
        sol.value += f * problem.cost(rows[a], cols[b]);
      }
    }
  }
  return sol;
}

FlowPair plan_to_reduced_flows(const GridDims& dims,
                               const std::vector<double>& plan) {
  const std::size_t M = dims.nodes();
  if (plan.size() != M * M) {
    throw std::invalid_argument("plan_to_reduced_flows: plan must be M x M");
  }
  const int m = dims.rows();
  const int n = dims.cols();
  FlowPair flows{dims, std::vector<double>(dims.f1_size(), 0.0),
                 std::vector<double>(dims.f2_size(), 0.0)};
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) {
      const double* row = &plan[dims.node(i, j) * M];
      for (int l = 0; l < n; ++l) {
        for (int k = 0; k < m; ++k) {
          const double p = row[dims.node(k, l)];
          if (p == 0.0) continue;
          flows.f1[dims.f1_index(i, k, j)] += p;
          flows.f2[dims.f2_index(k, j, l)] += p;
        }
      }
    }
  }
  return flows;
}

FlowPair exact_reduced_flows(const DenseOTProblem& problem) {
  return plan_to_reduced_flows(problem.dims, exact_solve(problem).plan);
}

}  // namespace hot
