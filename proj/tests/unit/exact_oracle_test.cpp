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

#include <gtest/gtest.h>

#include <cmath>

#include "hot/synthetic.hpp"
#include "support/oracles.hpp"

namespace hot {
namespace {

using testing::RandomHistogram;

Histogram2D RandomHist(const GridDims& d, std::uint64_t seed, double zeros = 0.0) {
  return Histogram2D::FromWeights(d, RandomHistogram(d.nodes(), seed, zeros));
}

double SspValue(const Histogram2D& a, const Histogram2D& b) {
  const GridDims& d = a.dims();
  return testing::SspTransportCost({a.mass().begin(), a.mass().end()},
                                   {b.mass().begin(), b.mass().end()},
                                   testing::GridCost(d.rows(), d.cols()));
}

TEST(ExactOracleTest, IdenticalMarginalsCostZero) {
  const GridDims d(4, 5);
  const auto mu = RandomHist(d, 1, 0.2);
  const ExactSolution s = exact_solve(DenseOTProblem::FromHistograms(mu, mu));
  EXPECT_NEAR(s.value, 0.0, 1e-14);
}

TEST(ExactOracleTest, ShiftedDiracs) {
  const GridDims d(1, 2);
  const ExactSolution s = exact_solve(
      DenseOTProblem::FromHistograms(make_dirac(d, 0, 0), make_dirac(d, 0, 1)));
  EXPECT_EQ(s.value, 1.0);
  EXPECT_EQ(s.plan, (std::vector<double>{0, 1, 0, 0}));
}

TEST(ExactOracleTest, UniformToCorner) {
  const GridDims d(2, 2);
  const ExactSolution s = exact_solve(DenseOTProblem::FromHistograms(
      Histogram2D::FromWeights(d, {1, 1, 1, 1}), make_dirac(d, 1, 1)));
  EXPECT_NEAR(s.value, 1.0, 1e-15);
}

TEST(ExactOracleTest, CostMatrix) {
  const auto p = DenseOTProblem::FromHistograms(RandomHist(GridDims(3, 4), 2),
                                                RandomHist(GridDims(3, 4), 3));
  const auto ref = testing::GridCost(3, 4);
  for (std::size_t r = 0; r < 12; ++r)
    for (std::size_t s = 0; s < 12; ++s) {
      EXPECT_EQ(p.cost(r, s), ref[r * 12 + s]);
      EXPECT_EQ(p.cost(r, s), p.cost(s, r));
    }
}

TEST(ExactOracleTest, MatchesShortestPathOracle) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const GridDims d(2 + seed % 4, 2 + (seed / 2) % 4);
    const auto a = RandomHist(d, seed, seed % 3 == 0 ? 0.4 : 0.0);
    const auto b = RandomHist(d, seed + 50, seed % 2 == 0 ? 0.3 : 0.0);
    const ExactSolution s = exact_solve(DenseOTProblem::FromHistograms(a, b));
    EXPECT_NEAR(s.value, SspValue(a, b), 1e-12) << "seed " << seed;
    // Plan is feasible and its cost is the value.
    const std::size_t M = d.nodes();
    double cost = 0.0;
    for (std::size_t r = 0; r < M; ++r) {
      double row = 0.0, col = 0.0;
      for (std::size_t t = 0; t < M; ++t) {
        EXPECT_GE(s.plan[r * M + t], 0.0);
        row += s.plan[r * M + t];
        col += s.plan[t * M + r];
        cost += s.plan[r * M + t] * DenseOTProblem::FromHistograms(a, b).cost(r, t);
      }
      EXPECT_NEAR(row, a.mass()[r], 1e-14);
      EXPECT_NEAR(col, b.mass()[r], 1e-14);
    }
    EXPECT_NEAR(cost, s.value, 1e-14);
  }
}

TEST(ExactOracleTest, Symmetric) {
  const GridDims d(5, 5);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto a = RandomHist(d, seed);
    const auto b = RandomHist(d, seed + 9, 0.3);
    EXPECT_NEAR(exact_solve(DenseOTProblem::FromHistograms(a, b)).value,
                exact_solve(DenseOTProblem::FromHistograms(b, a)).value, 1e-12);
  }
}

TEST(ExactOracleTest, TranslationInvariant) {
  const GridDims small(3, 3), big(6, 7);
  const auto a = RandomHist(small, 20);
  const auto b = RandomHist(small, 21);
  auto embed = [&](const Histogram2D& h, int di, int dj) {
    std::vector<double> w(big.nodes(), 0.0);
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) w[big.node(i + di, j + dj)] = h.at(i, j);
    return Histogram2D::FromWeights(big, w);
  };
  const double v0 = exact_solve(DenseOTProblem::FromHistograms(a, b)).value;
  const double v1 = exact_solve(DenseOTProblem::FromHistograms(embed(a, 2, 3), embed(b, 2, 3))).value;
  EXPECT_NEAR(v0, v1, 1e-12);
}

TEST(ExactOracleTest, ReducedFlowsAreFeasibleAndOptimal) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const GridDims d(4, 4);
    const auto a = RandomHist(d, seed + 300, 0.2);
    const auto b = RandomHist(d, seed + 400);
    const auto problem = DenseOTProblem::FromHistograms(a, b);
    const ExactSolution s = exact_solve(problem);
    const FlowPair f = plan_to_reduced_flows(d, s.plan);
    const ReducedLP lp = make_reduced_lp(a, b);
    const auto x = f.ToPrimal();
    const auto ax = apply_A(d, x);
    for (std::size_t r = 0; r < ax.size(); ++r) EXPECT_NEAR(ax[r], lp.rhs[r], 1e-14);
    double obj = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) obj += lp.cost[i] * x[i];
    EXPECT_NEAR(obj, s.value, 1e-12);
    const FlowPair g = exact_reduced_flows(problem);
    EXPECT_EQ(g.f1, f.f1);
    EXPECT_EQ(g.f2, f.f2);
  }
}

TEST(ExactOracleTest, DiagonalPlanGivesIdentityFlows) {
  const GridDims d(3, 2);
  const auto mu = RandomHist(d, 7);
  std::vector<double> plan(36, 0.0);
  for (int r = 0; r < 6; ++r) plan[r * 6 + r] = mu.mass()[r];
  const FlowPair f = plan_to_reduced_flows(d, plan);
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) EXPECT_EQ(f.f1[d.f1_index(i, k, j)], i == k ? mu.at(i, j) : 0.0);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 2; ++l) EXPECT_EQ(f.f2[d.f2_index(k, j, l)], j == l ? mu.at(k, j) : 0.0);
}

TEST(ExactOracleTest, DiracPlanUsesOneHorizontalFlow) {
  const GridDims d(1, 2);
  const FlowPair f = exact_reduced_flows(
      DenseOTProblem::FromHistograms(make_dirac(d, 0, 0), make_dirac(d, 0, 1)));
  int nonzero = 0;
  for (double v : f.f2) nonzero += v != 0.0;
  EXPECT_EQ(nonzero, 1);
  EXPECT_EQ(f.f2[d.f2_index(0, 0, 1)], 1.0);
}

TEST(ExactOracleTest, ReducedNetworkHasSameOptimum) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const GridDims d(2 + seed % 3, 3 + seed % 2);
    const auto a = RandomHist(d, seed + 500, 0.25);
    const auto b = RandomHist(d, seed + 600);
    const double reduced = testing::ReducedNetworkCost(
        d.rows(), d.cols(), {a.mass().begin(), a.mass().end()}, {b.mass().begin(), b.mass().end()});
    EXPECT_NEAR(exact_solve(DenseOTProblem::FromHistograms(a, b)).value, reduced, 1e-12);
  }
}

TEST(ExactOracleTest, SizeCap) {
  const GridDims d(33, 32);
  const auto mu = RandomHist(d, 1);
  EXPECT_THROW(DenseOTProblem::FromHistograms(mu, mu), std::invalid_argument);
  EXPECT_THROW(DenseOTProblem::FromHistograms(mu, RandomHist(GridDims(2, 2), 1)),
               std::invalid_argument);
  EXPECT_THROW(plan_to_reduced_flows(GridDims(2, 2), std::vector<double>(5)),
               std::invalid_argument);
}

TEST(ExactOracleTest, ShapesPairAgainstShortestPaths) {
  const auto [a, b] = hot::make_pair(SyntheticKind::kShapes, GridDims(7, 6), 3);
  const ExactSolution s = exact_solve(DenseOTProblem::FromHistograms(a, b));
  EXPECT_NEAR(s.value, SspValue(a, b), 1e-11);
}

}  // namespace
}  // namespace hot
