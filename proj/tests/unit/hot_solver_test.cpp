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

#include "hot/hot_solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "hot/errors.hpp"
#include "hot/exact_oracle.hpp"
#include "hot/synthetic.hpp"
#include "support/oracles.hpp"

namespace hot {
namespace {

using testing::RandomHistogram;

double Norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double MaxDiff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

ReducedLP RandomLp(int m, int n, std::uint64_t seed) {
  const GridDims d(m, n);
  return make_reduced_lp(
      Histogram2D::FromWeights(d, RandomHistogram(d.nodes(), seed)),
      Histogram2D::FromWeights(d, RandomHistogram(d.nodes(), seed + 1000)));
}

double OracleValue(const ReducedLP& lp) {
  const GridDims& d = lp.dims;
  std::vector<double> mu1(lp.rhs.begin() + d.nodes(), lp.rhs.begin() + 2 * d.nodes());
  std::vector<double> mu2(lp.rhs.begin() + 2 * d.nodes(), lp.rhs.end());
  double last = 1.0;
  for (double v : mu2) last -= v;
  mu2.push_back(last);
  return testing::SspTransportCost(mu1, mu2, testing::GridCost(d.rows(), d.cols()));
}

PrimalDualState RandomState(const GridDims& d, std::uint64_t seed) {
  PrimalDualState w = PrimalDualState::Zero(d);
  w.y = testing::RandomVector(w.y.size(), seed);
  w.z = testing::RandomVector(w.z.size(), seed + 1, 0.0, 2.0);
  w.x = testing::RandomVector(w.x.size(), seed + 2, 0.0, 0.1);
  return w;
}

TEST(SolverConfigTest, Validate) {
  EXPECT_NO_THROW(SolverConfig{}.Validate());
  SolverConfig c;
  c.sigma = 0.0;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
  c = {};
  c.tol = -1.0;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
  c = {};
  c.max_iters = 0;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
  c = {};
  c.rho = 2.0;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
  c = {};
  c.check_every = 0;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
}

TEST(SolverConfigTest, ParseNames) {
  EXPECT_EQ(ParseIterationMode("halpern"), IterationMode::kHalpern);
  EXPECT_EQ(ParseIterationMode("hot"), IterationMode::kHalpern);
  EXPECT_EQ(ParseIterationMode("admm"), IterationMode::kAdmm);
  EXPECT_THROW(ParseIterationMode("newton"), std::invalid_argument);
  EXPECT_EQ(ParseRestartPolicy("none"), RestartPolicy::kNone);
  EXPECT_EQ(ParseRestartPolicy("adaptive"), RestartPolicy::kAdaptive);
  EXPECT_THROW(ParseRestartPolicy("sometimes"), std::invalid_argument);
  EXPECT_STREQ(ToString(IterationMode::kAdmm), "admm");
  EXPECT_EQ(ParseIterationMode(ToString(IterationMode::kHalpern)), IterationMode::kHalpern);
  EXPECT_EQ(ParseRestartPolicy(ToString(RestartPolicy::kNone)), RestartPolicy::kNone);
}

TEST(HotIterateTest, FirstStepFromAnchorIsTrialPoint) {
  const ReducedLP lp = RandomLp(3, 4, 1);
  const NormalSolverCache cache = build_cache(lp.dims);
  const PrimalDualState w0 = RandomState(lp.dims, 5);
  const IterationStep step = hot_iterate(w0, w0, 0, lp, 0.3, cache);
  EXPECT_LE(MaxDiff(step.next.x, step.trial.x), 1e-15);
  EXPECT_LE(MaxDiff(step.next.z, step.trial.z), 1e-15);
  EXPECT_LE(MaxDiff(step.next.y, step.trial.y), 1e-15);
}

TEST(HotIterateTest, TrialPointSatisfiesItsDefinition) {
  const ReducedLP lp = RandomLp(4, 3, 2);
  const GridDims& d = lp.dims;
  const NormalSolverCache cache = build_cache(d);
  const double sigma = 0.7;
  const PrimalDualState w = RandomState(d, 9);
  const IterationStep step = hot_iterate(w, w, 3, lp, sigma, cache);
  const auto& t = step.trial;

  // A A^T ybar = b/sigma - A(x/sigma + z - c)
  std::vector<double> v(w.x.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = w.x[i] / sigma + w.z[i] - lp.cost[i];
  const auto av = apply_A(d, v);
  const auto aaty = apply_A(d, apply_AT(d, t.y));
  for (std::size_t r = 0; r < av.size(); ++r) {
    EXPECT_NEAR(aaty[r], lp.rhs[r] / sigma - av[r], 1e-10);
  }
  const auto aty = apply_AT(d, t.y);
  for (std::size_t i = 0; i < w.x.size(); ++i) {
    const double xb = w.x[i] + sigma * (aty[i] + w.z[i] - lp.cost[i]);
    EXPECT_NEAR(t.x[i], xb, 1e-12);
    EXPECT_NEAR(t.z[i], std::max(0.0, lp.cost[i] - aty[i] - xb / sigma), 1e-12);
    EXPECT_GE(t.z[i], 0.0);
  }
  // w+ = w0/(k+2) + (k+1)/(k+2) (2 wbar - w) with k = 3, w0 = w.
  for (std::size_t i = 0; i < w.x.size(); ++i) {
    EXPECT_NEAR(step.next.x[i], w.x[i] / 5.0 + 0.8 * (2.0 * t.x[i] - w.x[i]), 1e-12);
  }
}

TEST(HotIterateTest, DivergenceGuard) {
  const ReducedLP lp = RandomLp(2, 2, 3);
  const NormalSolverCache cache = build_cache(lp.dims);
  PrimalDualState w = PrimalDualState::Zero(lp.dims);
  w.x[0] = std::nan("");
  EXPECT_THROW(hot_iterate(w, w, 0, lp, 1.0, cache), DivergenceError);
}

TEST(AdmmIterateTest, UnitRelaxationReturnsTrialPoint) {
  const ReducedLP lp = RandomLp(3, 3, 4);
  const NormalSolverCache cache = build_cache(lp.dims);
  const PrimalDualState w = RandomState(lp.dims, 11);
  const IterationStep step = admm_iterate(w, lp, 0.5, 1.0, cache);
  EXPECT_LE(MaxDiff(step.next.x, step.trial.x), 1e-15);
  EXPECT_LE(MaxDiff(step.next.z, step.trial.z), 1e-15);
  const IterationStep relaxed = admm_iterate(w, lp, 0.5, 1.7, cache);
  for (std::size_t i = 0; i < w.x.size(); ++i) {
    EXPECT_NEAR(relaxed.next.x[i], -0.7 * w.x[i] + 1.7 * relaxed.trial.x[i], 1e-12);
  }
}

TEST(KktResidualTest, ZeroState) {
  const ReducedLP lp = RandomLp(3, 2, 5);
  const double b = Norm(lp.rhs);
  const double c = Norm(lp.cost);
  EXPECT_NEAR(kkt_residual(PrimalDualState::Zero(lp.dims), lp),
              std::max(b / (1 + b), c / (1 + c)), 1e-15);
  const double raw = residual_mapping_norm(PrimalDualState::Zero(lp.dims), lp);
  EXPECT_NEAR(raw, std::hypot(b, c), 1e-12);
}

TEST(KktResidualTest, ExactFlowsAreFeasible) {
  const GridDims d(1, 2);
  const ReducedLP lp = make_reduced_lp(make_dirac(d, 0, 0), make_dirac(d, 0, 1));
  const FlowPair f = exact_reduced_flows(
      DenseOTProblem::FromHistograms(make_dirac(d, 0, 0), make_dirac(d, 0, 1)));
  EXPECT_LE(feasibility_error(f.ToPrimal(), lp), 1e-15);
}

TEST(SolveTest, ShiftedDiracsHaveUnitDistance) {
  const GridDims d(1, 2);
  const ReducedLP lp = make_reduced_lp(make_dirac(d, 0, 0), make_dirac(d, 0, 1));
  const SolveResult r = solve(lp, SolverConfig{});
  EXPECT_EQ(r.report.terminated_by, Termination::kTolerance);
  EXPECT_NEAR(r.report.distance, 1.0, 1e-4);
}

TEST(SolveTest, IdenticalHistogramsHaveZeroDistance) {
  const GridDims d(5, 5);
  const auto mu = Histogram2D::FromWeights(d, RandomHistogram(d.nodes(), 8));
  const SolveResult r = solve(make_reduced_lp(mu, mu), SolverConfig{});
  EXPECT_EQ(r.report.terminated_by, Termination::kTolerance);
  EXPECT_NEAR(r.report.distance, 0.0, 1e-4);
}

TEST(SolveTest, MatchesOracleOnSmallGrids) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ReducedLP lp = RandomLp(4, 4, 20 + seed);
    for (auto mode : {IterationMode::kHalpern, IterationMode::kAdmm}) {
      SolverConfig c;
      c.mode = mode;
      const SolveResult r = solve(lp, c);
      ASSERT_EQ(r.report.terminated_by, Termination::kTolerance);
      EXPECT_LE(r.report.kkt_res, 1e-6);
      const QualityMetrics q = metrics(r.state.x, lp, OracleValue(lp));
      EXPECT_LE(q.gap, 5e-3) << "seed " << seed << " " << ToString(mode);
      EXPECT_LE(q.feaserr, 1e-5);
      EXPECT_NEAR(q.gap, std::abs(r.report.distance - OracleValue(lp)) / (OracleValue(lp) + 1), 1e-12);
    }
  }
}

TEST(SolveTest, FeasibilityAtDefaultTolerance) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto kind = seed == 2 ? SyntheticKind::kShapes : SyntheticKind::kClassic;
    const auto [a, b] = hot::make_pair(kind, GridDims(16, 16), seed);
    const ReducedLP lp = make_reduced_lp(a, b);
    const SolveResult r = solve(lp, SolverConfig{});
    ASSERT_EQ(r.report.terminated_by, Termination::kTolerance);
    EXPECT_LE(feasibility_error(r.state.x, lp), 1e-6) << "seed " << seed;
  }
}

TEST(SolveTest, ConvergedPointIsNearlyFixed) {
  const ReducedLP lp = RandomLp(3, 3, 31);
  SolverConfig c;
  c.tol = 1e-11;
  c.sigma = 0.05;
  const SolveResult r = solve(lp, c);
  ASSERT_EQ(r.report.terminated_by, Termination::kTolerance);
  const NormalSolverCache cache = build_cache(lp.dims);
  const IterationStep step = hot_iterate(r.state, r.state, 0, lp, 0.05, cache);
  EXPECT_LE(MaxDiff(step.trial.x, r.state.x), 1e-8);
  EXPECT_LE(MaxDiff(step.trial.z, r.state.z), 1e-8);
  EXPECT_LE(residual_mapping_norm(r.state, lp), 1e-8);
}

TEST(SolveTest, HalpernBeatsAdmmOnSeededInstance) {
  const auto [a, b] = hot::make_pair(SyntheticKind::kClassic, GridDims(16, 16), 0);
  const ReducedLP lp = make_reduced_lp(a, b);
  SolverConfig c;
  c.check_every = 10;
  const SolveResult hot = solve(lp, c);
  c.mode = IterationMode::kAdmm;
  c.max_iters = 4 * hot.report.iterations;
  const SolveResult admm = solve(lp, c);
  ASSERT_EQ(hot.report.terminated_by, Termination::kTolerance);
  EXPECT_GT(admm.report.iterations, hot.report.iterations);
}

TEST(SolveTest, PlainHalpernRateBound) {
  const ReducedLP lp = RandomLp(4, 4, 40);
  const double sigma = 0.1;
  SolverConfig ref;
  ref.sigma = sigma;
  ref.tol = 1e-11;
  const SolveResult star = solve(lp, ref);
  ASSERT_EQ(star.report.terminated_by, Termination::kTolerance);
  double r0 = 0.0;
  for (std::size_t i = 0; i < star.state.x.size(); ++i) {
    const double v = star.state.x[i] + sigma * star.state.z[i];
    r0 += v * v;
  }
  r0 = std::sqrt(r0);

  SolverConfig plain;
  plain.sigma = sigma;
  plain.restart = RestartPolicy::kNone;
  plain.tol = 1e-300;
  plain.max_iters = 2000;
  int checked = 0;
  solve(lp, plain, [&](std::int64_t k, const PrimalDualState& wb) {
    const double bound = (sigma + 1.0) / sigma * r0 / static_cast<double>(k + 1);
    EXPECT_LE(residual_mapping_norm(wb, lp), bound + 1e-12) << "k = " << k;
    ++checked;
  });
  EXPECT_EQ(checked, 2000);
}

TEST(SolveTest, MaxItersIsReported) {
  const ReducedLP lp = RandomLp(4, 4, 50);
  SolverConfig c;
  c.max_iters = 7;
  c.record_trace = true;
  c.check_every = 3;
  const SolveResult r = solve(lp, c);
  EXPECT_EQ(r.report.terminated_by, Termination::kMaxIters);
  EXPECT_EQ(r.report.iterations, 7);
  ASSERT_EQ(r.report.trace.size(), 3u);  // k = 2, 5 and the final 6
  EXPECT_EQ(r.report.trace[0].iter, 2);
  EXPECT_EQ(r.report.trace[2].iter, 6);
  EXPECT_GT(r.report.kkt_res, 1e-6);
}

TEST(SolveTest, RejectsBadConfig) {
  const ReducedLP lp = RandomLp(2, 2, 60);
  SolverConfig c;
  c.sigma = -1.0;
  EXPECT_THROW(solve(lp, c), std::invalid_argument);
}

TEST(SolveTest, DefaultSigmaScale) {
  const ReducedLP lp = RandomLp(8, 8, 70);
  double cmax = 0.0;
  for (double v : lp.cost) cmax = std::max(cmax, std::abs(v));
  EXPECT_NEAR(default_sigma(lp), Norm(lp.rhs) / (8.0 * cmax), 1e-15);
}

TEST(MetricsTest, GapAndFeasibility) {
  const ReducedLP lp = RandomLp(3, 3, 80);
  const FlowPair f = exact_reduced_flows(DenseOTProblem::FromHistograms(
      Histogram2D::FromProbabilities(lp.dims, std::vector<double>(lp.rhs.begin() + 9, lp.rhs.begin() + 18)),
      Histogram2D::FromWeights(lp.dims, RandomHistogram(9, 1080))));
  const auto x = f.ToPrimal();
  double obj = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) obj += x[i] * lp.cost[i];
  const QualityMetrics q = metrics(x, lp, obj);
  EXPECT_EQ(q.gap, 0.0);
  EXPECT_LE(q.feaserr, 1e-15);
  const QualityMetrics same = metrics(x, lp, x);
  EXPECT_EQ(same.gap, 0.0);

  auto neg = x;
  neg[0] = -0.5;
  EXPECT_GE(feasibility_error(neg, lp), 0.5 / (1.0 + Norm(neg)) - 1e-15);
  EXPECT_NEAR(metrics(x, lp, obj + 2.0).gap, 2.0 / (std::abs(obj + 2.0) + 1.0), 1e-15);
  EXPECT_THROW(feasibility_error(std::vector<double>(3), lp), std::invalid_argument);
}

TEST(TraceCsvTest, Format) {
  std::ostringstream out;
  const std::vector<TracePoint> trace{{0, 0.5, 1.25, 0.001}, {9, 1e-7, 2.0, 0.5}};
  write_trace_csv(out, trace);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "iter,kkt_res,objective,elapsed_s");
  int rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty()) ++rows;
  }
  EXPECT_EQ(rows, 2);
  EXPECT_NE(out.str().find("\n9,"), std::string::npos);
}

}  // namespace
}  // namespace hot
