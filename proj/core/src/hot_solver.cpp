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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hot/errors.hpp"

namespace hot {
namespace {

double Norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double Dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void CheckState(const PrimalDualState& w, const GridDims& dims) {
  if (w.y.size() != dims.num_constraints() || w.z.size() != dims.num_flows() ||
      w.x.size() != dims.num_flows()) {
    throw std::invalid_argument("PrimalDualState: lengths do not match grid");
  }
}

void CheckLp(const ReducedLP& lp) {
  if (lp.cost.size() != lp.dims.num_flows() ||
      lp.rhs.size() != lp.dims.num_constraints()) {
    throw std::invalid_argument("ReducedLP: cost/rhs lengths do not match grid");
  }
}

// ||A^T y + z - c|| with A^T y supplied.
double DualResidualNorm(std::span<const double> aty, std::span<const double> z,
                        std::span<const double> c) {
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double r = aty[i] + z[i] - c[i];
    s += r * r;
  }
  return std::sqrt(s);
}

double PrimalResidualNorm(const ReducedLP& lp, std::span<const double> x,
                          std::span<double> scratch) {
  apply_A(lp.dims, x, scratch);
  double s = 0.0;
  for (std::size_t i = 0; i < scratch.size(); ++i) {
    const double r = scratch[i] - lp.rhs[i];
    s += r * r;
  }
  return std::sqrt(s);
}

double ComplementarityNorm(std::span<const double> x,
                           std::span<const double> z) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = std::min(x[i], z[i]);
    s += v * v;
  }
  return std::sqrt(s);
}

struct KktParts {
  double value;
  double x_norm;
  double z_norm;
};

KktParts KktFromParts(const ReducedLP& lp, const PrimalDualState& w,
                      std::span<const double> aty, std::span<double> scratch,
                      double c_norm, double b_norm) {
  const double x_norm = Norm(w.x);
  const double z_norm = Norm(w.z);
  const double dual = DualResidualNorm(aty, w.z, lp.cost) / (1.0 + c_norm);
  const double comp = ComplementarityNorm(w.x, w.z) / (1.0 + x_norm + z_norm);
  const double primal = PrimalResidualNorm(lp, w.x, scratch) / (1.0 + b_norm);
  return {std::max({dual, comp, primal}), x_norm, z_norm};
}

}  // namespace

const char* ToString(IterationMode mode) {
  return mode == IterationMode::kHalpern ? "halpern" : "admm";
}

IterationMode ParseIterationMode(const std::string& name) {
  if (name == "halpern" || name == "hot") return IterationMode::kHalpern;
  if (name == "admm") return IterationMode::kAdmm;
  throw std::invalid_argument("unknown iteration mode '" + name +
                              "' (expected halpern or admm)");
}

const char* ToString(RestartPolicy policy) {
  return policy == RestartPolicy::kNone ? "none" : "adaptive";
}

RestartPolicy ParseRestartPolicy(const std::string& name) {
  if (name == "none") return RestartPolicy::kNone;
  if (name == "adaptive") return RestartPolicy::kAdaptive;
  throw std::invalid_argument("unknown restart policy '" + name +
                              "' (expected none or adaptive)");
}

const char* ToString(Termination t) {
  return t == Termination::kTolerance ? "tolerance" : "max_iters";
}

void SolverConfig::Validate() const {
  if (sigma && !(*sigma > 0.0 && std::isfinite(*sigma))) {
    throw std::invalid_argument("SolverConfig: sigma must be positive");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be > 0");
  if (max_iters < 1) {
    throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
  }
  if (!(rho > 0.0 && rho < 2.0)) {
    throw std::invalid_argument("SolverConfig: rho must lie in (0, 2)");
  }
  if (check_every < 1) {
    throw std::invalid_argument("SolverConfig: check_every must be >= 1");
  }
}

PrimalDualState PrimalDualState::Zero(const GridDims& dims) {
  return PrimalDualState{std::vector<double>(dims.num_constraints(), 0.0),
                         std::vector<double>(dims.num_flows(), 0.0),
                         std::vector<double>(dims.num_flows(), 0.0)};
}

IterationWorkspace::IterationWorkspace(const GridDims& dims)
    : flow(dims.num_flows()),
      constraint(dims.num_constraints()),
      aty(dims.num_flows()) {}

double default_sigma(const ReducedLP& lp) {
  const double b_norm = Norm(lp.rhs);
  double c_max = 1.0;
  for (double c : lp.cost) c_max = std::max(c_max, std::abs(c));
  return std::clamp(b_norm / (8.0 * c_max), 1e-12, 1e3);
}

void compute_trial_point(const ReducedLP& lp, double sigma,
                         const NormalSolverCache& cache,
                         const PrimalDualState& current,
                         PrimalDualState& trial, IterationWorkspace& ws) {
  const std::size_t N = lp.cost.size();
  const std::size_t M3 = lp.rhs.size();
  const double inv_sigma = 1.0 / sigma;
  const double* c = lp.cost.data();
  const double* x = current.x.data();
  const double* z = current.z.data();

  // ybar solves A A^T ybar = b/sigma - A(x/sigma + z - c).
  double* flow = ws.flow.data();
  for (std::size_t i = 0; i < N; ++i) flow[i] = x[i] * inv_sigma + z[i] - c[i];
  apply_A(lp.dims, ws.flow, ws.constraint);
  for (std::size_t i = 0; i < M3; ++i) {
    ws.constraint[i] = lp.rhs[i] * inv_sigma - ws.constraint[i];
  }
  trial.y.resize(M3);
  cache.solve(ws.constraint, trial.y);

  apply_AT(lp.dims, trial.y, ws.aty);
  trial.x.resize(N);
  trial.z.resize(N);
  const double* aty = ws.aty.data();
  double* xb = trial.x.data();
  double* zb = trial.z.data();
  for (std::size_t i = 0; i < N; ++i) {
    const double slack = c[i] - aty[i];  // c - A^T ybar
    xb[i] = x[i] + sigma * (z[i] - slack);
    zb[i] = std::max(0.0, slack - xb[i] * inv_sigma);
  }
}

void halpern_update(const PrimalDualState& anchor,
                    const PrimalDualState& trial, std::int64_t k,
                    PrimalDualState& current) {
  const double a = 1.0 / static_cast<double>(k + 2);
  const double b = static_cast<double>(k + 1) / static_cast<double>(k + 2);
  auto blend = [a, b](const std::vector<double>& w0,
                      const std::vector<double>& wb, std::vector<double>& w) {
    const std::size_t len = w.size();
    for (std::size_t i = 0; i < len; ++i) {
      w[i] = a * w0[i] + b * (2.0 * wb[i] - w[i]);
    }
  };
  blend(anchor.y, trial.y, current.y);
  blend(anchor.z, trial.z, current.z);
  blend(anchor.x, trial.x, current.x);
}

void relaxed_update(const PrimalDualState& trial, double rho,
                    PrimalDualState& current) {
  auto blend = [rho](const std::vector<double>& wb, std::vector<double>& w) {
    if (rho == 1.0) {
      w = wb;
      return;
    }
    const std::size_t len = w.size();
    for (std::size_t i = 0; i < len; ++i) {
      w[i] = (1.0 - rho) * w[i] + rho * wb[i];
    }
  };
  blend(trial.y, current.y);
  blend(trial.z, current.z);
  blend(trial.x, current.x);
}

namespace {

void CheckFinite(const PrimalDualState& w, std::int64_t k) {
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(),
                       [](double x) { return std::isfinite(x); });
  };
  if (!finite(w.x) || !finite(w.z) || !finite(w.y)) {
    throw DivergenceError("iterate became non-finite at iteration " +
                          std::to_string(k));
  }
}

constexpr double kRestartSufficient = 0.2;
constexpr double kRestartNecessary = 0.8;
constexpr double kRestartLong = 0.2;

// ||w - wbar|| in the metric sigma ||dz||^2 + ||dx||^2 / sigma. y is left
// out: the trial point does not depend on it.
double FixedPointGap(const PrimalDualState& w, const PrimalDualState& wb,
                     double sigma) {
  double sz = 0.0;
  double sx = 0.0;
  for (std::size_t i = 0; i < w.x.size(); ++i) {
    const double dz = w.z[i] - wb.z[i];
    const double dx = w.x[i] - wb.x[i];
    sz += dz * dz;
    sx += dx * dx;
  }
  return std::sqrt(sigma * sz + sx / sigma);
}

}  // namespace

IterationStep hot_iterate(const PrimalDualState& current,
                          const PrimalDualState& anchor, std::int64_t k,
                          const ReducedLP& lp, double sigma,
                          const NormalSolverCache& cache) {
  CheckLp(lp);
  CheckState(current, lp.dims);
  CheckState(anchor, lp.dims);
  CheckFinite(current, k);
  IterationWorkspace ws(lp.dims);
  IterationStep step;
  compute_trial_point(lp, sigma, cache, current, step.trial, ws);
  CheckFinite(step.trial, k);
  step.next = current;
  halpern_update(anchor, step.trial, k, step.next);
  return step;
}

IterationStep admm_iterate(const PrimalDualState& current, const ReducedLP& lp,
                           double sigma, double rho,
                           const NormalSolverCache& cache) {
  CheckLp(lp);
  CheckState(current, lp.dims);
  CheckFinite(current, 0);
  IterationWorkspace ws(lp.dims);
  IterationStep step;
  compute_trial_point(lp, sigma, cache, current, step.trial, ws);
  CheckFinite(step.trial, 0);
  step.next = current;
  relaxed_update(step.trial, rho, step.next);
  return step;
}

double kkt_residual(const PrimalDualState& w, const ReducedLP& lp) {
  CheckLp(lp);
  CheckState(w, lp.dims);
  const std::vector<double> aty = apply_AT(lp.dims, w.y);
  std::vector<double> scratch(lp.dims.num_constraints());
  return KktFromParts(lp, w, aty, scratch, Norm(lp.cost), Norm(lp.rhs)).value;
}

double residual_mapping_norm(const PrimalDualState& w, const ReducedLP& lp) {
  CheckLp(lp);
  CheckState(w, lp.dims);
  const std::vector<double> ax = apply_A(lp.dims, w.x);
  const std::vector<double> aty = apply_AT(lp.dims, w.y);
  double s = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    const double r = lp.rhs[i] - ax[i];
    s += r * r;
  }
  for (std::size_t i = 0; i < w.x.size(); ++i) {
    const double comp = w.z[i] - std::max(w.z[i] - w.x[i], 0.0);
    const double dual = lp.cost[i] - aty[i] - w.z[i];
    s += comp * comp + dual * dual;
  }
  return std::sqrt(s);
}

SolveResult solve(const ReducedLP& lp, const SolverConfig& config,
                  const IterationObserver& observer) {
  CheckLp(lp);
  config.Validate();
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&start] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };

  const GridDims& dims = lp.dims;
  const double sigma = config.sigma.value_or(default_sigma(lp));
  const NormalSolverCache cache = build_cache(dims);
  const double c_norm = Norm(lp.cost);
  const double b_norm = Norm(lp.rhs);
  const double blowup = 1e12 * (1.0 + b_norm + c_norm);

  PrimalDualState anchor = PrimalDualState::Zero(dims);
  PrimalDualState current = anchor;
  const bool restarts = config.mode == IterationMode::kHalpern &&
                        config.restart == RestartPolicy::kAdaptive;
  std::int64_t cycle_start = 0;
  double cycle_r0 = 0.0;
  double prev_r = 0.0;
  PrimalDualState trial = PrimalDualState::Zero(dims);
  IterationWorkspace ws(dims);
  std::vector<double> scratch(dims.num_constraints());

  SolveResult result;
  SolveReport& report = result.report;
  report.sigma = sigma;

  for (std::int64_t k = 0; k < config.max_iters; ++k) {
    compute_trial_point(lp, sigma, cache, current, trial, ws);
    const bool last = (k + 1 == config.max_iters);
    if (last || (k + 1) % config.check_every == 0) {
      const KktParts kkt = KktFromParts(lp, trial, ws.aty, scratch, c_norm,
                                        b_norm);
      if (!std::isfinite(kkt.value) || kkt.x_norm > blowup ||
          kkt.z_norm > blowup) {
        std::ostringstream msg;
        msg << "solver diverged at iteration " << k << " (||x|| = "
            << kkt.x_norm << ", ||z|| = " << kkt.z_norm
            << ", kkt = " << kkt.value << ", sigma = " << sigma << ")";
        throw DivergenceError(msg.str());
      }
      report.iterations = k + 1;
      report.kkt_res = kkt.value;
      if (config.record_trace) {
        report.trace.push_back(
            TracePoint{k, kkt.value, Dot(lp.cost, trial.x), elapsed()});
      }
      if (observer) observer(k, trial);
      if (kkt.value <= config.tol) {
        report.terminated_by = Termination::kTolerance;
        break;
      }
    }
    if (config.mode == IterationMode::kHalpern) {
      const std::int64_t t = k - cycle_start;
      if (restarts) {
        const double r = FixedPointGap(current, trial, sigma);
        if (t == 0) cycle_r0 = r;
        const bool sufficient = r <= kRestartSufficient * cycle_r0;
        const bool stalled =
            t > 0 && r <= kRestartNecessary * cycle_r0 && r > prev_r;
        const bool long_cycle = t >= kRestartLong * static_cast<double>(k);
        prev_r = r;
        if (t > 0 && (sufficient || stalled || long_cycle)) {
          anchor = trial;
          current = trial;
          cycle_start = k + 1;
          continue;
        }
      }
      halpern_update(anchor, trial, t, current);
    } else {
      relaxed_update(trial, config.rho, current);
    }
  }
  report.distance = Dot(lp.cost, trial.x);
  report.wall_time = elapsed();
  result.state = std::move(trial);
  return result;
}

double feasibility_error(std::span<const double> x, const ReducedLP& lp) {
  CheckLp(lp);
  if (x.size() != lp.cost.size()) {
    throw std::invalid_argument("feasibility_error: x has wrong length");
  }
  double neg = 0.0;
  for (double v : x) {
    if (v < 0.0) neg += v * v;
  }
  std::vector<double> scratch(lp.rhs.size());
  const double sign_term = std::sqrt(neg) / (1.0 + Norm(x));
  const double eq_term = PrimalResidualNorm(lp, x, scratch) / (1.0 + Norm(lp.rhs));
  return std::max(sign_term, eq_term);
}

QualityMetrics metrics(std::span<const double> x, const ReducedLP& lp,
                       double ref_objective) {
  const double obj = Dot(lp.cost, x);
  return QualityMetrics{
      std::abs(obj - ref_objective) / (std::abs(ref_objective) + 1.0),
      feasibility_error(x, lp)};
}

QualityMetrics metrics(std::span<const double> x, const ReducedLP& lp,
                       std::span<const double> x_ref) {
  if (x_ref.size() != lp.cost.size()) {
    throw std::invalid_argument("metrics: x_ref has wrong length");
  }
  return metrics(x, lp, Dot(lp.cost, x_ref));
}

void write_trace_csv(std::ostream& out, std::span<const TracePoint> trace) {
  out << "iter,kkt_res,objective,elapsed_s\n";
  out << std::setprecision(17);
  for (const TracePoint& p : trace) {
    out << p.iter << ',' << p.kkt_res << ',' << p.objective << ','
        << p.elapsed_s << '\n';
  }
}

}  // namespace hot
