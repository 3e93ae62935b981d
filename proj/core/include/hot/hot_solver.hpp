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

// Halpern-anchored primal-dual iteration for the reduced transport LP, plus
// the relaxed ADMM baseline that shares its inner step.
//
// Both methods work on w = (y, z, x): the multiplier y of A x = b, the dual
// slack z >= 0 and the primal flow x. One inner step maps w to a trial point
// wbar by
//
//     A A^T ybar = b/sigma - A(x/sigma + z - c)
//     xbar       = x + sigma (A^T ybar + z - c)
//     zbar       = max(0, c - A^T ybar - xbar/sigma)
//
// after which the Halpern method sets
//     w+ = w0/(k+2) + (k+1)/(k+2) (2 wbar - w)
// and the relaxed ADMM sets w+ = (1 - rho) w + rho wbar.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hot/grid_model.hpp"
#include "hot/normal_solver.hpp"

namespace hot {

enum class IterationMode { kHalpern, kAdmm };

// Anchor handling of the Halpern method. kNone runs the plain iteration from
// w0 for the whole solve. kAdaptive resets the anchor to the current trial
// point (and the step counter to zero) whenever the fixed-point residual has
// decayed enough since the last reset; the plain O(1/k) guarantee then holds
// inside every restart cycle.
enum class RestartPolicy { kNone, kAdaptive };

const char* ToString(RestartPolicy policy);
// Accepts "none" and "adaptive".
RestartPolicy ParseRestartPolicy(const std::string& name);

const char* ToString(IterationMode mode);
// Accepts "halpern"/"hot" and "admm". Throws std::invalid_argument otherwise.
IterationMode ParseIterationMode(const std::string& name);

struct SolverConfig {
  // Penalty parameter. Unset means default_sigma(lp).
  std::optional<double> sigma;
  double tol = 1e-6;
  std::int64_t max_iters = 200000;
  IterationMode mode = IterationMode::kHalpern;
  // Relaxation factor of the ADMM baseline, in (0, 2).
  double rho = 1.7;
  RestartPolicy restart = RestartPolicy::kAdaptive;
  // The stopping test (and trace/observer) runs every check_every iterations.
  std::int64_t check_every = 1;
  bool record_trace = false;

  // Throws std::invalid_argument when a field is out of range.
  void Validate() const;
};

struct PrimalDualState {
  std::vector<double> y;  // length M3
  std::vector<double> z;  // length N
  std::vector<double> x;  // length N

  static PrimalDualState Zero(const GridDims& dims);
};

struct TracePoint {
  std::int64_t iter = 0;
  double kkt_res = 0.0;
  double objective = 0.0;
  double elapsed_s = 0.0;
};

enum class Termination { kTolerance, kMaxIters };

const char* ToString(Termination t);

struct SolveReport {
  double distance = 0.0;  // <c, xbar> at termination
  std::int64_t iterations = 0;
  double kkt_res = 0.0;
  std::vector<TracePoint> trace;
  double wall_time = 0.0;
  Termination terminated_by = Termination::kMaxIters;
  double sigma = 0.0;
};

struct SolveResult {
  SolveReport report;
  PrimalDualState state;  // the last trial point wbar
};

// Called on every checked iteration with the iteration index k and wbar^k.
using IterationObserver =
    std::function<void(std::int64_t k, const PrimalDualState& trial)>;

// ||b|| / (8 max(1, max_i |c_i|)), clamped to [1e-12, 1e3].
double default_sigma(const ReducedLP& lp);

// Scratch vectors for one iteration; reuse across iterations of a session.
struct IterationWorkspace {
  std::vector<double> flow;        // length N
  std::vector<double> constraint;  // length M3
  std::vector<double> aty;         // A^T ybar, length N

  explicit IterationWorkspace(const GridDims& dims);
};

// Inner step shared by both methods: fills trial = wbar from current = w.
// Leaves A^T ybar in ws.aty.
void compute_trial_point(const ReducedLP& lp, double sigma,
                         const NormalSolverCache& cache,
                         const PrimalDualState& current,
                         PrimalDualState& trial, IterationWorkspace& ws);

// In-place Halpern update of `current` given wbar^k and the anchor w0.
void halpern_update(const PrimalDualState& anchor,
                    const PrimalDualState& trial, std::int64_t k,
                    PrimalDualState& current);

// In-place relaxed update current <- (1 - rho) current + rho trial.
void relaxed_update(const PrimalDualState& trial, double rho,
                    PrimalDualState& current);

struct IterationStep {
  PrimalDualState trial;  // wbar^k
  PrimalDualState next;   // w^{k+1}
};

// One Halpern step from w^k with anchor w0. Throws DivergenceError when the
// trial point is not finite.
IterationStep hot_iterate(const PrimalDualState& current,
                          const PrimalDualState& anchor, std::int64_t k,
                          const ReducedLP& lp, double sigma,
                          const NormalSolverCache& cache);

// One relaxed ADMM step from w^k.
IterationStep admm_iterate(const PrimalDualState& current, const ReducedLP& lp,
                           double sigma, double rho,
                           const NormalSolverCache& cache);

// Relative KKT residual
//   max{ ||A^T y + z - c|| / (1 + ||c||),
//        ||min(x, z)|| / (1 + ||x|| + ||z||),
//        ||A x - b|| / (1 + ||b||) }.
double kkt_residual(const PrimalDualState& w, const ReducedLP& lp);

// Euclidean norm of the unscaled residual map
//   R(w) = (b - A x, z - max(z - x, 0), c - A^T y - z).
double residual_mapping_norm(const PrimalDualState& w, const ReducedLP& lp);

// Runs the configured method from w0 = 0 until kkt_residual(wbar^k) <= tol or
// max_iters. Reaching max_iters is reported, not thrown. Throws
// DivergenceError if an iterate blows up (norm above 1e12 (1 + ||b|| + ||c||)
// or non-finite).
SolveResult solve(const ReducedLP& lp, const SolverConfig& config,
                  const IterationObserver& observer = {});

struct QualityMetrics {
  double gap = 0.0;
  double feaserr = 0.0;
};

// gap = |<c,x> - ref| / (|ref| + 1),
// feaserr = max{ ||min(x,0)|| / (1 + ||x||), ||A x - b|| / (1 + ||b||) }.
QualityMetrics metrics(std::span<const double> x, const ReducedLP& lp,
                       std::span<const double> x_ref);
QualityMetrics metrics(std::span<const double> x, const ReducedLP& lp,
                       double ref_objective);
double feasibility_error(std::span<const double> x, const ReducedLP& lp);

// CSV with header iter,kkt_res,objective,elapsed_s.
void write_trace_csv(std::ostream& out, std::span<const TracePoint> trace);

}  // namespace hot
