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

#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hot/bench.hpp"
#include "hot/color_transfer.hpp"
#include "hot/errors.hpp"
#include "hot/histogram_io.hpp"
#include "hot/hot_solver.hpp"
#include "hot/image_io.hpp"
#include "hot/plan_io.hpp"
#include "hot/plan_recovery.hpp"
#include "hot/synthetic.hpp"

namespace hot::cli {
namespace {

using nlohmann::json;

struct SolverFlags {
  std::optional<double> sigma;
  double tol = 1e-6;
  std::int64_t max_iters = 200000;
  std::string mode = "halpern";
  double rho = 1.7;
  std::string restart = "adaptive";
  std::int64_t check_every = 1;
  std::string trace;

  void Register(CLI::App* app) {
    app->add_option("--sigma", sigma, "Penalty parameter (default: from the data)")
        ->check(CLI::PositiveNumber);
    app->add_option("--tol", tol, "Relative KKT tolerance")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--max-iters", max_iters, "Iteration limit")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--mode", mode, "halpern or admm")
        ->capture_default_str()
        ->check(CLI::IsMember({"halpern", "hot", "admm"}));
    app->add_option("--rho", rho, "ADMM relaxation in (0, 2)")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 2.0));
    app->add_option("--restart", restart, "Halpern anchor restarts: adaptive or none")
        ->capture_default_str()
        ->check(CLI::IsMember({"adaptive", "none"}));
    app->add_option("--check-every", check_every, "Residual check period")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--trace", trace, "Write the residual trace to this CSV file");
  }

  SolverConfig Config() const {
    SolverConfig c;
    c.sigma = sigma;
    c.tol = tol;
    c.max_iters = max_iters;
    c.mode = ParseIterationMode(mode);
    c.rho = rho;
    c.restart = ParseRestartPolicy(restart);
    c.check_every = check_every;
    c.record_trace = !trace.empty();
    c.Validate();
    return c;
  }

  void WriteTrace(const SolveReport& report) const {
    if (trace.empty()) return;
    std::ofstream out(trace);
    if (!out) throw IoError("cannot open " + trace + " for writing");
    write_trace_csv(out, report.trace);
  }
};

struct InputFlags {
  std::vector<std::string> files;
  std::string synthetic;
  int size = 0;
  int cols = 0;
  std::uint64_t seed = 0;

  void Register(CLI::App* app) {
    app->add_option("inputs", files, "Source and target histograms (.csv, .pgm, .png)")
        ->expected(0, 2);
    app->add_option("--synthetic", synthetic, "Generated pair: classic, shapes or dirac-shift")
        ->check(CLI::IsMember({"classic", "shapes", "dirac-shift", "dirac"}));
    app->add_option("--size", size, "Rows of the generated grid")->check(CLI::PositiveNumber);
    app->add_option("--cols", cols, "Columns of the generated grid (default: --size)")
        ->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "Seed of the generated pair")->capture_default_str();
  }

  std::pair<Histogram2D, Histogram2D> Load() const {
    if (!synthetic.empty()) {
      if (!files.empty()) {
        throw std::invalid_argument("give either two input files or --synthetic");
      }
      if (size < 1) throw std::invalid_argument("--synthetic needs --size");
      return make_pair(ParseSyntheticKind(synthetic),
                       GridDims(size, cols > 0 ? cols : size), seed);
    }
    if (files.size() != 2) {
      throw std::invalid_argument("expected two input files (or --synthetic)");
    }
    Histogram2D a = load_histogram(files[0]);
    Histogram2D b = load_histogram(files[1]);
    if (!(a.dims() == b.dims())) {
      throw std::invalid_argument(
          "input grids differ: " + std::to_string(a.dims().rows()) + "x" +
          std::to_string(a.dims().cols()) + " vs " + std::to_string(b.dims().rows()) +
          "x" + std::to_string(b.dims().cols()));
    }
    return {std::move(a), std::move(b)};
  }
};

json ReportJson(const SolveReport& r) {
  return {{"distance", r.distance},
          {"iterations", r.iterations},
          {"kkt_res", r.kkt_res},
          {"wall_time", r.wall_time},
          {"sigma", r.sigma},
          {"terminated_by", ToString(r.terminated_by)}};
}

int ExitFor(const SolveReport& r) {
  return r.terminated_by == Termination::kTolerance ? kOk : kMaxIters;
}

double MaxAbsDiff(const std::vector<double>& a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

int Distance(const InputFlags& in, const SolverFlags& sf, std::ostream& out) {
  const auto [a, b] = in.Load();
  const ReducedLP lp = make_reduced_lp(a, b);
  SolverConfig config = sf.Config();
  const SolveResult res = solve(lp, config);
  sf.WriteTrace(res.report);
  json j = ReportJson(res.report);
  j["mode"] = ToString(config.mode);
  j["rows"] = lp.dims.rows();
  j["cols"] = lp.dims.cols();
  out << j.dump() << '\n';
  return ExitFor(res.report);
}

int Plan(const InputFlags& in, const SolverFlags& sf, const std::string& output,
         std::ostream& out) {
  const auto [a, b] = in.Load();
  const ReducedLP lp = make_reduced_lp(a, b);
  const SolverConfig config = sf.Config();
  const SolveResult res = solve(lp, config);
  sf.WriteTrace(res.report);

  const SanitizeReport clean =
      sanitize_flows(FlowPair::FromPrimal(lp.dims, res.state.x), config.tol);
  const SparsePlan plan = recover_plan(clean.flows, 100.0 * config.tol);
  if (!output.empty()) save_plan(output, plan);

  json j = ReportJson(res.report);
  j["plan_cost"] = plan_cost(plan);
  j["entries"] = plan.entries.size();
  j["repair"] = clean.repair;
  j["source_marginal_error"] = MaxAbsDiff(plan_source_marginal(plan), a.mass());
  j["target_marginal_error"] = MaxAbsDiff(plan_target_marginal(plan), b.mass());
  if (!output.empty()) j["output"] = output;
  out << j.dump() << '\n';
  return ExitFor(res.report);
}

int Transfer(const std::vector<std::string>& files, int bins, const SolverFlags& sf,
             std::ostream& out) {
  const RgbImage src = read_png_rgb(files.at(0));
  const RgbImage tgt = read_png_rgb(files.at(1));
  TransferOptions options;
  options.bins = bins;
  options.solver = sf.Config();
  const TransferResult res = color_transfer(src, tgt, options);
  sf.WriteTrace(res.chroma.solve);
  write_png_rgb(files.at(2), res.image);
  json j = ReportJson(res.chroma.solve);
  j["bins"] = bins;
  j["plan_entries"] = res.chroma.plan_entries;
  j["repair"] = res.chroma.repair;
  j["output"] = files.at(2);
  out << j.dump() << '\n';
  return ExitFor(res.chroma.solve);
}

int Bench(const std::string& spec_path, int jobs, std::optional<bool> oracle,
          const std::string& output, std::ostream& out, std::ostream& err) {
  BenchSpec spec = BenchSpec::Load(spec_path);
  if (oracle) spec.oracle = *oracle;
  if (!output.empty()) spec.output = output;
  const int threads = std::max(1, std::min(jobs > 0 ? jobs : 1, thread_limit()));
  const auto records =
      run_bench(spec, threads, [&err](const std::string& line) { err << line << '\n'; });
  const std::string summary = aggregate_json(records);
  if (!spec.output.empty()) {
    const std::filesystem::path prefix(spec.output);
    if (prefix.has_parent_path()) std::filesystem::create_directories(prefix.parent_path());
    std::ofstream csv(spec.output + ".csv");
    std::ofstream js(spec.output + ".json");
    if (!csv || !js) throw IoError("cannot write bench output " + spec.output);
    write_records_csv(csv, records);
    js << summary << '\n';
  }
  out << summary << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal transport on 2D grids with the squared Euclidean cost"};
  app.name("hot");
  app.require_subcommand(1);

  InputFlags dist_in;
  SolverFlags dist_solver;
  CLI::App* distance = app.add_subcommand("distance", "Transport distance between two histograms");
  dist_in.Register(distance);
  dist_solver.Register(distance);

  InputFlags plan_in;
  SolverFlags plan_solver;
  std::string plan_out;
  CLI::App* plan = app.add_subcommand("plan", "Transport plan between two histograms");
  plan_in.Register(plan);
  plan_solver.Register(plan);
  plan->add_option("-o,--output", plan_out, "Plan file (.csv, otherwise binary)");

  std::vector<std::string> transfer_files;
  int bins = 64;
  SolverFlags transfer_solver;
  CLI::App* transfer = app.add_subcommand("transfer", "Color transfer between two PNG images");
  transfer->add_option("files", transfer_files, "source.png target.png output.png")
      ->expected(3)
      ->required();
  transfer->add_option("--bins", bins, "Chroma bins per axis")
      ->capture_default_str()
      ->check(CLI::Range(2, 512));
  transfer_solver.Register(transfer);

  std::string spec_path;
  int jobs = 1;
  std::optional<bool> oracle;
  std::string bench_out;
  CLI::App* bench = app.add_subcommand("bench", "Run a benchmark grid from a JSON spec");
  bench->add_option("spec", spec_path, "Benchmark spec (JSON)")->required();
  bench->add_option("--jobs", jobs, "Instances solved in parallel (capped by HOT_THREADS)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  bench->add_flag("--oracle,!--no-oracle", oracle, "Compute gaps with the exact solver");
  bench->add_option("--output", bench_out, "Output prefix (overrides the spec)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kFailure;
  }

  try {
    if (distance->parsed()) return Distance(dist_in, dist_solver, out);
    if (plan->parsed()) return Plan(plan_in, plan_solver, plan_out, out);
    if (transfer->parsed()) return Transfer(transfer_files, bins, transfer_solver, out);
    if (bench->parsed()) return Bench(spec_path, jobs, oracle, bench_out, out, err);
  } catch (const FlowImbalanceError& e) {
    err << "hot: " << e.what() << '\n';
    return kSanitizeFailure;
  } catch (const std::exception& e) {
    err << "hot: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

}  // namespace hot::cli
