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

// Benchmark grids: every instance is solved with every configured method and
// summarized per (mode, resolution).
//
// Spec file (JSON):
//   {
//     "instances": [ {"kind": "classic"}, {"kind": "shapes"},
//                    {"id": "pair1", "source": "a.pgm", "target": "b.pgm"} ],
//     "resolutions": [16, 32],
//     "seeds": [0, 1, 2],
//     "configs": [ {"mode": "halpern"}, {"mode": "admm", "rho": 1.7,
//                  "sigma": 1e-5} ],
//     "tol": 1e-6, "max_iters": 200000, "check_every": 1,
//     "oracle": true, "max_resolution": 256,
//     "output": "results/run"
//   }
// Synthetic instances expand over resolutions x seeds; file pairs are used
// once at their own size. "output" names <output>.csv and <output>.json.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hot/hot_solver.hpp"
#include "hot/synthetic.hpp"

namespace hot {

struct BenchInstance {
  std::string id;
  std::optional<SyntheticKind> kind;  // unset for file pairs
  std::filesystem::path source;
  std::filesystem::path target;
};

struct BenchSpec {
  std::vector<BenchInstance> instances;
  std::vector<int> resolutions;
  std::vector<std::uint64_t> seeds{0};
  std::vector<SolverConfig> configs;
  bool oracle = true;
  int max_resolution = 256;
  std::string output;

  // Throws std::invalid_argument on schema errors. Relative file paths are
  // resolved against base_dir.
  static BenchSpec Parse(const std::string& json_text,
                         const std::filesystem::path& base_dir = {});
  static BenchSpec Load(const std::filesystem::path& path);
};

struct RunRecord {
  std::string instance;
  int resolution = 0;
  std::uint64_t seed = 0;
  std::string mode;
  double sigma = 0.0;
  std::int64_t iterations = 0;
  double wall_time = 0.0;
  double kkt_res = 0.0;
  double distance = 0.0;
  std::optional<double> gap;  // only when the exact oracle ran
  double feaserr = 0.0;
  std::string status;  // "tolerance", "max_iters" or "error: ..."
};

// Runs all (instance, config) pairs on up to `jobs` threads. Failures are
// recorded in the status column and do not stop the run. Records come back
// in a fixed order regardless of jobs. `log` receives one line per
// finished instance.
std::vector<RunRecord> run_bench(
    const BenchSpec& spec, int jobs,
    const std::function<void(const std::string&)>& log = {});

// Header: instance,resolution,seed,mode,sigma,iterations,wall_time,kkt_res,
// distance,gap,feaserr,status (empty gap when not computed).
void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_records_csv(std::istream& in);

// JSON text: {"groups": [{"mode", "resolution", "runs", "failures",
// "median_iterations", "median_wall_time", "median_time_per_iter",
// "median_gap"}...]}, sorted by mode then resolution.
std::string aggregate_json(const std::vector<RunRecord>& records);

// Thread cap from HOT_THREADS (unset or invalid means hardware concurrency).
int thread_limit();

}  // namespace hot
