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

#include "hot/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "hot/exact_oracle.hpp"
#include "hot/histogram_io.hpp"

namespace hot {
namespace {

using nlohmann::json;

struct Task {
  std::string id;
  int resolution = 0;
  std::uint64_t seed = 0;
  const BenchInstance* instance = nullptr;
};

SolverConfig ParseConfig(const json& j, const SolverConfig& base) {
  SolverConfig c = base;
  if (j.contains("mode")) c.mode = ParseIterationMode(j.at("mode").get<std::string>());
  if (j.contains("sigma") && !j.at("sigma").is_null()) c.sigma = j.at("sigma").get<double>();
  if (j.contains("rho")) c.rho = j.at("rho").get<double>();
  if (j.contains("restart")) {
    c.restart = ParseRestartPolicy(j.at("restart").get<std::string>());
  }
  if (j.contains("tol")) c.tol = j.at("tol").get<double>();
  if (j.contains("max_iters")) c.max_iters = j.at("max_iters").get<std::int64_t>();
  if (j.contains("check_every")) c.check_every = j.at("check_every").get<std::int64_t>();
  c.Validate();
  return c;
}

double Median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::vector<Task> ExpandTasks(const BenchSpec& spec) {
  std::vector<Task> tasks;
  for (const BenchInstance& inst : spec.instances) {
    if (!inst.kind) {
      tasks.push_back({inst.id, 0, 0, &inst});
      continue;
    }
    for (int res : spec.resolutions) {
      for (std::uint64_t seed : spec.seeds) {
        std::ostringstream id;
        id << inst.id << '-' << res << '-' << seed;
        tasks.push_back({id.str(), res, seed, &inst});
      }
    }
  }
  return tasks;
}

std::vector<RunRecord> RunTask(const BenchSpec& spec, const Task& task) {
  std::vector<RunRecord> records;
  auto fail_all = [&](const std::string& what) {
    for (const SolverConfig& c : spec.configs) {
      RunRecord r;
      r.instance = task.id;
      r.resolution = task.resolution;
      r.seed = task.seed;
      r.mode = ToString(c.mode);
      r.status = "error: " + what;
      records.push_back(std::move(r));
    }
    return records;
  };

  std::optional<ReducedLP> lp;
  int resolution = task.resolution;
  try {
    if (task.instance->kind) {
      const GridDims dims(task.resolution, task.resolution);
      auto [a, b] = make_pair(*task.instance->kind, dims, task.seed);
      lp = make_reduced_lp(a, b);
    } else {
      const Histogram2D a = load_histogram(task.instance->source);
      const Histogram2D b = load_histogram(task.instance->target);
      lp = make_reduced_lp(a, b);
      resolution = a.dims().rows();
    }
  } catch (const std::exception& e) {
    return fail_all(e.what());
  }

  std::optional<double> oracle;
  if (spec.oracle && lp->dims.nodes() <= kMaxOracleNodes) {
    try {
      // Rebuild the histograms from the rhs: mu1 and mu2 minus its last entry.
      const std::size_t M = lp->dims.nodes();
      DenseOTProblem p;
      p.dims = lp->dims;
      p.mu1.assign(lp->rhs.begin() + M, lp->rhs.begin() + 2 * M);
      p.mu2.assign(lp->rhs.begin() + 2 * M, lp->rhs.end());
      double rest = 1.0;
      for (double v : p.mu2) rest -= v;
      p.mu2.push_back(std::max(0.0, rest));
      oracle = exact_solve(p).value;
    } catch (const std::exception&) {
      oracle.reset();
    }
  }

  for (const SolverConfig& c : spec.configs) {
    RunRecord r;
    r.instance = task.id;
    r.resolution = resolution;
    r.seed = task.seed;
    r.mode = ToString(c.mode);
    try {
      const SolveResult res = solve(*lp, c);
      r.sigma = res.report.sigma;
      r.iterations = res.report.iterations;
      r.wall_time = res.report.wall_time;
      r.kkt_res = res.report.kkt_res;
      r.distance = res.report.distance;
      r.feaserr = feasibility_error(res.state.x, *lp);
      if (oracle) r.gap = metrics(res.state.x, *lp, *oracle).gap;
      r.status = ToString(res.report.terminated_by);
    } catch (const std::exception& e) {
      r.sigma = c.sigma.value_or(0.0);
      r.status = std::string("error: ") + e.what();
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

constexpr const char* kCsvHeader =
    "instance,resolution,seed,mode,sigma,iterations,wall_time,kkt_res,"
    "distance,gap,feaserr,status";

}  // namespace

BenchSpec BenchSpec::Parse(const std::string& json_text,
                           const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("bench spec: ") + e.what());
  }
  BenchSpec spec;
  try {
    SolverConfig base;
    if (j.contains("tol")) base.tol = j.at("tol").get<double>();
    if (j.contains("max_iters")) base.max_iters = j.at("max_iters").get<std::int64_t>();
    if (j.contains("check_every")) {
      base.check_every = j.at("check_every").get<std::int64_t>();
    }
    for (const json& inst : j.at("instances")) {
      BenchInstance bi;
      if (inst.contains("kind")) {
        bi.kind = ParseSyntheticKind(inst.at("kind").get<std::string>());
        bi.id = inst.value("id", std::string(ToString(*bi.kind)));
      } else {
        bi.source = base_dir / inst.at("source").get<std::string>();
        bi.target = base_dir / inst.at("target").get<std::string>();
        bi.id = inst.value("id", bi.source.stem().string() + "-" +
                                     bi.target.stem().string());
      }
      spec.instances.push_back(std::move(bi));
    }
    if (j.contains("resolutions")) {
      spec.resolutions = j.at("resolutions").get<std::vector<int>>();
    }
    if (j.contains("seeds")) {
      spec.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    }
    if (j.contains("configs")) {
      for (const json& c : j.at("configs")) spec.configs.push_back(ParseConfig(c, base));
    } else {
      SolverConfig admm = base;
      admm.mode = IterationMode::kAdmm;
      spec.configs = {base, admm};
    }
    spec.oracle = j.value("oracle", true);
    spec.max_resolution = j.value("max_resolution", 256);
    spec.output = j.value("output", std::string());
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bench spec: ") + e.what());
  }
  if (spec.instances.empty()) throw std::invalid_argument("bench spec: no instances");
  if (spec.configs.empty()) throw std::invalid_argument("bench spec: no configs");
  const bool synthetic = std::any_of(spec.instances.begin(), spec.instances.end(),
                                     [](const BenchInstance& i) { return i.kind.has_value(); });
  if (synthetic && spec.resolutions.empty()) {
    throw std::invalid_argument("bench spec: synthetic instances need resolutions");
  }
  for (int r : spec.resolutions) {
    if (r < 2 || r > spec.max_resolution) {
      throw std::invalid_argument("bench spec: resolution " + std::to_string(r) +
                                  " outside [2, " +
                                  std::to_string(spec.max_resolution) + "]");
    }
  }
  return spec;
}

BenchSpec BenchSpec::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open bench spec " + path.string());
  std::stringstream text;
  text << in.rdbuf();
  return Parse(text.str(), path.parent_path());
}

std::vector<RunRecord> run_bench(
    const BenchSpec& spec, int jobs,
    const std::function<void(const std::string&)>& log) {
  const std::vector<Task> tasks = ExpandTasks(spec);
  std::vector<std::vector<RunRecord>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < tasks.size();) {
      results[t] = RunTask(spec, tasks[t]);
      if (log) {
        std::lock_guard<std::mutex> lock(log_mutex);
        std::ostringstream line;
        line << "[" << t + 1 << "/" << tasks.size() << "] " << tasks[t].id;
        for (const RunRecord& r : results[t]) {
          line << "  " << r.mode << ": " << r.iterations << " it, " << r.status;
        }
        log(line.str());
      }
    }
  };
  const int n = std::clamp(jobs, 1, std::max(1, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<RunRecord> records;
  for (auto& r : results) {
    records.insert(records.end(), std::make_move_iterator(r.begin()),
                   std::make_move_iterator(r.end()));
  }
  return records;
}

void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  std::ostringstream s;
  s.precision(17);
  s << kCsvHeader << '\n';
  for (const RunRecord& r : records) {
    s << CsvField(r.instance) << ',' << r.resolution << ',' << r.seed << ','
      << r.mode << ',' << r.sigma << ',' << r.iterations << ',' << r.wall_time
      << ',' << r.kkt_res << ',' << r.distance << ',';
    if (r.gap) s << *r.gap;
    s << ',' << r.feaserr << ',' << CsvField(r.status) << '\n';
  }
  out << s.str();
}

std::vector<RunRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::invalid_argument("records CSV: unexpected header");
  }
  std::vector<RunRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = SplitCsv(line);
    if (f.size() != 12) throw std::invalid_argument("records CSV: bad row");
    RunRecord r;
    r.instance = f[0];
    r.resolution = std::stoi(f[1]);
    r.seed = std::stoull(f[2]);
    r.mode = f[3];
    r.sigma = std::stod(f[4]);
    r.iterations = std::stoll(f[5]);
    r.wall_time = std::stod(f[6]);
    r.kkt_res = std::stod(f[7]);
    r.distance = std::stod(f[8]);
    if (!f[9].empty()) r.gap = std::stod(f[9]);
    r.feaserr = std::stod(f[10]);
    r.status = f[11];
    records.push_back(std::move(r));
  }
  return records;
}

std::string aggregate_json(const std::vector<RunRecord>& records) {
  std::map<std::pair<std::string, int>, std::vector<const RunRecord*>> groups;
  for (const RunRecord& r : records) groups[{r.mode, r.resolution}].push_back(&r);
  json out;
  out["groups"] = json::array();
  for (const auto& [key, runs] : groups) {
    std::vector<double> iters, times, per_iter, gaps;
    int failures = 0;
    for (const RunRecord* r : runs) {
      if (r->status.rfind("error", 0) == 0) {
        ++failures;
        continue;
      }
      iters.push_back(static_cast<double>(r->iterations));
      times.push_back(r->wall_time);
      if (r->iterations > 0) per_iter.push_back(r->wall_time / r->iterations);
      if (r->gap) gaps.push_back(*r->gap);
    }
    auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
    out["groups"].push_back({{"mode", key.first},
                             {"resolution", key.second},
                             {"runs", runs.size()},
                             {"failures", failures},
                             {"median_iterations", num(Median(iters))},
                             {"median_wall_time", num(Median(times))},
                             {"median_time_per_iter", num(Median(per_iter))},
                             {"median_gap", num(Median(gaps))}});
  }
  return out.dump(2);
}

int thread_limit() {
  const int hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HOT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
  }
  return hw;
}

}  // namespace hot
