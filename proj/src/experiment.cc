// Copyright 2026 The dual-reward Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dual_reward/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <thread>

#include "dual_reward/errors.h"
#include "dual_reward/metrics.h"
#include "dual_reward/pessimistic_policy.h"
#include "dual_reward/reward_mle.h"
#include "dual_reward/serialization.h"

namespace dual_reward {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

struct Cell {
  std::string method;
  SelectorKind kind = SelectorKind::kDualDOptimal;
  int t = 0;
  int k = 0;
};

struct JobOutput {
  MetricsRow row;
  Eigen::VectorXd theta_hat;
  std::vector<TraceRecord> trace;
  std::string error;
};

// Runs fn(i) for i in [0, n) on `threads` workers; each index is claimed
// exactly once.
template <typename Fn>
void ParallelFor(size_t n, int threads, Fn fn) {
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < n; i = next++) fn(i);
  };
  const int count = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (count == 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (int i = 0; i < count; ++i) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();
}

int ResolveThreads(int requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<Cell> MakeCells(const RunConfig& cfg) {
  std::vector<Cell> cells;
  if (cfg.experiment == ExperimentKind::kGreedyTrap) {
    for (const char* name : {"greedy", "pessimistic"}) {
      for (int t : cfg.budgets) cells.push_back({name, {}, t, 0});
    }
    return cells;
  }
  for (SelectorKind kind : cfg.methods) {
    for (int t : cfg.budgets) {
      for (int k : cfg.batch_ks) {
        cells.push_back({std::string(SelectorName(kind)), kind, t, k});
      }
    }
  }
  return cells;
}

std::vector<SimEnvironment> MakeEnvironments(const RunConfig& cfg) {
  std::vector<SimEnvironment> envs(cfg.replications);
  if (cfg.experiment == ExperimentKind::kCustom) {
    const SimEnvironment base =
        EnvironmentFromJson(ReadJsonFile(cfg.env_file));
    for (int r = 0; r < cfg.replications; ++r) {
      envs[r] = base;
      envs[r].oracle_seed = DeriveSeed(cfg.base_seed + r, Stream::kOracle);
    }
    return envs;
  }
  ParallelFor(envs.size(), ResolveThreads(cfg.threads), [&](size_t r) {
    SimSpec spec = cfg.sim;
    spec.seed = cfg.base_seed + r;
    envs[r] = GenSimEnv(spec);
  });
  return envs;
}

void CreateDirectories(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
}

void WriteTrace(const std::filesystem::path& path,
                const std::vector<TraceRecord>& trace) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (const TraceRecord& t : trace) out << TraceToJson(t).dump() << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace

SimReplication RunSimReplication(const SimEnvironment& env,
                                 const SelectorPolicy& policy, int budget_t,
                                 const RunConfig& cfg, std::uint64_t seed) {
  const auto start = Clock::now();
  const LabelOracle oracle = env.MakeOracle();
  DesignConfig design;
  design.ridge = cfg.ridge;
  design.bound_c_theta = env.theta_star.bound_c_theta;
  DesignState state =
      Initialize(env.pool, env.teachers, policy, oracle, seed, design);
  state = RunSelection(std::move(state), policy, budget_t, oracle);
  const auto stop = Clock::now();

  SimReplication out;
  out.wall_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(stop - start)
          .count();
  out.theta_hat = state.theta_hat.theta;
  out.converged = state.theta_hat_converged;
  out.mse = (out.theta_hat - env.theta_star.theta).norm();
  out.logdet = state.info.log_det();
  const double gamma =
      ConfidenceRadius(cfg.confidence, budget_t, state.dim());
  const PolicyAssignment pi =
      SolvePessimistic(env.problem, state.theta_hat, state.info, gamma,
                       cfg.pessimism_mode, seed);
  out.subopt = Suboptimality(pi, env.problem, env.theta_star);
  out.greedy_subopt = Suboptimality(GreedyPolicy(env.problem, state.theta_hat),
                                    env.problem, env.theta_star);
  out.trace = std::move(state.trace);
  return out;
}

TrapReplication RunTrapReplication(int t, std::uint64_t seed,
                                   const ConfidenceSpec& confidence,
                                   PessimismMode mode, double ridge,
                                   double c_theta) {
  const GreedyTrap trap = GenGreedyTrap(t, seed, c_theta);
  const MleResult fit = FitMle(trap.records, c_theta);
  const InfoMatrix info = BuildInfoMatrix(fit.params, trap.records, ridge);
  const int d = fit.params.dim();
  const double gamma = ConfidenceRadius(confidence, t, d);

  TrapReplication out;
  out.theta_hat = fit.params.theta;
  out.mle_error = (fit.params.theta - trap.theta_star.theta).norm();
  out.logdet = info.log_det();
  out.greedy_subopt = Suboptimality(GreedyPolicy(trap.problem, fit.params),
                                    trap.problem, trap.theta_star);
  const PolicyAssignment pi =
      SolvePessimistic(trap.problem, fit.params, info, gamma, mode, seed);
  out.pessimistic_subopt = Suboptimality(pi, trap.problem, trap.theta_star);

  const Eigen::VectorXd diff = trap.theta_star.theta - fit.params.theta;
  const double scaled = diff.dot(info.h() * diff) / info.count();
  out.covered = scaled <= gamma * gamma;
  out.lower_bound_holds =
      PessimisticValue(pi, trap.problem, fit.params, info, gamma) <=
      PolicyValue(pi, trap.problem, trap.theta_star.theta) + 1e-12;
  return out;
}

void WriteMetricsCsv(const std::string& path,
                     const std::vector<MetricsRow>& rows) {
  std::unique_ptr<FILE, int (*)(FILE*)> f(std::fopen(path.c_str(), "w"),
                                          &std::fclose);
  if (!f) throw Error("cannot write " + path);
  std::fprintf(f.get(), "%s\n", kMetricsHeader);
  for (const MetricsRow& r : rows) {
    std::fprintf(f.get(), "%s,%d,%d,%d,%llu,%.17g,%.17g,%.17g,%.17g,%lld\n",
                 r.method.c_str(), r.t, r.k, r.rep,
                 static_cast<unsigned long long>(r.seed), r.gv, r.mse,
                 r.subopt, r.logdet, static_cast<long long>(r.wall_ms));
  }
  if (std::ferror(f.get())) throw Error("write failed: " + path);
}

ExperimentResult RunExperiment(const RunConfig& cfg) {
  cfg.Validate();
  const std::vector<Cell> cells = MakeCells(cfg);
  const bool trap = cfg.experiment == ExperimentKind::kGreedyTrap;
  std::vector<SimEnvironment> envs;
  if (!trap) envs = MakeEnvironments(cfg);

  const size_t reps = static_cast<size_t>(cfg.replications);
  // Trap cells share their replications: both policies come from one fit.
  const size_t num_jobs =
      trap ? cfg.budgets.size() * reps : cells.size() * reps;
  std::vector<JobOutput> jobs(num_jobs);
  std::vector<TrapReplication> trap_out(trap ? num_jobs : 0);

  ParallelFor(num_jobs, ResolveThreads(cfg.threads), [&](size_t i) {
    JobOutput& job = jobs[i];
    const size_t cell_index = i / reps;
    const int rep = static_cast<int>(i % reps);
    const std::uint64_t seed = cfg.base_seed + rep;
    try {
      if (trap) {
        const auto start = Clock::now();
        trap_out[i] = RunTrapReplication(
            cfg.budgets[cell_index], seed, cfg.confidence, cfg.pessimism_mode,
            cfg.ridge, cfg.sim.c_theta);
        job.row.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              Clock::now() - start)
                              .count();
        return;
      }
      const Cell& cell = cells[cell_index];
      SelectorPolicy policy;
      policy.kind = cell.kind;
      policy.batch_k = cell.k;
      policy.t0 = cfg.t0 > 0 ? cfg.t0 : 2 * envs[rep].theta_star.dim();
      policy.no_repeat = cfg.no_repeat;
      SimReplication run = RunSimReplication(envs[rep], policy, cell.t, cfg, seed);
      job.theta_hat = std::move(run.theta_hat);
      job.trace = std::move(run.trace);
      job.row.mse = run.mse;
      job.row.subopt = run.subopt;
      job.row.logdet = run.logdet;
      job.row.wall_ms = run.wall_ms;
    } catch (const std::exception& e) {
      job.error = e.what();
    }
  });

  ExperimentResult result;
  for (const SimEnvironment& env : envs) {
    result.c_phi = std::max(result.c_phi, env.c_phi);
  }
  for (size_t c = 0; c < cells.size(); ++c) {
    const Cell& cell = cells[c];
    const size_t base = trap ? (c % cfg.budgets.size()) * reps : c * reps;
    std::vector<Eigen::VectorXd> estimates;
    const size_t first_row = result.rows.size();
    for (size_t r = 0; r < reps; ++r) {
      const JobOutput& job = jobs[base + r];
      MetricsRow row = job.row;
      row.method = cell.method;
      row.t = cell.t;
      row.k = cell.k;
      row.rep = static_cast<int>(r);
      row.seed = cfg.base_seed + r;
      Eigen::VectorXd theta_hat = job.theta_hat;
      if (trap && job.error.empty()) {
        const TrapReplication& tr = trap_out[base + r];
        theta_hat = tr.theta_hat;
        row.mse = tr.mle_error;
        row.logdet = tr.logdet;
        row.subopt = cell.method == "greedy" ? tr.greedy_subopt
                                             : tr.pessimistic_subopt;
      }
      if (!job.error.empty()) {
        row.mse = row.subopt = row.logdet = kNaN;
        row.wall_ms = 0;
        theta_hat.resize(0);
        if (!trap || cell.method == "greedy") {
          result.failures.push_back(cell.method + " t=" + std::to_string(cell.t) +
                                    " k=" + std::to_string(cell.k) +
                                    " rep=" + std::to_string(r) + ": " +
                                    job.error);
        }
      } else {
        estimates.push_back(theta_hat);
      }
      result.rows.push_back(row);
      result.estimates.push_back(std::move(theta_hat));
    }
    const double gv = estimates.size() >= 2 ? ComputeGv(estimates) : kNaN;
    for (size_t i = first_row; i < result.rows.size(); ++i) {
      result.rows[i].gv = gv;
    }
  }

  if (cfg.output_dir.empty()) return result;

  const std::filesystem::path dir(cfg.output_dir);
  CreateDirectories(dir);
  WriteMetricsCsv((dir / "metrics.csv").string(), result.rows);
  if (cfg.write_traces && !trap) {
    CreateDirectories(dir / "traces");
    for (size_t c = 0; c < cells.size(); ++c) {
      for (size_t r = 0; r < reps; ++r) {
        const JobOutput& job = jobs[c * reps + r];
        if (!job.error.empty()) continue;
        char name[128];
        std::snprintf(name, sizeof(name), "%s_t%d_k%d_rep%zu.jsonl",
                      cells[c].method.c_str(), cells[c].t, cells[c].k, r);
        WriteTrace(dir / "traces" / name, job.trace);
      }
    }
  }
  nlohmann::json manifest;
  manifest["config"] = RunConfigToJson(cfg);
  manifest["version"] = kLibraryVersion;
  manifest["c_phi"] = result.c_phi;
  manifest["seed_rule"] = "replication r uses seed base_seed + r";
  manifest["evaluation_set"] =
      trap ? "the single trap context over its four actions"
           : "SubOpt is evaluated on n_eval held-out contexts drawn from the "
             "context distribution, independent of the candidate pool";
  manifest["rows"] = result.rows.size();
  manifest["failures"] = result.failures;
  WriteJsonFile((dir / "manifest.json").string(), manifest);
  return result;
}

}  // namespace dual_reward
