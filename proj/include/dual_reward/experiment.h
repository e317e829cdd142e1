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

// Experiment orchestration: seeded replications per (method, T, K) cell,
// metrics rows, traces, and the run manifest.

#ifndef DUAL_REWARD_EXPERIMENT_H_
#define DUAL_REWARD_EXPERIMENT_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dual_reward/config.h"
#include "dual_reward/dual_selector.h"
#include "dual_reward/sim_env.h"

namespace dual_reward {

inline constexpr char kLibraryVersion[] = "0.1.0";

// Column order of metrics.csv.
inline constexpr char kMetricsHeader[] =
    "method,t,k,rep,seed,gv,mse,subopt,logdet,wall_ms";

struct MetricsRow {
  std::string method;
  int t = 0;
  int k = 0;
  int rep = 0;
  std::uint64_t seed = 0;
  // Raw generalized variance of the cell's estimates, repeated on every row
  // of the cell; NaN with fewer than two successful replications.
  double gv = 0.0;
  // ||theta_hat - theta_star|| of this replication.
  double mse = 0.0;
  double subopt = 0.0;
  double logdet = 0.0;
  std::int64_t wall_ms = 0;
};

struct SimReplication {
  Eigen::VectorXd theta_hat;
  double mse = 0.0;
  double subopt = 0.0;
  // SubOpt of the plain greedy policy of theta_hat, for diagnostics.
  double greedy_subopt = 0.0;
  double logdet = 0.0;
  bool converged = false;
  std::int64_t wall_ms = 0;
  std::vector<TraceRecord> trace;
};

// One selection run on `env` followed by the pessimistic policy. wall_ms
// covers selection and estimation only.
SimReplication RunSimReplication(const SimEnvironment& env,
                                 const SelectorPolicy& policy, int budget_t,
                                 const RunConfig& cfg, std::uint64_t seed);

struct TrapReplication {
  Eigen::VectorXd theta_hat;
  double mle_error = 0.0;
  double greedy_subopt = 0.0;
  double pessimistic_subopt = 0.0;
  double logdet = 0.0;
  // theta_star lies in the confidence ellipsoid around theta_hat.
  bool covered = false;
  // The pessimistic value of the chosen policy does not exceed its true
  // value.
  bool lower_bound_holds = false;
};

TrapReplication RunTrapReplication(int t, std::uint64_t seed,
                                   const ConfidenceSpec& confidence,
                                   PessimismMode mode, double ridge,
                                   double c_theta = 2.0);

struct ExperimentResult {
  std::vector<MetricsRow> rows;
  // theta_hat of each row (empty vector for failed rows).
  std::vector<Eigen::VectorXd> estimates;
  std::vector<std::string> failures;
  double c_phi = 0.0;
};

// Runs every cell of `cfg`. Rows are ordered by (method, T, K, rep) however
// the work is scheduled. A replication that throws becomes a row of NaN
// metrics and an entry in `failures`. Files (metrics.csv, manifest.json,
// traces/) are written under cfg.output_dir unless it is empty; I/O errors
// throw Error naming the path.
ExperimentResult RunExperiment(const RunConfig& cfg);

void WriteMetricsCsv(const std::string& path,
                     const std::vector<MetricsRow>& rows);

}  // namespace dual_reward

#endif  // DUAL_REWARD_EXPERIMENT_H_
