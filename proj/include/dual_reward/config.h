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

// Run configuration for the simulate and trap commands. A JSON file may set
// any key; command-line flags are applied on top of the file.

#ifndef DUAL_REWARD_CONFIG_H_
#define DUAL_REWARD_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dual_reward/dual_selector.h"
#include "dual_reward/pessimistic_policy.h"
#include "dual_reward/reward_mle.h"
#include "dual_reward/sim_env.h"

namespace dual_reward {

enum class ExperimentKind { kSim61, kGreedyTrap, kCustom };

// "sim61", "greedy_trap", "custom".
std::string_view ExperimentName(ExperimentKind kind);
ExperimentKind ParseExperimentKind(std::string_view name);

struct RunConfig {
  ExperimentKind experiment = ExperimentKind::kSim61;
  // Every (method, budget, batch size) combination is one cell.
  std::vector<SelectorKind> methods = {SelectorKind::kDualDOptimal};
  std::vector<int> budgets = {1000};
  std::vector<int> batch_ks = {50};
  int replications = 1;
  std::uint64_t base_seed = 0;
  SimSpec sim;
  ConfidenceSpec confidence;
  PessimismMode pessimism_mode = PessimismMode::kJoint;
  double ridge = 1e-6;
  // Random warm-up pairs; 0 means 2d.
  int t0 = 0;
  bool no_repeat = false;
  std::string output_dir = "dual_reward_out";

  // 0 uses every hardware thread.
  int threads = 0;
  // Environment JSON for the custom experiment.
  std::string env_file;
  bool write_traces = true;

  int EffectiveT0() const { return t0 > 0 ? t0 : 2 * sim.d; }
  // Throws ConfigError.
  void Validate() const;
};

// Applies the keys of `j` on top of `base`. Scalars are accepted where a
// list is expected. Unknown keys and type mismatches throw ConfigError.
RunConfig ApplyConfigJson(RunConfig base, const nlohmann::json& j);
RunConfig LoadRunConfig(const std::string& path);
nlohmann::json RunConfigToJson(const RunConfig& cfg);

// Names accepted by ApplyConfigJson.
const std::vector<std::string>& ConfigKeys();

}  // namespace dual_reward

#endif  // DUAL_REWARD_CONFIG_H_
