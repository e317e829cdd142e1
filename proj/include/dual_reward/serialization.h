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

// JSON forms of environments, labeled records, and selection traces, so a
// run can be replayed without regenerating its inputs.

#ifndef DUAL_REWARD_SERIALIZATION_H_
#define DUAL_REWARD_SERIALIZATION_H_

#include <string>
#include <vector>

#include "json.hpp"

#include "dual_reward/dual_selector.h"
#include "dual_reward/sim_env.h"

namespace dual_reward {

inline constexpr char kEnvironmentSchema[] = "dual-reward/environment/v1";

nlohmann::json EnvironmentToJson(const SimEnvironment& env);
// Throws InvalidArgumentError on schema violations.
SimEnvironment EnvironmentFromJson(const nlohmann::json& j);

nlohmann::json RecordsToJson(const std::vector<PreferenceRecord>& records);
std::vector<PreferenceRecord> RecordsFromJson(const nlohmann::json& j);

// One JSON-lines entry with the fields step, candidate_id, teacher_id, beta,
// gain, log_det, theta_hat_norm.
nlohmann::json TraceToJson(const TraceRecord& record);

// Answers queries with the recorded labels in order; throws Error once the
// stream is exhausted.
LabelOracle MakeReplayOracle(std::vector<int> labels);

nlohmann::json ReadJsonFile(const std::string& path);
void WriteJsonFile(const std::string& path, const nlohmann::json& j);

}  // namespace dual_reward

#endif  // DUAL_REWARD_SERIALIZATION_H_
