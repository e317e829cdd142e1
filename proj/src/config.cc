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

#include "dual_reward/config.h"

#include <algorithm>
#include <fstream>

#include "dual_reward/errors.h"

namespace dual_reward {
namespace {

using nlohmann::json;

template <typename T>
std::vector<T> ListOf(const json& value) {
  if (value.is_array()) return value.get<std::vector<T>>();
  return {value.get<T>()};
}

std::vector<SelectorKind> MethodList(const json& value) {
  std::vector<SelectorKind> out;
  for (const std::string& name : ListOf<std::string>(value)) {
    if (name == "all") {
      out.assign(std::begin(kAllSelectorKinds), std::end(kAllSelectorKinds));
    } else {
      out.push_back(ParseSelectorKind(name));
    }
  }
  return out;
}

}  // namespace

std::string_view ExperimentName(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kSim61:
      return "sim61";
    case ExperimentKind::kGreedyTrap:
      return "greedy_trap";
    case ExperimentKind::kCustom:
      return "custom";
  }
  return "unknown";
}

ExperimentKind ParseExperimentKind(std::string_view name) {
  for (ExperimentKind kind : {ExperimentKind::kSim61, ExperimentKind::kGreedyTrap,
                              ExperimentKind::kCustom}) {
    if (ExperimentName(kind) == name) return kind;
  }
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

const std::vector<std::string>& ConfigKeys() {
  static const std::vector<std::string> keys = {
      "experiment", "method",    "budget_t",  "batch_k",        "replications",
      "base_seed",  "n",         "d",         "g",              "m",
      "beta_low",   "beta_high", "c1",        "c2",             "delta",
      "pessimism_mode", "ridge", "t0",        "no_repeat",      "output_dir",
      "n_eval",     "threads",   "env_file",  "write_traces"};
  return keys;
}

void RunConfig::Validate() const {
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (methods.empty()) throw ConfigError("no method given");
  if (budgets.empty()) throw ConfigError("no budget_t given");
  if (batch_ks.empty()) throw ConfigError("no batch_k given");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  if (!(ridge >= 0.0)) throw ConfigError("ridge must be >= 0");
  try {
    confidence.Validate();
    if (experiment == ExperimentKind::kSim61) sim.Validate();
  } catch (const InvalidArgumentError& e) {
    throw ConfigError(e.what());
  }
  for (int k : batch_ks) {
    if (k < 1) throw ConfigError("batch_k must be >= 1");
  }
  const int floor_t = experiment == ExperimentKind::kGreedyTrap ? 1 : EffectiveT0();
  for (int t : budgets) {
    if (t < floor_t) {
      throw ConfigError("budget_t " + std::to_string(t) + " is below t0 = " +
                        std::to_string(floor_t));
    }
  }
  if (experiment == ExperimentKind::kCustom && env_file.empty()) {
    throw ConfigError("the custom experiment needs env_file");
  }
}

RunConfig ApplyConfigJson(RunConfig cfg, const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  const auto& keys = ConfigKeys();
  try {
    for (const auto& [key, value] : j.items()) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        throw ConfigError("unknown config key '" + key + "'");
      }
      if (key == "experiment") {
        cfg.experiment = ParseExperimentKind(value.get<std::string>());
      } else if (key == "method") {
        cfg.methods = MethodList(value);
      } else if (key == "budget_t") {
        cfg.budgets = ListOf<int>(value);
      } else if (key == "batch_k") {
        cfg.batch_ks = ListOf<int>(value);
      } else if (key == "replications") {
        cfg.replications = value.get<int>();
      } else if (key == "base_seed") {
        cfg.base_seed = value.get<std::uint64_t>();
      } else if (key == "n") {
        cfg.sim.n = value.get<int>();
      } else if (key == "d") {
        cfg.sim.d = value.get<int>();
      } else if (key == "g") {
        cfg.sim.g = value.get<int>();
      } else if (key == "m") {
        cfg.sim.m = value.get<int>();
      } else if (key == "beta_low") {
        cfg.sim.beta_low = value.get<double>();
      } else if (key == "beta_high") {
        cfg.sim.beta_high = value.get<double>();
      } else if (key == "c1") {
        cfg.confidence.c1 = value.get<double>();
      } else if (key == "c2") {
        cfg.confidence.c2 = value.get<double>();
      } else if (key == "delta") {
        cfg.confidence.delta = value.get<double>();
      } else if (key == "pessimism_mode") {
        cfg.pessimism_mode = ParsePessimismMode(value.get<std::string>());
      } else if (key == "ridge") {
        cfg.ridge = value.get<double>();
      } else if (key == "t0") {
        cfg.t0 = value.get<int>();
      } else if (key == "no_repeat") {
        cfg.no_repeat = value.get<bool>();
      } else if (key == "output_dir") {
        cfg.output_dir = value.get<std::string>();
      } else if (key == "n_eval") {
        cfg.sim.n_eval = value.get<int>();
      } else if (key == "threads") {
        cfg.threads = value.get<int>();
      } else if (key == "env_file") {
        cfg.env_file = value.get<std::string>();
      } else if (key == "write_traces") {
        cfg.write_traces = value.get<bool>();
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  } catch (const InvalidArgumentError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

RunConfig LoadRunConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return ApplyConfigJson(RunConfig{}, j);
}

json RunConfigToJson(const RunConfig& cfg) {
  json methods = json::array();
  for (SelectorKind kind : cfg.methods) methods.push_back(SelectorName(kind));
  return {{"experiment", ExperimentName(cfg.experiment)},
          {"method", methods},
          {"budget_t", cfg.budgets},
          {"batch_k", cfg.batch_ks},
          {"replications", cfg.replications},
          {"base_seed", cfg.base_seed},
          {"n", cfg.sim.n},
          {"d", cfg.sim.d},
          {"g", cfg.sim.g},
          {"m", cfg.sim.m},
          {"beta_low", cfg.sim.beta_low},
          {"beta_high", cfg.sim.beta_high},
          {"c1", cfg.confidence.c1},
          {"c2", cfg.confidence.c2},
          {"delta", cfg.confidence.delta},
          {"pessimism_mode", PessimismModeName(cfg.pessimism_mode)},
          {"ridge", cfg.ridge},
          {"t0", cfg.EffectiveT0()},
          {"no_repeat", cfg.no_repeat},
          {"output_dir", cfg.output_dir},
          {"n_eval", cfg.sim.n_eval},
          {"threads", cfg.threads},
          {"env_file", cfg.env_file},
          {"write_traces", cfg.write_traces}};
}

}  // namespace dual_reward
