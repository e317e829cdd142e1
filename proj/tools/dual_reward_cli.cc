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

// dual-reward: run simulations, the greedy-trap scenario, reports, and the
// self-test from the command line.
//
// Exit status: 0 success, 1 configuration error, 2 runtime error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dual_reward/config.h"
#include "dual_reward/errors.h"
#include "dual_reward/experiment.h"
#include "dual_reward/report.h"
#include "dual_reward/serialization.h"
#include "dual_reward/sim_env.h"
#include "selftest.h"

namespace dr = dual_reward;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

enum class FlagType { kString, kNumber, kList, kStringList };

struct FlagSpec {
  const char* key;
  FlagType type;
  const char* help;
};

// Every config key except the booleans, which are plain flags.
constexpr FlagSpec kFlags[] = {
    {"experiment", FlagType::kString, "sim61, greedy_trap or custom"},
    {"method", FlagType::kStringList,
     "selectors, comma separated: dual, conversation_only, teacher_only, "
     "apo, random, or all"},
    {"budget_t", FlagType::kList, "label budgets T, comma separated"},
    {"batch_k", FlagType::kList, "batch sizes K, comma separated"},
    {"replications", FlagType::kNumber, "replications per cell"},
    {"base_seed", FlagType::kNumber, "replication r uses base_seed + r"},
    {"n", FlagType::kNumber, "candidate conversations"},
    {"d", FlagType::kNumber, "feature dimension"},
    {"g", FlagType::kNumber, "context categories"},
    {"m", FlagType::kNumber, "teachers"},
    {"beta_low", FlagType::kNumber, "lower end of teacher rationality"},
    {"beta_high", FlagType::kNumber, "upper end of teacher rationality"},
    {"c1", FlagType::kNumber, "confidence-radius constant C1"},
    {"c2", FlagType::kNumber, "confidence-radius constant C2"},
    {"delta", FlagType::kNumber, "confidence level delta"},
    {"pessimism_mode", FlagType::kString, "joint or per_context"},
    {"ridge", FlagType::kNumber, "ridge added to the information matrix"},
    {"t0", FlagType::kNumber, "random warm-up pairs (0: 2d)"},
    {"output_dir", FlagType::kString, "output directory"},
    {"n_eval", FlagType::kNumber, "held-out evaluation contexts"},
    {"threads", FlagType::kNumber, "worker threads (0: all cores)"},
    {"env_file", FlagType::kString, "environment JSON (custom experiment)"},
};

std::string FlagName(const char* key) {
  std::string name = key;
  for (char& c : name) {
    if (c == '_') c = '-';
  }
  return "--" + name;
}

struct RunFlags {
  std::string config_path;
  std::map<std::string, std::string> values;
  bool no_repeat = false;
  bool no_traces = false;
};

void AddRunFlags(CLI::App* app, RunFlags& flags) {
  app->add_option("--config", flags.config_path, "JSON config file")
      ->check(CLI::ExistingFile);
  for (const FlagSpec& f : kFlags) {
    app->add_option(FlagName(f.key), flags.values[f.key], f.help);
  }
  app->add_flag("--no-repeat", flags.no_repeat,
                "query each conversation at most once");
  app->add_flag("--no-traces", flags.no_traces, "skip per-run trace files");
}

json ParseNumber(const std::string& key, const std::string& text) {
  json v;
  try {
    v = json::parse(text);
  } catch (const json::exception&) {
    throw dr::ConfigError("--" + key + ": not a number: '" + text + "'");
  }
  if (!v.is_number()) {
    throw dr::ConfigError("--" + key + ": not a number: '" + text + "'");
  }
  return v;
}

// File values first, then every flag given on the command line.
dr::RunConfig BuildConfig(CLI::App* app, const RunFlags& flags,
                          dr::RunConfig base) {
  if (!flags.config_path.empty()) {
    base = dr::ApplyConfigJson(base, dr::ReadJsonFile(flags.config_path));
  }
  json overlay = json::object();
  for (const FlagSpec& f : kFlags) {
    if (app->get_option(FlagName(f.key))->count() == 0) continue;
    const std::string& text = flags.values.at(f.key);
    switch (f.type) {
      case FlagType::kString:
        overlay[f.key] = text;
        break;
      case FlagType::kNumber:
        overlay[f.key] = ParseNumber(f.key, text);
        break;
      case FlagType::kList:
      case FlagType::kStringList: {
        json list = json::array();
        std::stringstream ss(text);
        for (std::string item; std::getline(ss, item, ',');) {
          if (item.empty()) continue;
          list.push_back(f.type == FlagType::kList ? ParseNumber(f.key, item)
                                                   : json(item));
        }
        overlay[f.key] = list;
        break;
      }
    }
  }
  if (flags.no_repeat) overlay["no_repeat"] = true;
  if (flags.no_traces) overlay["write_traces"] = false;
  return dr::ApplyConfigJson(base, overlay);
}

void PrintReport(const dr::Report& report) {
  std::printf("%-18s %5s %6s %4s %18s %20s\n", "method", "K", "T", "n", "MSE",
              "SubOpt");
  for (const dr::ReportPoint& p : report.points) {
    std::printf("%-18s %5d %6d %4d %8.4f +- %6.4f %9.5f +- %7.5f\n",
                p.method.c_str(), p.k, p.t, p.n, p.mse.mean, p.mse.std_error,
                p.subopt.mean, p.subopt.std_error);
  }
}

int RunAndSummarize(const dr::RunConfig& cfg) {
  const dr::ExperimentResult result = dr::RunExperiment(cfg);
  PrintReport(dr::BuildReport(result.rows));
  for (const std::string& f : result.failures) {
    std::cerr << "failed replication: " << f << '\n';
  }
  std::cout << result.rows.size() << " rows written to "
            << (std::filesystem::path(cfg.output_dir) / "metrics.csv").string()
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual active learning for preference-based reward estimation"};
  app.require_subcommand(1);

  RunFlags sim_flags;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "run seeded replications of the selection experiment");
  AddRunFlags(simulate, sim_flags);

  RunFlags trap_flags;
  CLI::App* trap = app.add_subcommand(
      "trap", "greedy-trap scenario: greedy vs pessimistic policy");
  AddRunFlags(trap, trap_flags);

  std::string metrics_path, report_dir;
  CLI::App* report = app.add_subcommand("report", "aggregate a metrics CSV");
  report->add_option("metrics", metrics_path, "metrics.csv")->required();
  report->add_option("--output-dir", report_dir,
                     "defaults to the directory of the CSV");

  std::uint64_t selftest_seed = 20240607;
  CLI::App* selftest =
      app.add_subcommand("selftest", "oracle and invariant suites");
  selftest->add_option("--seed", selftest_seed, "suite seed");

  dr::SimSpec env_spec;
  std::string env_out;
  CLI::App* gen_env = app.add_subcommand(
      "gen-env", "write a simulation environment as JSON for replay");
  gen_env->add_option("--n", env_spec.n, "candidate conversations");
  gen_env->add_option("--d", env_spec.d, "feature dimension");
  gen_env->add_option("--g", env_spec.g, "context categories");
  gen_env->add_option("--m", env_spec.m, "teachers");
  gen_env->add_option("--beta-low", env_spec.beta_low, "rationality low");
  gen_env->add_option("--beta-high", env_spec.beta_high, "rationality high");
  gen_env->add_option("--n-eval", env_spec.n_eval, "evaluation contexts");
  gen_env->add_option("--seed", env_spec.seed, "environment seed");
  gen_env->add_option("--out", env_out, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (simulate->parsed()) {
      return RunAndSummarize(BuildConfig(simulate, sim_flags, dr::RunConfig{}));
    }
    if (trap->parsed()) {
      dr::RunConfig base;
      base.experiment = dr::ExperimentKind::kGreedyTrap;
      base.budgets = {100, 200, 400, 800, 1600, 3200};
      base.replications = 100;
      base.output_dir = "dual_reward_trap";
      dr::RunConfig cfg = BuildConfig(trap, trap_flags, base);
      cfg.experiment = dr::ExperimentKind::kGreedyTrap;
      return RunAndSummarize(cfg);
    }
    if (report->parsed()) {
      if (report_dir.empty()) {
        report_dir =
            std::filesystem::path(metrics_path).parent_path().string();
        if (report_dir.empty()) report_dir = ".";
      }
      const dr::Report r = dr::BuildReport(dr::ReadMetricsCsv(metrics_path));
      dr::WriteReport(r, report_dir);
      PrintReport(r);
      for (const dr::MseSlope& s : r.slopes) {
        std::printf("MSE log-log slope %s K=%d: %+.3f\n", s.method.c_str(),
                    s.k, s.slope);
      }
      return 0;
    }
    if (selftest->parsed()) {
      return dr::RunSelftest(selftest_seed, std::cout) ? 0 : kExitRuntime;
    }
    if (gen_env->parsed()) {
      env_spec.Validate();
      dr::WriteJsonFile(env_out, dr::EnvironmentToJson(dr::GenSimEnv(env_spec)));
      return 0;
    }
  } catch (const dr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const dr::InvalidArgumentError& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
