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

#include "selftest.h"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "dual_reward/dual_selector.h"
#include "dual_reward/oracles.h"
#include "dual_reward/sim_env.h"

namespace dual_reward {
namespace {

void Print(std::ostream& out, const OracleCheck& c) {
  char line[160];
  std::snprintf(line, sizeof(line), "%s %-30s %4d/%-4d worst=%.3g",
                c.passed() ? "PASS" : "FAIL", c.name.c_str(),
                c.instances - c.failures, c.instances, c.worst);
  out << line << '\n';
}

// Within a batch the information matrix only grows, so the traced
// log-determinant must not decrease between consecutive steps of a batch.
OracleCheck CheckTraceMonotone(std::uint64_t seed) {
  OracleCheck check{"log-det trace within batches", 0, 0, 0.0};
  SimSpec spec;
  spec.n = 500;
  spec.n_eval = 10;
  spec.seed = seed;
  const SimEnvironment env = GenSimEnv(spec);
  for (int k : {1, 7, 25}) {
    SelectorPolicy policy;
    policy.batch_k = k;
    const LabelOracle oracle = env.MakeOracle();
    DesignState state =
        Initialize(env.pool, env.teachers, policy, oracle, seed);
    state = RunSelection(std::move(state), policy, 200, oracle);
    const std::vector<TraceRecord>& trace = state.trace;
    for (size_t i = 1; i < trace.size(); ++i) {
      if (trace[i].batch != trace[i - 1].batch) continue;
      ++check.instances;
      const double drop = trace[i - 1].log_det - trace[i].log_det;
      check.worst = std::max(check.worst, drop);
      if (drop > 1e-9) ++check.failures;
    }
  }
  return check;
}

}  // namespace

bool RunSelftest(std::uint64_t seed, std::ostream& out) {
  std::vector<OracleCheck> checks = {
      CheckDeterminantIdentity(1000, seed),
      CheckSelectionArgmax(200, seed),
      CheckScoreFiniteDiff(100, seed),
      CheckGridMle(4, seed),
      CheckInfoMatrix(100, seed),
      CheckTraceMonotone(seed),
  };
  bool ok = true;
  for (const OracleCheck& c : checks) {
    Print(out, c);
    ok = ok && c.passed();
  }
  const RationalityWitness w = FindRationalityWitness();
  char line[200];
  std::snprintf(line, sizeof(line),
                "%s %-30s gain(0.5)=%.5f gain(3.0)=%.5f best beta=%.2f",
                w.holds() ? "PASS" : "FAIL", "rationality witness",
                w.gain_low_beta, w.gain_high_beta, w.best_beta_on_grid);
  out << line << '\n';
  return ok && w.holds();
}

}  // namespace dual_reward
