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

// Synthetic environments: the contextual-bandit simulation with a
// closed-form optimal action, the greedy-trap scenario with an uncovered
// optimal action, and random teacher pools.

#ifndef DUAL_REWARD_SIM_ENV_H_
#define DUAL_REWARD_SIM_ENV_H_

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "dual_reward/dual_selector.h"
#include "dual_reward/pessimistic_policy.h"
#include "dual_reward/preference_models.h"

namespace dual_reward {

struct SimSpec {
  int n = 10000;  // candidate pool size
  int d = 5;
  int g = 5;   // context categories
  int m = 20;  // teachers
  double beta_low = 0.0;
  double beta_high = 2.0;
  double c_beta = 3.0;
  double c_theta = 2.0;
  // Defaults to (-1/2, 1/2, ..., 1/2).
  std::optional<Eigen::VectorXd> theta_star;
  // Held-out contexts on which policies are evaluated.
  int n_eval = 1000;
  std::uint64_t seed = 0;

  void Validate() const;
  Eigen::VectorXd ThetaStar() const;
};

// Context x: x_1 ~ U(1, 2), remaining coordinates ~ U(-1/2, 1/2).
Eigen::VectorXd SampleContext(int d, Rng& rng);

// phi(x, a) = (x_1 a^2, x_2 a, ..., x_d a).
Eigen::VectorXd SimFeatures(const Eigen::VectorXd& x, double a);

// argmax_a theta' phi(x, a) = -(sum_{i>=2} theta_i x_i) / (2 theta_1 x_1);
// requires theta_1 x_1 < 0.
double OptimalAction(const Eigen::VectorXd& x, const Eigen::VectorXd& theta);

// The comparison action ||x|| / 3.
double AlternativeAction(const Eigen::VectorXd& x);

struct SimEnvironment {
  std::vector<FeatureDiff> pool;
  TeacherPool teachers;
  // Held-out contexts; action 0 is a*(x), action 1 is ||x|| / 3.
  PolicyProblem problem;
  RewardParams theta_star;
  // Largest ||phi(x, a)|| over every generated context and action.
  double c_phi = 0.0;
  std::uint64_t oracle_seed = 0;

  // Fresh label stream; two oracles of the same environment answer the same
  // query sequence identically.
  LabelOracle MakeOracle() const;
};

SimEnvironment GenSimEnv(const SimSpec& spec);

// Rationality matrix with i.i.d. U(low, high) entries. Throws
// InvalidArgumentError if low > high, low < 0 or high > c_beta.
TeacherPool GenTeacherPool(int m, int g, double low, double high,
                           std::uint64_t seed, double c_beta = 3.0);

struct GreedyTrap {
  // phi(x, a_k) for the four actions, one per row.
  static Eigen::MatrixXd ActionFeatures();
  static Eigen::VectorXd ThetaStar();
  // Behavior probabilities of a_1..a_4; a_4 is never sampled.
  static constexpr std::array<double, 4> kBehavior = {0.45, 0.45, 0.10, 0.0};

  std::vector<PreferenceRecord> records;
  // Sampled (a^(0), a^(1)) action indices behind each record.
  std::vector<std::array<int, 2>> action_pairs;
  // Single context over all four actions.
  PolicyProblem problem;
  RewardParams theta_star;
};

// t comparisons between two independent draws from the behavior
// distribution, labeled by a beta = 1 teacher.
GreedyTrap GenGreedyTrap(int t, std::uint64_t seed, double c_theta = 2.0);

}  // namespace dual_reward

#endif  // DUAL_REWARD_SIM_ENV_H_
