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

// Brute-force reference computations and the randomized suites that compare
// the library against them. Shared by `dual-reward selftest` and the
// acceptance binary.

#ifndef DUAL_REWARD_ORACLES_H_
#define DUAL_REWARD_ORACLES_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dual_reward/dual_selector.h"
#include "dual_reward/preference_models.h"
#include "dual_reward/reward_mle.h"

namespace dual_reward {

// det(h + w z z') / det(h) - 1 from two LU factorizations.
double FullDeterminantGain(const Eigen::MatrixXd& h, const Eigen::VectorXd& z,
                           double weight);

// Every (candidate, teacher) pair of the current state with its gain; the
// candidates excluded by `policy` are skipped.
struct ScoredPair {
  int candidate = 0;
  int teacher = 0;
  double gain = 0.0;
};
std::vector<ScoredPair> EnumeratePairs(const DesignState& state,
                                       const SelectorPolicy& policy);

// Central differences of LogLikelihood.
Eigen::VectorXd FiniteDifferenceScore(const RewardParams& theta,
                                      std::span<const PreferenceRecord> records,
                                      double step = 1e-5);

// Best point of a square grid of the given resolution clipped to the disk
// ||theta|| <= bound. d = 2 only.
Eigen::VectorXd GridSearchMle(std::span<const PreferenceRecord> records,
                              double bound, double resolution = 0.01);

// sum_t w_t z_t z_t' + ridge I by direct summation.
Eigen::MatrixXd DirectInfoMatrix(const RewardParams& theta,
                                 std::span<const PreferenceRecord> records,
                                 double ridge);

struct OracleCheck {
  std::string name;
  int instances = 0;
  int failures = 0;
  // Largest observed discrepancy in the check's own units.
  double worst = 0.0;

  bool passed() const { return instances > 0 && failures == 0; }
};

// Rank-one gain against full factorization, relative tolerance.
OracleCheck CheckDeterminantIdentity(int instances, std::uint64_t seed,
                                     double tol = 1e-10);
// Dual selection against exhaustive argmax (ties within 1e-12 relative).
OracleCheck CheckSelectionArgmax(int instances, std::uint64_t seed);
// Score against finite differences, per-coordinate absolute tolerance.
OracleCheck CheckScoreFiniteDiff(int instances, std::uint64_t seed,
                                 double tol = 1e-6);
// FitMle against grid search on the disk, L-infinity tolerance.
OracleCheck CheckGridMle(int instances, std::uint64_t seed,
                         double tol = 0.02);
// BuildInfoMatrix and its cached inverse and log-determinant against direct
// computation.
OracleCheck CheckInfoMatrix(int instances, std::uint64_t seed,
                            double tol = 1e-9);

// Two teachers with beta 0.5 and 3.0 and a conversation with theta_hat' z =
// 2: the gentler teacher is more informative.
struct RationalityWitness {
  double gain_low_beta = 0.0;
  double gain_high_beta = 0.0;
  // Teacher chosen by exhaustive enumeration and by SelectNext.
  int enumerated_teacher = -1;
  int selected_teacher = -1;
  // argmax of the gain over a beta grid on [0, 3].
  double best_beta_on_grid = 0.0;

  bool holds() const {
    return gain_low_beta > gain_high_beta && enumerated_teacher == 0 &&
           selected_teacher == 0;
  }
};
RationalityWitness FindRationalityWitness();

}  // namespace dual_reward

#endif  // DUAL_REWARD_ORACLES_H_
