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

// Policy learning from an estimated reward: the plug-in greedy policy, the
// pessimistic policy that maximizes the worst-case value over the confidence
// ellipsoid, and sub-optimality against the true parameter.
//
// A policy is a deterministic choice of one candidate action per context.
// For the averaged feature v of a policy the pessimistic value is
//   J_hat = theta_hat' v - gamma * sqrt(v' Hbar^{-1} v),   Hbar = H / T.

#ifndef DUAL_REWARD_PESSIMISTIC_POLICY_H_
#define DUAL_REWARD_PESSIMISTIC_POLICY_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dual_reward/preference_models.h"
#include "dual_reward/reward_mle.h"

namespace dual_reward {

// contexts[i] holds one row phi(x_i, a) per candidate action.
struct PolicyProblem {
  std::vector<Eigen::MatrixXd> contexts;
  Eigen::VectorXd weights;

  // Uniform weights over the given contexts.
  static PolicyProblem Uniform(std::vector<Eigen::MatrixXd> contexts);

  int dim() const;
  int num_contexts() const { return static_cast<int>(contexts.size()); }
  // Throws InvalidArgumentError on empty action lists, inconsistent
  // dimensions, or weights that do not sum to one within 1e-12.
  void Validate() const;
};

struct PolicyAssignment {
  std::vector<int> chosen;
};

enum class PessimismMode {
  // Maximizes the coupled objective over all joint assignments.
  kJoint,
  // Maximizes theta' phi - gamma ||phi||_{Hbar^{-1}} context by context.
  kPerContext,
};

std::string_view PessimismModeName(PessimismMode mode);
PessimismMode ParsePessimismMode(std::string_view name);

// Joint mode enumerates every assignment up to this many.
inline constexpr std::int64_t kJointEnumerationLimit = 4096;
inline constexpr int kJointRandomRestarts = 8;

// Weighted mean feature sum_i w_i phi(x_i, pi(x_i)).
Eigen::VectorXd MeanFeature(const PolicyAssignment& pi,
                            const PolicyProblem& prob);

// theta' v for the policy's mean feature v.
double PolicyValue(const PolicyAssignment& pi, const PolicyProblem& prob,
                   const Eigen::VectorXd& theta);

// Throws SingularMatrixError when gamma > 0 and the information is singular.
double PessimisticValue(const PolicyAssignment& pi, const PolicyProblem& prob,
                        const RewardParams& theta_hat, const InfoMatrix& info,
                        double gamma);

PolicyAssignment SolvePessimistic(const PolicyProblem& prob,
                                  const RewardParams& theta_hat,
                                  const InfoMatrix& info, double gamma,
                                  PessimismMode mode, std::uint64_t seed = 0);

// Per-context argmax of theta' phi, ties to the lowest index.
PolicyAssignment GreedyPolicy(const PolicyProblem& prob,
                              const RewardParams& theta);

// J(pi*) - J(pi) under theta_star, where pi* is the greedy policy of
// theta_star.
double Suboptimality(const PolicyAssignment& pi, const PolicyProblem& prob,
                     const RewardParams& theta_star);

// Summed per-step feature difference of two trajectories (rows are steps).
// Lengths may differ; widths must match. Throws InvalidArgumentError on
// empty trajectories or a width mismatch.
FeatureDiff TrajectoryFeatureDiff(const Eigen::MatrixXd& traj0,
                                  const Eigen::MatrixXd& traj1,
                                  int category = 0,
                                  std::int64_t source_id = 0);

}  // namespace dual_reward

#endif  // DUAL_REWARD_PESSIMISTIC_POLICY_H_
