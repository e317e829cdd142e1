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

#include "dual_reward/pessimistic_policy.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "dual_reward/errors.h"
#include "dual_reward/random.h"

namespace dual_reward {
namespace {

// Objective over mean features; `penalty` is Hbar^{-1} (unused if gamma=0).
class PessimisticObjective {
 public:
  PessimisticObjective(const Eigen::VectorXd& theta, double gamma,
                       Eigen::MatrixXd penalty)
      : theta_(theta), gamma_(gamma), penalty_(std::move(penalty)) {}

  double operator()(const Eigen::VectorXd& v) const {
    double value = theta_.dot(v);
    if (gamma_ > 0.0) {
      value -= gamma_ * std::sqrt(std::max(0.0, v.dot(penalty_ * v)));
    }
    return value;
  }

 private:
  const Eigen::VectorXd& theta_;
  double gamma_;
  Eigen::MatrixXd penalty_;
};

PessimisticObjective MakeObjective(const RewardParams& theta_hat,
                                   const InfoMatrix& info, double gamma) {
  if (!(gamma >= 0)) throw InvalidArgumentError("gamma must be >= 0");
  Eigen::MatrixXd penalty;
  if (gamma > 0.0) penalty = info.NormalizedInverse();
  return PessimisticObjective(theta_hat.theta, gamma, std::move(penalty));
}

PolicyAssignment SolvePerContext(const PolicyProblem& prob,
                                 const PessimisticObjective& objective) {
  PolicyAssignment pi;
  pi.chosen.resize(prob.contexts.size());
  for (size_t i = 0; i < prob.contexts.size(); ++i) {
    const Eigen::MatrixXd& actions = prob.contexts[i];
    double best = -std::numeric_limits<double>::infinity();
    for (Eigen::Index a = 0; a < actions.rows(); ++a) {
      const double value = objective(actions.row(a).transpose());
      if (value > best) {
        best = value;
        pi.chosen[i] = static_cast<int>(a);
      }
    }
  }
  return pi;
}

PolicyAssignment EnumerateJoint(const PolicyProblem& prob,
                                const PessimisticObjective& objective) {
  const int n = prob.num_contexts();
  PolicyAssignment current;
  current.chosen.assign(n, 0);
  PolicyAssignment best = current;
  double best_value = objective(MeanFeature(current, prob));
  while (true) {
    int i = 0;
    while (i < n) {
      if (++current.chosen[i] < prob.contexts[i].rows()) break;
      current.chosen[i] = 0;
      ++i;
    }
    if (i == n) break;
    const double value = objective(MeanFeature(current, prob));
    if (value > best_value) {
      best_value = value;
      best = current;
    }
  }
  return best;
}

// Best-response sweeps until no single context can improve the objective.
double CoordinateAscent(const PolicyProblem& prob,
                        const PessimisticObjective& objective,
                        PolicyAssignment& pi) {
  Eigen::VectorXd v = MeanFeature(pi, prob);
  double value = objective(v);
  for (int sweep = 0; sweep < 1000; ++sweep) {
    bool changed = false;
    for (int i = 0; i < prob.num_contexts(); ++i) {
      const Eigen::MatrixXd& actions = prob.contexts[i];
      const Eigen::VectorXd base =
          v - prob.weights(i) * actions.row(pi.chosen[i]).transpose();
      for (Eigen::Index a = 0; a < actions.rows(); ++a) {
        if (a == pi.chosen[i]) continue;
        const Eigen::VectorXd trial =
            base + prob.weights(i) * actions.row(a).transpose();
        const double trial_value = objective(trial);
        if (trial_value > value + 1e-15 * (1.0 + std::abs(value))) {
          value = trial_value;
          v = trial;
          pi.chosen[i] = static_cast<int>(a);
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return value;
}

PolicyAssignment SolveJoint(const PolicyProblem& prob,
                            const PessimisticObjective& objective,
                            std::uint64_t seed) {
  double combos = 1.0;
  for (const Eigen::MatrixXd& actions : prob.contexts) {
    combos *= static_cast<double>(actions.rows());
  }
  if (combos <= static_cast<double>(kJointEnumerationLimit)) {
    return EnumerateJoint(prob, objective);
  }
  PolicyAssignment best = SolvePerContext(prob, objective);
  double best_value = CoordinateAscent(prob, objective, best);
  Rng rng = MakeRng(seed, Stream::kPolicy);
  for (int r = 0; r < kJointRandomRestarts; ++r) {
    PolicyAssignment start;
    start.chosen.resize(prob.contexts.size());
    for (size_t i = 0; i < prob.contexts.size(); ++i) {
      start.chosen[i] = std::uniform_int_distribution<int>(
          0, static_cast<int>(prob.contexts[i].rows()) - 1)(rng);
    }
    const double value = CoordinateAscent(prob, objective, start);
    if (value > best_value) {
      best_value = value;
      best = std::move(start);
    }
  }
  return best;
}

}  // namespace

PolicyProblem PolicyProblem::Uniform(std::vector<Eigen::MatrixXd> contexts) {
  PolicyProblem prob;
  const auto n = static_cast<Eigen::Index>(contexts.size());
  prob.contexts = std::move(contexts);
  prob.weights = Eigen::VectorXd::Constant(n, n > 0 ? 1.0 / n : 0.0);
  return prob;
}

int PolicyProblem::dim() const {
  return contexts.empty() ? 0 : static_cast<int>(contexts.front().cols());
}

void PolicyProblem::Validate() const {
  if (contexts.empty()) throw InvalidArgumentError("no contexts");
  if (weights.size() != static_cast<Eigen::Index>(contexts.size())) {
    throw InvalidArgumentError("one weight per context required");
  }
  if (std::abs(weights.sum() - 1.0) > 1e-12 || weights.minCoeff() < 0.0) {
    throw InvalidArgumentError("context weights must form a distribution");
  }
  const int d = dim();
  for (const Eigen::MatrixXd& actions : contexts) {
    if (actions.rows() < 1) throw InvalidArgumentError("empty action list");
    if (actions.cols() != d) {
      throw InvalidArgumentError("inconsistent feature dimension");
    }
  }
}

std::string_view PessimismModeName(PessimismMode mode) {
  return mode == PessimismMode::kJoint ? "joint" : "per_context";
}

PessimismMode ParsePessimismMode(std::string_view name) {
  if (name == "joint") return PessimismMode::kJoint;
  if (name == "per_context") return PessimismMode::kPerContext;
  throw InvalidArgumentError("unknown pessimism mode: " + std::string(name));
}

Eigen::VectorXd MeanFeature(const PolicyAssignment& pi,
                            const PolicyProblem& prob) {
  if (pi.chosen.size() != prob.contexts.size()) {
    throw InvalidArgumentError("policy does not match problem");
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(prob.dim());
  for (size_t i = 0; i < prob.contexts.size(); ++i) {
    const int a = pi.chosen[i];
    if (a < 0 || a >= prob.contexts[i].rows()) {
      throw InvalidArgumentError("action index out of range");
    }
    v += prob.weights(static_cast<Eigen::Index>(i)) *
         prob.contexts[i].row(a).transpose();
  }
  return v;
}

double PolicyValue(const PolicyAssignment& pi, const PolicyProblem& prob,
                   const Eigen::VectorXd& theta) {
  return theta.dot(MeanFeature(pi, prob));
}

double PessimisticValue(const PolicyAssignment& pi, const PolicyProblem& prob,
                        const RewardParams& theta_hat, const InfoMatrix& info,
                        double gamma) {
  return MakeObjective(theta_hat, info, gamma)(MeanFeature(pi, prob));
}

PolicyAssignment SolvePessimistic(const PolicyProblem& prob,
                                  const RewardParams& theta_hat,
                                  const InfoMatrix& info, double gamma,
                                  PessimismMode mode, std::uint64_t seed) {
  prob.Validate();
  const PessimisticObjective objective = MakeObjective(theta_hat, info, gamma);
  if (mode == PessimismMode::kPerContext) {
    return SolvePerContext(prob, objective);
  }
  return SolveJoint(prob, objective, seed);
}

PolicyAssignment GreedyPolicy(const PolicyProblem& prob,
                              const RewardParams& theta) {
  PolicyAssignment pi;
  pi.chosen.resize(prob.contexts.size());
  for (size_t i = 0; i < prob.contexts.size(); ++i) {
    const Eigen::VectorXd rewards = prob.contexts[i] * theta.theta;
    Eigen::Index best = 0;
    for (Eigen::Index a = 1; a < rewards.size(); ++a) {
      if (rewards(a) > rewards(best)) best = a;
    }
    pi.chosen[i] = static_cast<int>(best);
  }
  return pi;
}

double Suboptimality(const PolicyAssignment& pi, const PolicyProblem& prob,
                     const RewardParams& theta_star) {
  const PolicyAssignment optimal = GreedyPolicy(prob, theta_star);
  return PolicyValue(optimal, prob, theta_star.theta) -
         PolicyValue(pi, prob, theta_star.theta);
}

FeatureDiff TrajectoryFeatureDiff(const Eigen::MatrixXd& traj0,
                                  const Eigen::MatrixXd& traj1, int category,
                                  std::int64_t source_id) {
  if (traj0.rows() < 1 || traj1.rows() < 1) {
    throw InvalidArgumentError("empty trajectory");
  }
  if (traj0.cols() != traj1.cols()) {
    throw InvalidArgumentError("trajectory feature dimension mismatch");
  }
  FeatureDiff diff;
  diff.z = traj1.colwise().sum().transpose() - traj0.colwise().sum().transpose();
  diff.category = category;
  diff.source_id = source_id;
  return diff;
}

}  // namespace dual_reward
