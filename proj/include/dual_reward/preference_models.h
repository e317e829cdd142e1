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

// Linear reward model and the Bradley-Terry-Luce teacher preference models.
//
// A teacher with rationality beta prefers a^(1) over a^(0) with probability
// sigmoid(beta * theta' z), where z = phi(x, a^(1)) - phi(x, a^(0)). A fixed
// beta = 1 gives the classical BTL model; a per-teacher beta gives
// heterogeneous teachers; a per-teacher, per-category beta gives the
// context-dependent model used throughout this library.

#ifndef DUAL_REWARD_PREFERENCE_MODELS_H_
#define DUAL_REWARD_PREFERENCE_MODELS_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dual_reward/random.h"

namespace dual_reward {

// Reward parameters theta with the norm cap C_theta of the parameter set.
struct RewardParams {
  Eigen::VectorXd theta;
  double bound_c_theta = 2.0;

  RewardParams() = default;
  RewardParams(Eigen::VectorXd theta_in, double bound);

  int dim() const { return static_cast<int>(theta.size()); }
  // Reward of a single feature vector, theta' phi.
  double Reward(const Eigen::VectorXd& phi) const { return theta.dot(phi); }
};

// Feature difference of one conversation (x, a^(0), a^(1)). `category` is the
// 0-based context type used to look up a teacher's rationality.
struct FeatureDiff {
  Eigen::VectorXd z;
  int category = 0;
  std::int64_t source_id = 0;
};

// m x g rationality matrix: betas(j, k) is teacher j on category k.
class TeacherPool {
 public:
  TeacherPool() = default;
  // Throws InvalidArgumentError unless 0 <= beta < bound_c_beta everywhere
  // and the matrix is non-empty.
  TeacherPool(Eigen::MatrixXd betas, double bound_c_beta);

  int num_teachers() const { return static_cast<int>(betas_.rows()); }
  int num_categories() const { return static_cast<int>(betas_.cols()); }
  double beta(int teacher, int category) const {
    return betas_(teacher, category);
  }
  const Eigen::MatrixXd& betas() const { return betas_; }
  double bound_c_beta() const { return bound_c_beta_; }

 private:
  Eigen::MatrixXd betas_;
  double bound_c_beta_ = 3.0;
};

// One labeled comparison. y = 1 means a^(1) was preferred.
struct PreferenceRecord {
  FeatureDiff z;
  double beta = 1.0;
  int teacher_id = 0;
  int y = 0;
};

// 1 / (1 + exp(-w)), clamped into the open interval (0, 1).
double Sigmoid(double w);

// Sigmoid(w) * (1 - Sigmoid(w)), computed without cancellation in the tails.
double SigmoidDeriv(double w);

// log Sigmoid(w) in a form that never evaluates log(0) for finite w.
double LogSigmoid(double w);

double PreferenceProb(const RewardParams& theta, const FeatureDiff& z,
                      double beta);

// Draws one label; deterministic in `seed`.
int SamplePreference(const RewardParams& theta, const FeatureDiff& z,
                     double beta, std::uint64_t seed);

// Same draw from a caller-owned stream.
int SamplePreference(const RewardParams& theta, const FeatureDiff& z,
                     double beta, Rng& rng);

// Average log-likelihood (1/T) sum_t log P(y_t | z_t, beta_t, theta).
// Throws NoDataError on an empty record list.
double LogLikelihood(const RewardParams& theta,
                     std::span<const PreferenceRecord> records);

}  // namespace dual_reward

#endif  // DUAL_REWARD_PREFERENCE_MODELS_H_
