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

// Maximum-likelihood estimation of the reward parameters, sample Fisher
// information matrices, and the confidence radius used for pessimism.

#ifndef DUAL_REWARD_REWARD_MLE_H_
#define DUAL_REWARD_REWARD_MLE_H_

#include <optional>
#include <span>

#include <Eigen/Dense>

#include "dual_reward/preference_models.h"

namespace dual_reward {

// Sample information matrix
//   h = sum_t mu'(beta_t theta' z_t) beta_t^2 z_t z_t' + ridge * I
// together with its cached inverse and log-determinant. The ridge is part of
// `h`, so log_det() is log det(h) and the inverse is h^{-1}.
//
// Accumulate() keeps the inverse current with a Sherman-Morrison update and
// refactorizes from scratch every kRefactorInterval updates.
class InfoMatrix {
 public:
  static constexpr int kRefactorInterval = 100;

  InfoMatrix() = default;
  // h = ridge * I with zero records.
  InfoMatrix(int dim, double ridge);
  // Takes an already summed information matrix (without the ridge).
  InfoMatrix(const Eigen::MatrixXd& sum, double ridge, int count);

  // h += weight * z z'. `weight` must be nonnegative.
  void Accumulate(const Eigen::VectorXd& z, double weight);

  // z' h^{-1} z. Throws SingularMatrixError if h is singular.
  double QuadForm(const Eigen::VectorXd& z) const;

  // Inverse of the normalized matrix h / count. Throws SingularMatrixError
  // if h is singular and NoDataError if there are no records.
  Eigen::MatrixXd NormalizedInverse() const;

  int dim() const { return static_cast<int>(h_.rows()); }
  const Eigen::MatrixXd& h() const { return h_; }
  const Eigen::MatrixXd& h_inv() const { return h_inv_; }
  bool valid() const { return valid_; }
  double log_det() const { return log_det_; }
  int count() const { return count_; }
  double ridge() const { return ridge_; }

  // Recomputes the factorization, inverse, and log-determinant from h.
  void Refactorize();

 private:
  Eigen::MatrixXd h_;
  Eigen::MatrixXd h_inv_;
  double log_det_ = 0.0;
  int count_ = 0;
  double ridge_ = 0.0;
  bool valid_ = false;
  int updates_since_refactor_ = 0;
};

// Constants of the confidence radius gamma(T, d, delta).
struct ConfidenceSpec {
  double c1 = 1.0;
  double c2 = 1.0;
  double delta = 0.1;

  // Throws InvalidArgumentError unless c1, c2 > 0 and delta in (0, 1).
  void Validate() const;
};

struct MleOptions {
  double tol = 1e-8;
  int max_iter = 200;
  std::optional<Eigen::VectorXd> init;
};

struct MleResult {
  RewardParams params;
  bool converged = false;
  int iterations = 0;
  double log_likelihood = 0.0;
};

// Constrained MLE over the ball ||theta|| <= bound_c_theta.
//
// Each iteration solves the local quadratic model of the log-likelihood on
// the ball exactly (a trust-region style subproblem in the Hessian
// eigenbasis) and backtracks along the resulting direction with an Armijo
// test. Eigen-directions whose curvature is below 1e-12 of the largest take
// a gradient step instead of a Newton step. Converged means the score (or,
// on the boundary, its tangential part) is below `tol` in max-norm.
//
// Throws NoDataError on empty input.
MleResult FitMle(std::span<const PreferenceRecord> records,
                 double bound_c_theta, const MleOptions& options = {});

// Gradient of LogLikelihood with respect to theta.
Eigen::VectorXd Score(const RewardParams& theta,
                      std::span<const PreferenceRecord> records);

// Negative Hessian of LogLikelihood (the normalized information matrix).
Eigen::MatrixXd NegativeHessian(const RewardParams& theta,
                                std::span<const PreferenceRecord> records);

// Unnormalized information matrix of `records` evaluated at `theta`.
InfoMatrix BuildInfoMatrix(const RewardParams& theta,
                           std::span<const PreferenceRecord> records,
                           double ridge);

// Information weight mu'(beta theta' z) beta^2 of one comparison.
double InfoWeight(const Eigen::VectorXd& theta, const Eigen::VectorXd& z,
                  double beta);

// Relative determinant gain g of adding one comparison:
//   det(h + w z z') = det(h) (1 + g),  g = w z' h^{-1} z,
// with w = InfoWeight(theta, z, beta).
double RankOneDetGain(const InfoMatrix& info, const FeatureDiff& z,
                      double beta, const RewardParams& theta);

// gamma = sqrt(c1 / t * (d log(e + c2 t / d) + log(2 / delta))).
double ConfidenceRadius(const ConfidenceSpec& spec, int t, int d);

}  // namespace dual_reward

#endif  // DUAL_REWARD_REWARD_MLE_H_
