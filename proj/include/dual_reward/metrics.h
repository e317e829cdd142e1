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

// Estimator-quality metrics over replicated runs.

#ifndef DUAL_REWARD_METRICS_H_
#define DUAL_REWARD_METRICS_H_

#include <span>

#include <Eigen/Dense>

namespace dual_reward {

// Generalized variance: determinant of the unbiased (divisor R - 1)
// empirical covariance of the estimates. Throws InvalidArgumentError with
// fewer than two estimates or mixed dimensions.
double ComputeGv(std::span<const Eigen::VectorXd> estimates);

// Mean over estimates of ||theta_hat - theta_star||_2. Zero for no input.
double ComputeMse(std::span<const Eigen::VectorXd> estimates,
                  const Eigen::VectorXd& theta_star);

struct MeanStdErr {
  double mean = 0.0;
  double std_error = 0.0;
};

// Sample mean and standard error (sample sd / sqrt(n)); std_error is 0 for
// n < 2.
MeanStdErr Summarize(std::span<const double> values);

// Least-squares slope of log(y) against log(x).
double LogLogSlope(std::span<const double> x, std::span<const double> y);

}  // namespace dual_reward

#endif  // DUAL_REWARD_METRICS_H_
