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

#include "dual_reward/preference_models.h"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "dual_reward/errors.h"

namespace dual_reward {

RewardParams::RewardParams(Eigen::VectorXd theta_in, double bound)
    : theta(std::move(theta_in)), bound_c_theta(bound) {
  if (theta.size() < 1) throw InvalidArgumentError("theta must have d >= 1");
  if (!(bound > 0)) throw InvalidArgumentError("C_theta must be positive");
  // Slack for iterates projected onto the sphere.
  if (!(theta.norm() <= bound * (1.0 + 1e-9))) {
    throw InvalidArgumentError("||theta|| exceeds C_theta");
  }
}

TeacherPool::TeacherPool(Eigen::MatrixXd betas, double bound_c_beta)
    : betas_(std::move(betas)), bound_c_beta_(bound_c_beta) {
  if (betas_.rows() < 1 || betas_.cols() < 1) {
    throw InvalidArgumentError("teacher pool needs m >= 1 and g >= 1");
  }
  for (Eigen::Index j = 0; j < betas_.rows(); ++j) {
    for (Eigen::Index k = 0; k < betas_.cols(); ++k) {
      const double b = betas_(j, k);
      if (!(b >= 0.0) || !(b < bound_c_beta_)) {
        throw InvalidArgumentError("rationality out of [0, C_beta): " +
                                   std::to_string(b));
      }
    }
  }
}

double Sigmoid(double w) {
  constexpr double kLow = std::numeric_limits<double>::denorm_min();
  const double kHigh = std::nextafter(1.0, 0.0);
  double p;
  if (w >= 0) {
    p = 1.0 / (1.0 + std::exp(-w));
  } else {
    const double e = std::exp(w);
    p = e / (1.0 + e);
  }
  if (p <= 0.0) return kLow;
  if (p >= 1.0) return kHigh;
  return p;
}

double SigmoidDeriv(double w) {
  // mu(w) * mu(-w); both factors are computed from the stable branch.
  const double a = std::abs(w);
  const double e = std::exp(-a);
  const double d = e / ((1.0 + e) * (1.0 + e));
  return d > 0.0 ? d : std::numeric_limits<double>::denorm_min();
}

double LogSigmoid(double w) {
  if (w >= 0) return -std::log1p(std::exp(-w));
  return w - std::log1p(std::exp(w));
}

double PreferenceProb(const RewardParams& theta, const FeatureDiff& z,
                      double beta) {
  return Sigmoid(beta * theta.theta.dot(z.z));
}

int SamplePreference(const RewardParams& theta, const FeatureDiff& z,
                     double beta, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  return unif(rng) < PreferenceProb(theta, z, beta) ? 1 : 0;
}

int SamplePreference(const RewardParams& theta, const FeatureDiff& z,
                     double beta, std::uint64_t seed) {
  Rng rng(seed);
  return SamplePreference(theta, z, beta, rng);
}

double LogLikelihood(const RewardParams& theta,
                     std::span<const PreferenceRecord> records) {
  if (records.empty()) throw NoDataError();
  double total = 0.0;
  for (const PreferenceRecord& r : records) {
    const double w = r.beta * theta.theta.dot(r.z.z);
    total += r.y == 1 ? LogSigmoid(w) : LogSigmoid(-w);
  }
  return total / static_cast<double>(records.size());
}

}  // namespace dual_reward
