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

#include "dual_reward/metrics.h"

#include <cmath>

#include "dual_reward/errors.h"

namespace dual_reward {

double ComputeGv(std::span<const Eigen::VectorXd> estimates) {
  if (estimates.size() < 2) {
    throw InvalidArgumentError("generalized variance needs >= 2 estimates");
  }
  const Eigen::Index d = estimates.front().size();
  Eigen::MatrixXd data(static_cast<Eigen::Index>(estimates.size()), d);
  for (size_t r = 0; r < estimates.size(); ++r) {
    if (estimates[r].size() != d) {
      throw InvalidArgumentError("estimates have mixed dimensions");
    }
    data.row(static_cast<Eigen::Index>(r)) = estimates[r].transpose();
  }
  const Eigen::MatrixXd centered = data.rowwise() - data.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered /
                              static_cast<double>(estimates.size() - 1);
  return std::max(0.0, cov.determinant());
}

double ComputeMse(std::span<const Eigen::VectorXd> estimates,
                  const Eigen::VectorXd& theta_star) {
  if (estimates.empty()) return 0.0;
  double total = 0.0;
  for (const Eigen::VectorXd& e : estimates) total += (e - theta_star).norm();
  return total / static_cast<double>(estimates.size());
}

MeanStdErr Summarize(std::span<const double> values) {
  MeanStdErr out;
  const double n = static_cast<double>(values.size());
  if (values.empty()) return out;
  for (double v : values) out.mean += v;
  out.mean /= n;
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return out;
}

double LogLogSlope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgumentError("slope needs >= 2 paired points");
  }
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw InvalidArgumentError("slope needs distinct x values");
  return sxy / sxx;
}

}  // namespace dual_reward
