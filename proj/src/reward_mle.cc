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

#include "dual_reward/reward_mle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dual_reward/errors.h"

namespace dual_reward {

InfoMatrix::InfoMatrix(int dim, double ridge)
    : InfoMatrix(Eigen::MatrixXd::Zero(dim, dim), ridge, 0) {}

InfoMatrix::InfoMatrix(const Eigen::MatrixXd& sum, double ridge, int count)
    : h_(sum), count_(count), ridge_(ridge) {
  if (ridge < 0) throw InvalidArgumentError("ridge must be nonnegative");
  if (sum.rows() != sum.cols()) {
    throw InvalidArgumentError("information matrix must be square");
  }
  h_.diagonal().array() += ridge;
  Refactorize();
}

void InfoMatrix::Refactorize() {
  h_ = 0.5 * (h_ + h_.transpose());
  const int d = dim();
  Eigen::LLT<Eigen::MatrixXd> llt(h_);
  valid_ = d > 0 && llt.info() == Eigen::Success &&
           llt.matrixLLT().diagonal().minCoeff() > 0.0;
  if (valid_) {
    log_det_ = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    h_inv_ = llt.solve(Eigen::MatrixXd::Identity(d, d));
    h_inv_ = 0.5 * (h_inv_ + h_inv_.transpose());
  } else {
    log_det_ = -std::numeric_limits<double>::infinity();
    h_inv_.resize(0, 0);
  }
  updates_since_refactor_ = 0;
}

void InfoMatrix::Accumulate(const Eigen::VectorXd& z, double weight) {
  if (!(weight >= 0)) throw InvalidArgumentError("negative information weight");
  ++count_;
  if (weight == 0.0) return;
  h_.noalias() += weight * z * z.transpose();
  if (!valid_ || ++updates_since_refactor_ >= kRefactorInterval) {
    Refactorize();
    return;
  }
  const Eigen::VectorXd u = h_inv_ * z;
  const double g = weight * z.dot(u);
  h_inv_.noalias() -= (weight / (1.0 + g)) * u * u.transpose();
  log_det_ += std::log1p(g);
}

double InfoMatrix::QuadForm(const Eigen::VectorXd& z) const {
  if (!valid_) throw SingularMatrixError();
  return z.dot(h_inv_ * z);
}

Eigen::MatrixXd InfoMatrix::NormalizedInverse() const {
  if (count_ < 1) throw NoDataError();
  if (!valid_) throw SingularMatrixError();
  return static_cast<double>(count_) * h_inv_;
}

void ConfidenceSpec::Validate() const {
  if (!(c1 > 0) || !(c2 > 0)) {
    throw InvalidArgumentError("confidence constants must be positive");
  }
  if (!(delta > 0 && delta < 1)) {
    throw InvalidArgumentError("delta must lie in (0, 1)");
  }
}

double InfoWeight(const Eigen::VectorXd& theta, const Eigen::VectorXd& z,
                  double beta) {
  if (beta == 0.0) return 0.0;
  return SigmoidDeriv(beta * theta.dot(z)) * beta * beta;
}

Eigen::VectorXd Score(const RewardParams& theta,
                      std::span<const PreferenceRecord> records) {
  if (records.empty()) throw NoDataError();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(theta.dim());
  for (const PreferenceRecord& r : records) {
    if (r.beta == 0.0) continue;
    const double p = Sigmoid(r.beta * theta.theta.dot(r.z.z));
    g += ((r.y - p) * r.beta) * r.z.z;
  }
  return g / static_cast<double>(records.size());
}

Eigen::MatrixXd NegativeHessian(const RewardParams& theta,
                                std::span<const PreferenceRecord> records) {
  if (records.empty()) throw NoDataError();
  const int d = theta.dim();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  for (const PreferenceRecord& r : records) {
    const double w = InfoWeight(theta.theta, r.z.z, r.beta);
    if (w > 0.0) a.selfadjointView<Eigen::Lower>().rankUpdate(r.z.z, w);
  }
  a.triangularView<Eigen::StrictlyUpper>() = a.transpose();
  return a / static_cast<double>(records.size());
}

InfoMatrix BuildInfoMatrix(const RewardParams& theta,
                           std::span<const PreferenceRecord> records,
                           double ridge) {
  const int d = theta.dim();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(d, d);
  for (const PreferenceRecord& r : records) {
    const double w = InfoWeight(theta.theta, r.z.z, r.beta);
    if (w > 0.0) sum.selfadjointView<Eigen::Lower>().rankUpdate(r.z.z, w);
  }
  sum.triangularView<Eigen::StrictlyUpper>() = sum.transpose();
  return InfoMatrix(sum, ridge, static_cast<int>(records.size()));
}

double RankOneDetGain(const InfoMatrix& info, const FeatureDiff& z,
                      double beta, const RewardParams& theta) {
  if (!info.valid()) throw SingularMatrixError();
  const double w = InfoWeight(theta.theta, z.z, beta);
  if (w == 0.0) return 0.0;
  return std::max(0.0, w * info.QuadForm(z.z));
}

double ConfidenceRadius(const ConfidenceSpec& spec, int t, int d) {
  spec.Validate();
  if (t < 1 || d < 1) throw InvalidArgumentError("need t >= 1 and d >= 1");
  const double td = static_cast<double>(t);
  const double dd = static_cast<double>(d);
  const double inner = dd * std::log(std::numbers::e + spec.c2 * td / dd) +
                       std::log(2.0 / spec.delta);
  return std::sqrt(spec.c1 / td * inner);
}

namespace {

Eigen::VectorXd ProjectToBall(const Eigen::VectorXd& theta, double radius) {
  const double norm = theta.norm();
  if (norm <= radius) return theta;
  return theta * (radius / norm);
}

// Max-norm of the score, or of its tangential part when the radial component
// points out of the ball at a boundary point.
double StationarityMeasure(const Eigen::VectorXd& theta,
                           const Eigen::VectorXd& grad, double radius) {
  const double norm = theta.norm();
  if (norm < radius * (1.0 - 1e-9) || norm == 0.0) {
    return grad.lpNorm<Eigen::Infinity>();
  }
  const Eigen::VectorXd u = theta / norm;
  const double radial = grad.dot(u);
  if (radial <= 0.0) return grad.lpNorm<Eigen::Infinity>();
  return (grad - radial * u).lpNorm<Eigen::Infinity>();
}

// Maximizer of g's - 0.5 s'As over s with ||theta0 + s|| <= radius, with
// near-zero curvatures replaced by the largest one.
Eigen::VectorXd BallModelTarget(const Eigen::VectorXd& theta0,
                                const Eigen::VectorXd& grad,
                                const Eigen::MatrixXd& neg_hessian,
                                double radius) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(neg_hessian);
  Eigen::VectorXd lambda = eig.eigenvalues();
  const Eigen::MatrixXd& q = eig.eigenvectors();
  const double lambda_max = std::max(lambda.maxCoeff(), 0.0);
  const double floor = 1e-12 * lambda_max;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (!(lambda(i) > floor)) lambda(i) = lambda_max > 0.0 ? lambda_max : 1.0;
  }
  const Eigen::VectorXd t0 = q.transpose() * theta0;
  const Eigen::VectorXd g = q.transpose() * grad;
  const Eigen::VectorXd b = lambda.cwiseProduct(t0) + g;
  auto target = [&](double shift) {
    return Eigen::VectorXd(b.array() / (lambda.array() + shift));
  };
  Eigen::VectorXd t = target(0.0);
  if (t.norm() > radius) {
    double lo = 0.0;
    double hi = b.norm() / radius;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (target(mid).norm() > radius) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    t = target(hi);
  }
  return ProjectToBall(q * t, radius);
}

}  // namespace

MleResult FitMle(std::span<const PreferenceRecord> records,
                 double bound_c_theta, const MleOptions& options) {
  if (records.empty()) throw NoDataError();
  if (!(options.tol > 0)) throw InvalidArgumentError("tol must be positive");
  const int d = static_cast<int>(records.front().z.z.size());
  Eigen::VectorXd start = options.init.value_or(Eigen::VectorXd::Zero(d));
  if (start.size() != d) throw InvalidArgumentError("init dimension mismatch");
  RewardParams current(ProjectToBall(start, bound_c_theta), bound_c_theta);

  MleResult result;
  double ll = LogLikelihood(current, records);
  for (int iter = 0; iter < options.max_iter; ++iter) {
    const Eigen::VectorXd grad = Score(current, records);
    if (StationarityMeasure(current.theta, grad, bound_c_theta) <=
        options.tol) {
      result.converged = true;
      break;
    }
    const Eigen::MatrixXd neg_hessian = NegativeHessian(current, records);
    const Eigen::VectorXd target =
        BallModelTarget(current.theta, grad, neg_hessian, bound_c_theta);
    const Eigen::VectorXd step = target - current.theta;
    const double slope = grad.dot(step);
    if (!(slope > 0.0)) break;  // no feasible ascent direction left
    const double slack =
        4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(ll));
    double alpha = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt, alpha *= 0.5) {
      RewardParams trial(current.theta + alpha * step, bound_c_theta);
      const double trial_ll = LogLikelihood(trial, records);
      if (trial_ll >= ll + 1e-4 * alpha * slope - slack) {
        current = std::move(trial);
        ll = trial_ll;
        accepted = true;
        break;
      }
    }
    result.iterations = iter + 1;
    if (!accepted) break;
  }
  if (!result.converged) {
    result.converged = StationarityMeasure(current.theta,
                                           Score(current, records),
                                           bound_c_theta) <= options.tol;
  }
  result.params = std::move(current);
  result.log_likelihood = ll;
  return result;
}

}  // namespace dual_reward
