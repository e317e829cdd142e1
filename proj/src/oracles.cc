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

#include "dual_reward/oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include "dual_reward/errors.h"

namespace dual_reward {
namespace {

Eigen::VectorXd UniformVector(int d, double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = u(rng);
  return v;
}

// Uniform direction scaled to a uniform radius in [0, radius].
Eigen::VectorXd InBall(int d, double radius, Rng& rng) {
  std::normal_distribution<double> n01;
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = n01(rng);
  return v.normalized() *
         std::uniform_real_distribution<double>(0.0, radius)(rng);
}

int UniformInt(int lo, int hi, Rng& rng) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::vector<PreferenceRecord> RandomRecords(const RewardParams& truth, int t,
                                            double beta_lo, double beta_hi,
                                            Rng& rng) {
  std::vector<PreferenceRecord> records;
  std::uniform_real_distribution<double> beta(beta_lo, beta_hi);
  for (int i = 0; i < t; ++i) {
    PreferenceRecord r;
    r.z.z = UniformVector(truth.dim(), -1.0, 1.0, rng);
    r.beta = beta(rng);
    r.y = SamplePreference(truth, r.z, r.beta, rng);
    records.push_back(std::move(r));
  }
  return records;
}

double Relative(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace

double FullDeterminantGain(const Eigen::MatrixXd& h, const Eigen::VectorXd& z,
                           double weight) {
  const Eigen::MatrixXd updated = h + weight * z * z.transpose();
  return updated.partialPivLu().determinant() / h.partialPivLu().determinant() -
         1.0;
}

std::vector<ScoredPair> EnumeratePairs(const DesignState& state,
                                       const SelectorPolicy& policy) {
  std::vector<ScoredPair> out;
  for (size_t i = 0; i < state.pool.size(); ++i) {
    if (policy.no_repeat && state.used[i]) continue;
    const FeatureDiff& z = state.pool[i];
    for (int j = 0; j < state.teachers.num_teachers(); ++j) {
      const double beta = state.teachers.beta(j, z.category);
      const double w = InfoWeight(state.theta_hat.theta, z.z, beta);
      // Direct solve instead of the cached inverse.
      const double quad = z.z.dot(state.info.h().ldlt().solve(z.z));
      out.push_back({static_cast<int>(i), j, w * quad});
    }
  }
  return out;
}

Eigen::VectorXd FiniteDifferenceScore(const RewardParams& theta,
                                      std::span<const PreferenceRecord> records,
                                      double step) {
  Eigen::VectorXd g(theta.dim());
  for (int i = 0; i < theta.dim(); ++i) {
    RewardParams plus = theta, minus = theta;
    plus.theta(i) += step;
    minus.theta(i) -= step;
    g(i) = (LogLikelihood(plus, records) - LogLikelihood(minus, records)) /
           (2.0 * step);
  }
  return g;
}

Eigen::VectorXd GridSearchMle(std::span<const PreferenceRecord> records,
                              double bound, double resolution) {
  if (records.empty()) throw NoDataError();
  if (records.front().z.z.size() != 2) {
    throw InvalidArgumentError("grid search supports d = 2 only");
  }
  const int steps = static_cast<int>(std::floor(bound / resolution));
  Eigen::MatrixXd z(2, static_cast<Eigen::Index>(records.size()));
  Eigen::VectorXd beta(z.cols());
  Eigen::VectorXd sign(z.cols());
  for (size_t t = 0; t < records.size(); ++t) {
    z.col(t) = records[t].z.z;
    beta(t) = records[t].beta;
    sign(t) = records[t].y == 1 ? 1.0 : -1.0;
  }
  double best = -std::numeric_limits<double>::infinity();
  Eigen::Vector2d best_theta = Eigen::Vector2d::Zero();
  for (int a = -steps; a <= steps; ++a) {
    for (int b = -steps; b <= steps; ++b) {
      const Eigen::Vector2d theta(a * resolution, b * resolution);
      if (theta.norm() > bound) continue;
      const Eigen::VectorXd w =
          (z.transpose() * theta).cwiseProduct(beta).cwiseProduct(sign);
      double ll = 0.0;
      for (Eigen::Index t = 0; t < w.size(); ++t) ll += LogSigmoid(w(t));
      if (ll > best) {
        best = ll;
        best_theta = theta;
      }
    }
  }
  return best_theta;
}

Eigen::MatrixXd DirectInfoMatrix(const RewardParams& theta,
                                 std::span<const PreferenceRecord> records,
                                 double ridge) {
  Eigen::MatrixXd h = ridge * Eigen::MatrixXd::Identity(theta.dim(), theta.dim());
  for (const PreferenceRecord& r : records) {
    const double s = Sigmoid(r.beta * theta.theta.dot(r.z.z));
    const double w = s * (1.0 - s) * r.beta * r.beta;
    for (int i = 0; i < theta.dim(); ++i) {
      for (int j = 0; j < theta.dim(); ++j) h(i, j) += w * r.z.z(i) * r.z.z(j);
    }
  }
  return h;
}

OracleCheck CheckDeterminantIdentity(int instances, std::uint64_t seed,
                                     double tol) {
  OracleCheck check{"determinant identity", instances, 0, 0.0};
  Rng rng = MakeRng(seed, Stream::kOracle);
  std::uniform_real_distribution<double> beta(0.0, 3.0);
  for (int n = 0; n < instances; ++n) {
    const int d = UniformInt(1, 8, rng);
    const double ridge = std::uniform_real_distribution<double>(0.01, 1.0)(rng);
    const RewardParams theta(InBall(d, 2.0, rng), 2.0);
    InfoMatrix info(d, ridge);
    const int k = UniformInt(0, 3 * d, rng);
    for (int i = 0; i < k; ++i) {
      const Eigen::VectorXd z = UniformVector(d, -1.0, 1.0, rng);
      info.Accumulate(z, InfoWeight(theta.theta, z, beta(rng)));
    }
    const FeatureDiff z{UniformVector(d, -1.0, 1.0, rng), 0, 0};
    const double b = beta(rng);
    const double g = RankOneDetGain(info, z, b, theta);
    const double full =
        FullDeterminantGain(info.h(), z.z, InfoWeight(theta.theta, z.z, b));
    const double err = Relative(1.0 + g, 1.0 + full);
    check.worst = std::max(check.worst, err);
    if (!(err <= tol)) ++check.failures;
  }
  return check;
}

OracleCheck CheckSelectionArgmax(int instances, std::uint64_t seed) {
  OracleCheck check{"brute-force selection", instances, 0, 0.0};
  Rng rng = MakeRng(seed, Stream::kOracle);
  for (int n = 0; n < instances; ++n) {
    const int d = UniformInt(2, 4, rng);
    const int candidates = UniformInt(2, 6, rng);
    const int teachers = UniformInt(1, 3, rng);
    const int categories = UniformInt(1, 2, rng);
    std::vector<FeatureDiff> pool;
    for (int i = 0; i < candidates; ++i) {
      pool.push_back({UniformVector(d, -1.0, 1.0, rng),
                      UniformInt(0, categories - 1, rng), i});
    }
    Eigen::MatrixXd betas(teachers, categories);
    for (int j = 0; j < teachers; ++j) {
      betas.row(j) = UniformVector(categories, 0.0, 2.9, rng).transpose();
    }
    // Duplicate teachers make exact ties.
    if (teachers > 1 && n % 4 == 0) betas.row(1) = betas.row(0);
    const RewardParams truth(InBall(d, 1.5, rng), 2.0);
    auto label_rng = std::make_shared<Rng>(MakeRng(seed + n, Stream::kOracle));
    const LabelOracle oracle = [truth, label_rng](const FeatureDiff& z, int,
                                                  double beta) {
      return SamplePreference(truth, z, beta, *label_rng);
    };
    SelectorPolicy policy;
    policy.t0 = UniformInt(1, 2 * d, rng);
    policy.no_repeat = n % 3 == 0 && candidates > policy.t0;
    DesignState state =
        Initialize(pool, TeacherPool(betas, 3.0), policy, oracle, seed + n,
                   DesignConfig{.ridge = 1e-3});
    if (policy.no_repeat && state.num_available() == 0) policy.no_repeat = false;
    const std::vector<ScoredPair> pairs = EnumeratePairs(state, policy);
    double best = 0.0;
    for (const ScoredPair& p : pairs) best = std::max(best, p.gain);
    const Selection chosen = SelectNext(state, policy);
    bool ok = false;
    for (const ScoredPair& p : pairs) {
      if (p.candidate == chosen.candidate && p.teacher == chosen.teacher) {
        const double gap = (best - p.gain) / std::max(best, 1e-300);
        check.worst = std::max(check.worst, gap);
        // Declared ties are 1e-12 relative; the remaining slack absorbs the
        // difference between the cached inverse and a direct solve.
        ok = gap <= 1e-9;
      }
    }
    if (!ok) ++check.failures;
  }
  return check;
}

OracleCheck CheckScoreFiniteDiff(int instances, std::uint64_t seed,
                                 double tol) {
  OracleCheck check{"score vs finite differences", instances, 0, 0.0};
  Rng rng = MakeRng(seed, Stream::kOracle);
  for (int n = 0; n < instances; ++n) {
    const int d = UniformInt(1, 6, rng);
    const RewardParams truth(InBall(d, 2.0, rng), 2.0);
    const auto records =
        RandomRecords(truth, UniformInt(1, 50, rng), 0.0, 3.0, rng);
    const RewardParams at(InBall(d, 2.0, rng), 2.0);
    const double err =
        (Score(at, records) - FiniteDifferenceScore(at, records))
            .cwiseAbs()
            .maxCoeff();
    check.worst = std::max(check.worst, err);
    if (!(err <= tol)) ++check.failures;
  }
  return check;
}

OracleCheck CheckGridMle(int instances, std::uint64_t seed, double tol) {
  OracleCheck check{"MLE vs grid search (d=2)", instances, 0, 0.0};
  Rng rng = MakeRng(seed, Stream::kOracle);
  constexpr double kBound = 2.0;
  for (int n = 0; n < instances; ++n) {
    const RewardParams truth(InBall(2, 1.8, rng), kBound);
    const auto records = RandomRecords(truth, 200, 0.5, 2.5, rng);
    const MleResult fit = FitMle(records, kBound);
    const Eigen::VectorXd grid = GridSearchMle(records, kBound);
    const double err = (fit.params.theta - grid).cwiseAbs().maxCoeff();
    check.worst = std::max(check.worst, err);
    if (!(err <= tol)) ++check.failures;
  }
  return check;
}

OracleCheck CheckInfoMatrix(int instances, std::uint64_t seed, double tol) {
  OracleCheck check{"information matrix", instances, 0, 0.0};
  Rng rng = MakeRng(seed, Stream::kOracle);
  for (int n = 0; n < instances; ++n) {
    const int d = UniformInt(1, 8, rng);
    const RewardParams theta(InBall(d, 2.0, rng), 2.0);
    const auto records =
        RandomRecords(theta, UniformInt(0, 250, rng), 0.0, 3.0, rng);
    const double ridge = std::uniform_real_distribution<double>(0.01, 1.0)(rng);
    const InfoMatrix info = BuildInfoMatrix(theta, records, ridge);
    const Eigen::MatrixXd direct = DirectInfoMatrix(theta, records, ridge);
    double err = (info.h() - direct).norm() / direct.norm();
    const double log_det = std::log(direct.partialPivLu().determinant());
    err = std::max(err, std::abs(info.log_det() - log_det) /
                            (1.0 + std::abs(log_det)));
    err = std::max(err, (info.h_inv() * direct -
                         Eigen::MatrixXd::Identity(d, d))
                            .cwiseAbs()
                            .maxCoeff());
    check.worst = std::max(check.worst, err);
    if (!(err <= tol)) ++check.failures;
  }
  return check;
}

RationalityWitness FindRationalityWitness() {
  Eigen::MatrixXd betas(2, 1);
  betas << 0.5, 3.0;
  // The cap must exceed 3.0 to admit the second teacher.
  const TeacherPool teachers(betas, 3.5);
  const FeatureDiff z{Eigen::Vector2d(2.0, 0.0), 0, 0};
  const LabelOracle oracle = [](const FeatureDiff&, int, double) { return 1; };
  SelectorPolicy policy;
  policy.t0 = 1;
  DesignState state = Initialize({z}, teachers, policy, oracle, 0);
  state.theta_hat = RewardParams(Eigen::Vector2d(1.0, 0.0), 2.0);
  state.info = InfoMatrix(2, 1.0);

  RationalityWitness w;
  w.gain_low_beta = RankOneDetGain(state.info, z, 0.5, state.theta_hat);
  w.gain_high_beta = RankOneDetGain(state.info, z, 3.0, state.theta_hat);
  double best = -1.0;
  for (const ScoredPair& p : EnumeratePairs(state, policy)) {
    if (p.gain > best) {
      best = p.gain;
      w.enumerated_teacher = p.teacher;
    }
  }
  w.selected_teacher = SelectNext(state, policy).teacher;
  best = -1.0;
  for (int i = 0; i <= 300; ++i) {
    const double beta = 0.01 * i;
    const double g = RankOneDetGain(state.info, z, beta, state.theta_hat);
    if (g > best) {
      best = g;
      w.best_beta_on_grid = beta;
    }
  }
  return w;
}

}  // namespace dual_reward
