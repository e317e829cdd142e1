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

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "dual_reward/errors.h"
#include "dual_reward/oracles.h"

namespace dual_reward {
namespace {

std::vector<PreferenceRecord> Sampled(const Eigen::VectorXd& truth, int t,
                                      std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const RewardParams theta(truth, 2.0);
  std::vector<PreferenceRecord> records;
  for (int i = 0; i < t; ++i) {
    PreferenceRecord r;
    r.z.z = Eigen::VectorXd(truth.size());
    for (Eigen::Index k = 0; k < truth.size(); ++k) r.z.z(k) = u(rng);
    r.beta = 1.5 + u(rng);
    r.y = SamplePreference(theta, r.z, r.beta, rng);
    records.push_back(r);
  }
  return records;
}

TEST_CASE("flat likelihood returns the initial point") {
  auto records = Sampled(Eigen::Vector2d(0.5, -0.5), 30, 1);
  for (auto& r : records) r.beta = 0.0;
  CHECK(FitMle(records, 2.0).params.theta.isZero());
  MleOptions options;
  options.init = Eigen::Vector2d(0.3, 0.2);
  const MleResult fit = FitMle(records, 2.0, options);
  CHECK(fit.params.theta.isApprox(*options.init));
  CHECK(fit.converged);
  CHECK(Score(fit.params, records).isZero());
}

TEST_CASE("balanced labels give a zero estimate") {
  PreferenceRecord r;
  r.z.z = Eigen::VectorXd::Ones(1);
  r.beta = 1.0;
  std::vector<PreferenceRecord> records;
  for (int i = 0; i < 10; ++i) {
    r.y = i % 2;
    records.push_back(r);
  }
  const MleResult fit = FitMle(records, 2.0);
  CHECK(fit.converged);
  CHECK(std::abs(fit.params.theta(0)) < 1e-8);
}

TEST_CASE("fit agrees with grid search on the unit disk") {
  const auto records = Sampled(Eigen::Vector2d(0.5, -0.5), 200, 2);
  const MleResult fit = FitMle(records, 1.0);
  const Eigen::VectorXd grid = GridSearchMle(records, 1.0, 0.01);
  CHECK((fit.params.theta - grid).cwiseAbs().maxCoeff() <= 0.02);
  CHECK(fit.params.theta.norm() <= 1.0 + 1e-9);
}

TEST_CASE("interior fit satisfies the first-order condition") {
  const auto records = Sampled(Eigen::Vector3d(0.3, -0.2, 0.4), 300, 3);
  const MleResult fit = FitMle(records, 2.0);
  REQUIRE(fit.params.theta.norm() < 2.0);
  CHECK(fit.converged);
  CHECK(Score(fit.params, records).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("boundary fit is stationary along the sphere") {
  // Separable data push the unconstrained maximizer to infinity.
  std::vector<PreferenceRecord> records;
  for (int i = 0; i < 20; ++i) {
    PreferenceRecord r;
    r.z.z = Eigen::Vector2d(1.0, 0.1 * (i % 5 - 2));
    r.beta = 1.0;
    r.y = 1;
    records.push_back(r);
  }
  const MleResult fit = FitMle(records, 1.5);
  CHECK(fit.converged);
  CHECK(fit.params.theta.norm() == doctest::Approx(1.5));
  CHECK(fit.params.theta(0) > 1.4);
}

TEST_CASE("label-swap equivariance") {
  auto records = Sampled(Eigen::Vector3d(0.6, 0.1, -0.7), 150, 4);
  const Eigen::VectorXd a = FitMle(records, 2.0).params.theta;
  for (auto& r : records) {
    r.y = 1 - r.y;
    r.z.z = -r.z.z;
  }
  const Eigen::VectorXd b = FitMle(records, 2.0).params.theta;
  CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("fit rejects empty input") {
  CHECK_THROWS_AS(FitMle(std::vector<PreferenceRecord>{}, 2.0), NoDataError);
}

TEST_CASE("score") {
  auto records = Sampled(Eigen::Vector3d(0.2, 0.2, 0.2), 10, 5);
  const RewardParams at(Eigen::Vector3d(-0.4, 0.9, 0.1), 2.0);
  CHECK((Score(at, records) - FiniteDifferenceScore(at, records))
            .cwiseAbs()
            .maxCoeff() <= 1e-6);
  for (auto& r : records) r.beta = 0.0;
  CHECK(Score(at, records).isZero());
  CHECK(NegativeHessian(at, records).isZero());
}

TEST_CASE("information matrix") {
  const RewardParams zero(Eigen::Vector3d::Zero(), 2.0);
  SUBCASE("single record at theta zero") {
    PreferenceRecord r;
    r.z.z = Eigen::Vector3d(1.0, -2.0, 0.5);
    r.beta = 1.7;
    const InfoMatrix info = BuildInfoMatrix(zero, std::vector{r}, 0.1);
    const Eigen::MatrixXd expected =
        0.25 * r.beta * r.beta * r.z.z * r.z.z.transpose() +
        0.1 * Eigen::MatrixXd::Identity(3, 3);
    CHECK((info.h() - expected).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(info.count() == 1);
  }
  SUBCASE("zero records") {
    const InfoMatrix info =
        BuildInfoMatrix(zero, std::vector<PreferenceRecord>{}, 1e-6);
    CHECK(info.h().isApprox(1e-6 * Eigen::MatrixXd::Identity(3, 3)));
    CHECK(info.log_det() == doctest::Approx(3 * std::log(1e-6)));
    CHECK_THROWS_AS(info.NormalizedInverse(), NoDataError);
  }
  SUBCASE("direct summation, additivity, and semidefiniteness") {
    const auto records = Sampled(Eigen::Vector3d(0.5, -0.1, 0.3), 5, 6);
    const RewardParams at(Eigen::Vector3d(0.4, 0.4, -0.2), 2.0);
    const double ridge = 1e-3;
    const InfoMatrix info = BuildInfoMatrix(at, records, ridge);
    const Eigen::MatrixXd direct = DirectInfoMatrix(at, records, ridge);
    CHECK((info.h() - direct).norm() <= 1e-12 * direct.norm());

    const std::vector<PreferenceRecord> first(records.begin(),
                                              records.begin() + 2);
    const std::vector<PreferenceRecord> rest(records.begin() + 2,
                                             records.end());
    const Eigen::MatrixXd sum = BuildInfoMatrix(at, first, ridge).h() +
                                BuildInfoMatrix(at, rest, ridge).h() -
                                ridge * Eigen::MatrixXd::Identity(3, 3);
    CHECK((info.h() - sum).norm() <= 1e-12 * info.h().norm());

    const InfoMatrix bare = BuildInfoMatrix(at, records, 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(bare.h());
    CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
  }
  SUBCASE("cached inverse survives refactorization") {
    Rng rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    InfoMatrix info(4, 0.5);
    for (int i = 0; i < 3 * InfoMatrix::kRefactorInterval + 17; ++i) {
      info.Accumulate(Eigen::Vector4d(u(rng), u(rng), u(rng), u(rng)),
                      0.5 * (u(rng) + 1.0));
      const Eigen::MatrixXd id = info.h_inv() * info.h();
      REQUIRE((id - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <
              1e-9);
    }
    CHECK(info.log_det() ==
          doctest::Approx(std::log(info.h().determinant())).epsilon(1e-10));
    CHECK(info.NormalizedInverse().isApprox(info.count() * info.h_inv()));
  }
  SUBCASE("singular matrix") {
    InfoMatrix info(2, 0.0);
    info.Accumulate(Eigen::Vector2d(1.0, 0.0), 1.0);
    CHECK_FALSE(info.valid());
    CHECK_THROWS_AS(info.QuadForm(Eigen::Vector2d(0.0, 1.0)),
                    SingularMatrixError);
  }
}

TEST_CASE("rank-one determinant gain") {
  const RewardParams zero(Eigen::Vector2d::Zero(), 2.0);
  const InfoMatrix identity(2, 1.0);
  const FeatureDiff e1{Eigen::Vector2d(1.0, 0.0), 0, 0};
  CHECK(RankOneDetGain(identity, e1, 0.0, zero) == 0.0);
  CHECK(RankOneDetGain(identity, e1, 1.0, zero) == doctest::Approx(0.25));

  Rng rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  InfoMatrix info(4, 0.2);
  const RewardParams theta(Eigen::Vector4d(0.3, -0.5, 0.2, 0.1), 2.0);
  for (int i = 0; i < 12; ++i) {
    const Eigen::Vector4d z(u(rng), u(rng), u(rng), u(rng));
    info.Accumulate(z, InfoWeight(theta.theta, z, 1.0 + u(rng)));
  }
  const FeatureDiff z{Eigen::Vector4d(0.7, 0.1, -0.4, 0.9), 0, 0};
  const double g = RankOneDetGain(info, z, 1.3, theta);
  const Eigen::MatrixXd updated =
      info.h() + InfoWeight(theta.theta, z.z, 1.3) * z.z * z.z.transpose();
  CHECK(std::log(updated.determinant()) ==
        doctest::Approx(info.log_det() + std::log1p(g)).epsilon(1e-10));
  CHECK(CheckDeterminantIdentity(100, 10).passed());
}

TEST_CASE("confidence radius") {
  const ConfidenceSpec spec;
  const double expected =
      std::sqrt(0.01 * (5.0 * std::log(std::exp(1.0) + 20.0) + std::log(20.0)));
  CHECK(ConfidenceRadius(spec, 100, 5) == doctest::Approx(expected));
  CHECK(ConfidenceRadius(spec, 100, 5) == doctest::Approx(0.4314).epsilon(1e-3));

  ConfidenceSpec near_one;
  near_one.delta = 1.0 - 1e-12;
  const double gamma = ConfidenceRadius(near_one, 50, 2);
  const double log_term = gamma * gamma * 50.0 - 2.0 * std::log(std::exp(1.0) + 25.0);
  CHECK(log_term == doctest::Approx(std::log(2.0)).epsilon(1e-9));

  for (int t = 5; t <= 5000; t *= 3) {
    CHECK(ConfidenceRadius(spec, 4 * t, 5) < ConfidenceRadius(spec, t, 5));
  }
  ConfidenceSpec bad;
  bad.delta = 1.0;
  CHECK_THROWS_AS(ConfidenceRadius(bad, 10, 2), InvalidArgumentError);
}

}  // namespace
}  // namespace dual_reward
