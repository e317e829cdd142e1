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

#include "dual_reward/sim_env.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <utility>

#include "dual_reward/errors.h"
#include "dual_reward/random.h"

namespace dual_reward {

void SimSpec::Validate() const {
  if (n < 1) throw InvalidArgumentError("n must be >= 1");
  if (d < 2) throw InvalidArgumentError("simulation needs d >= 2");
  if (g < 1 || m < 1) throw InvalidArgumentError("need g >= 1 and m >= 1");
  if (n_eval < 1) throw InvalidArgumentError("n_eval must be >= 1");
  if (beta_low < 0 || beta_low > beta_high || beta_high > c_beta) {
    throw InvalidArgumentError("rationality range must satisfy "
                               "0 <= low <= high <= C_beta");
  }
  const Eigen::VectorXd theta = ThetaStar();
  if (theta.size() != d) throw InvalidArgumentError("theta_star has wrong d");
  if (!(theta(0) < 0)) {
    throw InvalidArgumentError("theta_star(0) must be negative");
  }
  if (theta.norm() > c_theta) {
    throw InvalidArgumentError("theta_star lies outside the C_theta ball");
  }
}

Eigen::VectorXd SimSpec::ThetaStar() const {
  if (theta_star) return *theta_star;
  Eigen::VectorXd theta = Eigen::VectorXd::Constant(d, 0.5);
  theta(0) = -0.5;
  return theta;
}

Eigen::VectorXd SampleContext(int d, Rng& rng) {
  std::uniform_real_distribution<double> head(1.0, 2.0);
  std::uniform_real_distribution<double> tail(-0.5, 0.5);
  Eigen::VectorXd x(d);
  x(0) = head(rng);
  for (int i = 1; i < d; ++i) x(i) = tail(rng);
  return x;
}

Eigen::VectorXd SimFeatures(const Eigen::VectorXd& x, double a) {
  Eigen::VectorXd phi = x * a;
  phi(0) = x(0) * a * a;
  return phi;
}

double OptimalAction(const Eigen::VectorXd& x, const Eigen::VectorXd& theta) {
  const double linear = theta.tail(theta.size() - 1).dot(x.tail(x.size() - 1));
  return -linear / (2.0 * theta(0) * x(0));
}

double AlternativeAction(const Eigen::VectorXd& x) { return x.norm() / 3.0; }

LabelOracle SimEnvironment::MakeOracle() const {
  auto rng = std::make_shared<Rng>(oracle_seed);
  RewardParams theta = theta_star;
  return [rng, theta](const FeatureDiff& z, int, double beta) {
    return SamplePreference(theta, z, beta, *rng);
  };
}

TeacherPool GenTeacherPool(int m, int g, double low, double high,
                           std::uint64_t seed, double c_beta) {
  if (low > high) throw InvalidArgumentError("beta range low > high");
  if (low < 0) throw InvalidArgumentError("beta range must be nonnegative");
  if (high > c_beta) throw InvalidArgumentError("beta range exceeds C_beta");
  if (m < 1 || g < 1) throw InvalidArgumentError("need m >= 1 and g >= 1");
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(low, high);
  Eigen::MatrixXd betas(m, g);
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < g; ++k) {
      double b = unif(rng);
      // uniform_real_distribution may round up to its upper end.
      if (b >= c_beta) b = std::nextafter(c_beta, 0.0);
      betas(j, k) = b;
    }
  }
  return TeacherPool(std::move(betas), c_beta);
}

SimEnvironment GenSimEnv(const SimSpec& spec) {
  spec.Validate();
  SimEnvironment env;
  env.theta_star = RewardParams(spec.ThetaStar(), spec.c_theta);
  const Eigen::VectorXd& theta = env.theta_star.theta;

  Rng rng = MakeRng(spec.seed, Stream::kEnvironment);
  std::uniform_int_distribution<int> category(0, spec.g - 1);
  double c_phi = 0.0;
  env.pool.reserve(spec.n);
  for (int i = 0; i < spec.n; ++i) {
    const Eigen::VectorXd x = SampleContext(spec.d, rng);
    const Eigen::VectorXd phi0 = SimFeatures(x, OptimalAction(x, theta));
    const Eigen::VectorXd phi1 = SimFeatures(x, AlternativeAction(x));
    c_phi = std::max({c_phi, phi0.norm(), phi1.norm()});
    env.pool.push_back(FeatureDiff{phi1 - phi0, category(rng), i});
  }

  env.teachers = GenTeacherPool(spec.m, spec.g, spec.beta_low, spec.beta_high,
                                DeriveSeed(spec.seed, Stream::kTeachers),
                                spec.c_beta);

  Rng eval_rng = MakeRng(spec.seed, Stream::kEvaluation);
  std::vector<Eigen::MatrixXd> contexts;
  contexts.reserve(spec.n_eval);
  for (int i = 0; i < spec.n_eval; ++i) {
    const Eigen::VectorXd x = SampleContext(spec.d, eval_rng);
    Eigen::MatrixXd actions(2, spec.d);
    actions.row(0) = SimFeatures(x, OptimalAction(x, theta)).transpose();
    actions.row(1) = SimFeatures(x, AlternativeAction(x)).transpose();
    c_phi = std::max({c_phi, actions.row(0).norm(), actions.row(1).norm()});
    contexts.push_back(std::move(actions));
  }
  env.problem = PolicyProblem::Uniform(std::move(contexts));
  env.c_phi = c_phi;
  env.oracle_seed = DeriveSeed(spec.seed, Stream::kOracle);
  return env;
}

Eigen::MatrixXd GreedyTrap::ActionFeatures() {
  Eigen::MatrixXd phi(4, 3);
  phi << 0.2, 0.0, 0.1,   //
      0.1, -0.9, 0.1,     //
      0.2, 0.1, -0.1,     //
      0.0, 0.1, 0.0;
  return phi;
}

Eigen::VectorXd GreedyTrap::ThetaStar() {
  return Eigen::Vector3d(-1.0, 0.1, 1.0);
}

GreedyTrap GenGreedyTrap(int t, std::uint64_t seed, double c_theta) {
  if (t < 1) throw InvalidArgumentError("t must be >= 1");
  GreedyTrap trap;
  const Eigen::MatrixXd phi = GreedyTrap::ActionFeatures();
  trap.theta_star = RewardParams(GreedyTrap::ThetaStar(), c_theta);
  trap.problem = PolicyProblem::Uniform({phi});

  Rng rng = MakeRng(seed, Stream::kEnvironment);
  Rng label_rng = MakeRng(seed, Stream::kOracle);
  std::discrete_distribution<int> behavior(GreedyTrap::kBehavior.begin(),
                                           GreedyTrap::kBehavior.end());
  trap.records.reserve(t);
  trap.action_pairs.reserve(t);
  for (int i = 0; i < t; ++i) {
    const int a0 = behavior(rng);
    const int a1 = behavior(rng);
    PreferenceRecord record;
    record.z = FeatureDiff{(phi.row(a1) - phi.row(a0)).transpose(), 0, i};
    record.beta = 1.0;
    record.teacher_id = 0;
    record.y = SamplePreference(trap.theta_star, record.z, 1.0, label_rng);
    trap.records.push_back(std::move(record));
    trap.action_pairs.push_back({a0, a1});
  }
  return trap;
}

}  // namespace dual_reward
