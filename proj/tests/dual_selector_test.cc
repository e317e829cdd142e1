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

#include "dual_reward/dual_selector.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "dual_reward/errors.h"
#include "dual_reward/oracles.h"
#include "dual_reward/sim_env.h"

namespace dual_reward {
namespace {

LabelOracle CoinOracle(std::uint64_t seed) {
  auto rng = std::make_shared<Rng>(seed);
  return [rng](const FeatureDiff&, int, double) {
    return static_cast<int>((*rng)() & 1u);
  };
}

std::vector<FeatureDiff> RandomPool(int n, int d, int categories,
                                    std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<FeatureDiff> pool;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd z(d);
    for (int k = 0; k < d; ++k) z(k) = u(rng);
    pool.push_back({z, i % categories, 1000 + i});
  }
  return pool;
}

TeacherPool RandomTeachers(int m, int g, std::uint64_t seed) {
  return GenTeacherPool(m, g, 0.0, 2.0, seed);
}

SimEnvironment SmallSim(std::uint64_t seed, int n = 2000) {
  SimSpec spec;
  spec.n = n;
  spec.n_eval = 20;
  spec.seed = seed;
  return GenSimEnv(spec);
}

TEST_CASE("selector names round-trip") {
  for (SelectorKind kind : kAllSelectorKinds) {
    CHECK(ParseSelectorKind(SelectorName(kind)) == kind);
  }
  CHECK_THROWS_AS(ParseSelectorKind("greedy"), InvalidArgumentError);
}

TEST_CASE("initialization") {
  const SimEnvironment env = SmallSim(1);
  SelectorPolicy policy;
  policy.t0 = 10;
  const DesignConfig config;
  const DesignState a = Initialize(env.pool, env.teachers, policy,
                                   env.MakeOracle(), 5, config);
  CHECK(a.step_t == 10);
  CHECK(a.selected.size() == 10);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a.info.h());
  CHECK(eig.eigenvalues().minCoeff() > config.ridge);

  const DesignState b = Initialize(env.pool, env.teachers, policy,
                                   env.MakeOracle(), 5, config);
  REQUIRE(b.selected.size() == a.selected.size());
  for (size_t i = 0; i < a.selected.size(); ++i) {
    CHECK(a.selected[i].z.source_id == b.selected[i].z.source_id);
    CHECK(a.selected[i].teacher_id == b.selected[i].teacher_id);
    CHECK(a.selected[i].y == b.selected[i].y);
  }
  CHECK(a.theta_hat.theta == b.theta_hat.theta);

  CHECK_THROWS_AS(Initialize({}, env.teachers, policy, env.MakeOracle(), 0),
                  NoDataError);
  std::vector<FeatureDiff> bad = {{Eigen::Vector2d(1, 0), 7, 0}};
  CHECK_THROWS_AS(Initialize(bad, env.teachers, policy, env.MakeOracle(), 0),
                  InvalidArgumentError);
}

TEST_CASE("budget equal to t0 leaves the initial design") {
  const SimEnvironment env = SmallSim(2);
  for (SelectorKind kind : kAllSelectorKinds) {
    SelectorPolicy policy;
    policy.kind = kind;
    policy.t0 = 12;
    const LabelOracle oracle = env.MakeOracle();
    const DesignState init =
        Initialize(env.pool, env.teachers, policy, oracle, 3);
    const DesignState done = RunSelection(init, policy, 12, oracle);
    CHECK(done.trace.empty());
    CHECK(done.step_t == 12);
    CHECK(done.theta_hat.theta == init.theta_hat.theta);
  }
}

TEST_CASE("singleton pool") {
  std::vector<FeatureDiff> pool = {{Eigen::Vector2d(0.3, -0.4), 0, 42}};
  Eigen::MatrixXd betas(1, 1);
  betas << 1.2;
  for (SelectorKind kind : kAllSelectorKinds) {
    SelectorPolicy policy;
    policy.kind = kind;
    policy.t0 = 1;
    DesignState state = Initialize(pool, TeacherPool(betas, 3.0), policy,
                                   CoinOracle(1), 0);
    const Selection s = SelectNext(state, policy);
    CHECK(s.candidate == 0);
    CHECK(s.teacher == 0);
    CHECK(s.beta == 1.2);
  }
}

TEST_CASE("less explored direction wins") {
  std::vector<FeatureDiff> pool = {{Eigen::Vector2d(1, 0), 0, 0},
                                   {Eigen::Vector2d(0, 1), 0, 1}};
  Eigen::MatrixXd betas(1, 1);
  betas << 1.0;
  SelectorPolicy policy;
  policy.t0 = 1;
  DesignState state =
      Initialize(pool, TeacherPool(betas, 3.0), policy, CoinOracle(2), 0);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2, 2);
  h(0, 0) = 100.0;
  h(1, 1) = 1.0;
  state.info = InfoMatrix(h, 0.0, 10);
  state.theta_hat = RewardParams(Eigen::Vector2d::Zero(), 2.0);
  const Selection s = SelectNext(state, policy);
  CHECK(s.candidate == 1);
  CHECK(s.gain == doctest::Approx(0.25));
}

TEST_CASE("dual choice matches full-determinant enumeration") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto pool = RandomPool(3, 3, 1, seed);
    SelectorPolicy policy;
    policy.t0 = 4;
    DesignState state = Initialize(pool, RandomTeachers(2, 1, seed), policy,
                                   CoinOracle(seed), seed,
                                   DesignConfig{.ridge = 1e-2});
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    state.theta_hat = RewardParams(Eigen::Vector3d(u(rng), u(rng), u(rng)), 2.0);
    double best = -1.0;
    int best_i = -1, best_j = -1;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double beta = state.teachers.beta(j, 0);
        const double g = FullDeterminantGain(
            state.info.h(), pool[i].z,
            InfoWeight(state.theta_hat.theta, pool[i].z, beta));
        if (g > best) {
          best = g;
          best_i = i;
          best_j = j;
        }
      }
    }
    const Selection s = SelectNext(state, policy);
    CHECK(s.candidate == best_i);
    CHECK(s.teacher == best_j);
    CHECK(s.gain == doctest::Approx(best).epsilon(1e-9));
  }
  CHECK(CheckSelectionArgmax(50, 77).passed());
}

TEST_CASE("batch selection") {
  const auto pool = RandomPool(12, 3, 2, 5);
  const TeacherPool teachers = RandomTeachers(3, 2, 5);
  SelectorPolicy policy;
  policy.t0 = 6;
  const DesignState base =
      Initialize(pool, teachers, policy, CoinOracle(5), 5);

  SUBCASE("K = 1 coincides with select_next") {
    for (SelectorKind kind : kAllSelectorKinds) {
      policy.kind = kind;
      DesignState a = base, b = base;
      const Selection s = SelectNext(a, policy);
      const std::vector<Selection> batch = SelectBatch(b, policy);
      REQUIRE(batch.size() == 1);
      CHECK(batch[0].candidate == s.candidate);
      CHECK(batch[0].teacher == s.teacher);
    }
  }
  SUBCASE("top K by brute-force ranking") {
    DesignState state = base;
    policy.batch_k = 2;
    const std::vector<ScoredPair> pairs = EnumeratePairs(state, policy);
    std::vector<double> best(pool.size(), -1.0);
    for (const ScoredPair& p : pairs) {
      best[p.candidate] = std::max(best[p.candidate], p.gain);
    }
    std::vector<int> order(pool.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return best[a] > best[b]; });
    const std::vector<Selection> batch = SelectBatch(state, policy);
    REQUIRE(batch.size() == 2);
    CHECK(std::set<int>{batch[0].candidate, batch[1].candidate} ==
          std::set<int>{order[0], order[1]});
  }
  SUBCASE("K equal to the pool with no_repeat returns the whole pool") {
    Eigen::MatrixXd one(1, 1);
    one << 1.0;
    SelectorPolicy p;
    p.t0 = 1;
    p.no_repeat = true;
    const auto small = RandomPool(5, 2, 1, 6);
    DesignState state =
        Initialize(small, TeacherPool(one, 3.0), p, CoinOracle(6), 6);
    state.used.assign(small.size(), false);
    p.batch_k = 5;
    std::set<int> chosen;
    for (const Selection& s : SelectBatch(state, p)) chosen.insert(s.candidate);
    CHECK(chosen == std::set<int>{0, 1, 2, 3, 4});
  }
}

TEST_CASE("pool order does not change the selected set") {
  const auto pool = RandomPool(40, 3, 2, 8);
  SelectorPolicy policy;
  policy.t0 = 6;
  policy.batch_k = 5;
  DesignState a = Initialize(pool, RandomTeachers(3, 2, 8), policy,
                             CoinOracle(8), 8);
  DesignState b = a;
  std::vector<int> perm(pool.size());
  for (size_t i = 0; i < perm.size(); ++i) {
    perm[i] = static_cast<int>(perm.size() - 1 - i);
  }
  for (size_t i = 0; i < perm.size(); ++i) {
    b.pool[i] = a.pool[perm[i]];
    b.pool_matrix.col(i) = a.pool_matrix.col(perm[i]);
    b.categories[i] = a.categories[perm[i]];
    b.used[i] = a.used[perm[i]];
  }
  std::multiset<std::int64_t> sa, sb;
  for (const Selection& s : SelectBatch(a, policy)) {
    sa.insert(a.pool[s.candidate].source_id);
  }
  for (const Selection& s : SelectBatch(b, policy)) {
    sb.insert(b.pool[s.candidate].source_id);
  }
  CHECK(sa == sb);
}

TEST_CASE("run selection on the simulation environment") {
  const SimEnvironment env = SmallSim(3);
  SelectorPolicy policy;
  policy.batch_k = 50;
  policy.t0 = 10;
  const LabelOracle oracle = env.MakeOracle();
  DesignState state = Initialize(env.pool, env.teachers, policy, oracle, 4);
  state = RunSelection(std::move(state), policy, 1000, oracle);
  CHECK(state.step_t == 1000);
  CHECK(state.selected.size() == 1000);
  CHECK(state.trace.size() == 990);
  CHECK(state.trace.back().batch == 20);
  CHECK(state.refits == 21);
  for (size_t i = 1; i < state.trace.size(); ++i) {
    if (state.trace[i].batch == state.trace[i - 1].batch) {
      CHECK(state.trace[i].log_det >= state.trace[i - 1].log_det - 1e-12);
    }
  }
}

TEST_CASE("selector kinds behave as described") {
  const auto pool = RandomPool(30, 3, 2, 9);
  const TeacherPool teachers = RandomTeachers(4, 2, 9);
  SelectorPolicy policy;
  policy.t0 = 6;
  const DesignState base =
      Initialize(pool, teachers, policy, CoinOracle(9), 9);
  const std::vector<ScoredPair> pairs = EnumeratePairs(base, policy);
  auto best_for = [&](int i) {
    double g = -1.0;
    for (const ScoredPair& p : pairs) {
      if (p.candidate == i) g = std::max(g, p.gain);
    }
    return g;
  };
  double overall = -1.0;
  for (const ScoredPair& p : pairs) overall = std::max(overall, p.gain);

  for (int trial = 0; trial < 20; ++trial) {
    DesignState s = base;
    s.rng.seed(trial);
    policy.kind = SelectorKind::kConversationOnly;
    const Selection c = SelectNext(s, policy);
    double best_under_teacher = -1.0;
    for (const ScoredPair& p : pairs) {
      if (p.teacher == c.teacher) {
        best_under_teacher = std::max(best_under_teacher, p.gain);
      }
    }
    CHECK(c.gain == doctest::Approx(best_under_teacher));
    CHECK(c.gain <= overall);
    policy.kind = SelectorKind::kTeacherOnly;
    const Selection t = SelectNext(s, policy);
    CHECK(t.gain == doctest::Approx(best_for(t.candidate)));
  }
  for (int trial = 0; trial < 5; ++trial) {
    DesignState s = base;
    s.rng.seed(100 + trial);
    SelectorPolicy batch = policy;
    batch.kind = SelectorKind::kConversationOnly;
    batch.batch_k = 3;
    const std::vector<Selection> chosen = SelectBatch(s, batch);
    REQUIRE(chosen.size() == 3);
    std::vector<double> under;
    for (const ScoredPair& p : pairs) {
      if (p.teacher == chosen[0].teacher) under.push_back(p.gain);
    }
    std::sort(under.rbegin(), under.rend());
    for (size_t r = 0; r < chosen.size(); ++r) {
      CHECK(chosen[r].teacher == chosen[0].teacher);
      CHECK(chosen[r].gain == doctest::Approx(under[r]));
    }
  }
  DesignState s = base;
  policy.kind = SelectorKind::kApo;
  const Selection apo = SelectNext(s, policy);
  const Eigen::MatrixXd inv = base.linear_info.h().inverse();
  double best_linear = -1.0;
  int best_i = -1;
  for (size_t i = 0; i < pool.size(); ++i) {
    const double v = pool[i].z.dot(inv * pool[i].z);
    if (v > best_linear) {
      best_linear = v;
      best_i = static_cast<int>(i);
    }
  }
  CHECK(apo.candidate == best_i);
}

TEST_CASE("errors") {
  const auto pool = RandomPool(3, 2, 1, 10);
  Eigen::MatrixXd one(1, 1);
  one << 1.0;
  SelectorPolicy policy;
  policy.t0 = 3;
  policy.no_repeat = true;
  DesignState state =
      Initialize(pool, TeacherPool(one, 3.0), policy, CoinOracle(10), 10);
  CHECK(state.num_available() == 0);
  CHECK_THROWS_AS(SelectNext(state, policy), PoolExhaustedError);

  policy.no_repeat = false;
  const LabelOracle failing = [](const FeatureDiff&, int, double) -> int {
    throw std::runtime_error("teacher offline");
  };
  try {
    RunSelection(state, policy, 5, failing);
    FAIL("expected OracleError");
  } catch (const OracleError& e) {
    CHECK(e.step() == 4);
  }
  CHECK_THROWS_AS(RunSelection(state, policy, 2, CoinOracle(1)),
                  InvalidArgumentError);
  policy.batch_k = 0;
  CHECK_THROWS_AS(policy.Validate(), InvalidArgumentError);
}

TEST_CASE("rationality witness") {
  const RationalityWitness w = FindRationalityWitness();
  CHECK(w.holds());
  CHECK(w.gain_low_beta > w.gain_high_beta);
  CHECK(w.best_beta_on_grid > 0.5);
  CHECK(w.best_beta_on_grid < 3.0);
}

}  // namespace
}  // namespace dual_reward
