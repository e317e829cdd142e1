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
#include <exception>
#include <numeric>
#include <utility>

#include "dual_reward/errors.h"

namespace dual_reward {
namespace {

constexpr double kTieTolerance = 1e-12;

// Per-candidate quantities shared by all pair scores of one step.
struct CandidateScan {
  Eigen::VectorXd quad;    // z' H^{-1} z
  Eigen::VectorXd margin;  // theta_hat' z
};

CandidateScan ScanCandidates(const DesignState& state,
                             const InfoMatrix& info) {
  if (!info.valid()) throw SingularMatrixError();
  CandidateScan scan;
  const Eigen::MatrixXd solved = info.h_inv() * state.pool_matrix;
  scan.quad = solved.cwiseProduct(state.pool_matrix).colwise().sum();
  scan.margin = state.pool_matrix.transpose() * state.theta_hat.theta;
  return scan;
}

double PairGain(const DesignState& state, const CandidateScan& scan, int i,
                int teacher) {
  const double beta = state.teachers.beta(teacher, state.categories[i]);
  if (beta == 0.0) return 0.0;
  return SigmoidDeriv(beta * scan.margin(i)) * beta * beta * scan.quad(i);
}

bool IsAvailable(const DesignState& state, const SelectorPolicy& policy,
                 int i) {
  return !policy.no_repeat || !state.used[i];
}

std::vector<int> AvailableCandidates(const DesignState& state,
                                     const SelectorPolicy& policy) {
  std::vector<int> out;
  out.reserve(state.pool.size());
  for (int i = 0; i < static_cast<int>(state.pool.size()); ++i) {
    if (IsAvailable(state, policy, i)) out.push_back(i);
  }
  if (out.empty()) throw PoolExhaustedError();
  return out;
}

int UniformIndex(Rng& rng, int n) {
  return std::uniform_int_distribution<int>(0, n - 1)(rng);
}

int RandomCandidate(DesignState& state, const SelectorPolicy& policy) {
  const int n = static_cast<int>(state.pool.size());
  if (!policy.no_repeat) return UniformIndex(state.rng, n);
  const std::vector<int> available = AvailableCandidates(state, policy);
  return available[UniformIndex(state.rng, static_cast<int>(available.size()))];
}

int RandomTeacher(DesignState& state) {
  return UniformIndex(state.rng, state.teachers.num_teachers());
}

bool WithinTie(double value, double best) {
  return value >= best - kTieTolerance * std::abs(best);
}

// Uniformly random index among the entries of `scores` tied with the max.
int PickTied(const std::vector<double>& scores, Rng& rng) {
  const double best = *std::max_element(scores.begin(), scores.end());
  std::vector<int> tied;
  for (int i = 0; i < static_cast<int>(scores.size()); ++i) {
    if (WithinTie(scores[i], best)) tied.push_back(i);
  }
  return tied[UniformIndex(rng, static_cast<int>(tied.size()))];
}

// Best teacher for candidate i (random among ties) and its gain.
std::pair<int, double> BestTeacher(DesignState& state,
                                   const CandidateScan& scan, int i) {
  const int m = state.teachers.num_teachers();
  std::vector<double> gains(m);
  for (int j = 0; j < m; ++j) gains[j] = PairGain(state, scan, i, j);
  const int j = PickTied(gains, state.rng);
  return {j, gains[j]};
}

Eigen::VectorXd LinearScores(const DesignState& state) {
  if (!state.linear_info.valid()) throw SingularMatrixError();
  const Eigen::MatrixXd solved =
      state.linear_info.h_inv() * state.pool_matrix;
  return solved.cwiseProduct(state.pool_matrix).colwise().sum();
}

Selection MakeSelection(const DesignState& state, const CandidateScan& scan,
                        int i, int teacher) {
  return Selection{i, teacher, state.teachers.beta(teacher, state.categories[i]),
                   PairGain(state, scan, i, teacher)};
}

Selection SelectDual(DesignState& state, const SelectorPolicy& policy,
                     const CandidateScan& scan) {
  const std::vector<int> available = AvailableCandidates(state, policy);
  const int m = state.teachers.num_teachers();
  std::vector<double> gains(available.size() * m);
  for (size_t a = 0; a < available.size(); ++a) {
    for (int j = 0; j < m; ++j) {
      gains[a * m + j] = PairGain(state, scan, available[a], j);
    }
  }
  const int pick = PickTied(gains, state.rng);
  return MakeSelection(state, scan, available[pick / m], pick % m);
}

std::vector<int> TopK(const std::vector<int>& available,
                      const std::vector<double>& scores, int k, Rng& rng,
                      bool no_repeat);

// One teacher drawn at random, then the k conversations with the largest
// gain under that teacher.
std::vector<Selection> SelectForRandomTeacher(DesignState& state,
                                              const SelectorPolicy& policy,
                                              const CandidateScan& scan,
                                              int k) {
  const std::vector<int> available = AvailableCandidates(state, policy);
  const int teacher = RandomTeacher(state);
  std::vector<double> gains(available.size());
  for (size_t a = 0; a < available.size(); ++a) {
    gains[a] = PairGain(state, scan, available[a], teacher);
  }
  std::vector<Selection> out;
  if (k == 1) {
    out.push_back(MakeSelection(
        state, scan, available[PickTied(gains, state.rng)], teacher));
    return out;
  }
  for (int i : TopK(available, gains, k, state.rng, policy.no_repeat)) {
    out.push_back(MakeSelection(state, scan, i, teacher));
  }
  return out;
}

int SelectLinearDesign(DesignState& state, const SelectorPolicy& policy) {
  const std::vector<int> available = AvailableCandidates(state, policy);
  const Eigen::VectorXd scores = LinearScores(state);
  std::vector<double> s(available.size());
  for (size_t a = 0; a < available.size(); ++a) s[a] = scores(available[a]);
  return available[PickTied(s, state.rng)];
}

// Indices of the k highest scores among `available`; exact score ties are
// ordered by a random key. Without no_repeat a short pool is cycled.
std::vector<int> TopK(const std::vector<int>& available,
                      const std::vector<double>& scores, int k, Rng& rng,
                      bool no_repeat) {
  const int n = static_cast<int>(available.size());
  if (no_repeat && k > n) throw PoolExhaustedError();
  std::vector<std::uint64_t> keys(n);
  for (auto& key : keys) key = rng();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto better = [&](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return keys[a] < keys[b];
  };
  const int head = std::min(k, n);
  std::partial_sort(order.begin(), order.begin() + head, order.end(), better);
  std::vector<int> out(k);
  for (int r = 0; r < k; ++r) out[r] = available[order[r % head]];
  return out;
}

std::vector<int> RandomCandidates(DesignState& state,
                                  const SelectorPolicy& policy, int k) {
  if (!policy.no_repeat) {
    std::vector<int> out(k);
    for (int& i : out) i = RandomCandidate(state, policy);
    return out;
  }
  std::vector<int> available = AvailableCandidates(state, policy);
  if (k > static_cast<int>(available.size())) throw PoolExhaustedError();
  // Partial Fisher-Yates.
  for (int r = 0; r < k; ++r) {
    const int pick =
        r + UniformIndex(state.rng, static_cast<int>(available.size()) - r);
    std::swap(available[r], available[pick]);
  }
  available.resize(k);
  return available;
}

PreferenceRecord QueryLabel(const DesignState& state, int candidate,
                            int teacher, const LabelOracle& oracle,
                            int step) {
  PreferenceRecord record;
  record.z = state.pool[candidate];
  record.teacher_id = teacher;
  record.beta = state.teachers.beta(teacher, state.categories[candidate]);
  try {
    record.y = oracle(record.z, teacher, record.beta);
  } catch (const std::exception& e) {
    throw OracleError(step, e.what());
  }
  if (record.y != 0 && record.y != 1) {
    throw OracleError(step, "label must be 0 or 1");
  }
  return record;
}

void Refit(DesignState& state) {
  MleOptions options;
  options.tol = state.config.mle_tol;
  options.max_iter = state.config.mle_max_iter;
  options.init = state.theta_hat.theta;
  MleResult fit = FitMle(state.selected, state.config.bound_c_theta, options);
  state.theta_hat = std::move(fit.params);
  state.theta_hat_converged = fit.converged;
  state.info =
      BuildInfoMatrix(state.theta_hat, state.selected, state.config.ridge);
  ++state.refits;
}

}  // namespace

std::string_view SelectorName(SelectorKind kind) {
  switch (kind) {
    case SelectorKind::kDualDOptimal:
      return "dual";
    case SelectorKind::kConversationOnly:
      return "conversation_only";
    case SelectorKind::kTeacherOnly:
      return "teacher_only";
    case SelectorKind::kApo:
      return "apo";
    case SelectorKind::kRandom:
      return "random";
  }
  return "unknown";
}

SelectorKind ParseSelectorKind(std::string_view name) {
  for (SelectorKind kind : kAllSelectorKinds) {
    if (SelectorName(kind) == name) return kind;
  }
  throw InvalidArgumentError("unknown selector: " + std::string(name));
}

void SelectorPolicy::Validate() const {
  if (batch_k < 1) throw InvalidArgumentError("batch_k must be >= 1");
  if (t0 < 1) throw InvalidArgumentError("t0 must be >= 1");
}

int DesignState::num_available() const {
  return static_cast<int>(std::count(used.begin(), used.end(), false));
}

DesignState Initialize(std::vector<FeatureDiff> pool, TeacherPool teachers,
                       const SelectorPolicy& policy, const LabelOracle& oracle,
                       std::uint64_t seed, const DesignConfig& config) {
  policy.Validate();
  if (pool.empty()) throw NoDataError();
  const int d = static_cast<int>(pool.front().z.size());
  if (d < 1) throw InvalidArgumentError("feature dimension must be >= 1");
  DesignState state;
  state.config = config;
  state.pool_matrix.resize(d, static_cast<Eigen::Index>(pool.size()));
  state.categories.resize(pool.size());
  for (size_t i = 0; i < pool.size(); ++i) {
    if (pool[i].z.size() != d) {
      throw InvalidArgumentError("inconsistent feature dimension in pool");
    }
    if (pool[i].category < 0 ||
        pool[i].category >= teachers.num_categories()) {
      throw InvalidArgumentError("candidate category has no teacher column");
    }
    state.pool_matrix.col(static_cast<Eigen::Index>(i)) = pool[i].z;
    state.categories[i] = pool[i].category;
  }
  state.pool = std::move(pool);
  state.teachers = std::move(teachers);
  state.used.assign(state.pool.size(), false);
  state.rng = MakeRng(seed, Stream::kSelector);
  state.theta_hat = RewardParams(Eigen::VectorXd::Zero(d), config.bound_c_theta);

  const std::vector<int> initial = RandomCandidates(state, policy, policy.t0);
  state.linear_info = InfoMatrix(d, config.ridge);
  for (int i : initial) {
    const int teacher = RandomTeacher(state);
    state.selected.push_back(
        QueryLabel(state, i, teacher, oracle, state.step_t + 1));
    state.used[i] = true;
    state.linear_info.Accumulate(state.pool[i].z, 1.0);
    ++state.step_t;
  }
  Refit(state);
  return state;
}

Selection SelectNext(DesignState& state, const SelectorPolicy& policy) {
  switch (policy.kind) {
    case SelectorKind::kDualDOptimal: {
      const CandidateScan scan = ScanCandidates(state, state.info);
      return SelectDual(state, policy, scan);
    }
    case SelectorKind::kConversationOnly: {
      const CandidateScan scan = ScanCandidates(state, state.info);
      return SelectForRandomTeacher(state, policy, scan, 1).front();
    }
    case SelectorKind::kTeacherOnly: {
      const CandidateScan scan = ScanCandidates(state, state.info);
      const int i = RandomCandidate(state, policy);
      return MakeSelection(state, scan, i, BestTeacher(state, scan, i).first);
    }
    case SelectorKind::kApo: {
      const CandidateScan scan = ScanCandidates(state, state.info);
      const int i = SelectLinearDesign(state, policy);
      return MakeSelection(state, scan, i, RandomTeacher(state));
    }
    case SelectorKind::kRandom: {
      const CandidateScan scan = ScanCandidates(state, state.info);
      const int i = RandomCandidate(state, policy);
      return MakeSelection(state, scan, i, RandomTeacher(state));
    }
  }
  throw InvalidArgumentError("unknown selector kind");
}

std::vector<Selection> SelectBatch(DesignState& state,
                                   const SelectorPolicy& policy) {
  policy.Validate();
  if (policy.batch_k == 1) return {SelectNext(state, policy)};
  const int k = policy.batch_k;
  const CandidateScan scan = ScanCandidates(state, state.info);
  std::vector<Selection> out;
  out.reserve(k);
  switch (policy.kind) {
    case SelectorKind::kConversationOnly:
      out = SelectForRandomTeacher(state, policy, scan, k);
      break;
    case SelectorKind::kDualDOptimal: {
      const std::vector<int> available = AvailableCandidates(state, policy);
      std::vector<double> scores(available.size());
      std::vector<int> best_teacher(available.size());
      for (size_t a = 0; a < available.size(); ++a) {
        auto [j, g] = BestTeacher(state, scan, available[a]);
        best_teacher[a] = j;
        scores[a] = g;
      }
      const std::vector<int> top =
          TopK(available, scores, k, state.rng, policy.no_repeat);
      for (int i : top) {
        const auto pos = std::lower_bound(available.begin(), available.end(), i);
        out.push_back(
            MakeSelection(state, scan, i, best_teacher[pos - available.begin()]));
      }
      break;
    }
    case SelectorKind::kApo: {
      const std::vector<int> available = AvailableCandidates(state, policy);
      const Eigen::VectorXd linear = LinearScores(state);
      std::vector<double> scores(available.size());
      for (size_t a = 0; a < available.size(); ++a) {
        scores[a] = linear(available[a]);
      }
      for (int i : TopK(available, scores, k, state.rng, policy.no_repeat)) {
        out.push_back(MakeSelection(state, scan, i, RandomTeacher(state)));
      }
      break;
    }
    case SelectorKind::kTeacherOnly:
      for (int i : RandomCandidates(state, policy, k)) {
        out.push_back(
            MakeSelection(state, scan, i, BestTeacher(state, scan, i).first));
      }
      break;
    case SelectorKind::kRandom:
      for (int i : RandomCandidates(state, policy, k)) {
        out.push_back(MakeSelection(state, scan, i, RandomTeacher(state)));
      }
      break;
  }
  return out;
}

DesignState RunSelection(DesignState state, const SelectorPolicy& policy,
                         int budget_t, const LabelOracle& oracle) {
  policy.Validate();
  if (budget_t < state.step_t) {
    throw InvalidArgumentError("budget is smaller than the initial design");
  }
  int batch = 0;
  while (state.step_t < budget_t) {
    ++batch;
    SelectorPolicy step_policy = policy;
    step_policy.batch_k = std::min(policy.batch_k, budget_t - state.step_t);
    const std::vector<Selection> chosen = SelectBatch(state, step_policy);
    const double theta_norm = state.theta_hat.theta.norm();
    for (const Selection& s : chosen) {
      const int step = state.step_t + 1;
      PreferenceRecord record =
          QueryLabel(state, s.candidate, s.teacher, oracle, step);
      state.info.Accumulate(
          record.z.z, InfoWeight(state.theta_hat.theta, record.z.z, record.beta));
      state.linear_info.Accumulate(record.z.z, 1.0);
      state.used[s.candidate] = true;
      state.selected.push_back(std::move(record));
      state.step_t = step;
      state.trace.push_back(TraceRecord{step, batch, s.candidate, s.teacher,
                                        s.beta, s.gain, state.info.log_det(),
                                        theta_norm});
    }
    Refit(state);
  }
  return state;
}

}  // namespace dual_reward
