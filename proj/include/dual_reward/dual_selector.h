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

// Sequential D-optimal selection of (conversation, teacher) pairs and the
// baseline selectors it is compared against.
//
// At every step the selector scores each candidate conversation z and each
// teacher j available for z's category by the relative determinant gain
//   mu'(beta_j theta_hat' z) beta_j^2 z' H^{-1} z
// of the sample information matrix H evaluated at the current estimate, picks
// the best pair (or the best K conversations in batch mode), queries a label,
// and refits theta_hat once per batch.

#ifndef DUAL_REWARD_DUAL_SELECTOR_H_
#define DUAL_REWARD_DUAL_SELECTOR_H_

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dual_reward/preference_models.h"
#include "dual_reward/random.h"
#include "dual_reward/reward_mle.h"

namespace dual_reward {

enum class SelectorKind {
  // argmax of the gain over all (conversation, teacher) pairs.
  kDualDOptimal,
  // Teacher drawn at random, then the conversation with the largest gain
  // under that teacher. A batch shares one teacher draw.
  kConversationOnly,
  // Conversation drawn at random, then its best teacher.
  kTeacherOnly,
  // Largest z' (sum z z' + ridge I)^{-1} z, teacher at random.
  kApo,
  kRandom,
};

inline constexpr SelectorKind kAllSelectorKinds[] = {
    SelectorKind::kDualDOptimal, SelectorKind::kConversationOnly,
    SelectorKind::kTeacherOnly, SelectorKind::kApo, SelectorKind::kRandom};

// "dual", "conversation_only", "teacher_only", "apo", "random".
std::string_view SelectorName(SelectorKind kind);
// Inverse of SelectorName. Throws InvalidArgumentError on unknown names.
SelectorKind ParseSelectorKind(std::string_view name);

struct SelectorPolicy {
  SelectorKind kind = SelectorKind::kDualDOptimal;
  int batch_k = 1;
  // Number of uniformly random pairs used to fit the first estimate.
  int t0 = 10;
  // Excludes conversations that were already queried (by any teacher).
  bool no_repeat = false;

  void Validate() const;
};

struct DesignConfig {
  double ridge = 1e-6;
  double bound_c_theta = 2.0;
  double mle_tol = 1e-8;
  int mle_max_iter = 200;
};

// Returns the label y for conversation `z` answered by `teacher_id`.
using LabelOracle =
    std::function<int(const FeatureDiff& z, int teacher_id, double beta)>;

struct Selection {
  int candidate = 0;
  int teacher = 0;
  double beta = 0.0;
  double gain = 0.0;
};

struct TraceRecord {
  int step = 0;
  int batch = 0;
  int candidate_id = 0;
  int teacher_id = 0;
  double beta = 0.0;
  double gain = 0.0;
  double log_det = 0.0;
  double theta_hat_norm = 0.0;
};

// All state of one selection run. Owned and mutated by a single thread.
struct DesignState {
  std::vector<FeatureDiff> pool;
  TeacherPool teachers;
  DesignConfig config;
  std::vector<PreferenceRecord> selected;
  // H(theta_hat) over `selected`, ridge included.
  InfoMatrix info;
  // sum z z' + ridge I over `selected`; used by the linear-design baseline.
  InfoMatrix linear_info;
  RewardParams theta_hat;
  bool theta_hat_converged = false;
  int step_t = 0;
  int refits = 0;
  Rng rng;
  std::vector<bool> used;
  std::vector<TraceRecord> trace;

  // Pool features packed column-wise (d x n) and categories.
  Eigen::MatrixXd pool_matrix;
  std::vector<int> categories;

  int dim() const { return static_cast<int>(pool_matrix.rows()); }
  int num_available() const;
};

// Selects policy.t0 uniformly random pairs, labels them, and fits the first
// estimate. Throws NoDataError for an empty pool and InvalidArgumentError if
// a category has no column in the teacher pool.
DesignState Initialize(std::vector<FeatureDiff> pool, TeacherPool teachers,
                       const SelectorPolicy& policy, const LabelOracle& oracle,
                       std::uint64_t seed, const DesignConfig& config = {});

// One (conversation, teacher) pair chosen by `policy.kind`. Ties in the gain
// (within 1e-12 relative) are broken uniformly at random with state.rng.
// Throws PoolExhaustedError when no_repeat leaves no candidate.
Selection SelectNext(DesignState& state, const SelectorPolicy& policy);

// The policy.batch_k best conversations, each with its teacher, scored
// against the current information matrix without intra-batch updates.
// For batch_k == 1 this is SelectNext.
std::vector<Selection> SelectBatch(DesignState& state,
                                   const SelectorPolicy& policy);

// Runs batches until budget_t records are selected, refitting theta_hat and
// rebuilding the information matrix after every batch. The last batch is
// truncated to fit the budget. Oracle exceptions are rethrown as
// OracleError carrying the step index.
DesignState RunSelection(DesignState state, const SelectorPolicy& policy,
                         int budget_t, const LabelOracle& oracle);

}  // namespace dual_reward

#endif  // DUAL_REWARD_DUAL_SELECTOR_H_
