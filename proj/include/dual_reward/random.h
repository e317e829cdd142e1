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

#ifndef DUAL_REWARD_RANDOM_H_
#define DUAL_REWARD_RANDOM_H_

#include <cstdint>
#include <random>

namespace dual_reward {

using Rng = std::mt19937_64;

// Independent sub-streams of one base seed. Each consumer of randomness in a
// run (environment, oracle, selector) draws from its own stream.
enum class Stream : std::uint32_t {
  kEnvironment = 1,
  kTeachers = 2,
  kOracle = 3,
  kSelector = 4,
  kEvaluation = 5,
  kPolicy = 6,
};

inline Rng MakeRng(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

inline std::uint64_t DeriveSeed(std::uint64_t seed, Stream stream) {
  return MakeRng(seed, stream)();
}

}  // namespace dual_reward

#endif  // DUAL_REWARD_RANDOM_H_
