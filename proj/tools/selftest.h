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

#ifndef DUAL_REWARD_TOOLS_SELFTEST_H_
#define DUAL_REWARD_TOOLS_SELFTEST_H_

#include <cstdint>
#include <ostream>

namespace dual_reward {

// Runs the oracle and invariant suites, one line per suite. Returns true
// when every suite passes.
bool RunSelftest(std::uint64_t seed, std::ostream& out);

}  // namespace dual_reward

#endif  // DUAL_REWARD_TOOLS_SELFTEST_H_
