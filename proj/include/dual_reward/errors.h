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

#ifndef DUAL_REWARD_ERRORS_H_
#define DUAL_REWARD_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dual_reward {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Empty input where data is required ("no data").
class NoDataError : public Error {
 public:
  NoDataError() : Error("no data") {}
};

class SingularMatrixError : public Error {
 public:
  SingularMatrixError() : Error("singular information matrix") {}
};

class PoolExhaustedError : public Error {
 public:
  PoolExhaustedError() : Error("pool exhausted") {}
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

// A label source failed while answering a query. `step` is the 1-based
// index of the record being labeled.
class OracleError : public Error {
 public:
  OracleError(int step, const std::string& what)
      : Error("oracle failure at step " + std::to_string(step) + ": " + what),
        step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dual_reward

#endif  // DUAL_REWARD_ERRORS_H_
