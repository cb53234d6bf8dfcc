// Copyright 2026 The sgsample Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sgs {

// Non-finite values were produced mid-computation. Carries the step index
// of the failing iteration when raised from a chain (-1 otherwise).
class NumericFailure : public std::runtime_error {
 public:
  explicit NumericFailure(const std::string& what, std::int64_t step = -1)
      : std::runtime_error(what), step_(step) {}
  std::int64_t step() const { return step_; }

 private:
  std::int64_t step_;
};

// A guarded computation would exceed its size cap (e.g. exhaustive subset
// enumeration, exact assignment).
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested operation needs target data that is absent (e.g. a
// Hessian-Lipschitz constant for the second-order planner).
class UnsupportedTarget : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sgs
