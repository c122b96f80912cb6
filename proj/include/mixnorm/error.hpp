// Copyright 2026 The mixnorm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <stdexcept>
#include <string>

namespace mixnorm {

/// Raised when an input violates a documented invariant or precondition.
/// The message names the offending item (axis, atom index, constraint).
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when exact rational arithmetic would leave the 64-bit range.
class RationalOverflow : public std::overflow_error {
 public:
  explicit RationalOverflow(const std::string& what) : std::overflow_error(what) {}
};

}  // namespace mixnorm
