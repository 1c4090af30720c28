// Copyright 2026 The borncraft Authors
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

namespace borncraft {

/// Operand lengths or shapes disagree.
class DimensionMismatch : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A T gate reached a Clifford-only code path.
class NonCliffordGate : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A request exceeds a simulator guard or cannot be evaluated exactly.
class Infeasible : public std::length_error {
  public:
    using std::length_error::length_error;
};

/// Malformed circuit text, JSON document, or experiment grid.
class ParseError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

} // namespace borncraft
