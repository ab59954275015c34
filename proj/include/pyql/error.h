// Copyright 2026 The PyQL Toolkit Authors.
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
#include <string_view>

namespace pyql {

// Every failure raised by the toolkit carries one of these codes. The code
// name is part of the user-visible diagnostics ("stmt 4: VarClash: ...").
enum class ErrorCode {
  kInvalidAst,
  kSyntaxError,
  kUnsupportedFeature,
  kBadTerm,
  kBadOperator,
  kVarClash,
  kArityError,
  kZeroConstDivisor,
  kEmptyValues,
  kHeadlessSubquery,
  kHeadAlreadySet,
  kNegativeWindow,
  kMissingAnswer,
  kUnknownFunction,
  kUndeclaredObject,
  kCyclicSubquery,
  kParseError,
  kDuplicateStatementId,
  kCyclicSubclass,
  kAmbiguousAlias,
  kUnknownEntity,
  kEvalUnsupported,
  kNonUniqueAnswer,
  kNonUniqueOperand,
  kDivByZero,
  kUnbound,
  kTypeError,
  kNoBindings,
  kNoValidSubgraph,
  kIoError,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }
  const std::string& message() const { return message_; }

  // Source position for text-level errors; 0 when not applicable.
  int line() const { return line_; }
  int column() const { return column_; }
  Error& at(int line, int column);

  // 1-based statement index for program-level errors; 0 when unset.
  int statement() const { return statement_; }
  Error& in_statement(int index);

  // Row count carried by NonUniqueAnswer.
  long count() const { return count_; }
  Error& with_count(long n);

 private:
  ErrorCode code_;
  std::string message_;
  int line_ = 0;
  int column_ = 0;
  int statement_ = 0;
  long count_ = 0;
};

}  // namespace pyql
