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

#include "pyql/error.h"

namespace pyql {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidAst: return "InvalidAst";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kUnsupportedFeature: return "UnsupportedFeature";
    case ErrorCode::kBadTerm: return "BadTerm";
    case ErrorCode::kBadOperator: return "BadOperator";
    case ErrorCode::kVarClash: return "VarClash";
    case ErrorCode::kArityError: return "ArityError";
    case ErrorCode::kZeroConstDivisor: return "ZeroConstDivisor";
    case ErrorCode::kEmptyValues: return "EmptyValues";
    case ErrorCode::kHeadlessSubquery: return "HeadlessSubquery";
    case ErrorCode::kHeadAlreadySet: return "HeadAlreadySet";
    case ErrorCode::kNegativeWindow: return "NegativeWindow";
    case ErrorCode::kMissingAnswer: return "MissingAnswer";
    case ErrorCode::kUnknownFunction: return "UnknownFunction";
    case ErrorCode::kUndeclaredObject: return "UndeclaredObject";
    case ErrorCode::kCyclicSubquery: return "CyclicSubquery";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDuplicateStatementId: return "DuplicateStatementId";
    case ErrorCode::kCyclicSubclass: return "CyclicSubclass";
    case ErrorCode::kAmbiguousAlias: return "AmbiguousAlias";
    case ErrorCode::kUnknownEntity: return "UnknownEntity";
    case ErrorCode::kEvalUnsupported: return "EvalUnsupported";
    case ErrorCode::kNonUniqueAnswer: return "NonUniqueAnswer";
    case ErrorCode::kNonUniqueOperand: return "NonUniqueOperand";
    case ErrorCode::kDivByZero: return "DivByZero";
    case ErrorCode::kUnbound: return "Unbound";
    case ErrorCode::kTypeError: return "TypeError";
    case ErrorCode::kNoBindings: return "NoBindings";
    case ErrorCode::kNoValidSubgraph: return "NoValidSubgraph";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code),
      message_(message) {}

Error& Error::at(int line, int column) {
  line_ = line;
  column_ = column;
  return *this;
}

Error& Error::in_statement(int index) {
  statement_ = index;
  return *this;
}

Error& Error::with_count(long n) {
  count_ = n;
  return *this;
}

}  // namespace pyql
