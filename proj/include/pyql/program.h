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

/// @file program.h
/// @brief Textual PyQL programs: parsing, canonical serialization, and
/// elaboration against QueryBuilder.
///
///     q = PyQL()
///     q.add_fact("Q42","P19","?p")
///     q.set_answer("?p")
///
/// Arithmetic functions take the target variable last, e.g.
/// `q.sub("?a","?b","?d")` binds ?d to ?a - ?b. `add_sub_query` takes bare
/// object names. A call on an object is not allowed once another object has
/// taken it as a subquery, since the subquery is copied at that point. The
/// root query is the last declared object that no add_sub_query references.

#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pyql/builder.h"
#include "pyql/json_io.h"
#include "pyql/sparql.h"

namespace pyql {

struct ProgramArg {
  enum class Kind { kString, kNumber, kList, kObject };

  Kind kind = Kind::kString;
  std::string text;  // string contents or object name
  double number = 0;
  std::vector<ProgramArg> items;
  std::string keyword;  // set for name=value arguments

  static ProgramArg string(std::string s) { return {Kind::kString, std::move(s), 0, {}, {}}; }
  static ProgramArg num(double x) { return {Kind::kNumber, {}, x, {}, {}}; }
  static ProgramArg list(std::vector<ProgramArg> xs) { return {Kind::kList, {}, 0, std::move(xs), {}}; }
  static ProgramArg object(std::string name) { return {Kind::kObject, std::move(name), 0, {}, {}}; }
  ProgramArg named(std::string k) && {
    keyword = std::move(k);
    return std::move(*this);
  }

  bool operator==(const ProgramArg&) const = default;
};

struct Declaration {
  std::string object;
  bool operator==(const Declaration&) const = default;
};

struct Call {
  std::string object;
  std::string function;
  std::vector<ProgramArg> args;
  bool operator==(const Call&) const = default;
};

using ProgramStatement = std::variant<Declaration, Call>;

struct ProgramIR {
  std::vector<ProgramStatement> statements;
  bool operator==(const ProgramIR&) const = default;

  ProgramIR& declare(std::string object);
  ProgramIR& call(std::string object, std::string function, std::vector<ProgramArg> args);
};

enum class OpCategory { kNone, kArithmetic, kAggregation, kComparison };

struct FunctionInfo {
  std::string_view name;
  int min_args;
  int max_args;  // -1: unbounded
  std::vector<std::string_view> params;
  int first_named;  // index of the first parameter accepting name=value; -1 for none
  OpCategory category;
};

const FunctionInfo* find_function(std::string_view name);
const std::vector<FunctionInfo>& function_table();

/// Throws SyntaxError(line, col), UnknownFunction, ArityError,
/// UndeclaredObject or CyclicSubquery. Errors carry the 1-based statement
/// index where one applies.
ProgramIR parse_program(std::string_view text);

/// Checks the IR invariants parse_program enforces.
void check_program(const ProgramIR& ir);

std::string serialize_program(const ProgramIR& ir);
std::vector<std::string> serialize_lines(const ProgramIR& ir);
std::string serialize_statement(const ProgramStatement& st);

// Joins stored statement lines and parses them.
ProgramIR program_from_lines(const std::vector<std::string>& lines);

struct Step {
  int index = 0;  // 1-based statement index
  std::string object;
  std::string function;
  std::string description;
};

struct Elaboration {
  sparql::SelectQuery query;
  std::string sparql;
  std::string root;
  std::vector<Step> steps;
};

/// Replays the program. Builder errors are rethrown tagged with the index of
/// the failing statement.
Elaboration elaborate(const ProgramIR& ir);
std::string compile_program(const ProgramIR& ir);

Json steps_to_json(const std::vector<Step>& steps);

}  // namespace pyql
