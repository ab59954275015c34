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

/// @file nrq.h
/// @brief Computational trees for numerical reasoning questions: grammar
/// model, validation, lowering to PyQL, a direct interpreter, and operator
/// statistics.
///
///     NRQ  ::= Func Arg+
///     Arg  ::= Num | NRQ | Des
///     Des  ::= (Rel Var)+
///     Var  ::= Ent | Num | Des | NRQ
///
/// A description denotes the set of values X meeting every (Rel, Var) pair.
/// A plain relation "P" reads `Var P X`; a relation written "^P" reads
/// `X P Var`. "^P31" is instance-of through subclasses (P31/P279*) and needs
/// an entity Var.
///
/// JSON: {"func":"sub","args":[{"des":[["P2048",{"ent":"Q1"}]]},{"num":3}]}.

#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "pyql/json_io.h"
#include "pyql/kb.h"
#include "pyql/program.h"
#include "pyql/sparql.h"
#include "pyql/value.h"

namespace pyql {

struct NrqNode {
  enum class Kind { kFunc, kNum, kEnt, kDes };

  Kind kind = Kind::kNum;
  std::string op;              // kFunc
  std::vector<NrqNode> args;   // kFunc
  double num = 0;              // kNum
  std::string ent;             // kEnt
  std::vector<std::string> rels;  // kDes, parallel to vars
  std::vector<NrqNode> vars;      // kDes

  static NrqNode func(std::string op, std::vector<NrqNode> args);
  static NrqNode number(double x);
  static NrqNode entity(std::string id);
  static NrqNode des(std::vector<std::pair<std::string, NrqNode>> pairs);

  bool operator==(const NrqNode&) const = default;
};

// The fifteen operators, five per category.
const std::vector<std::string_view>& nrq_operators();
OpCategory nrq_category(std::string_view op);

Json tree_to_json(const NrqNode& node);
/// Throws ParseError on malformed JSON shapes.
NrqNode tree_from_json(const Json& j);

/// Grammar and arity diagnostics; empty means the tree is well formed.
std::vector<sparql::Diagnostic> validate_tree(const NrqNode& node);

struct LowerOptions {
  // Fault injection for negative controls: swaps the operands of every
  // binary arithmetic and comparison node.
  bool swap_operands = false;
};

/// Throws InvalidAst when validate_tree reports problems.
ProgramIR lower_to_pyql(const NrqNode& node, const LowerOptions& options = {});

/// Bottom-up evaluation by exhaustive scans of the KB. Throws
/// NonUniqueOperand, DivByZero, Unbound, TypeError.
Value interpret(const NrqNode& node, const KnowledgeBase& kb);

struct OperatorStats {
  int arithmetic = 0;
  int aggregation = 0;
  int comparison = 0;
  std::map<std::string, int> per_operator;

  int total() const { return arithmetic + aggregation + comparison; }
  void add(std::string_view op, int n = 1);
  OperatorStats& operator+=(const OperatorStats& o);
  bool operator==(const OperatorStats&) const = default;
};

OperatorStats operator_stats(const NrqNode& node);
/// Counts operators in a program: arithmetic statements, add_bind
/// expressions, aggregation calls (add_rank counts as count), and
/// add_compare / add_filter.
OperatorStats operator_stats(const ProgramIR& ir);

/// Exact for non-numbers; numbers within `rel_tol` relative error.
bool answers_agree(const Value& a, const Value& b, double rel_tol = 1e-9);

}  // namespace pyql
