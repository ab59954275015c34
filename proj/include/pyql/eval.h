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

/// @file eval.h
/// @brief Evaluation of the SPARQL subset against a KnowledgeBase.
///
/// Set semantics throughout: every group yields distinct solutions and every
/// aggregate runs over the distinct values of its argument. Subqueries are
/// evaluated bottom-up and joined first; triple patterns, BIND and VALUES are
/// applied left to right; FILTERs apply to the whole group. Arithmetic is
/// IEEE double. Expression errors leave a BIND target unbound and drop a row
/// under FILTER.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pyql/json_io.h"
#include "pyql/kb.h"
#include "pyql/sparql.h"
#include "pyql/value.h"

namespace pyql {

struct EvalOptions {
  // Tolerance for numeric `=`. Zero means exact equality.
  double eq_epsilon = 0.0;
};

using Cell = std::optional<Value>;
using Row = std::vector<Cell>;

struct ResultSet {
  std::vector<std::string> columns;  // variable names without '?'
  std::vector<Row> rows;
  bool operator==(const ResultSet&) const = default;
};

ResultSet evaluate(const sparql::SelectQuery& query, const KnowledgeBase& kb, const EvalOptions& options = {});

/// Evaluates an expression over one solution; nullopt signals an expression
/// error (unbound variable, type mismatch, division by zero).
std::optional<Value> eval_expression(const sparql::Expression& expr, const Binding& row,
                                     const EvalOptions& options = {});

/// Comparison with the evaluator's typing rules; nullopt when the operands are
/// not comparable (e.g. entity vs number, or ordering two entities).
std::optional<bool> compare(const Value& a, sparql::Comparator cmp, const Value& b, const EvalOptions& options = {});

struct AggregateRow {
  Cell group;
  Cell value;
  bool operator==(const AggregateRow&) const = default;
};

/// Aggregates the distinct values of `arg` per group. Without a group
/// variable exactly one row comes back, even for empty input (COUNT and SUM
/// give 0; AVG, MIN and MAX are unbound).
std::vector<AggregateRow> eval_aggregate(sparql::AggregateFn fn, const std::vector<Binding>& rows,
                                         const std::string& arg, const std::optional<std::string>& group_var);

/// The single value of a one-row, one-column result. Throws NonUniqueAnswer
/// (carrying the row count) or Unbound.
Value unique_answer(const ResultSet& result);

/// {"columns":[...],"rows":[[...]],"answer":{...}}; answer only when unique.
Json result_to_json(const ResultSet& result);

}  // namespace pyql
