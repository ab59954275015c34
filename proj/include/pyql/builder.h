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

/// @file builder.h
/// @brief The PyQL query object: one method per PyQL function, each lowering
/// to SPARQL syntax elements in call order.
///
/// Term strings follow the PyQL conventions: "Q42" (or "wd:Q42") is an
/// entity, "?x" a variable, "P19" a property, a quoted string such as
/// "\"2020-01-01\"^^xsd:dateTime" a literal, and a numeric string a number.
///
/// Answer resolution at compile time: an aggregate or boolean head if one was
/// set, else the last explicit set_answer (add_max/add_min set one too), else
/// the alias of the last add_bind, else MissingAnswer.

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pyql/sparql.h"

namespace pyql {

// A term or number argument as written in a PyQL call.
using Operand = std::variant<std::string, double>;

enum class ArithKind { kAdd, kSub, kMul, kDiv };
enum class Rounding { kNone, kCeil, kFloor };

// Arithmetic over numbers and variables, not yet placed in a query.
class ArithmeticExpr {
 public:
  ArithmeticExpr(const char* term);         // NOLINT
  ArithmeticExpr(const std::string& term);  // NOLINT
  ArithmeticExpr(double number);            // NOLINT
  ArithmeticExpr(const Operand& operand);   // NOLINT
  explicit ArithmeticExpr(sparql::Expression expr) : expr_(std::move(expr)) {}

  const sparql::Expression& expression() const { return expr_; }
  std::string text() const { return sparql::emit_expression(expr_); }

 private:
  sparql::Expression expr_;
};

/// add takes two or more operands; sub, mul and div exactly two. Rounding
/// wraps the result in CEIL/FLOOR. Throws ArityError, ZeroConstDivisor.
ArithmeticExpr arith(ArithKind kind, Rounding rounding, std::vector<ArithmeticExpr> operands);
ArithmeticExpr abs(ArithmeticExpr x);

// Term-string classification shared with the text front end.
sparql::Term parse_term_string(std::string_view s);
sparql::Term operand_term(const Operand& o);
std::string parse_property_id(std::string_view s);
std::string parse_variable(std::string_view s);
bool is_entity_id(std::string_view s);

class QueryBuilder {
 public:
  QueryBuilder() = default;

  // Basic graph patterns.
  void add_fact(const Operand& subject, std::string_view property, const Operand& object);
  void add_quantity(const Operand& entity, std::string_view property, std::string_view new_var);
  void add_quantity_with_qualifier(const Operand& entity, std::string_view property, std::string_view new_var,
                                   std::string_view qualifier, const Operand& qualifier_value);
  void add_quantity_by_qualifier(const Operand& entity, std::string_view property, const Operand& main_value,
                                 std::string_view qualifier_property, std::string_view new_var);
  void add_type_constrain(std::string_view type_id, std::string_view new_var);
  void add_filter(const Operand& a, std::string_view op, const Operand& b);
  void add_bind(const ArithmeticExpr& expr, std::string_view var);
  // Expression given as SPARQL text, e.g. "?a + ?b".
  void add_bind_text(std::string_view expr, std::string_view var);
  void add_assignment(const std::vector<std::string>& values, std::string_view new_var);
  void add_sub_query(const std::vector<const QueryBuilder*>& queries);

  // Aggregation.
  void add_max(std::string_view max_obj, std::string_view return_obj = "*", std::int64_t offset = 0,
               std::optional<std::int64_t> limit = 1);
  void add_min(std::string_view min_obj, std::string_view return_obj = "*", std::int64_t offset = 0,
               std::optional<std::int64_t> limit = 1);
  void add_count(std::string_view count_obj, std::string_view new_var,
                 std::optional<std::string_view> group_obj = std::nullopt);
  void add_sum(std::string_view obj, std::string_view new_var,
               std::optional<std::string_view> group_obj = std::nullopt);
  void add_avg(std::string_view obj, std::string_view new_var,
               std::optional<std::string_view> group_obj = std::nullopt);
  // Dense descending rank of `obj` among the values of `within`, bound to a
  // fresh ?rank.
  void add_rank(std::string_view obj, std::string_view within);

  // Boolean.
  void add_compare(const Operand& a, std::string_view op, const Operand& b);

  // Other.
  void set_answer(std::string_view var);
  void add_time(const Operand& entity, std::string_view new_var);
  void add_start_time(const Operand& entity, std::string_view new_var);
  void add_end_time(const Operand& entity, std::string_view new_var);

  /// The query under construction with its head resolved. Throws
  /// MissingAnswer.
  sparql::SelectQuery to_ast() const;
  /// emit(to_ast()).
  std::string compile() const;

  bool has_answer() const;
  const std::vector<sparql::PatternElem>& patterns() const { return patterns_; }

 private:
  void push(sparql::PatternElem elem);
  void note_term(const sparql::Term& t);
  void require_not_alias(const std::string& var) const;
  void require_fresh(const std::string& var) const;
  std::string fresh(std::string_view stem);
  void set_aggregate(sparql::AggregateFn fn, std::string_view obj, std::string_view new_var,
                     std::optional<std::string_view> group_obj);
  void set_order(std::string_view obj, bool descending, std::string_view return_obj, std::int64_t offset,
                 std::optional<std::int64_t> limit);

  std::vector<sparql::PatternElem> patterns_;
  std::vector<sparql::SelectQuery> subqueries_;
  sparql::Modifiers modifiers_;
  std::optional<sparql::Head> head_;
  std::optional<std::string> explicit_answer_;
  std::optional<std::string> bind_answer_;
  std::set<std::string> known_;
  std::set<std::string> aliases_;
  int statement_counter_ = 0;
  int greater_counter_ = 0;
};

}  // namespace pyql
