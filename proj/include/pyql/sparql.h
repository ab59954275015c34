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

/// @file sparql.h
/// @brief Abstract syntax, canonical emitter, parser and validator for the
/// SPARQL subset produced by the query builder.
///
/// The subset covers SELECT queries over Wikidata-style prefixes (wd:, wdt:,
/// p:, ps:, pq:, xsd:) with basic graph patterns, the fixed type path
/// `wdt:P31/wdt:P279*`, FILTER, BIND, single-variable VALUES, nested
/// subqueries, one aggregate head, and GROUP BY / ORDER BY / LIMIT / OFFSET.
///
/// Canonical text layout:
///
///     SELECT DISTINCT ?x {
///     {
///     <subquery text>
///     }
///     ?x wdt:P31/wdt:P279* wd:Q5.
///     FILTER(?h > 100).
///     BIND( (?a + ?b) AS ?sum )
///     Values ?v {wd:Q1 wd:Q2}
///     }
///     GROUP BY ?c
///     ORDER BY DESC(?h)
///     LIMIT 1
///     OFFSET 1

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pyql/box.h"
#include "pyql/value.h"

namespace pyql::sparql {

// Name without the leading '?'.
struct Variable {
  std::string name;
  bool operator==(const Variable&) const = default;
};

// wd:<id>
struct Iri {
  std::string id;
  bool operator==(const Iri&) const = default;
};

// Number, date or string literal.
struct Literal {
  Value value;
  bool operator==(const Literal&) const = default;
};

using Term = std::variant<Variable, Iri, Literal>;

enum class PredicateKind {
  kDirect,          // wdt:
  kStatement,       // p:
  kStatementValue,  // ps:
  kQualifier,       // pq:
  kTypePath,        // wdt:P31/wdt:P279*
};

struct Predicate {
  PredicateKind kind = PredicateKind::kDirect;
  std::string id;  // empty for kTypePath
  bool operator==(const Predicate&) const = default;

  static Predicate direct(std::string id) { return {PredicateKind::kDirect, std::move(id)}; }
  static Predicate type_path() { return {PredicateKind::kTypePath, ""}; }
};

struct TriplePattern {
  Term subject;
  Predicate predicate;
  Term object;
  bool operator==(const TriplePattern&) const = default;
};

enum class Comparator { kGt, kLt, kGe, kLe, kEq };
enum class UnaryOp { kAbs, kCeil, kFloor };
enum class BinaryOp { kAdd, kSub, kMul, kDiv };

std::string_view comparator_symbol(Comparator c);
std::optional<Comparator> comparator_from_symbol(std::string_view s);

struct Expression;

struct UnaryExpr {
  UnaryOp op;
  Box<Expression> arg;
  bool operator==(const UnaryExpr&) const = default;
};

struct BinaryExpr {
  BinaryOp op;
  Box<Expression> lhs;
  Box<Expression> rhs;
  bool operator==(const BinaryExpr&) const = default;
};

// IF(lhs cmp rhs, "TRUE", "FALSE")
struct ConditionalExpr {
  Comparator cmp;
  Box<Expression> lhs;
  Box<Expression> rhs;
  bool operator==(const ConditionalExpr&) const = default;
};

struct Expression {
  std::variant<Term, UnaryExpr, BinaryExpr, ConditionalExpr> node;
  bool operator==(const Expression&) const = default;

  static Expression var(std::string name) { return {Term{Variable{std::move(name)}}}; }
  static Expression number(double x) { return {Term{Literal{Value::number(x)}}}; }
  static Expression term(Term t) { return {std::move(t)}; }
  static Expression unary(UnaryOp op, Expression arg) { return {UnaryExpr{op, std::move(arg)}}; }
  static Expression binary(BinaryOp op, Expression lhs, Expression rhs) {
    return {BinaryExpr{op, std::move(lhs), std::move(rhs)}};
  }
  static Expression conditional(Comparator cmp, Expression lhs, Expression rhs) {
    return {ConditionalExpr{cmp, std::move(lhs), std::move(rhs)}};
  }
};

struct Filter {
  Expression lhs;
  Comparator cmp;
  Expression rhs;
  bool operator==(const Filter&) const = default;
};

struct Bind {
  Expression expr;
  Variable var;
  bool operator==(const Bind&) const = default;
};

struct ValuesBlock {
  Variable var;
  std::vector<Term> terms;
  bool operator==(const ValuesBlock&) const = default;
};

using PatternElem = std::variant<TriplePattern, Filter, Bind, ValuesBlock>;

struct Projection {
  bool distinct = true;
  bool star = false;
  std::vector<Variable> vars;
  bool operator==(const Projection&) const = default;
};

enum class AggregateFn { kCount, kSum, kAvg, kMin, kMax };
std::string_view aggregate_name(AggregateFn fn);

// SELECT (FN(DISTINCT ?arg) AS ?alias) [?group]
struct AggregateHead {
  AggregateFn fn = AggregateFn::kCount;
  Variable arg;
  Variable alias;
  std::optional<Variable> group;
  bool operator==(const AggregateHead&) const = default;
};

using Head = std::variant<Projection, AggregateHead>;

struct OrderBy {
  Variable var;
  bool descending = false;
  bool operator==(const OrderBy&) const = default;
};

struct Modifiers {
  std::optional<Variable> group_by;
  std::optional<OrderBy> order_by;
  std::optional<std::uint64_t> limit;
  std::optional<std::uint64_t> offset;
  bool operator==(const Modifiers&) const = default;
};

struct SelectQuery {
  Head head;
  std::vector<PatternElem> patterns;
  std::vector<SelectQuery> subqueries;
  Modifiers modifiers;
  bool operator==(const SelectQuery&) const = default;
};

struct Diagnostic {
  std::string rule;     // e.g. "UnboundHeadVar"
  std::string element;  // e.g. "?z" or "subquery[0].pattern[2]"
  std::string to_string() const { return rule + "(" + element + ")"; }
  bool operator==(const Diagnostic&) const = default;
};

/// Returns every structural rule violation; empty means the query is valid.
std::vector<Diagnostic> validate(const SelectQuery& query);

/// Canonical text. Throws Error(kInvalidAst) when validate() is non-empty.
std::string emit(const SelectQuery& query);

std::string emit_term(const Term& term);
std::string emit_predicate(const Predicate& p);
std::string emit_expression(const Expression& expr);
std::string emit_pattern(const PatternElem& elem);

/// Parses the subset grammar. Accepts (and drops) PREFIX declarations for the
/// six standard prefixes. Throws SyntaxError with line/column, or
/// UnsupportedFeature for SPARQL outside the subset.
SelectQuery parse(std::string_view text);

/// Parses a bare expression such as `?a + ?b` or `ABS(?x - 3)`.
Expression parse_expression(std::string_view text);

/// Variables a query exposes to an enclosing group.
std::vector<std::string> visible_variables(const SelectQuery& query);

/// Variables a group binds: triple terms, BIND targets, VALUES variables and
/// subquery heads, in first-appearance order.
std::vector<std::string> bound_variables(const SelectQuery& query);

/// The six PREFIX lines, each terminated by '\n'.
const std::string& prefix_header();

bool is_valid_variable_name(std::string_view name);

}  // namespace pyql::sparql
