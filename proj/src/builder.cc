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

#include "pyql/builder.h"

#include <algorithm>
#include <cmath>

#include "pyql/error.h"

namespace pyql {

using sparql::Bind;
using sparql::Comparator;
using sparql::Expression;
using sparql::Filter;
using sparql::Iri;
using sparql::Literal;
using sparql::Predicate;
using sparql::PredicateKind;
using sparql::Term;
using sparql::TriplePattern;
using sparql::Variable;

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string_view strip_prefix(std::string_view s, std::string_view prefix) {
  if (s.substr(0, prefix.size()) == prefix) s.remove_prefix(prefix.size());
  return s;
}

Error bad_term(std::string_view s, std::string_view what) {
  return Error(ErrorCode::kBadTerm, "'" + std::string(s) + "' is not " + std::string(what));
}

Expression term_expr(const Operand& o) { return Expression::term(operand_term(o)); }

Predicate pred(PredicateKind kind, std::string id) { return {kind, std::move(id)}; }

Comparator parse_op(std::string_view op) {
  auto c = sparql::comparator_from_symbol(op);
  if (!c) throw Error(ErrorCode::kBadOperator, "unknown comparison operator '" + std::string(op) + "'");
  return *c;
}

}  // namespace

bool is_entity_id(std::string_view s) {
  s = strip_prefix(s, "wd:");
  return s.size() >= 2 && s[0] == 'Q' && all_digits(s.substr(1));
}

std::string parse_variable(std::string_view s) {
  if (s.empty() || s[0] != '?' || !sparql::is_valid_variable_name(s.substr(1))) throw bad_term(s, "a variable");
  return std::string(s.substr(1));
}

std::string parse_property_id(std::string_view s) {
  std::string_view id = strip_prefix(s, "wdt:");
  if (id.size() < 2 || id[0] != 'P' || !all_digits(id.substr(1))) throw bad_term(s, "a property id");
  return std::string(id);
}

Term parse_term_string(std::string_view s) {
  if (!s.empty() && s[0] == '?') return Variable{parse_variable(s)};
  if (is_entity_id(s)) return Iri{std::string(strip_prefix(s, "wd:"))};
  if (!s.empty() && s[0] == '"') {
    Expression e;
    try {
      e = sparql::parse_expression(s);
    } catch (const Error&) {
      throw bad_term(s, "a literal");
    }
    if (const auto* t = std::get_if<Term>(&e.node); t && std::holds_alternative<Literal>(*t)) return *t;
    throw bad_term(s, "a literal");
  }
  if (auto x = parse_number(s)) return Literal{Value::number(*x)};
  throw bad_term(s, "an entity, variable or literal");
}

Term operand_term(const Operand& o) {
  if (const auto* x = std::get_if<double>(&o)) {
    if (!std::isfinite(*x)) throw Error(ErrorCode::kBadTerm, "non-finite number");
    return Literal{Value::number(*x)};
  }
  return parse_term_string(std::get<std::string>(o));
}

ArithmeticExpr::ArithmeticExpr(const char* term) : ArithmeticExpr(std::string(term)) {}
ArithmeticExpr::ArithmeticExpr(const std::string& term) : expr_(term_expr(term)) {}
ArithmeticExpr::ArithmeticExpr(double number) : expr_(term_expr(number)) {}
ArithmeticExpr::ArithmeticExpr(const Operand& operand) : expr_(term_expr(operand)) {}

ArithmeticExpr arith(ArithKind kind, Rounding rounding, std::vector<ArithmeticExpr> operands) {
  static constexpr sparql::BinaryOp kOps[] = {sparql::BinaryOp::kAdd, sparql::BinaryOp::kSub,
                                              sparql::BinaryOp::kMul, sparql::BinaryOp::kDiv};
  static constexpr const char* kNames[] = {"add", "sub", "mul", "div"};
  const auto k = static_cast<int>(kind);
  if (kind == ArithKind::kAdd ? operands.size() < 2 : operands.size() != 2) {
    throw Error(ErrorCode::kArityError, std::string(kNames[k]) +
                                            (kind == ArithKind::kAdd ? " expects at least 2 operands"
                                                                     : " expects 2 operands"));
  }
  if (kind == ArithKind::kDiv) {
    const auto* t = std::get_if<Term>(&operands[1].expression().node);
    if (t && std::holds_alternative<Literal>(*t)) {
      const Value& v = std::get<Literal>(*t).value;
      if (v.is_number() && v.as_number() == 0.0) throw Error(ErrorCode::kZeroConstDivisor, "division by constant 0");
    }
  }
  Expression acc = operands[0].expression();
  for (std::size_t i = 1; i < operands.size(); ++i) {
    acc = Expression::binary(kOps[k], std::move(acc), operands[i].expression());
  }
  if (rounding == Rounding::kCeil) acc = Expression::unary(sparql::UnaryOp::kCeil, std::move(acc));
  if (rounding == Rounding::kFloor) acc = Expression::unary(sparql::UnaryOp::kFloor, std::move(acc));
  return ArithmeticExpr(std::move(acc));
}

ArithmeticExpr abs(ArithmeticExpr x) {
  return ArithmeticExpr(Expression::unary(sparql::UnaryOp::kAbs, x.expression()));
}

void QueryBuilder::push(sparql::PatternElem elem) {
  if (const auto* t = std::get_if<TriplePattern>(&elem)) {
    note_term(t->subject);
    note_term(t->object);
  }
  patterns_.push_back(std::move(elem));
}

void QueryBuilder::note_term(const Term& t) {
  if (const auto* v = std::get_if<Variable>(&t)) known_.insert(v->name);
}

void QueryBuilder::require_not_alias(const std::string& var) const {
  if (aliases_.count(var)) throw Error(ErrorCode::kVarClash, "?" + var + " is already bound by an assignment");
}

void QueryBuilder::require_fresh(const std::string& var) const {
  if (known_.count(var)) throw Error(ErrorCode::kVarClash, "?" + var + " is already in use");
}

std::string QueryBuilder::fresh(std::string_view stem) {
  int& counter = stem == "st" ? statement_counter_ : greater_counter_;
  std::string name;
  do {
    name = std::string(stem) + "_" + std::to_string(++counter);
  } while (known_.count(name));
  return name;
}

void QueryBuilder::add_fact(const Operand& subject, std::string_view property, const Operand& object) {
  Term s = operand_term(subject);
  if (std::holds_alternative<Literal>(s)) throw Error(ErrorCode::kBadTerm, "literal in subject position");
  push(TriplePattern{std::move(s), Predicate::direct(parse_property_id(property)), operand_term(object)});
}

void QueryBuilder::add_quantity(const Operand& entity, std::string_view property, std::string_view new_var) {
  const std::string v = parse_variable(new_var);
  require_not_alias(v);
  add_fact(entity, property, std::string(new_var));
}

void QueryBuilder::add_quantity_with_qualifier(const Operand& entity, std::string_view property,
                                               std::string_view new_var, std::string_view qualifier,
                                               const Operand& qualifier_value) {
  const std::string v = parse_variable(new_var);
  require_not_alias(v);
  const std::string p = parse_property_id(property);
  const std::string q = parse_property_id(qualifier);
  Term e = operand_term(entity);
  Term qv = operand_term(qualifier_value);
  const Variable st{fresh("st")};
  push(TriplePattern{std::move(e), pred(PredicateKind::kStatement, p), st});
  push(TriplePattern{st, pred(PredicateKind::kStatementValue, p), Variable{v}});
  push(TriplePattern{st, pred(PredicateKind::kQualifier, q), std::move(qv)});
}

void QueryBuilder::add_quantity_by_qualifier(const Operand& entity, std::string_view property,
                                             const Operand& main_value, std::string_view qualifier_property,
                                             std::string_view new_var) {
  const std::string v = parse_variable(new_var);
  require_not_alias(v);
  const std::string p = parse_property_id(property);
  const std::string q = parse_property_id(qualifier_property);
  Term e = operand_term(entity);
  Term mv = operand_term(main_value);
  const Variable st{fresh("st")};
  push(TriplePattern{std::move(e), pred(PredicateKind::kStatement, p), st});
  push(TriplePattern{st, pred(PredicateKind::kStatementValue, p), std::move(mv)});
  push(TriplePattern{st, pred(PredicateKind::kQualifier, q), Variable{v}});
}

void QueryBuilder::add_type_constrain(std::string_view type_id, std::string_view new_var) {
  if (!is_entity_id(type_id)) throw bad_term(type_id, "an entity id");
  const std::string v = parse_variable(new_var);
  push(TriplePattern{Variable{v}, Predicate::type_path(), Iri{std::string(strip_prefix(type_id, "wd:"))}});
}

void QueryBuilder::add_filter(const Operand& a, std::string_view op, const Operand& b) {
  const Comparator c = parse_op(op);
  push(Filter{term_expr(a), c, term_expr(b)});
}

void QueryBuilder::add_bind(const ArithmeticExpr& expr, std::string_view var) {
  const std::string v = parse_variable(var);
  require_fresh(v);
  push(Bind{expr.expression(), Variable{v}});
  known_.insert(v);
  aliases_.insert(v);
  bind_answer_ = v;
}

void QueryBuilder::add_bind_text(std::string_view expr, std::string_view var) {
  add_bind(ArithmeticExpr(sparql::parse_expression(expr)), var);
}

void QueryBuilder::add_assignment(const std::vector<std::string>& values, std::string_view new_var) {
  const std::string v = parse_variable(new_var);
  if (values.empty()) throw Error(ErrorCode::kEmptyValues, "VALUES list for ?" + v + " is empty");
  require_fresh(v);
  std::vector<Term> terms;
  for (const auto& s : values) {
    Term t = parse_term_string(s);
    if (std::holds_alternative<Variable>(t)) throw bad_term(s, "a constant");
    terms.push_back(std::move(t));
  }
  push(sparql::ValuesBlock{Variable{v}, std::move(terms)});
  known_.insert(v);
  aliases_.insert(v);
}

void QueryBuilder::add_sub_query(const std::vector<const QueryBuilder*>& queries) {
  std::vector<sparql::SelectQuery> asts;
  for (const QueryBuilder* q : queries) {
    if (!q->has_answer()) throw Error(ErrorCode::kHeadlessSubquery, "subquery has no answer variable");
    asts.push_back(q->to_ast());
  }
  for (std::size_t i = 0; i < asts.size(); ++i) {
    for (const auto& v : sparql::visible_variables(asts[i])) {
      known_.insert(v);
      if (queries[i]->aliases_.count(v)) aliases_.insert(v);
    }
    subqueries_.push_back(std::move(asts[i]));
  }
}

void QueryBuilder::set_order(std::string_view obj, bool descending, std::string_view return_obj,
                             std::int64_t offset, std::optional<std::int64_t> limit) {
  const std::string v = parse_variable(obj);
  if (offset < 0 || (limit && *limit < 0)) throw Error(ErrorCode::kNegativeWindow, "negative offset or limit");
  if (modifiers_.order_by) throw Error(ErrorCode::kHeadAlreadySet, "ordering is already set");
  if (return_obj != "*") parse_variable(return_obj);
  modifiers_.order_by = sparql::OrderBy{Variable{v}, descending};
  if (limit) modifiers_.limit = static_cast<std::uint64_t>(*limit);
  if (offset != 0) modifiers_.offset = static_cast<std::uint64_t>(offset);
  set_answer(return_obj);
}

void QueryBuilder::add_max(std::string_view max_obj, std::string_view return_obj, std::int64_t offset,
                           std::optional<std::int64_t> limit) {
  set_order(max_obj, true, return_obj, offset, limit);
}

void QueryBuilder::add_min(std::string_view min_obj, std::string_view return_obj, std::int64_t offset,
                           std::optional<std::int64_t> limit) {
  set_order(min_obj, false, return_obj, offset, limit);
}

void QueryBuilder::set_aggregate(sparql::AggregateFn fn, std::string_view obj, std::string_view new_var,
                                 std::optional<std::string_view> group_obj) {
  const std::string arg = parse_variable(obj);
  const std::string alias = parse_variable(new_var);
  std::optional<Variable> group;
  if (group_obj) group = Variable{parse_variable(*group_obj)};
  if (head_) throw Error(ErrorCode::kHeadAlreadySet, "query head is already set");
  require_fresh(alias);
  head_ = sparql::AggregateHead{fn, Variable{arg}, Variable{alias}, group};
  if (group) modifiers_.group_by = group;
  known_.insert(alias);
  aliases_.insert(alias);
}

void QueryBuilder::add_count(std::string_view count_obj, std::string_view new_var,
                             std::optional<std::string_view> group_obj) {
  set_aggregate(sparql::AggregateFn::kCount, count_obj, new_var, group_obj);
}

void QueryBuilder::add_sum(std::string_view obj, std::string_view new_var, std::optional<std::string_view> group_obj) {
  set_aggregate(sparql::AggregateFn::kSum, obj, new_var, group_obj);
}

void QueryBuilder::add_avg(std::string_view obj, std::string_view new_var, std::optional<std::string_view> group_obj) {
  set_aggregate(sparql::AggregateFn::kAvg, obj, new_var, group_obj);
}

// rank = 1 + |{ distinct within : within > obj }|. The count runs in an
// ungrouped subquery so that an empty match still yields 0.
void QueryBuilder::add_rank(std::string_view obj, std::string_view within) {
  const std::string o = parse_variable(obj);
  const std::string w = parse_variable(within);
  if (head_ || modifiers_ != sparql::Modifiers{}) {
    throw Error(ErrorCode::kHeadAlreadySet, "add_rank needs a query without head or modifiers");
  }
  require_fresh("rank");
  const std::string greater = fresh("greater");

  sparql::SelectQuery inner;
  inner.head = sparql::AggregateHead{sparql::AggregateFn::kCount, Variable{w}, Variable{greater}, std::nullopt};
  inner.patterns = std::move(patterns_);
  inner.patterns.push_back(Filter{Expression::var(w), Comparator::kGt, Expression::var(o)});
  inner.subqueries = std::move(subqueries_);

  patterns_.clear();
  subqueries_.clear();
  subqueries_.push_back(std::move(inner));
  known_ = {greater};
  aliases_ = {greater};
  bind_answer_.reset();
  add_bind(ArithmeticExpr(Expression::binary(sparql::BinaryOp::kAdd, Expression::var(greater), Expression::number(1))),
           "?rank");
  explicit_answer_ = "rank";
}

void QueryBuilder::add_compare(const Operand& a, std::string_view op, const Operand& b) {
  const Comparator c = parse_op(op);
  if (head_) throw Error(ErrorCode::kHeadAlreadySet, "query head is already set");
  add_bind(ArithmeticExpr(Expression::conditional(c, term_expr(a), term_expr(b))), "?answer");
  head_ = sparql::Projection{false, false, {Variable{"answer"}}};
}

void QueryBuilder::set_answer(std::string_view var) {
  explicit_answer_ = var == "*" ? std::string("*") : parse_variable(var);
}

void QueryBuilder::add_time(const Operand& entity, std::string_view new_var) {
  parse_variable(new_var);
  add_fact(entity, "P585", std::string(new_var));
}

void QueryBuilder::add_start_time(const Operand& entity, std::string_view new_var) {
  parse_variable(new_var);
  add_fact(entity, "P580", std::string(new_var));
}

void QueryBuilder::add_end_time(const Operand& entity, std::string_view new_var) {
  parse_variable(new_var);
  add_fact(entity, "P582", std::string(new_var));
}

bool QueryBuilder::has_answer() const { return head_ || explicit_answer_ || bind_answer_; }

sparql::SelectQuery QueryBuilder::to_ast() const {
  sparql::SelectQuery q;
  if (head_) {
    q.head = *head_;
  } else if (explicit_answer_ && *explicit_answer_ == "*") {
    q.head = sparql::Projection{true, true, {}};
  } else if (explicit_answer_ || bind_answer_) {
    q.head = sparql::Projection{true, false, {Variable{explicit_answer_ ? *explicit_answer_ : *bind_answer_}}};
  } else {
    throw Error(ErrorCode::kMissingAnswer, "no answer variable: call set_answer or an aggregation");
  }
  q.patterns = patterns_;
  q.subqueries = subqueries_;
  q.modifiers = modifiers_;
  return q;
}

std::string QueryBuilder::compile() const { return sparql::emit(to_ast()); }

}  // namespace pyql
