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

#include <algorithm>
#include <cmath>
#include <set>

#include "pyql/error.h"
#include "pyql/sparql.h"

namespace pyql::sparql {
namespace {

std::string escape_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

std::string_view binary_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::kAdd: return "+";
    case BinaryOp::kSub: return "-";
    case BinaryOp::kMul: return "*";
    case BinaryOp::kDiv: return "/";
  }
  return "?";
}

std::string_view unary_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::kAbs: return "ABS";
    case UnaryOp::kCeil: return "CEIL";
    case UnaryOp::kFloor: return "FLOOR";
  }
  return "?";
}

// Binary sub-expressions are parenthesized so the printed text is
// unambiguous without precedence rules.
std::string emit_operand(const Expression& e) {
  if (std::holds_alternative<BinaryExpr>(e.node)) return "(" + emit_expression(e) + ")";
  return emit_expression(e);
}

std::string var_text(const Variable& v) { return "?" + v.name; }

class Validator {
 public:
  std::vector<Diagnostic> run(const SelectQuery& q, const std::string& where) {
    check_query(q, where);
    return std::move(diags_);
  }

 private:
  void add(std::string rule, std::string element) {
    diags_.push_back({std::move(rule), std::move(element)});
  }

  std::string at(const std::string& where, const std::string& what) {
    return where.empty() ? what : where + "." + what;
  }

  void check_var(const Variable& v, const std::string& where) {
    if (!is_valid_variable_name(v.name)) add("BadVariableName", at(where, "?" + v.name));
  }

  void check_term(const Term& t, const std::string& where) {
    if (const auto* v = std::get_if<Variable>(&t)) {
      check_var(*v, where);
    } else if (const auto* iri = std::get_if<Iri>(&t)) {
      const bool ok = !iri->id.empty() &&
                      std::all_of(iri->id.begin(), iri->id.end(), [](char c) {
                        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
                      });
      if (!ok) add("BadIri", at(where, "wd:" + iri->id));
    } else {
      const Value& val = std::get<Literal>(t).value;
      if (val.is_number() && !std::isfinite(val.as_number())) add("NonFiniteNumber", where);
    }
  }

  void check_expression(const Expression& e, const std::string& where) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Term>) {
            check_term(n, where);
          } else if constexpr (std::is_same_v<T, UnaryExpr>) {
            check_expression(*n.arg, where);
          } else {
            check_expression(*n.lhs, where);
            check_expression(*n.rhs, where);
          }
        },
        e.node);
  }

  void check_query(const SelectQuery& q, const std::string& where) {
    std::set<std::string> bound;
    for (std::size_t i = 0; i < q.subqueries.size(); ++i) {
      const std::string sub_where = at(where, "subquery[" + std::to_string(i) + "]");
      check_query(q.subqueries[i], sub_where);
      for (auto& v : visible_variables(q.subqueries[i])) bound.insert(v);
    }
    for (std::size_t i = 0; i < q.patterns.size(); ++i) {
      const std::string pw = at(where, "pattern[" + std::to_string(i) + "]");
      std::visit(
          [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, TriplePattern>) {
              check_term(p.subject, pw);
              check_term(p.object, pw);
              if (p.predicate.kind == PredicateKind::kTypePath) {
                if (!p.predicate.id.empty()) add("BadTypePath", pw);
                if (std::holds_alternative<Literal>(p.object)) add("BadTypePath", pw);
              } else {
                const std::string& id = p.predicate.id;
                const bool ok = id.size() >= 2 && id[0] == 'P' &&
                                std::all_of(id.begin() + 1, id.end(),
                                            [](char c) { return c >= '0' && c <= '9'; });
                if (!ok) add("BadPropertyId", at(pw, id));
              }
              for (const Term* t : {&p.subject, &p.object}) {
                if (const auto* v = std::get_if<Variable>(t)) bound.insert(v->name);
              }
            } else if constexpr (std::is_same_v<T, Filter>) {
              check_expression(p.lhs, pw);
              check_expression(p.rhs, pw);
            } else if constexpr (std::is_same_v<T, Bind>) {
              check_expression(p.expr, pw);
              check_var(p.var, pw);
              if (bound.count(p.var.name)) add("BindVarClash", at(pw, var_text(p.var)));
              bound.insert(p.var.name);
            } else {
              check_var(p.var, pw);
              if (p.terms.empty()) add("EmptyValues", at(pw, var_text(p.var)));
              for (const auto& t : p.terms) {
                check_term(t, pw);
                if (std::holds_alternative<Variable>(t)) add("VariableInValues", pw);
              }
              bound.insert(p.var.name);
            }
          },
          q.patterns[i]);
    }

    std::set<std::string> head_names;
    if (const auto* proj = std::get_if<Projection>(&q.head)) {
      if (!proj->star && proj->vars.empty()) add("EmptyProjection", at(where, "head"));
      if (proj->star && !proj->vars.empty()) add("StarWithVariables", at(where, "head"));
      for (const auto& v : proj->vars) {
        check_var(v, where);
        if (!bound.count(v.name)) add("UnboundHeadVar", at(where, var_text(v)));
      }
      if (q.modifiers.group_by) add("GroupWithoutAggregate", at(where, var_text(*q.modifiers.group_by)));
    } else {
      const auto& agg = std::get<AggregateHead>(q.head);
      check_var(agg.arg, where);
      check_var(agg.alias, where);
      if (!bound.count(agg.arg.name)) add("UnboundAggregateArg", at(where, var_text(agg.arg)));
      if (bound.count(agg.alias.name)) add("AliasClash", at(where, var_text(agg.alias)));
      head_names.insert(agg.alias.name);
      if (agg.group) {
        check_var(*agg.group, where);
        if (!bound.count(agg.group->name)) add("UnboundGroupVar", at(where, var_text(*agg.group)));
        head_names.insert(agg.group->name);
      }
      if (agg.group != q.modifiers.group_by) add("GroupMismatch", at(where, "head"));
    }
    if (q.modifiers.order_by) {
      const auto& ov = q.modifiers.order_by->var;
      check_var(ov, where);
      const bool aggregate = std::holds_alternative<AggregateHead>(q.head);
      const bool ok = aggregate ? head_names.count(ov.name) > 0 : bound.count(ov.name) > 0;
      if (!ok) add("UnboundOrderVar", at(where, var_text(ov)));
    }
    if (q.modifiers.offset && !q.modifiers.limit) add("OffsetWithoutLimit", at(where, "modifiers"));
  }

  std::vector<Diagnostic> diags_;
};

void emit_into(const SelectQuery& q, std::string& out) {
  out += "SELECT ";
  if (const auto* proj = std::get_if<Projection>(&q.head)) {
    if (proj->distinct) out += "DISTINCT ";
    if (proj->star) {
      out += "*";
    } else {
      for (std::size_t i = 0; i < proj->vars.size(); ++i) {
        if (i) out += ' ';
        out += var_text(proj->vars[i]);
      }
    }
  } else {
    const auto& agg = std::get<AggregateHead>(q.head);
    out += "(";
    out += aggregate_name(agg.fn);
    out += "(DISTINCT " + var_text(agg.arg) + ") AS " + var_text(agg.alias) + ")";
    if (agg.group) out += " " + var_text(*agg.group);
  }
  out += " {\n";
  for (const auto& sub : q.subqueries) {
    out += "{\n";
    emit_into(sub, out);
    out += "}\n";
  }
  for (const auto& p : q.patterns) {
    out += emit_pattern(p);
    out += '\n';
  }
  out += "}\n";
  const auto& m = q.modifiers;
  if (m.group_by) out += "GROUP BY " + var_text(*m.group_by) + "\n";
  if (m.order_by) {
    out += m.order_by->descending ? "ORDER BY DESC(" : "ORDER BY ASC(";
    out += var_text(m.order_by->var) + ")\n";
  }
  if (m.limit) out += "LIMIT " + std::to_string(*m.limit) + "\n";
  if (m.offset) out += "OFFSET " + std::to_string(*m.offset) + "\n";
}

void collect_bound(const SelectQuery& q, std::vector<std::string>& out) {
  auto push = [&](const std::string& name) {
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  };
  for (const auto& sub : q.subqueries) {
    for (const auto& v : visible_variables(sub)) push(v);
  }
  for (const auto& p : q.patterns) {
    if (const auto* t = std::get_if<TriplePattern>(&p)) {
      if (const auto* v = std::get_if<Variable>(&t->subject)) push(v->name);
      if (const auto* v = std::get_if<Variable>(&t->object)) push(v->name);
    } else if (const auto* b = std::get_if<Bind>(&p)) {
      push(b->var.name);
    } else if (const auto* vb = std::get_if<ValuesBlock>(&p)) {
      push(vb->var.name);
    }
  }
}

}  // namespace

std::string_view comparator_symbol(Comparator c) {
  switch (c) {
    case Comparator::kGt: return ">";
    case Comparator::kLt: return "<";
    case Comparator::kGe: return ">=";
    case Comparator::kLe: return "<=";
    case Comparator::kEq: return "=";
  }
  return "?";
}

std::optional<Comparator> comparator_from_symbol(std::string_view s) {
  if (s == ">") return Comparator::kGt;
  if (s == "<") return Comparator::kLt;
  if (s == ">=") return Comparator::kGe;
  if (s == "<=") return Comparator::kLe;
  if (s == "=") return Comparator::kEq;
  return std::nullopt;
}

std::string_view aggregate_name(AggregateFn fn) {
  switch (fn) {
    case AggregateFn::kCount: return "COUNT";
    case AggregateFn::kSum: return "SUM";
    case AggregateFn::kAvg: return "AVG";
    case AggregateFn::kMin: return "MIN";
    case AggregateFn::kMax: return "MAX";
  }
  return "?";
}

bool is_valid_variable_name(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  if (!alpha(name[0])) return false;
  return std::all_of(name.begin() + 1, name.end(), [&](char c) { return alpha(c) || (c >= '0' && c <= '9'); });
}

std::string emit_term(const Term& term) {
  if (const auto* v = std::get_if<Variable>(&term)) return var_text(*v);
  if (const auto* iri = std::get_if<Iri>(&term)) return "wd:" + iri->id;
  const Value& val = std::get<Literal>(term).value;
  if (val.is_number()) return format_number(val.as_number());
  if (val.is_date()) return "\"" + format_iso_date(val.as_date()) + "\"^^xsd:dateTime";
  if (val.is_entity()) return "wd:" + val.as_entity();
  return escape_string(val.as_text());
}

std::string emit_predicate(const Predicate& p) {
  switch (p.kind) {
    case PredicateKind::kDirect: return "wdt:" + p.id;
    case PredicateKind::kStatement: return "p:" + p.id;
    case PredicateKind::kStatementValue: return "ps:" + p.id;
    case PredicateKind::kQualifier: return "pq:" + p.id;
    case PredicateKind::kTypePath: return "wdt:P31/wdt:P279*";
  }
  return "";
}

std::string emit_expression(const Expression& expr) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Term>) {
          return emit_term(n);
        } else if constexpr (std::is_same_v<T, UnaryExpr>) {
          return std::string(unary_name(n.op)) + "(" + emit_expression(*n.arg) + ")";
        } else if constexpr (std::is_same_v<T, BinaryExpr>) {
          return emit_operand(*n.lhs) + " " + std::string(binary_symbol(n.op)) + " " + emit_operand(*n.rhs);
        } else {
          return "IF(" + emit_operand(*n.lhs) + " " + std::string(comparator_symbol(n.cmp)) + " " +
                 emit_operand(*n.rhs) + ", \"TRUE\", \"FALSE\")";
        }
      },
      expr.node);
}

std::string emit_pattern(const PatternElem& elem) {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, TriplePattern>) {
          return emit_term(p.subject) + " " + emit_predicate(p.predicate) + " " + emit_term(p.object) + ".";
        } else if constexpr (std::is_same_v<T, Filter>) {
          return "FILTER(" + emit_operand(p.lhs) + " " + std::string(comparator_symbol(p.cmp)) + " " +
                 emit_operand(p.rhs) + ").";
        } else if constexpr (std::is_same_v<T, Bind>) {
          return "BIND( (" + emit_expression(p.expr) + ") AS " + var_text(p.var) + " )";
        } else {
          std::string out = "Values " + var_text(p.var) + " {";
          for (std::size_t i = 0; i < p.terms.size(); ++i) {
            if (i) out += ' ';
            out += emit_term(p.terms[i]);
          }
          return out + "}";
        }
      },
      elem);
}

std::vector<Diagnostic> validate(const SelectQuery& query) { return Validator().run(query, ""); }

std::string emit(const SelectQuery& query) {
  auto diags = validate(query);
  if (!diags.empty()) {
    std::string msg;
    for (const auto& d : diags) {
      if (!msg.empty()) msg += ", ";
      msg += d.to_string();
    }
    throw Error(ErrorCode::kInvalidAst, msg);
  }
  std::string out;
  emit_into(query, out);
  return out;
}

std::vector<std::string> visible_variables(const SelectQuery& query) {
  if (const auto* proj = std::get_if<Projection>(&query.head)) {
    if (proj->star) return bound_variables(query);
    std::vector<std::string> out;
    for (const auto& v : proj->vars) out.push_back(v.name);
    return out;
  }
  const auto& agg = std::get<AggregateHead>(query.head);
  std::vector<std::string> out{agg.alias.name};
  if (agg.group) out.push_back(agg.group->name);
  return out;
}

std::vector<std::string> bound_variables(const SelectQuery& query) {
  std::vector<std::string> out;
  collect_bound(query, out);
  return out;
}

const std::string& prefix_header() {
  static const std::string kHeader =
      "PREFIX wd: <http://www.wikidata.org/entity/>\n"
      "PREFIX wdt: <http://www.wikidata.org/prop/direct/>\n"
      "PREFIX p: <http://www.wikidata.org/prop/>\n"
      "PREFIX ps: <http://www.wikidata.org/prop/statement/>\n"
      "PREFIX pq: <http://www.wikidata.org/prop/qualifier/>\n"
      "PREFIX xsd: <http://www.w3.org/2001/XMLSchema#>\n";
  return kHeader;
}

}  // namespace pyql::sparql
