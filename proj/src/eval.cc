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

#include "pyql/eval.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "pyql/error.h"

namespace pyql {
namespace {

using sparql::Comparator;
using sparql::Expression;
using sparql::PredicateKind;
using sparql::SelectQuery;
using sparql::Term;

struct ValueLess {
  bool operator()(const Value& a, const Value& b) const { return compare_values(a, b) < 0; }
};

std::weak_ordering compare_bindings(const Binding& a, const Binding& b) {
  auto ia = a.begin(), ib = b.begin();
  for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
    if (auto c = ia->first <=> ib->first; c != 0) return c;
    if (auto c = compare_values(ia->second, ib->second); c != 0) return c;
  }
  return (ia == a.end()) == (ib == b.end()) ? std::weak_ordering::equivalent
         : ia == a.end()                    ? std::weak_ordering::less
                                            : std::weak_ordering::greater;
}

void make_distinct(std::vector<Binding>& rows) {
  std::sort(rows.begin(), rows.end(), [](const Binding& a, const Binding& b) { return compare_bindings(a, b) < 0; });
  rows.erase(std::unique(rows.begin(), rows.end(),
                         [](const Binding& a, const Binding& b) { return compare_bindings(a, b) == 0; }),
             rows.end());
}

std::weak_ordering compare_rows(const Row& a, const Row& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (auto c = compare_cells(a[i], b[i]); c != 0) return c;
  }
  return a.size() <=> b.size();
}

Value term_value(const Term& t) {
  if (const auto* iri = std::get_if<sparql::Iri>(&t)) return Value::entity(iri->id);
  return std::get<sparql::Literal>(t).value;
}

// A pattern position after substituting the current row.
struct Slot {
  const std::string* var = nullptr;  // unbound variable
  std::optional<Value> value;        // concrete
};

Slot resolve(const Term& t, const Binding& row) {
  if (const auto* v = std::get_if<sparql::Variable>(&t)) {
    auto it = row.find(v->name);
    if (it != row.end()) return {nullptr, it->second};
    return {&v->name, std::nullopt};
  }
  return {nullptr, term_value(t)};
}

class Evaluator {
 public:
  Evaluator(const KnowledgeBase& kb, const EvalOptions& options) : kb_(kb), options_(options) {}

  ResultSet run(const SelectQuery& q) {
    std::vector<Binding> rows = solve_group(q);
    ResultSet out;
    if (const auto* agg = std::get_if<sparql::AggregateHead>(&q.head)) {
      std::optional<std::string> group;
      if (agg->group) group = agg->group->name;
      out.columns.push_back(agg->alias.name);
      if (group) out.columns.push_back(*group);
      std::vector<Binding> agg_rows;
      for (auto& r : eval_aggregate(agg->fn, rows, agg->arg.name, group)) {
        Binding b;
        if (r.value) b[agg->alias.name] = *r.value;
        if (group && r.group) b[*group] = *r.group;
        agg_rows.push_back(std::move(b));
      }
      project(q, agg_rows, out);
      return out;
    }
    const auto& proj = std::get<sparql::Projection>(q.head);
    if (proj.star) {
      out.columns = sparql::bound_variables(q);
    } else {
      for (const auto& v : proj.vars) {
        if (std::find(out.columns.begin(), out.columns.end(), v.name) == out.columns.end()) {
          out.columns.push_back(v.name);
        }
      }
    }
    project(q, rows, out);
    return out;
  }

 private:
  void project(const SelectQuery& q, std::vector<Binding>& rows, ResultSet& out) {
    auto to_row = [&](const Binding& b) {
      Row r;
      for (const auto& c : out.columns) {
        auto it = b.find(c);
        r.push_back(it == b.end() ? Cell{} : Cell{it->second});
      }
      return r;
    };
    std::vector<Row> projected;
    if (const auto& ob = q.modifiers.order_by) {
      struct Keyed {
        Cell key;
        Row row;
        const Binding* full;
      };
      std::vector<Keyed> keyed;
      keyed.reserve(rows.size());
      for (const auto& b : rows) {
        auto it = b.find(ob->var.name);
        keyed.push_back({it == b.end() ? Cell{} : Cell{it->second}, to_row(b), &b});
      }
      const bool desc = ob->descending;
      std::stable_sort(keyed.begin(), keyed.end(), [&](const Keyed& a, const Keyed& b) {
        auto c = compare_cells(a.key, b.key);
        if (c != 0) return desc ? c > 0 : c < 0;
        if (auto r = compare_rows(a.row, b.row); r != 0) return r < 0;
        return compare_bindings(*a.full, *b.full) < 0;
      });
      for (auto& k : keyed) {
        if (std::none_of(projected.begin(), projected.end(),
                         [&](const Row& r) { return compare_rows(r, k.row) == 0; })) {
          projected.push_back(std::move(k.row));
        }
      }
    } else {
      for (const auto& b : rows) projected.push_back(to_row(b));
      std::sort(projected.begin(), projected.end(), [](const Row& a, const Row& b) { return compare_rows(a, b) < 0; });
      projected.erase(std::unique(projected.begin(), projected.end(),
                                  [](const Row& a, const Row& b) { return compare_rows(a, b) == 0; }),
                      projected.end());
    }
    const std::size_t offset = q.modifiers.offset.value_or(0);
    std::size_t begin = std::min<std::size_t>(offset, projected.size());
    std::size_t end = projected.size();
    if (q.modifiers.limit) end = std::min<std::size_t>(end, begin + *q.modifiers.limit);
    out.rows.assign(std::make_move_iterator(projected.begin() + begin),
                    std::make_move_iterator(projected.begin() + end));
  }

  std::vector<Binding> solve_group(const SelectQuery& q) {
    std::vector<Binding> rows{Binding{}};
    for (const auto& sub : q.subqueries) {
      ResultSet sr = Evaluator(kb_, options_).run(sub);
      std::vector<Binding> sub_rows;
      for (const auto& r : sr.rows) {
        Binding b;
        for (std::size_t i = 0; i < sr.columns.size(); ++i) {
          if (r[i]) b[sr.columns[i]] = *r[i];
        }
        sub_rows.push_back(std::move(b));
      }
      rows = join(rows, sub_rows);
    }
    std::vector<const sparql::Filter*> filters;
    for (const auto& p : q.patterns) {
      if (const auto* t = std::get_if<sparql::TriplePattern>(&p)) {
        rows = match_triple(rows, *t);
      } else if (const auto* f = std::get_if<sparql::Filter>(&p)) {
        filters.push_back(f);
      } else if (const auto* b = std::get_if<sparql::Bind>(&p)) {
        for (auto& row : rows) {
          if (auto v = eval_expression(b->expr, row, options_); v && !row.count(b->var.name)) {
            row[b->var.name] = *v;
          }
        }
      } else {
        const auto& vb = std::get<sparql::ValuesBlock>(p);
        std::vector<Binding> block;
        for (const auto& t : vb.terms) block.push_back(Binding{{vb.var.name, term_value(t)}});
        rows = join(rows, block);
      }
    }
    if (!filters.empty()) {
      std::erase_if(rows, [&](const Binding& row) {
        for (const auto* f : filters) {
          auto l = eval_expression(f->lhs, row, options_);
          auto r = eval_expression(f->rhs, row, options_);
          if (!l || !r) return true;
          auto ok = compare(*l, f->cmp, *r, options_);
          if (!ok || !*ok) return true;
        }
        return false;
      });
    }
    make_distinct(rows);
    return rows;
  }

  static std::vector<Binding> join(const std::vector<Binding>& left, const std::vector<Binding>& right) {
    std::vector<Binding> out;
    for (const auto& l : left) {
      for (const auto& r : right) {
        bool ok = true;
        for (const auto& [k, v] : r) {
          auto it = l.find(k);
          if (it != l.end() && !(it->second == v)) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        Binding merged = l;
        merged.insert(r.begin(), r.end());
        out.push_back(std::move(merged));
      }
    }
    return out;
  }

  // Extends `row` with subject/object candidates, honoring a repeated variable.
  static void extend(std::vector<Binding>& out, const Binding& row, const Slot& s, const Slot& o, const Value& sv,
                     const Value& ov) {
    if (s.value && !(*s.value == sv)) return;
    if (o.value && !(*o.value == ov)) return;
    Binding b = row;
    if (s.var) b[*s.var] = sv;
    if (o.var) {
      if (s.var && *s.var == *o.var && !(sv == ov)) return;
      b[*o.var] = ov;
    }
    out.push_back(std::move(b));
  }

  std::vector<Binding> match_triple(const std::vector<Binding>& rows, const sparql::TriplePattern& t) {
    std::vector<Binding> out;
    const std::string& pid = t.predicate.id;
    for (const auto& row : rows) {
      const Slot s = resolve(t.subject, row);
      const Slot o = resolve(t.object, row);
      switch (t.predicate.kind) {
        case PredicateKind::kDirect:
          if (s.value) {
            if (!s.value->is_entity()) break;
            for (const Value& ov : kb_.objects(s.value->as_entity(), pid)) extend(out, row, s, o, *s.value, ov);
          } else {
            for (const auto& [sid, ov] : kb_.property_pairs(pid)) extend(out, row, s, o, Value::entity(sid), ov);
          }
          break;
        case PredicateKind::kTypePath:
          if (s.value) {
            if (!s.value->is_entity()) break;
            for (const auto& ty : kb_.types_of_transitive(s.value->as_entity())) {
              extend(out, row, s, o, *s.value, Value::entity(ty));
            }
          } else if (o.value) {
            if (!o.value->is_entity()) break;
            for (const auto& e : kb_.instances_of_transitive(o.value->as_entity())) {
              extend(out, row, s, o, Value::entity(e), *o.value);
            }
          } else {
            std::set<std::string> subjects;
            for (const auto& [sid, _] : kb_.property_pairs(kInstanceOf)) subjects.insert(sid);
            for (const auto& sid : subjects) {
              for (const auto& ty : kb_.types_of_transitive(sid)) {
                extend(out, row, s, o, Value::entity(sid), Value::entity(ty));
              }
            }
          }
          break;
        case PredicateKind::kStatement:
          if (s.value) {
            if (!s.value->is_entity()) break;
            for (const auto& st : kb_.statements_of(s.value->as_entity(), pid)) {
              extend(out, row, s, o, *s.value, Value::entity(st));
            }
          } else {
            for (const auto& st : kb_.statements_with_property(pid)) {
              extend(out, row, s, o, Value::entity(kb_.statement(st)->subject), Value::entity(st));
            }
          }
          break;
        case PredicateKind::kStatementValue:
          if (s.value) {
            if (!s.value->is_entity()) break;
            const Statement* st = kb_.statement(s.value->as_entity());
            if (st && st->property == pid) extend(out, row, s, o, *s.value, st->value.value);
          } else {
            for (const auto& id : kb_.statements_with_property(pid)) {
              extend(out, row, s, o, Value::entity(id), kb_.statement(id)->value.value);
            }
          }
          break;
        case PredicateKind::kQualifier:
          if (s.value) {
            if (!s.value->is_entity()) break;
            const Statement* st = kb_.statement(s.value->as_entity());
            if (!st) break;
            auto it = st->qualifiers.find(pid);
            if (it != st->qualifiers.end()) extend(out, row, s, o, *s.value, it->second.value);
          } else {
            for (const auto& st : kb_.statements()) {
              auto it = st.qualifiers.find(pid);
              if (it != st.qualifiers.end()) extend(out, row, s, o, Value::entity(st.id), it->second.value);
            }
          }
          break;
      }
    }
    return out;
  }

  const KnowledgeBase& kb_;
  const EvalOptions& options_;
};

std::optional<Value> arith(sparql::BinaryOp op, const Value& a, const Value& b) {
  if (a.is_date() && b.is_date() && op == sparql::BinaryOp::kSub) {
    return Value::number(static_cast<double>(a.as_date() - b.as_date()));
  }
  if (!a.is_number() || !b.is_number()) return std::nullopt;
  const double x = a.as_number(), y = b.as_number();
  double r = 0;
  switch (op) {
    case sparql::BinaryOp::kAdd: r = x + y; break;
    case sparql::BinaryOp::kSub: r = x - y; break;
    case sparql::BinaryOp::kMul: r = x * y; break;
    case sparql::BinaryOp::kDiv:
      if (y == 0) return std::nullopt;
      r = x / y;
      break;
  }
  if (!std::isfinite(r)) return std::nullopt;
  return Value::number(r);
}

}  // namespace

std::optional<bool> compare(const Value& a, Comparator cmp, const Value& b, const EvalOptions& options) {
  std::weak_ordering ord = std::weak_ordering::equivalent;
  if (a.is_number() && b.is_number()) {
    const double x = a.as_number(), y = b.as_number();
    if (cmp == Comparator::kEq) {
      if (options.eq_epsilon > 0) return std::fabs(x - y) <= options.eq_epsilon;
      return x == y;
    }
    ord = compare_values(a, b);
  } else if (a.is_date() && b.is_date()) {
    ord = compare_values(a, b);
  } else if ((a.is_entity() && b.is_entity()) || (a.is_text() && b.is_text())) {
    if (cmp != Comparator::kEq) return std::nullopt;
    return a == b;
  } else {
    return std::nullopt;
  }
  switch (cmp) {
    case Comparator::kGt: return ord > 0;
    case Comparator::kLt: return ord < 0;
    case Comparator::kGe: return ord >= 0;
    case Comparator::kLe: return ord <= 0;
    case Comparator::kEq: return ord == 0;
  }
  return std::nullopt;
}

std::optional<Value> eval_expression(const Expression& expr, const Binding& row, const EvalOptions& options) {
  return std::visit(
      [&](const auto& n) -> std::optional<Value> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Term>) {
          if (const auto* v = std::get_if<sparql::Variable>(&n)) {
            auto it = row.find(v->name);
            if (it == row.end()) return std::nullopt;
            return it->second;
          }
          return term_value(n);
        } else if constexpr (std::is_same_v<T, sparql::UnaryExpr>) {
          auto a = eval_expression(*n.arg, row, options);
          if (!a || !a->is_number()) return std::nullopt;
          const double x = a->as_number();
          switch (n.op) {
            case sparql::UnaryOp::kAbs: return Value::number(std::fabs(x));
            case sparql::UnaryOp::kCeil: return Value::number(std::ceil(x));
            case sparql::UnaryOp::kFloor: return Value::number(std::floor(x));
          }
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, sparql::BinaryExpr>) {
          auto a = eval_expression(*n.lhs, row, options);
          auto b = eval_expression(*n.rhs, row, options);
          if (!a || !b) return std::nullopt;
          return arith(n.op, *a, *b);
        } else {
          auto a = eval_expression(*n.lhs, row, options);
          auto b = eval_expression(*n.rhs, row, options);
          if (!a || !b) return std::nullopt;
          auto r = compare(*a, n.cmp, *b, options);
          if (!r) return std::nullopt;
          return Value::boolean(*r);
        }
      },
      expr.node);
}

std::vector<AggregateRow> eval_aggregate(sparql::AggregateFn fn, const std::vector<Binding>& rows,
                                         const std::string& arg, const std::optional<std::string>& group_var) {
  struct CellLess {
    bool operator()(const Cell& a, const Cell& b) const { return compare_cells(a, b) < 0; }
  };
  std::map<Cell, std::set<Value, ValueLess>, CellLess> groups;
  if (!group_var) groups[Cell{}];
  for (const auto& r : rows) {
    Cell key;
    if (group_var) {
      auto g = r.find(*group_var);
      if (g != r.end()) key = g->second;
    }
    auto& bucket = groups[key];
    auto it = r.find(arg);
    if (it != r.end()) bucket.insert(it->second);
  }
  std::vector<AggregateRow> out;
  for (const auto& [key, values] : groups) {
    AggregateRow row{key, std::nullopt};
    switch (fn) {
      case sparql::AggregateFn::kCount:
        row.value = Value::number(static_cast<double>(values.size()));
        break;
      case sparql::AggregateFn::kSum:
      case sparql::AggregateFn::kAvg: {
        double sum = 0;
        bool numeric = true;
        for (const auto& v : values) {
          if (!v.is_number()) {
            numeric = false;
            break;
          }
          sum += v.as_number();
        }
        if (!numeric) break;
        if (fn == sparql::AggregateFn::kSum) {
          row.value = Value::number(sum);
        } else if (!values.empty()) {
          row.value = Value::number(sum / static_cast<double>(values.size()));
        }
        break;
      }
      case sparql::AggregateFn::kMin:
        if (!values.empty()) row.value = *values.begin();
        break;
      case sparql::AggregateFn::kMax:
        if (!values.empty()) row.value = *values.rbegin();
        break;
    }
    out.push_back(std::move(row));
  }
  return out;
}

ResultSet evaluate(const SelectQuery& query, const KnowledgeBase& kb, const EvalOptions& options) {
  return Evaluator(kb, options).run(query);
}

Value unique_answer(const ResultSet& result) {
  if (result.rows.size() != 1 || result.columns.size() != 1) {
    const long n = static_cast<long>(result.rows.size());
    std::string msg = std::to_string(n) + " rows";
    if (result.columns.size() != 1) msg += ", " + std::to_string(result.columns.size()) + " columns";
    throw Error(ErrorCode::kNonUniqueAnswer, msg).with_count(n);
  }
  if (!result.rows[0][0]) throw Error(ErrorCode::kUnbound, "answer ?" + result.columns[0] + " is unbound");
  return *result.rows[0][0];
}

Json result_to_json(const ResultSet& result) {
  Json j;
  j["columns"] = result.columns;
  Json rows = Json::array();
  for (const auto& r : result.rows) {
    Json row = Json::array();
    for (const auto& c : r) row.push_back(cell_to_json(c));
    rows.push_back(row);
  }
  j["rows"] = rows;
  if (result.rows.size() == 1 && result.columns.size() == 1 && result.rows[0][0]) {
    j["answer"] = answer_to_json(*result.rows[0][0]);
  }
  return j;
}

}  // namespace pyql
