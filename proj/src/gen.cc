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

#include "pyql/gen.h"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pyql/error.h"

namespace pyql {
namespace {

using sparql::Expression;
using sparql::Term;

// rng() % n keeps sequences identical across standard libraries, unlike the
// <random> distributions.
std::size_t pick(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }
bool chance(Rng& rng, double p) { return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p; }

template <class T>
const T& pick_of(Rng& rng, const std::vector<T>& xs) {
  return xs[pick(rng, xs.size())];
}

std::string qid(int n) { return "Q" + std::to_string(n); }

double random_amount(Rng& rng) {
  const double whole = static_cast<double>(1 + pick(rng, 500));
  if (chance(rng, 0.5)) return whole;
  return whole + static_cast<double>(pick(rng, 10)) / 10.0;
}

const std::vector<std::string> kQuantities = {"P2048", "P2044", "P1082", "P2043"};

}  // namespace

KnowledgeBase random_kb(std::uint64_t seed, const RandomKbOptions& o) {
  Rng rng(seed);
  KnowledgeBase kb;
  const int n = std::max(o.entities, o.classes + o.countries + 1);
  const int first_country = o.classes + 1;
  const int first_instance = o.classes + o.countries + 1;
  for (int i = 1; i <= n; ++i) {
    const std::string kind = i < first_country ? "class" : i < first_instance ? "country" : "item";
    kb.add_entity(qid(i), kind + " " + std::to_string(i));
  }
  for (int c = 2; c <= o.classes; ++c) {
    if (chance(rng, 0.8)) kb.add_triple(qid(c), std::string(kSubclassOf), Value::entity(qid(1 + static_cast<int>(pick(rng, c - 1)))));
  }
  for (int i = first_instance; i <= n; ++i) {
    kb.add_triple(qid(i), std::string(kInstanceOf), Value::entity(qid(1 + static_cast<int>(pick(rng, o.classes)))));
    if (chance(rng, 0.1)) {
      kb.add_triple(qid(i), std::string(kInstanceOf), Value::entity(qid(1 + static_cast<int>(pick(rng, o.classes)))));
    }
    if (chance(rng, 0.85)) {
      kb.add_triple(qid(i), "P17", Value::entity(qid(first_country + static_cast<int>(pick(rng, o.countries)))));
    }
    if (i > first_instance && chance(rng, 0.3)) {
      kb.add_triple(qid(i), "P131", Value::entity(qid(first_instance + static_cast<int>(pick(rng, i - first_instance)))));
    }
    for (const auto& p : kQuantities) {
      if (!chance(rng, 0.75)) continue;
      kb.add_triple(qid(i), p, Value::number(random_amount(rng)));
      if (chance(rng, o.multi_value)) kb.add_triple(qid(i), p, Value::number(random_amount(rng)));
    }
  }
  kb.finalize();
  return kb;
}

// ---------------------------------------------------------------------------
// Trees

namespace {

class TreeGen {
 public:
  TreeGen(const KnowledgeBase& kb, Rng& rng, int max_depth) : kb_(kb), rng_(rng), max_depth_(max_depth) {
    std::set<std::string> classes, countries;
    for (const auto& t : kb.triples()) {
      if (t.property == kInstanceOf) classes.insert(t.object.value.as_entity());
      if (t.property == "P17") countries.insert(t.object.value.as_entity());
      if (std::find(kQuantities.begin(), kQuantities.end(), t.property) != kQuantities.end()) {
        values_[t.property].push_back(t.object.value.as_number());
      }
    }
    classes_.assign(classes.begin(), classes.end());
    countries_.assign(countries.begin(), countries.end());
    for (const auto& p : kQuantities) {
      for (const auto& e : kb.entity_ids()) {
        if (kb.objects(e, p).size() == 1) single_[p].push_back(e);
      }
      for (const auto& e : kb.entity_ids()) {
        const auto& up = kb.objects(e, "P131");
        if (up.size() == 1 && kb.objects(up[0].as_entity(), p).size() == 1) two_hop_[p].push_back(e);
      }
    }
    for (const auto& e : kb.entity_ids()) {
      if (!kb.objects(e, "P131").empty()) has_parent_.push_back(kb.objects(e, "P131")[0].as_entity());
    }
    if (classes_.empty()) classes_.push_back("Q1");
    if (countries_.empty()) countries_.push_back("Q1");
  }

  NrqNode root() {
    const double r = unit();
    if (r < 0.4) return arithmetic(1);
    if (r < 0.75) {
      static const std::vector<std::string> ops = {"count", "sum", "avg", "argmax", "argmin"};
      const std::string& op = pick_of(rng_, ops);
      if ((op == "argmax" || op == "argmin") && chance(rng_, 0.5)) {
        return NrqNode::func(op, {NrqNode::des({{quantity(), NrqNode::des(holder_pairs())}})});
      }
      return aggregation(op);
    }
    static const std::vector<std::string> cmps = {"gt", "lt", "ge", "le", "eq"};
    const std::string& op = pick_of(rng_, cmps);
    NrqNode a = numeric(2);
    NrqNode b = op == "eq" && chance(rng_, 0.3) ? a : numeric(2);
    return NrqNode::func(op, {std::move(a), std::move(b)});
  }

 private:
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  const std::string& quantity() { return pick_of(rng_, kQuantities); }
  NrqNode ent(const std::string& id) { return NrqNode::entity(id); }

  NrqNode num() {
    const double whole = static_cast<double>(1 + pick(rng_, 20));
    return NrqNode::number(chance(rng_, 0.6) ? whole : whole + static_cast<double>(pick(rng_, 10)) / 10.0);
  }

  // Pairs describing a set of entities.
  std::vector<std::pair<std::string, NrqNode>> holder_pairs() {
    const double r = unit();
    if (r < 0.5) return {{"^P31", ent(pick_of(rng_, classes_))}};
    if (r < 0.75) return {{"^P17", ent(pick_of(rng_, countries_))}};
    return {{"^P31", ent(pick_of(rng_, classes_))}, {"^P17", ent(pick_of(rng_, countries_))}};
  }

  NrqNode scalar_des() {
    const std::string& p = quantity();
    const double r = unit();
    if (r < 0.7 && !single_[p].empty()) return NrqNode::des({{p, ent(pick_of(rng_, single_[p]))}});
    if (r < 0.9 && !two_hop_[p].empty()) {
      return NrqNode::des({{p, NrqNode::des({{"P131", ent(pick_of(rng_, two_hop_[p]))}})}});
    }
    return NrqNode::des({{p, NrqNode::des(holder_pairs())}});
  }

  NrqNode entity_set() {
    const double r = unit();
    if (r < 0.6) return NrqNode::des(holder_pairs());
    if (r < 0.8 && !has_parent_.empty()) return NrqNode::des({{"^P131", ent(pick_of(rng_, has_parent_))}});
    const std::string& p = quantity();
    if (values_[p].empty()) return NrqNode::des(holder_pairs());
    return NrqNode::des({{"^" + p, NrqNode::number(pick_of(rng_, values_[p]))}});
  }

  NrqNode value_set() { return NrqNode::des({{quantity(), NrqNode::des(holder_pairs())}}); }

  NrqNode aggregation(const std::string& op) {
    if (op == "count") return NrqNode::func(op, {chance(rng_, 0.6) ? entity_set() : value_set()});
    return NrqNode::func(op, {value_set()});
  }

  NrqNode numeric(int level) {
    const double r = unit();
    if (level <= max_depth_) {
      if (r < 0.25) return arithmetic(level);
      if (r < 0.45) {
        static const std::vector<std::string> ops = {"count", "sum", "avg", "argmax", "argmin"};
        return aggregation(pick_of(rng_, ops));
      }
    }
    return unit() < 0.65 ? scalar_des() : num();
  }

  NrqNode arithmetic(int level) {
    static const std::vector<std::string> ops = {"add", "sub", "mul", "div", "abs"};
    const std::string& op = pick_of(rng_, ops);
    const std::size_t k = op == "abs" ? 1 : op == "add" && chance(rng_, 0.3) ? 3 : 2;
    std::vector<NrqNode> args;
    for (std::size_t i = 0; i < k; ++i) args.push_back(numeric(level + 1));
    return NrqNode::func(op, std::move(args));
  }

  const KnowledgeBase& kb_;
  Rng& rng_;
  int max_depth_;
  std::vector<std::string> classes_, countries_, has_parent_;
  std::map<std::string, std::vector<std::string>> single_, two_hop_;
  std::map<std::string, std::vector<double>> values_;
};

}  // namespace

NrqNode random_tree(const KnowledgeBase& kb, Rng& rng, int max_depth) { return TreeGen(kb, rng, max_depth).root(); }

// ---------------------------------------------------------------------------
// Programs

namespace {

const std::vector<std::string> kProps = {"P17", "P19", "P31", "P131", "P2048", "P1082", "P2044", "P585"};
const std::vector<std::string> kCmps = {">", "<", ">=", "<=", "="};

class ProgramGen {
 public:
  explicit ProgramGen(Rng& rng) : rng_(rng) {}

  ProgramIR run() {
    std::vector<std::string> visible;
    int subs = chance(rng_, 0.3) ? 1 + static_cast<int>(pick(rng_, 2)) : 0;
    std::vector<std::string> names;
    for (int i = 1; i <= subs; ++i) {
      const std::string name = "s" + std::to_string(i);
      for (auto& v : object(name, {}, false)) visible.push_back(v);
      names.push_back(name);
    }
    object("q", names, true, visible);
    return std::move(ir_);
  }

 private:
  struct State {
    std::string name;
    std::vector<std::string> bound;
    std::vector<std::string> fresh_only;  // bind/values aliases
    bool has_bind = false;
  };

  std::string fresh() { return "?x_" + std::to_string(++counter_); }
  std::string entity() { return "Q" + std::to_string(1 + pick(rng_, 60)); }

  ProgramArg str(std::string s) { return ProgramArg::string(std::move(s)); }

  ProgramArg number() {
    const double whole = static_cast<double>(pick(rng_, 1000));
    return ProgramArg::num(chance(rng_, 0.5) ? whole : whole + 0.25 * static_cast<double>(1 + pick(rng_, 3)));
  }

  ProgramArg nonzero() {
    return ProgramArg::num(static_cast<double>(1 + pick(rng_, 99)) / (chance(rng_, 0.5) ? 1.0 : 4.0));
  }

  ProgramArg subject(State& s) {
    if (!s.bound.empty() && chance(rng_, 0.6)) return str(pick_of(rng_, s.bound));
    return str(entity());
  }

  ProgramArg operand(State& s) {
    if (!s.bound.empty() && chance(rng_, 0.75)) return str(pick_of(rng_, s.bound));
    return number();
  }

  std::string new_var(State& s) {
    std::string v = fresh();
    s.bound.push_back(v);
    return v;
  }

  void call(State& s, std::string fn, std::vector<ProgramArg> args) {
    ir_.call(s.name, std::move(fn), std::move(args));
  }

  // Emits one object and returns its visible variables.
  std::vector<std::string> object(const std::string& name, const std::vector<std::string>& subs, bool root,
                                  const std::vector<std::string>& visible = {}) {
    State s{name, {}, {}, false};
    ir_.declare(name);
    if (!subs.empty()) {
      std::vector<ProgramArg> refs;
      for (const auto& n : subs) refs.push_back(ProgramArg::object(n));
      call(s, "add_sub_query", std::move(refs));
      s.bound = visible;
    }
    const int n = 1 + static_cast<int>(pick(rng_, 6));
    for (int i = 0; i < n; ++i) pattern(s, s.bound.empty());
    return ending(s, root);
  }

  void pattern(State& s, bool must_bind) {
    const std::size_t kind = must_bind ? 1 + pick(rng_, 4) : pick(rng_, 12);
    switch (kind) {
      case 0: {
        ProgramArg subj = subject(s);
        ProgramArg obj = chance(rng_, 0.6) ? str(new_var(s)) : chance(rng_, 0.5) ? str(entity()) : subject(s);
        return call(s, "add_fact", {subj, str(pick_of(rng_, kProps)), obj});
      }
      case 1: {
        ProgramArg subj = subject(s);
        return call(s, "add_quantity", {subj, str(pick_of(rng_, kProps)), str(new_var(s))});
      }
      case 2: {
        ProgramArg subj = subject(s);
        ProgramArg qual = chance(rng_, 0.4) ? str("\"20" + std::to_string(10 + pick(rng_, 15)) + "-01-01\"^^xsd:dateTime")
                          : chance(rng_, 0.5) ? number()
                                              : str(entity());
        return call(s, "add_quantity_with_qualifier",
                    {subj, str(pick_of(rng_, kProps)), str(new_var(s)), str(pick_of(rng_, kProps)), qual});
      }
      case 3: {
        ProgramArg subj = subject(s);
        ProgramArg main = chance(rng_, 0.5) ? str(entity()) : operand(s);
        return call(s, "add_quantity_by_qualifier",
                    {subj, str(pick_of(rng_, kProps)), main, str(pick_of(rng_, kProps)), str(new_var(s))});
      }
      case 4: {
        ProgramArg v = !s.bound.empty() && chance(rng_, 0.3) ? str(pick_of(rng_, s.bound)) : str(new_var(s));
        return call(s, "add_type_constrain", {str(entity()), v});
      }
      case 5: {
        static const std::vector<std::string> fns = {"add_time", "add_start_time", "add_end_time"};
        ProgramArg subj = subject(s);
        return call(s, pick_of(rng_, fns), {subj, str(new_var(s))});
      }
      case 6: {
        const std::string v = fresh();
        std::vector<ProgramArg> items;
        const std::size_t k = 1 + pick(rng_, 3);
        for (std::size_t i = 0; i < k; ++i) items.push_back(chance(rng_, 0.7) ? str("wd:" + entity()) : number());
        s.bound.push_back(v);
        return call(s, "add_assignment", {ProgramArg::list(std::move(items)), str(v)});
      }
      case 7:
      case 8: return call(s, "add_filter", {str(pick_of(rng_, s.bound)), str(pick_of(rng_, kCmps)), operand(s)});
      case 9: {
        static const std::vector<std::string> fns = {"add", "sub", "mul", "div", "add_ceil", "sub_floor", "mul_ceil",
                                                     "div_floor", "abs"};
        const std::string& fn = pick_of(rng_, fns);
        std::vector<ProgramArg> args;
        if (fn == "abs") {
          args.push_back(operand(s));
        } else {
          const std::size_t k = fn.rfind("add", 0) == 0 && chance(rng_, 0.3) ? 3 : 2;
          for (std::size_t i = 0; i < k; ++i) args.push_back(operand(s));
          if (fn.rfind("div", 0) == 0) args[1] = chance(rng_, 0.5) ? nonzero() : str(pick_of(rng_, s.bound));
        }
        args.push_back(str(new_var(s)));
        s.has_bind = true;
        return call(s, fn, std::move(args));
      }
      default: {
        const std::string text = sparql::emit_expression(expression(s, 2));
        s.has_bind = true;
        return call(s, "add_bind", {str(text), str(new_var(s))});
      }
    }
  }

  Expression expression(State& s, int depth) {
    if (depth == 0 || chance(rng_, 0.3)) {
      ProgramArg a = operand(s);
      return a.kind == ProgramArg::Kind::kNumber ? Expression::number(a.number) : Expression::var(a.text.substr(1));
    }
    if (chance(rng_, 0.15)) {
      static const sparql::UnaryOp ops[] = {sparql::UnaryOp::kAbs, sparql::UnaryOp::kCeil, sparql::UnaryOp::kFloor};
      return Expression::unary(ops[pick(rng_, 3)], expression(s, depth - 1));
    }
    static const sparql::BinaryOp ops[] = {sparql::BinaryOp::kAdd, sparql::BinaryOp::kSub, sparql::BinaryOp::kMul};
    return Expression::binary(ops[pick(rng_, 3)], expression(s, depth - 1), expression(s, depth - 1));
  }

  std::vector<std::string> ending(State& s, bool root) {
    const std::string& any = pick_of(rng_, s.bound);
    const std::size_t kind = pick(rng_, root ? 6 : 4);
    switch (kind) {
      case 0:
        call(s, "set_answer", {str(any)});
        return {any};
      case 1: {
        const bool star = root && chance(rng_, 0.3);
        const std::string ret = star ? "*" : pick_of(rng_, s.bound);
        std::vector<ProgramArg> args = {str(any)};
        const double offset = static_cast<double>(pick(rng_, 3));
        const double limit = static_cast<double>(1 + pick(rng_, 3));
        if (chance(rng_, 0.5)) {
          args.push_back(str(ret));
          if (chance(rng_, 0.5)) {
            args.push_back(ProgramArg::num(offset));
            args.push_back(ProgramArg::num(limit));
          }
        } else {
          args.push_back(ProgramArg::string(ret).named("return_obj"));
          if (chance(rng_, 0.5)) args.push_back(ProgramArg::num(offset).named("offset"));
          if (chance(rng_, 0.5)) args.push_back(ProgramArg::num(limit).named("limit"));
        }
        call(s, chance(rng_, 0.5) ? "add_max" : "add_min", std::move(args));
        return {ret};
      }
      case 2: {
        static const std::vector<std::string> fns = {"add_count", "add_sum", "add_avg"};
        const std::string alias = fresh();
        std::vector<ProgramArg> args = {str(any), str(alias)};
        std::vector<std::string> vis = {alias};
        if (s.bound.size() > 1 && chance(rng_, 0.4)) {
          std::string g = pick_of(rng_, s.bound);
          while (g == any) g = pick_of(rng_, s.bound);
          args.push_back(chance(rng_, 0.5) ? str(g) : ProgramArg::string(g).named("group_obj"));
          vis.push_back(g);
        }
        call(s, pick_of(rng_, fns), std::move(args));
        return vis;
      }
      case 3:
        if (s.has_bind) return {};
        call(s, "set_answer", {str(any)});
        return {any};
      case 4:
        call(s, "add_rank", {str(any), str(pick_of(rng_, s.bound))});
        return {"?rank"};
      default:
        call(s, "add_compare", {operand(s), str(pick_of(rng_, kCmps)), operand(s)});
        return {"?answer"};
    }
  }

  Rng& rng_;
  ProgramIR ir_;
  int counter_ = 0;
};

}  // namespace

ProgramIR random_program(Rng& rng) { return ProgramGen(rng).run(); }

// ---------------------------------------------------------------------------
// Queries

namespace {

class QueryGen {
 public:
  explicit QueryGen(Rng& rng) : rng_(rng) {}

  sparql::SelectQuery query(int depth) {
    sparql::SelectQuery q;
    std::vector<std::string> bound;
    if (depth > 0 && chance(rng_, 0.3)) {
      const std::size_t k = 1 + pick(rng_, 2);
      for (std::size_t i = 0; i < k; ++i) {
        q.subqueries.push_back(query(depth - 1));
        for (const auto& v : sparql::visible_variables(q.subqueries.back())) bound.push_back(v);
      }
    }
    const std::size_t n = 1 + pick(rng_, 6);
    q.patterns.push_back(triple(bound, true));
    for (std::size_t i = 1; i < n; ++i) q.patterns.push_back(element(bound));

    if (chance(rng_, 0.65)) {
      sparql::Projection p;
      p.distinct = chance(rng_, 0.8);
      if (chance(rng_, 0.15)) {
        p.star = true;
      } else {
        std::vector<std::string> pool = bound;
        const std::size_t k = 1 + pick(rng_, std::min<std::size_t>(3, pool.size()));
        for (std::size_t i = 0; i < k; ++i) {
          const std::size_t j = pick(rng_, pool.size());
          p.vars.push_back({pool[j]});
          pool.erase(pool.begin() + static_cast<long>(j));
        }
      }
      q.head = p;
      if (chance(rng_, 0.4)) q.modifiers.order_by = sparql::OrderBy{{pick_of(rng_, bound)}, chance(rng_, 0.5)};
    } else {
      static const sparql::AggregateFn fns[] = {sparql::AggregateFn::kCount, sparql::AggregateFn::kSum,
                                                sparql::AggregateFn::kAvg, sparql::AggregateFn::kMin,
                                                sparql::AggregateFn::kMax};
      sparql::AggregateHead h;
      h.fn = fns[pick(rng_, 5)];
      h.arg = {pick_of(rng_, bound)};
      h.alias = {fresh()};
      if (chance(rng_, 0.4)) {
        h.group = sparql::Variable{pick_of(rng_, bound)};
        q.modifiers.group_by = h.group;
      }
      if (chance(rng_, 0.4)) {
        const std::string ov = h.group && chance(rng_, 0.5) ? h.group->name : h.alias.name;
        q.modifiers.order_by = sparql::OrderBy{{ov}, chance(rng_, 0.5)};
      }
      q.head = h;
    }
    if (chance(rng_, 0.4)) {
      q.modifiers.limit = pick(rng_, 6);
      if (chance(rng_, 0.5)) q.modifiers.offset = pick(rng_, 4);
    }
    return q;
  }

 private:
  std::string fresh() {
    static const std::vector<std::string> stems = {"v", "x", "st", "ans", "_t", "Val"};
    return stems[pick(rng_, stems.size())] + "_" + std::to_string(++counter_);
  }

  Term literal() {
    const std::size_t r = pick(rng_, 5);
    if (r == 0) return sparql::Literal{Value::date(static_cast<std::int64_t>(pick(rng_, 60000)) - 20000)};
    if (r == 1) {
      static const std::vector<std::string> texts = {"a", "hello world", "say \"hi\"", "back\\slash", ""};
      return sparql::Literal{Value::text(pick_of(rng_, texts))};
    }
    static const std::vector<double> special = {0.1, -3, 1e21, 2.5e-7, 1234567.875, -0.5, 42};
    if (r == 2) return sparql::Literal{Value::number(pick_of(rng_, special))};
    return sparql::Literal{Value::number(static_cast<double>(pick(rng_, 2000)) - 1000)};
  }

  Term iri() { return sparql::Iri{"Q" + std::to_string(1 + pick(rng_, 500))}; }

  Term var_term(std::vector<std::string>& bound, bool allow_new) {
    if (allow_new && (bound.empty() || chance(rng_, 0.5))) {
      bound.push_back(fresh());
      return sparql::Variable{bound.back()};
    }
    return sparql::Variable{pick_of(rng_, bound)};
  }

  sparql::PatternElem triple(std::vector<std::string>& bound, bool must_bind) {
    static const sparql::PredicateKind kinds[] = {
        sparql::PredicateKind::kDirect, sparql::PredicateKind::kStatement, sparql::PredicateKind::kStatementValue,
        sparql::PredicateKind::kQualifier, sparql::PredicateKind::kTypePath};
    sparql::TriplePattern t;
    t.predicate.kind = kinds[pick(rng_, 5)];
    if (t.predicate.kind != sparql::PredicateKind::kTypePath) t.predicate.id = "P" + std::to_string(1 + pick(rng_, 3000));
    t.subject = must_bind || chance(rng_, 0.7) ? var_term(bound, true) : iri();
    const std::size_t r = pick(rng_, 3);
    if (r == 0) {
      t.object = var_term(bound, true);
    } else if (r == 1 || t.predicate.kind == sparql::PredicateKind::kTypePath) {
      t.object = iri();
    } else {
      t.object = literal();
    }
    return t;
  }

  Expression expr(const std::vector<std::string>& bound, int depth) {
    if (depth == 0 || chance(rng_, 0.35)) {
      if (chance(rng_, 0.6)) return Expression::var(pick_of(rng_, bound));
      return Expression::term(chance(rng_, 0.8) ? Term{sparql::Literal{Value::number(static_cast<double>(pick(rng_, 100)) - 20)}}
                                                : literal());
    }
    if (chance(rng_, 0.2)) {
      static const sparql::UnaryOp ops[] = {sparql::UnaryOp::kAbs, sparql::UnaryOp::kCeil, sparql::UnaryOp::kFloor};
      return Expression::unary(ops[pick(rng_, 3)], expr(bound, depth - 1));
    }
    static const sparql::BinaryOp ops[] = {sparql::BinaryOp::kAdd, sparql::BinaryOp::kSub, sparql::BinaryOp::kMul,
                                           sparql::BinaryOp::kDiv};
    return Expression::binary(ops[pick(rng_, 4)], expr(bound, depth - 1), expr(bound, depth - 1));
  }

  sparql::Comparator cmp() { return static_cast<sparql::Comparator>(pick(rng_, 5)); }

  sparql::PatternElem element(std::vector<std::string>& bound) {
    switch (pick(rng_, 5)) {
      case 0:
      case 1: return triple(bound, false);
      case 2: return sparql::Filter{expr(bound, 2), cmp(), expr(bound, 2)};
      case 3: {
        Expression e = chance(rng_, 0.3) ? Expression::conditional(cmp(), expr(bound, 1), expr(bound, 1)) : expr(bound, 3);
        bound.push_back(fresh());
        return sparql::Bind{std::move(e), {bound.back()}};
      }
      default: {
        sparql::ValuesBlock vb;
        const std::size_t k = 1 + pick(rng_, 3);
        for (std::size_t i = 0; i < k; ++i) vb.terms.push_back(chance(rng_, 0.5) ? iri() : literal());
        bound.push_back(fresh());
        vb.var = {bound.back()};
        return vb;
      }
    }
  }

  Rng& rng_;
  int counter_ = 0;
};

}  // namespace

sparql::SelectQuery random_query(Rng& rng, int max_depth) { return QueryGen(rng).query(max_depth); }

FuzzReport fuzz_programs(std::size_t n, std::uint64_t seed) {
  FuzzReport report;
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const ProgramIR ir = random_program(rng);
    const std::string text = serialize_program(ir);
    ++report.total;
    std::string reason;
    try {
      if (!(parse_program(text) == ir)) {
        reason = "program text does not parse back to the same statements";
      } else {
        const Elaboration e = elaborate(ir);
        if (!(sparql::parse(e.sparql) == e.query)) reason = "SPARQL does not parse back to the same query";
      }
    } catch (const Error& e) {
      reason = std::string(error_code_name(e.code())) + ": " + e.message();
      if (e.statement() > 0) reason = "stmt " + std::to_string(e.statement()) + ": " + reason;
    }
    if (reason.empty()) {
      ++report.valid;
    } else {
      report.failures.push_back(reason + "\n" + text);
    }
  }
  return report;
}

}  // namespace pyql
