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

#include "pyql/nrq.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "pyql/error.h"

namespace pyql {
namespace {

using Kind = NrqNode::Kind;
using sparql::Diagnostic;

struct ValueLess {
  bool operator()(const Value& a, const Value& b) const { return compare_values(a, b) < 0; }
};
using ValueSet = std::set<Value, ValueLess>;

bool is_agg(std::string_view op) { return nrq_category(op) == OpCategory::kAggregation; }
bool is_cmp(std::string_view op) { return nrq_category(op) == OpCategory::kComparison; }

bool is_property(std::string_view r) {
  return r.size() >= 2 && r[0] == 'P' &&
         std::all_of(r.begin() + 1, r.end(), [](char c) { return c >= '0' && c <= '9'; });
}
bool inverse(std::string_view rel) { return !rel.empty() && rel[0] == '^'; }
std::string_view base_rel(std::string_view rel) { return inverse(rel) ? rel.substr(1) : rel; }

std::string_view cmp_symbol(std::string_view op) {
  if (op == "gt") return ">";
  if (op == "lt") return "<";
  if (op == "ge") return ">=";
  if (op == "le") return "<=";
  return "=";
}

// ---------------------------------------------------------------------------
// Validation

class Validator {
 public:
  std::vector<Diagnostic> run(const NrqNode& root) {
    if (root.kind != Kind::kFunc) add("RootNotFunction", "root");
    node(root, "root", true, 0);
    return std::move(out_);
  }

 private:
  void add(std::string rule, std::string where) { out_.push_back({std::move(rule), std::move(where)}); }

  void node(const NrqNode& n, const std::string& at, bool root, int des_depth) {
    switch (n.kind) {
      case Kind::kNum:
        if (!std::isfinite(n.num)) add("NonFiniteNumber", at);
        return;
      case Kind::kEnt:
        if (n.ent.size() < 2 || n.ent[0] != 'Q' || !is_property("P" + n.ent.substr(1))) add("BadEntity", at);
        return;
      case Kind::kDes: des(n, at, des_depth + 1); return;
      case Kind::kFunc: func(n, at, root); return;
    }
  }

  void des(const NrqNode& n, const std::string& at, int depth) {
    if (depth > 2) add("DescriptionDepth", at);
    if (n.rels.empty()) add("EmptyDescription", at);
    if (n.rels.size() != n.vars.size()) {
      add("MalformedDescription", at);
      return;
    }
    for (std::size_t i = 0; i < n.rels.size(); ++i) {
      const std::string where = at + ".des[" + std::to_string(i) + "]";
      const std::string& rel = n.rels[i];
      const NrqNode& v = n.vars[i];
      if (!is_property(base_rel(rel))) add("BadRelation", where);
      if (rel == "^P31" && v.kind != Kind::kEnt) add("TypePathNeedsEntity", where);
      if (!inverse(rel) && v.kind == Kind::kNum) add("LiteralSubject", where);
      node(v, where, false, v.kind == Kind::kDes ? depth : 0);
    }
  }

  void func(const NrqNode& n, const std::string& at, bool root) {
    const OpCategory cat = nrq_category(n.op);
    const int k = static_cast<int>(n.args.size());
    if (cat == OpCategory::kNone) {
      add("UnknownOperator", n.op);
    } else {
      const bool ok = n.op == "add"  ? k >= 2
                      : n.op == "abs" ? k == 1
                      : is_agg(n.op)  ? k == 1
                                      : k == 2;
      if (!ok) add("ArityError", n.op + "," + std::to_string(k));
    }
    if (cat == OpCategory::kComparison && !root) add("ComparisonNotAtRoot", at);
    for (int i = 0; i < k; ++i) {
      const NrqNode& a = n.args[i];
      const std::string where = at + ".args[" + std::to_string(i) + "]";
      if (a.kind == Kind::kEnt) add("EntityArgument", where);
      if (cat == OpCategory::kAggregation && a.kind != Kind::kDes) add("AggregateNeedsDescription", where);
      node(a, where, false, 0);
    }
  }

  std::vector<Diagnostic> out_;
};

// ---------------------------------------------------------------------------
// Interpreter

class Interpreter {
 public:
  explicit Interpreter(const KnowledgeBase& kb) : kb_(kb) {}

  Value root(const NrqNode& n) {
    if (n.kind == Kind::kFunc && (n.op == "argmax" || n.op == "argmin") && entity_shape(n.args[0])) {
      return arg_entity(n);
    }
    return func(n);
  }

  static bool entity_shape(const NrqNode& d) {
    return d.kind == Kind::kDes && d.rels.size() == 1 && !inverse(d.rels[0]) && d.vars[0].kind == Kind::kDes;
  }

 private:
  // The entity whose `rel` value is extreme; ties go to the smallest id.
  Value arg_entity(const NrqNode& n) {
    const bool want_max = n.op == "argmax";
    const NrqNode& d = n.args[0];
    const ValueSet holders = des(d.vars[0]);
    std::optional<Value> best_value;
    std::optional<Value> best_entity;
    for (const auto& t : kb_.triples()) {
      if (t.property != d.rels[0] || !holders.count(Value::entity(t.subject))) continue;
      const Value& v = t.object.value;
      const Value e = Value::entity(t.subject);
      bool better = !best_value;
      if (!better) {
        const auto c = compare_values(v, *best_value);
        better = want_max ? c > 0 : c < 0;
        if (c == 0) better = compare_values(e, *best_entity) < 0;
      }
      if (better) {
        best_value = v;
        best_entity = e;
      }
    }
    if (!best_entity) throw Error(ErrorCode::kUnbound, n.op + " over an empty description");
    return *best_entity;
  }

  Value scalar(const NrqNode& n) {
    switch (n.kind) {
      case Kind::kNum: return Value::number(n.num);
      case Kind::kFunc: return func(n);
      case Kind::kDes: {
        const ValueSet s = des(n);
        if (s.size() != 1) {
          throw Error(ErrorCode::kNonUniqueOperand, "description has " + std::to_string(s.size()) + " values")
              .with_count(static_cast<long>(s.size()));
        }
        return *s.begin();
      }
      case Kind::kEnt: return Value::entity(n.ent);
    }
    return Value();
  }

  static double number_of(const Value& v, std::string_view op) {
    if (!v.is_number()) throw Error(ErrorCode::kTypeError, std::string(op) + " on " + std::string(v.kind_name()));
    return v.as_number();
  }

  static Value checked(double r) {
    if (!std::isfinite(r)) throw Error(ErrorCode::kTypeError, "non-finite result");
    return Value::number(r);
  }

  Value func(const NrqNode& n) {
    if (is_agg(n.op)) return aggregate(n);
    std::vector<Value> a;
    for (const auto& x : n.args) a.push_back(scalar(x));
    if (is_cmp(n.op)) {
      const Value& l = a[0];
      const Value& r = a[1];
      std::weak_ordering ord = std::weak_ordering::equivalent;
      if ((l.is_number() && r.is_number()) || (l.is_date() && r.is_date())) {
        ord = compare_values(l, r);
      } else if (n.op == "eq" && ((l.is_entity() && r.is_entity()) || (l.is_text() && r.is_text()))) {
        return Value::boolean(l == r);
      } else {
        throw Error(ErrorCode::kTypeError, "cannot compare " + std::string(l.kind_name()) + " with " +
                                               std::string(r.kind_name()));
      }
      if (n.op == "gt") return Value::boolean(ord > 0);
      if (n.op == "lt") return Value::boolean(ord < 0);
      if (n.op == "ge") return Value::boolean(ord >= 0);
      if (n.op == "le") return Value::boolean(ord <= 0);
      return Value::boolean(ord == 0);
    }
    if (n.op == "abs") return Value::number(std::fabs(number_of(a[0], "abs")));
    if (n.op == "sub" && a[0].is_date() && a[1].is_date()) {
      return Value::number(static_cast<double>(a[0].as_date() - a[1].as_date()));
    }
    double acc = number_of(a[0], n.op);
    for (std::size_t i = 1; i < a.size(); ++i) {
      const double y = number_of(a[i], n.op);
      if (n.op == "add") acc += y;
      if (n.op == "sub") acc -= y;
      if (n.op == "mul") acc *= y;
      if (n.op == "div") {
        if (y == 0) throw Error(ErrorCode::kDivByZero, "division by zero");
        acc /= y;
      }
    }
    return checked(acc);
  }

  Value aggregate(const NrqNode& n) {
    const ValueSet s = des(n.args[0]);
    if (n.op == "count") return Value::number(static_cast<double>(s.size()));
    if (n.op == "argmax" || n.op == "argmin") {
      if (s.empty()) throw Error(ErrorCode::kUnbound, n.op + " over an empty description");
      return n.op == "argmax" ? *s.rbegin() : *s.begin();
    }
    double sum = 0;
    for (const auto& v : s) sum += number_of(v, n.op);
    if (n.op == "sum") return checked(sum);
    if (s.empty()) throw Error(ErrorCode::kUnbound, "avg over an empty description");
    return checked(sum / static_cast<double>(s.size()));
  }

  ValueSet var_values(const NrqNode& v) {
    switch (v.kind) {
      case Kind::kEnt: return {Value::entity(v.ent)};
      case Kind::kNum: return {Value::number(v.num)};
      case Kind::kDes: return des(v);
      case Kind::kFunc: return {func(v)};
    }
    return {};
  }

  ValueSet des(const NrqNode& d) {
    std::optional<ValueSet> acc;
    for (std::size_t i = 0; i < d.rels.size(); ++i) {
      ValueSet s = pair_values(d.rels[i], var_values(d.vars[i]));
      if (!acc) {
        acc = std::move(s);
        continue;
      }
      ValueSet keep;
      for (const auto& x : *acc) {
        if (s.count(x)) keep.insert(x);
      }
      acc = std::move(keep);
    }
    return acc ? *acc : ValueSet{};
  }

  ValueSet pair_values(const std::string& rel, const ValueSet& ys) {
    ValueSet out;
    if (rel == "^P31") {
      // Types reaching ys through P279*, found by fixpoint over the triples.
      ValueSet types = ys;
      for (bool grew = true; grew;) {
        grew = false;
        for (const auto& t : kb_.triples()) {
          if (t.property == kSubclassOf && types.count(t.object.value) && types.insert(Value::entity(t.subject)).second) {
            grew = true;
          }
        }
      }
      for (const auto& t : kb_.triples()) {
        if (t.property == kInstanceOf && types.count(t.object.value)) out.insert(Value::entity(t.subject));
      }
      return out;
    }
    const std::string_view p = base_rel(rel);
    for (const auto& t : kb_.triples()) {
      if (t.property != p) continue;
      if (inverse(rel)) {
        if (ys.count(t.object.value)) out.insert(Value::entity(t.subject));
      } else if (ys.count(Value::entity(t.subject))) {
        out.insert(t.object.value);
      }
    }
    return out;
  }

  const KnowledgeBase& kb_;
};

// ---------------------------------------------------------------------------
// Lowering

class Lowerer {
 public:
  explicit Lowerer(const LowerOptions& options) : options_(options) {}

  ProgramIR run(const NrqNode& root) {
    Obj q{"q", {}};
    if (is_cmp(root.op)) {
      ProgramArg a = scalar(root.args[0], q);
      ProgramArg b = scalar(root.args[1], q);
      if (options_.swap_operands) std::swap(a, b);
      q.call("add_compare", {a, ProgramArg::string(std::string(cmp_symbol(root.op))), b});
    } else if (is_agg(root.op)) {
      aggregate(root, q, true);
    } else {
      scalar(root, q);
    }
    flush(q);
    return std::move(out_);
  }

 private:
  struct Obj {
    std::string name;
    std::vector<Call> calls;
    void call(std::string fn, std::vector<ProgramArg> args) { calls.push_back({name, std::move(fn), std::move(args)}); }
  };

  std::string fresh(char stem) { return std::string("?") + stem + "_" + std::to_string(++counter_); }

  void flush(Obj& o) {
    out_.declare(o.name);
    for (auto& c : o.calls) out_.statements.emplace_back(std::move(c));
  }

  ProgramArg scalar(const NrqNode& n, Obj& o) {
    switch (n.kind) {
      case Kind::kNum: return ProgramArg::num(n.num);
      case Kind::kEnt: return ProgramArg::string(n.ent);
      case Kind::kDes: return ProgramArg::string(des(n, o));
      case Kind::kFunc: break;
    }
    if (is_agg(n.op)) {
      Obj s{"s" + std::to_string(++objects_), {}};
      const std::string v = aggregate(n, s, false);
      flush(s);
      o.call("add_sub_query", {ProgramArg::object(s.name)});
      return ProgramArg::string(v);
    }
    std::vector<ProgramArg> args;
    for (const auto& a : n.args) args.push_back(scalar(a, o));
    if (options_.swap_operands && args.size() == 2) std::swap(args[0], args[1]);
    const std::string v = fresh('v');
    args.push_back(ProgramArg::string(v));
    o.call(n.op, std::move(args));
    return ProgramArg::string(v);
  }

  // Aggregation placed in `o`; returns the variable carrying the result.
  std::string aggregate(const NrqNode& n, Obj& o, bool root) {
    const NrqNode& d = n.args[0];
    if (n.op == "argmax" || n.op == "argmin") {
      if (root && Interpreter::entity_shape(d)) {
        const std::string e = des(d.vars[0], o);
        const std::string v = fresh('v');
        o.call("add_quantity", {ProgramArg::string(e), ProgramArg::string(d.rels[0]), ProgramArg::string(v)});
        o.call(n.op == "argmax" ? "add_max" : "add_min", {ProgramArg::string(v), ProgramArg::string(e)});
        return e;
      }
      const std::string x = des(d, o);
      o.call(n.op == "argmax" ? "add_max" : "add_min", {ProgramArg::string(x), ProgramArg::string(x)});
      return x;
    }
    const std::string x = des(d, o);
    const std::string v = fresh('v');
    o.call("add_" + n.op, {ProgramArg::string(x), ProgramArg::string(v)});
    return v;
  }

  ProgramArg var(const NrqNode& n, Obj& o) {
    if (n.kind == Kind::kDes) return ProgramArg::string(des(n, o));
    return scalar(n, o);
  }

  std::string des(const NrqNode& d, Obj& o) {
    const std::string x = fresh('e');
    bool bound = false;
    for (std::size_t i = 0; i < d.rels.size(); ++i) {
      const std::string& rel = d.rels[i];
      const ProgramArg y = var(d.vars[i], o);
      const ProgramArg xs = ProgramArg::string(x);
      if (rel == "^P31") {
        o.call("add_type_constrain", {y, xs});
      } else if (inverse(rel)) {
        o.call("add_fact", {xs, ProgramArg::string(std::string(base_rel(rel))), y});
      } else {
        o.call(bound ? "add_fact" : "add_quantity", {y, ProgramArg::string(rel), xs});
        bound = true;
      }
    }
    return x;
  }

  const LowerOptions& options_;
  ProgramIR out_;
  int counter_ = 0;
  int objects_ = 0;
};

void tree_stats(const NrqNode& n, OperatorStats& s) {
  if (n.kind == Kind::kFunc) {
    s.add(n.op);
    for (const auto& a : n.args) tree_stats(a, s);
  }
  for (const auto& v : n.vars) tree_stats(v, s);
}

void expression_stats(const sparql::Expression& e, OperatorStats& s) {
  static constexpr std::string_view kBinary[] = {"add", "sub", "mul", "div"};
  static constexpr std::string_view kCmp[] = {"gt", "lt", "ge", "le", "eq"};
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, sparql::UnaryExpr>) {
          if (n.op == sparql::UnaryOp::kAbs) s.add("abs");
          expression_stats(*n.arg, s);
        } else if constexpr (std::is_same_v<T, sparql::BinaryExpr>) {
          s.add(kBinary[static_cast<int>(n.op)]);
          expression_stats(*n.lhs, s);
          expression_stats(*n.rhs, s);
        } else if constexpr (std::is_same_v<T, sparql::ConditionalExpr>) {
          s.add(kCmp[static_cast<int>(n.cmp)]);
          expression_stats(*n.lhs, s);
          expression_stats(*n.rhs, s);
        }
      },
      e.node);
}

std::string cmp_name(const std::string& symbol) {
  if (symbol == ">") return "gt";
  if (symbol == "<") return "lt";
  if (symbol == ">=") return "ge";
  if (symbol == "<=") return "le";
  return "eq";
}

Error bad_json(const std::string& what) { return Error(ErrorCode::kParseError, "tree JSON: " + what); }

}  // namespace

NrqNode NrqNode::func(std::string op, std::vector<NrqNode> args) {
  NrqNode n;
  n.kind = Kind::kFunc;
  n.op = std::move(op);
  n.args = std::move(args);
  return n;
}

NrqNode NrqNode::number(double x) {
  NrqNode n;
  n.kind = Kind::kNum;
  n.num = x;
  return n;
}

NrqNode NrqNode::entity(std::string id) {
  NrqNode n;
  n.kind = Kind::kEnt;
  n.ent = std::move(id);
  return n;
}

NrqNode NrqNode::des(std::vector<std::pair<std::string, NrqNode>> pairs) {
  NrqNode n;
  n.kind = Kind::kDes;
  for (auto& [rel, v] : pairs) {
    n.rels.push_back(std::move(rel));
    n.vars.push_back(std::move(v));
  }
  return n;
}

const std::vector<std::string_view>& nrq_operators() {
  static const std::vector<std::string_view> ops = {"add",    "sub",    "mul", "div", "abs", "count", "argmin", "argmax",
                                                    "avg",    "sum",    "gt",  "lt",  "ge",  "le",    "eq"};
  return ops;
}

OpCategory nrq_category(std::string_view op) {
  const auto& ops = nrq_operators();
  auto it = std::find(ops.begin(), ops.end(), op);
  if (it == ops.end()) return OpCategory::kNone;
  const auto i = it - ops.begin();
  return i < 5 ? OpCategory::kArithmetic : i < 10 ? OpCategory::kAggregation : OpCategory::kComparison;
}

Json tree_to_json(const NrqNode& n) {
  switch (n.kind) {
    case Kind::kNum: return Json{{"num", n.num}};
    case Kind::kEnt: return Json{{"ent", n.ent}};
    case Kind::kDes: {
      Json pairs = Json::array();
      for (std::size_t i = 0; i < n.rels.size(); ++i) pairs.push_back(Json::array({n.rels[i], tree_to_json(n.vars[i])}));
      return Json{{"des", pairs}};
    }
    case Kind::kFunc: {
      Json args = Json::array();
      for (const auto& a : n.args) args.push_back(tree_to_json(a));
      return Json{{"func", n.op}, {"args", args}};
    }
  }
  return Json();
}

NrqNode tree_from_json(const Json& j) {
  if (!j.is_object() || j.size() == 0) throw bad_json("expected an object");
  if (j.contains("func")) {
    if (!j["func"].is_string()) throw bad_json("\"func\" must be a string");
    if (!j.contains("args") || !j["args"].is_array()) throw bad_json("\"args\" must be an array");
    std::vector<NrqNode> args;
    for (const auto& a : j["args"]) args.push_back(tree_from_json(a));
    return NrqNode::func(j["func"].get<std::string>(), std::move(args));
  }
  if (j.contains("num")) {
    if (!j["num"].is_number()) throw bad_json("\"num\" must be a number");
    return NrqNode::number(j["num"].get<double>());
  }
  if (j.contains("ent")) {
    if (!j["ent"].is_string()) throw bad_json("\"ent\" must be a string");
    return NrqNode::entity(j["ent"].get<std::string>());
  }
  if (j.contains("des")) {
    if (!j["des"].is_array()) throw bad_json("\"des\" must be an array");
    std::vector<std::pair<std::string, NrqNode>> pairs;
    for (const auto& p : j["des"]) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_string()) throw bad_json("description pairs are [rel, var]");
      pairs.emplace_back(p[0].get<std::string>(), tree_from_json(p[1]));
    }
    return NrqNode::des(std::move(pairs));
  }
  throw bad_json("unknown node " + j.dump());
}

std::vector<Diagnostic> validate_tree(const NrqNode& node) { return Validator().run(node); }

ProgramIR lower_to_pyql(const NrqNode& node, const LowerOptions& options) {
  const auto diags = validate_tree(node);
  if (!diags.empty()) {
    std::string msg = "invalid tree:";
    for (const auto& d : diags) msg += " " + d.to_string();
    throw Error(ErrorCode::kInvalidAst, msg);
  }
  return Lowerer(options).run(node);
}

Value interpret(const NrqNode& node, const KnowledgeBase& kb) {
  if (node.kind == NrqNode::Kind::kNum) return Value::number(node.num);  // a bare leaf is its own value
  const auto diags = validate_tree(node);
  if (!diags.empty()) throw Error(ErrorCode::kInvalidAst, "invalid tree: " + diags.front().to_string());
  return Interpreter(kb).root(node);
}

void OperatorStats::add(std::string_view op, int n) {
  switch (nrq_category(op)) {
    case OpCategory::kArithmetic: arithmetic += n; break;
    case OpCategory::kAggregation: aggregation += n; break;
    case OpCategory::kComparison: comparison += n; break;
    case OpCategory::kNone: return;
  }
  per_operator[std::string(op)] += n;
}

OperatorStats& OperatorStats::operator+=(const OperatorStats& o) {
  for (const auto& [op, n] : o.per_operator) add(op, n);
  return *this;
}

OperatorStats operator_stats(const NrqNode& node) {
  OperatorStats s;
  tree_stats(node, s);
  return s;
}

OperatorStats operator_stats(const ProgramIR& ir) {
  OperatorStats s;
  for (const auto& st : ir.statements) {
    const auto* c = std::get_if<Call>(&st);
    if (!c) continue;
    const std::string& f = c->function;
    if (f == "add_bind") {
      if (!c->args.empty() && c->args[0].kind == ProgramArg::Kind::kString) {
        try {
          expression_stats(sparql::parse_expression(c->args[0].text), s);
        } catch (const Error&) {
        }
      }
    } else if (f == "add_max") {
      s.add("argmax");
    } else if (f == "add_min") {
      s.add("argmin");
    } else if (f == "add_avg" || f == "add_sum" || f == "add_count") {
      s.add(f.substr(4));
    } else if (f == "add_rank") {
      s.add("count");
    } else if (f == "add_compare" || f == "add_filter") {
      if (c->args.size() > 1) s.add(cmp_name(c->args[1].text));
    } else if (const FunctionInfo* info = find_function(f); info && info->category == OpCategory::kArithmetic) {
      s.add(f.substr(0, f.find('_')));
    }
  }
  return s;
}

bool answers_agree(const Value& a, const Value& b, double rel_tol) {
  if (a.is_number() && b.is_number()) {
    const double x = a.as_number(), y = b.as_number();
    if (x == y) return true;
    return std::fabs(x - y) <= rel_tol * std::max(std::fabs(x), std::fabs(y));
  }
  return a == b;
}

}  // namespace pyql
