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

#include "pyql/program.h"

#include <cmath>
#include <map>
#include <optional>
#include <set>

#include "pyql/error.h"

namespace pyql {
namespace {

using Kind = ProgramArg::Kind;
constexpr OpCategory kNone = OpCategory::kNone;
constexpr OpCategory kArith = OpCategory::kArithmetic;
constexpr OpCategory kAgg = OpCategory::kAggregation;
constexpr OpCategory kCmp = OpCategory::kComparison;

std::vector<FunctionInfo> build_table() {
  std::vector<FunctionInfo> t = {
      {"add_fact", 3, 3, {"subject", "predicate", "object"}, -1, kNone},
      {"add_quantity", 3, 3, {"entity", "qprop", "new_var"}, -1, kNone},
      {"add_quantity_with_qualifier", 5, 5, {"entity", "qprop", "new_var", "qual_prop", "qual_value"}, -1, kNone},
      {"add_quantity_by_qualifier", 5, 5, {"entity", "prop", "main_value", "qual_qprop", "new_var"}, -1, kNone},
      {"add_type_constrain", 2, 2, {"type_id", "new_var"}, -1, kNone},
      {"add_filter", 3, 3, {"a", "op", "b"}, -1, kCmp},
      {"add_bind", 2, 2, {"equation", "var_name"}, -1, kArith},
      {"add_assignment", 2, 2, {"var_list", "new_var"}, -1, kNone},
      {"add_sub_query", 1, -1, {"sub_query"}, -1, kNone},
      {"add_max", 1, 4, {"max_obj", "return_obj", "offset", "limit"}, 1, kAgg},
      {"add_min", 1, 4, {"min_obj", "return_obj", "offset", "limit"}, 1, kAgg},
      {"add_avg", 2, 3, {"obj", "new_var", "group_obj"}, 2, kAgg},
      {"add_sum", 2, 3, {"obj", "new_var", "group_obj"}, 2, kAgg},
      {"add_count", 2, 3, {"count_obj", "new_var", "group_obj"}, 2, kAgg},
      {"add_rank", 2, 2, {"obj", "within"}, -1, kAgg},
      {"add_compare", 3, 3, {"obj1", "op", "obj2"}, -1, kCmp},
      {"set_answer", 1, 1, {"var"}, -1, kNone},
      {"add_time", 2, 2, {"entity", "new_var"}, -1, kNone},
      {"add_start_time", 2, 2, {"entity", "new_var"}, -1, kNone},
      {"add_end_time", 2, 2, {"entity", "new_var"}, -1, kNone},
      {"abs", 2, 2, {"x", "new_var"}, -1, kArith},
  };
  for (std::string_view base : {"add", "sub", "mul", "div", "add_ceil", "sub_ceil", "mul_ceil", "div_ceil", "add_floor",
                                "sub_floor", "mul_floor", "div_floor"}) {
    const bool variadic = base.substr(0, 3) == "add";
    t.push_back({base, 3, variadic ? -1 : 3, {"x", "y", "new_var"}, -1, kArith});
  }
  return t;
}

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { kEnd, kIdent, kString, kNumber, kPunct };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip();
      Token t;
      t.line = line_;
      t.col = col_;
      if (i_ >= s_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = s_[i_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::kIdent;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) t.text += get();
      } else if (c == '"') {
        t.kind = Tok::kString;
        t.text = string_body(t);
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '.') {
        t.kind = Tok::kNumber;
        t.text = number_text(t);
      } else if (c == '(' || c == ')' || c == '[' || c == ']' || c == ',' || c == '=' || c == '.') {
        t.kind = Tok::kPunct;
        t.text = std::string(1, get());
      } else {
        throw Error(ErrorCode::kSyntaxError, std::string("unexpected character '") + c + "'").at(t.line, t.col);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char get() {
    const char c = s_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip() {
    while (i_ < s_.size()) {
      const char c = s_[i_];
      if (c == '#') {
        while (i_ < s_.size() && s_[i_] != '\n') get();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        get();
      } else {
        return;
      }
    }
  }

  std::string string_body(const Token& start) {
    get();
    std::string out;
    for (;;) {
      if (i_ >= s_.size() || s_[i_] == '\n') {
        throw Error(ErrorCode::kSyntaxError, "unterminated string").at(start.line, start.col);
      }
      const char c = get();
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (i_ >= s_.size()) throw Error(ErrorCode::kSyntaxError, "unterminated string").at(start.line, start.col);
      const int l = line_, k = col_;
      const char e = get();
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        default: throw Error(ErrorCode::kSyntaxError, std::string("bad escape \\") + e).at(l, k - 1);
      }
    }
  }

  // A '.' that is not followed by a digit is punctuation (q.add_fact).
  std::string number_text(Token& t) {
    if (s_[i_] == '.' && (i_ + 1 >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[i_ + 1])))) {
      t.kind = Tok::kPunct;
      return std::string(1, get());
    }
    std::string out;
    if (s_[i_] == '-') out += get();
    auto digits = [&] {
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) out += get();
    };
    digits();
    if (i_ < s_.size() && s_[i_] == '.') {
      out += get();
      digits();
    }
    if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
      out += get();
      if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-')) out += get();
      digits();
    }
    return out;
  }

  std::string_view s_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ProgramIR run() {
    ProgramIR ir;
    while (peek().kind != Tok::kEnd) {
      statement_ = static_cast<int>(ir.statements.size()) + 1;
      ir.statements.push_back(statement());
    }
    return ir;
  }

  int statement_index() const { return statement_; }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  Error syntax(const std::string& what, const Token& at) const {
    Error e(ErrorCode::kSyntaxError, what);
    e.at(at.line, at.col);
    return e;
  }

  void expect(std::string_view punct) {
    const Token& t = peek();
    if (t.kind != Tok::kPunct || t.text != punct) {
      throw syntax("expected '" + std::string(punct) + "'" + (t.kind == Tok::kEnd ? " at end of input" : ""), t);
    }
    next();
  }

  bool at_punct(std::string_view p) const { return peek().kind == Tok::kPunct && peek().text == p; }

  ProgramStatement statement() {
    const Token& head = peek();
    if (head.kind != Tok::kIdent) throw syntax("expected a statement", head);
    const std::string object = next().text;
    if (at_punct("=")) {
      next();
      const Token& ctor = peek();
      if (ctor.kind != Tok::kIdent || ctor.text != "PyQL") throw syntax("expected PyQL()", ctor);
      next();
      expect("(");
      expect(")");
      return Declaration{object};
    }
    expect(".");
    const Token& fn = peek();
    if (fn.kind != Tok::kIdent) throw syntax("expected a function name", fn);
    Call call{object, next().text, {}};
    expect("(");
    bool seen_named = false;
    if (!at_punct(")")) {
      for (;;) {
        const Token& at = peek();
        ProgramArg a = argument(true);
        if (!a.keyword.empty()) {
          seen_named = true;
        } else if (seen_named) {
          throw syntax("positional argument after named argument", at);
        }
        call.args.push_back(std::move(a));
        if (!at_punct(",")) break;
        next();
      }
    }
    expect(")");
    return call;
  }

  ProgramArg argument(bool allow_named) {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kString: return ProgramArg::string(next().text);
      case Tok::kNumber: {
        auto x = parse_number(t.text);
        if (!x) throw syntax("bad number '" + t.text + "'", t);
        next();
        return ProgramArg::num(*x);
      }
      case Tok::kIdent: {
        std::string name = next().text;
        if (at_punct("=")) {
          if (!allow_named) throw syntax("named argument inside a list", t);
          next();
          ProgramArg v = argument(false);
          return std::move(v).named(std::move(name));
        }
        return ProgramArg::object(std::move(name));
      }
      case Tok::kPunct:
        if (t.text == "[") {
          next();
          std::vector<ProgramArg> items;
          if (!at_punct("]")) {
            for (;;) {
              const Token& it = peek();
              ProgramArg a = argument(false);
              if (a.kind == Kind::kList || a.kind == Kind::kObject) throw syntax("list items must be constants", it);
              items.push_back(std::move(a));
              if (!at_punct(",")) break;
              next();
            }
          }
          expect("]");
          return ProgramArg::list(std::move(items));
        }
        break;
      default: break;
    }
    throw syntax(t.kind == Tok::kEnd ? "unexpected end of input" : "unexpected '" + t.text + "'", t);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int statement_ = 0;
};

std::string quote(std::string_view s) {
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
  return out + "\"";
}

std::string arg_text(const ProgramArg& a) {
  std::string out = a.keyword.empty() ? "" : a.keyword + "=";
  switch (a.kind) {
    case Kind::kString: return out + quote(a.text);
    case Kind::kNumber: return out + format_number(a.number);
    case Kind::kObject: return out + a.text;
    case Kind::kList: {
      out += "[";
      for (std::size_t i = 0; i < a.items.size(); ++i) out += (i ? "," : "") + arg_text(a.items[i]);
      return out + "]";
    }
  }
  return out;
}

Error at_statement(Error e, int index) {
  e.in_statement(index);
  return e;
}

// Arguments of a call laid out by parameter position.
std::vector<const ProgramArg*> layout(const FunctionInfo& f, const Call& c) {
  const std::size_t n = f.max_args < 0 ? std::max<std::size_t>(c.args.size(), f.params.size()) : f.params.size();
  std::vector<const ProgramArg*> out(n, nullptr);
  std::size_t pos = 0;
  for (const ProgramArg& a : c.args) {
    if (a.keyword.empty()) {
      out[pos++] = &a;
      continue;
    }
    auto it = std::find(f.params.begin(), f.params.end(), a.keyword);
    const auto idx = static_cast<int>(it - f.params.begin());
    if (it == f.params.end() || f.first_named < 0 || idx < f.first_named) {
      throw Error(ErrorCode::kArityError, std::string(f.name) + " has no named argument '" + a.keyword + "'");
    }
    if (out[idx]) throw Error(ErrorCode::kArityError, std::string(f.name) + " got '" + a.keyword + "' twice");
    out[idx] = &a;
  }
  for (std::size_t i = 0; i < static_cast<std::size_t>(f.min_args); ++i) {
    if (!out[i]) throw Error(ErrorCode::kArityError, std::string(f.name) + " is missing '" + std::string(f.params[i]) + "'");
  }
  return out;
}

std::string arity_text(const FunctionInfo& f) {
  if (f.max_args < 0) return "at least " + std::to_string(f.min_args);
  if (f.min_args == f.max_args) return std::to_string(f.min_args);
  return std::to_string(f.min_args) + " to " + std::to_string(f.max_args);
}

void check_call_shape(const FunctionInfo& f, const Call& c) {
  const int n = static_cast<int>(c.args.size());
  if (n < f.min_args || (f.max_args >= 0 && n > f.max_args)) {
    throw Error(ErrorCode::kArityError, std::string(f.name) + " expects " + arity_text(f));
  }
  layout(f, c);
}

}  // namespace

const std::vector<FunctionInfo>& function_table() {
  static const std::vector<FunctionInfo> table = build_table();
  return table;
}

const FunctionInfo* find_function(std::string_view name) {
  for (const auto& f : function_table()) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

ProgramIR& ProgramIR::declare(std::string object) {
  statements.emplace_back(Declaration{std::move(object)});
  return *this;
}

ProgramIR& ProgramIR::call(std::string object, std::string function, std::vector<ProgramArg> args) {
  statements.emplace_back(Call{std::move(object), std::move(function), std::move(args)});
  return *this;
}

void check_program(const ProgramIR& ir) {
  std::set<std::string> declared;
  std::set<std::string> consumed;                      // taken as a subquery
  std::map<std::string, std::set<std::string>> edges;  // object -> its subqueries
  for (std::size_t i = 0; i < ir.statements.size(); ++i) {
    const int index = static_cast<int>(i) + 1;
    if (const auto* d = std::get_if<Declaration>(&ir.statements[i])) {
      if (!declared.insert(d->object).second) {
        throw at_statement(Error(ErrorCode::kSyntaxError, "object '" + d->object + "' declared twice"), index);
      }
      continue;
    }
    const Call& c = std::get<Call>(ir.statements[i]);
    const FunctionInfo* f = find_function(c.function);
    if (!f) throw at_statement(Error(ErrorCode::kUnknownFunction, "unknown function '" + c.function + "'"), index);
    try {
      check_call_shape(*f, c);
    } catch (Error& e) {
      throw at_statement(e, index);
    }
    if (!declared.count(c.object)) {
      throw at_statement(Error(ErrorCode::kUndeclaredObject, "object '" + c.object + "' is not declared"), index);
    }
    if (consumed.count(c.object)) {
      throw at_statement(Error(ErrorCode::kCyclicSubquery, "object '" + c.object +
                                                               "' is changed after being used as a subquery"),
                         index);
    }
    for (const ProgramArg& a : c.args) {
      if (a.kind != Kind::kObject) continue;
      if (c.function != "add_sub_query") {
        throw at_statement(Error(ErrorCode::kSyntaxError, "object reference '" + a.text + "' outside add_sub_query"),
                           index);
      }
      if (!declared.count(a.text)) {
        throw at_statement(Error(ErrorCode::kUndeclaredObject, "object '" + a.text + "' is not declared"), index);
      }
      // A reference closes a cycle when the referenced object already
      // (transitively) contains the caller.
      std::vector<std::string> stack = {a.text};
      std::set<std::string> seen;
      while (!stack.empty()) {
        std::string cur = stack.back();
        stack.pop_back();
        if (cur == c.object) {
          throw at_statement(Error(ErrorCode::kCyclicSubquery, "'" + c.object + "' would contain itself"), index);
        }
        if (!seen.insert(cur).second) continue;
        for (const auto& nxt : edges[cur]) stack.push_back(nxt);
      }
      edges[c.object].insert(a.text);
      consumed.insert(a.text);
    }
    if (c.function == "add_sub_query") {
      for (const ProgramArg& a : c.args) {
        if (a.kind != Kind::kObject) {
          throw at_statement(Error(ErrorCode::kSyntaxError, "add_sub_query takes object names"), index);
        }
      }
    }
  }
}

ProgramIR parse_program(std::string_view text) {
  Parser p(Lexer(text).run());
  ProgramIR ir;
  try {
    ir = p.run();
  } catch (Error& e) {
    if (p.statement_index() > 0) e.in_statement(p.statement_index());
    throw;
  }
  check_program(ir);
  return ir;
}

std::string serialize_statement(const ProgramStatement& st) {
  if (const auto* d = std::get_if<Declaration>(&st)) return d->object + " = PyQL()";
  const Call& c = std::get<Call>(st);
  std::string out = c.object + "." + c.function + "(";
  for (std::size_t i = 0; i < c.args.size(); ++i) out += (i ? "," : "") + arg_text(c.args[i]);
  return out + ")";
}

std::vector<std::string> serialize_lines(const ProgramIR& ir) {
  std::vector<std::string> out;
  for (const auto& st : ir.statements) out.push_back(serialize_statement(st));
  return out;
}

std::string serialize_program(const ProgramIR& ir) {
  std::string out;
  for (const auto& st : ir.statements) out += serialize_statement(st) + "\n";
  return out;
}

ProgramIR program_from_lines(const std::vector<std::string>& lines) {
  std::string text;
  for (const auto& l : lines) text += l + "\n";
  return parse_program(text);
}

// ---------------------------------------------------------------------------
// Elaboration

namespace {

const std::string& str_arg(const ProgramArg* a, std::string_view what) {
  if (!a || a->kind != Kind::kString) throw Error(ErrorCode::kBadTerm, std::string(what) + " must be a string");
  return a->text;
}

Operand operand_arg(const ProgramArg* a, std::string_view what) {
  if (a && a->kind == Kind::kNumber) return a->number;
  return str_arg(a, what);
}

std::int64_t int_arg(const ProgramArg* a, std::string_view what) {
  if (!a || a->kind != Kind::kNumber || a->number != std::floor(a->number) || std::abs(a->number) > 1e15) {
    throw Error(ErrorCode::kBadTerm, std::string(what) + " must be an integer");
  }
  return static_cast<std::int64_t>(a->number);
}

std::string brief(const ProgramArg* a) {
  if (!a) return "";
  if (a->kind == Kind::kString) return a->text;
  ProgramArg copy = *a;
  copy.keyword.clear();
  return arg_text(copy);
}

std::string describe(const Call& c, const std::vector<const ProgramArg*>& p) {
  auto b = [&](std::size_t i) { return i < p.size() ? brief(p[i]) : std::string(); };
  const std::string& f = c.function;
  if (f == "add_fact") return "match " + b(0) + " " + b(1) + " " + b(2);
  if (f == "add_quantity") return "return " + b(2) + ": " + b(1) + " of " + b(0);
  if (f == "add_quantity_with_qualifier") return "return " + b(2) + ": " + b(1) + " of " + b(0) + " where " + b(3) + " is " + b(4);
  if (f == "add_quantity_by_qualifier") return "return " + b(4) + ": " + b(3) + " of the " + b(1) + " statement of " + b(0) + " with value " + b(2);
  if (f == "add_type_constrain") return "return " + b(1) + ": instances of " + b(0);
  if (f == "add_filter") return "keep rows where " + b(0) + " " + b(1) + " " + b(2);
  if (f == "add_bind") return "return " + b(1) + " = " + b(0);
  if (f == "add_assignment") return "return " + b(1) + ": one of " + b(0);
  if (f == "add_sub_query") {
    std::string names;
    for (const auto* a : p) names += (names.empty() ? "" : ", ") + brief(a);
    return "join subqueries " + names;
  }
  if (f == "add_max" || f == "add_min") {
    return "return " + (p[1] ? b(1) : std::string("*")) + " with the " + (f == "add_max" ? "largest " : "smallest ") + b(0);
  }
  if (f == "add_avg" || f == "add_sum" || f == "add_count") {
    std::string s = "return " + b(1) + ": " + f.substr(4) + " of " + b(0);
    return p[2] ? s + " per " + b(2) : s;
  }
  if (f == "add_rank") return "return ?rank: rank of " + b(0) + " among " + b(1);
  if (f == "add_compare") return "return whether " + b(0) + " " + b(1) + " " + b(2);
  if (f == "set_answer") return "answer " + b(0);
  if (f == "add_time") return "return " + b(1) + ": point in time of " + b(0);
  if (f == "add_start_time") return "return " + b(1) + ": start time of " + b(0);
  if (f == "add_end_time") return "return " + b(1) + ": end time of " + b(0);
  std::string args;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) args += (i ? ", " : "") + b(i);
  return "return " + b(p.size() - 1) + " = " + f + "(" + args + ")";
}

void apply(QueryBuilder& q, const Call& c, const std::vector<const ProgramArg*>& p,
           const std::map<std::string, QueryBuilder>& objects) {
  const std::string& f = c.function;
  auto s = [&](std::size_t i) -> const std::string& { return str_arg(p[i], "argument " + std::to_string(i + 1)); };
  auto o = [&](std::size_t i) { return operand_arg(p[i], "argument " + std::to_string(i + 1)); };
  auto opt_s = [&](std::size_t i) -> std::optional<std::string_view> {
    if (!p[i]) return std::nullopt;
    return std::string_view(s(i));
  };

  if (f == "add_fact") return q.add_fact(o(0), s(1), o(2));
  if (f == "add_quantity") return q.add_quantity(o(0), s(1), s(2));
  if (f == "add_quantity_with_qualifier") return q.add_quantity_with_qualifier(o(0), s(1), s(2), s(3), o(4));
  if (f == "add_quantity_by_qualifier") return q.add_quantity_by_qualifier(o(0), s(1), o(2), s(3), s(4));
  if (f == "add_type_constrain") return q.add_type_constrain(s(0), s(1));
  if (f == "add_filter") return q.add_filter(o(0), s(1), o(2));
  if (f == "add_bind") return q.add_bind_text(s(0), s(1));
  if (f == "add_assignment") {
    if (p[0]->kind != Kind::kList) throw Error(ErrorCode::kBadTerm, "add_assignment expects a list");
    std::vector<std::string> values;
    for (const auto& item : p[0]->items) {
      values.push_back(item.kind == Kind::kNumber ? format_number(item.number) : item.text);
    }
    return q.add_assignment(values, s(1));
  }
  if (f == "add_sub_query") {
    std::vector<const QueryBuilder*> subs;
    for (const auto* a : p) subs.push_back(&objects.at(a->text));
    return q.add_sub_query(subs);
  }
  if (f == "add_max" || f == "add_min") {
    const std::string ret = p[1] ? s(1) : "*";
    const std::int64_t offset = p[2] ? int_arg(p[2], "offset") : 0;
    const std::optional<std::int64_t> limit = p[3] ? std::optional(int_arg(p[3], "limit")) : std::optional<std::int64_t>(1);
    return f == "add_max" ? q.add_max(s(0), ret, offset, limit) : q.add_min(s(0), ret, offset, limit);
  }
  if (f == "add_avg") return q.add_avg(s(0), s(1), opt_s(2));
  if (f == "add_sum") return q.add_sum(s(0), s(1), opt_s(2));
  if (f == "add_count") return q.add_count(s(0), s(1), opt_s(2));
  if (f == "add_rank") return q.add_rank(s(0), s(1));
  if (f == "add_compare") return q.add_compare(o(0), s(1), o(2));
  if (f == "set_answer") return q.set_answer(s(0));
  if (f == "add_time") return q.add_time(o(0), s(1));
  if (f == "add_start_time") return q.add_start_time(o(0), s(1));
  if (f == "add_end_time") return q.add_end_time(o(0), s(1));
  if (f == "abs") return q.add_bind(abs(ArithmeticExpr(o(0))), s(1));

  // Arithmetic: operands..., new_var.
  const auto us = f.find('_');
  const std::string base = f.substr(0, us);
  const Rounding r = us == std::string::npos ? Rounding::kNone
                     : f.substr(us + 1) == "ceil" ? Rounding::kCeil
                                                  : Rounding::kFloor;
  const ArithKind kind = base == "add"   ? ArithKind::kAdd
                         : base == "sub" ? ArithKind::kSub
                         : base == "mul" ? ArithKind::kMul
                                         : ArithKind::kDiv;
  std::vector<ArithmeticExpr> operands;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) operands.emplace_back(o(i));
  q.add_bind(arith(kind, r, std::move(operands)), s(p.size() - 1));
}

}  // namespace

Elaboration elaborate(const ProgramIR& ir) {
  check_program(ir);
  std::map<std::string, QueryBuilder> objects;
  std::vector<std::string> order;
  std::set<std::string> referenced;
  Elaboration out;
  for (std::size_t i = 0; i < ir.statements.size(); ++i) {
    const int index = static_cast<int>(i) + 1;
    if (const auto* d = std::get_if<Declaration>(&ir.statements[i])) {
      objects.emplace(d->object, QueryBuilder{});
      order.push_back(d->object);
      out.steps.push_back({index, d->object, "PyQL", "start query object " + d->object});
      continue;
    }
    const Call& c = std::get<Call>(ir.statements[i]);
    const FunctionInfo& f = *find_function(c.function);
    const auto params = layout(f, c);
    out.steps.push_back({index, c.object, c.function, describe(c, params)});
    try {
      apply(objects.at(c.object), c, params, objects);
    } catch (Error& e) {
      throw at_statement(e, index);
    }
    if (c.function == "add_sub_query") {
      for (const auto* a : params) referenced.insert(a->text);
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (!referenced.count(*it)) {
      out.root = *it;
      break;
    }
  }
  if (out.root.empty()) throw Error(ErrorCode::kMissingAnswer, "program declares no query object");
  out.query = objects.at(out.root).to_ast();
  out.sparql = sparql::emit(out.query);
  return out;
}

std::string compile_program(const ProgramIR& ir) { return elaborate(ir).sparql; }

Json steps_to_json(const std::vector<Step>& steps) {
  Json arr = Json::array();
  for (const auto& s : steps) {
    arr.push_back({{"step", s.index}, {"object", s.object}, {"function", s.function}, {"description", s.description}});
  }
  return arr;
}

}  // namespace pyql
