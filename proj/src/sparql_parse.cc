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
#include <cctype>

#include "pyql/error.h"
#include "pyql/sparql.h"

namespace pyql::sparql {
namespace {

enum class Tok { kEnd, kVar, kPName, kIriRef, kNumber, kString, kWord, kPunct };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;  // var name (no '?'), pname, number text, unescaped string, word, punct
  int line = 1;
  int col = 1;
};

bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.col = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (c == '?' || c == '$') {
        advance();
        std::string name;
        while (pos_ < src_.size() && is_name_char(src_[pos_])) name += advance();
        if (name.empty()) throw err("expected variable name after '?'", t);
        t.kind = Tok::kVar;
        t.text = std::move(name);
      } else if (c == '"' || c == '\'') {
        t.kind = Tok::kString;
        t.text = read_string(t);
      } else if (c == '<' && looks_like_iriref()) {
        advance();
        while (pos_ < src_.size() && src_[pos_] != '>') t.text += advance();
        if (pos_ >= src_.size()) throw err("unterminated IRI", t);
        advance();
        t.kind = Tok::kIriRef;
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        t.kind = Tok::kNumber;
        t.text = read_number();
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string word;
        while (pos_ < src_.size() && is_name_char(src_[pos_])) word += advance();
        if (pos_ < src_.size() && src_[pos_] == ':') {
          advance();
          word += ':';
          while (pos_ < src_.size() && is_name_char(src_[pos_])) word += advance();
          t.kind = Tok::kPName;
        } else {
          t.kind = Tok::kWord;
        }
        t.text = std::move(word);
      } else {
        static constexpr std::string_view kTwo[] = {">=", "<=", "!=", "&&", "||", "^^"};
        t.kind = Tok::kPunct;
        for (auto two : kTwo) {
          if (src_.substr(pos_, 2) == two) {
            t.text = std::string(two);
            advance();
            advance();
            break;
          }
        }
        if (t.text.empty()) {
          static constexpr std::string_view kOne = "(){}.,;*/+-<>=!|^[]:";
          if (kOne.find(c) == std::string_view::npos) throw err(std::string("unexpected character '") + c + "'", t);
          t.text = std::string(1, advance());
        }
      }
      out.push_back(std::move(t));
    }
  }

 private:
  Error err(const std::string& msg, const Token& t) {
    return std::move(Error(ErrorCode::kSyntaxError, msg + " at line " + std::to_string(t.line) + ", column " +
                                                         std::to_string(t.col))
                         .at(t.line, t.col));
  }

  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool looks_like_iriref() const {
    for (std::size_t i = pos_ + 1; i < src_.size(); ++i) {
      const char c = src_[i];
      if (c == '>') return i > pos_ + 1;
      if (std::isspace(static_cast<unsigned char>(c)) || c == '<' || c == '"' || c == '{' || c == '}') return false;
    }
    return false;
  }

  std::string read_string(const Token& t) {
    const char quote = advance();
    std::string out;
    for (;;) {
      if (pos_ >= src_.size() || src_[pos_] == '\n') throw err("unterminated string", t);
      const char c = advance();
      if (c == quote) return out;
      if (c == '\\') {
        if (pos_ >= src_.size()) throw err("unterminated string", t);
        const char e = advance();
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': case '\'': case '\\': out += e; break;
          default: throw err(std::string("bad escape \\") + e, t);
        }
      } else {
        out += c;
      }
    }
  }

  std::string read_number() {
    std::string out;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) out += advance();
    if (pos_ + 1 < src_.size() && src_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
      out += advance();
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) out += advance();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        while (pos_ < look) out += advance();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) out += advance();
      }
    }
    return out;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool is_unsupported_keyword(const std::string& up) {
  static const char* kWords[] = {"OPTIONAL", "UNION", "MINUS", "GRAPH", "SERVICE", "CONSTRUCT", "ASK",
                                 "DESCRIBE", "HAVING", "EXISTS", "NOT", "REDUCED", "FROM", "NAMED",
                                 "BASE", "INSERT", "DELETE", "LOAD", "CLEAR", "DROP", "CREATE"};
  return std::find(std::begin(kWords), std::end(kWords), up) != std::end(kWords);
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  SelectQuery parse_document() {
    while (is_word("PREFIX")) parse_prefix_decl();
    if (peek().kind == Tok::kEnd) throw syntax("empty query");
    SelectQuery q = parse_query();
    if (peek().kind != Tok::kEnd) throw syntax("unexpected trailing input '" + peek().text + "'");
    return q;
  }

  Expression parse_standalone_expression() {
    Expression e = parse_expr();
    if (peek().kind != Tok::kEnd) throw syntax("unexpected trailing input '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool is_punct(std::string_view p, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::kPunct && peek(ahead).text == p;
  }
  bool is_word(std::string_view w, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::kWord && upper(peek(ahead).text) == w;
  }

  Error syntax(const std::string& msg) const { return syntax_at(msg, peek()); }
  Error syntax_at(const std::string& msg, const Token& t) const {
    Error e(ErrorCode::kSyntaxError,
            msg + " at line " + std::to_string(t.line) + ", column " + std::to_string(t.col));
    e.at(t.line, t.col);
    return e;
  }
  Error unsupported(const std::string& feature) const {
    const Token& t = peek();
    Error e(ErrorCode::kUnsupportedFeature,
            feature + " at line " + std::to_string(t.line) + ", column " + std::to_string(t.col));
    e.at(t.line, t.col);
    return e;
  }

  void reject_unsupported_word() const {
    if (peek().kind == Tok::kWord) {
      const std::string up = upper(peek().text);
      if (is_unsupported_keyword(up)) throw unsupported(up);
    }
  }

  void expect_punct(std::string_view p, const char* context) {
    if (!is_punct(p)) {
      if (peek().kind == Tok::kEnd) throw syntax(std::string("unexpected end of input, expected '") +
                                                 std::string(p) + "' " + context);
      reject_unsupported_word();
      throw syntax(std::string("expected '") + std::string(p) + "' " + context + ", found '" + peek().text + "'");
    }
    next();
  }

  void expect_word(std::string_view w) {
    if (!is_word(w)) {
      reject_unsupported_word();
      throw syntax("expected " + std::string(w) + ", found '" + peek().text + "'");
    }
    next();
  }

  Variable expect_var(const char* context) {
    if (peek().kind != Tok::kVar) {
      reject_unsupported_word();
      throw syntax(std::string("expected variable ") + context + ", found '" + peek().text + "'");
    }
    return Variable{next().text};
  }

  void parse_prefix_decl() {
    next();
    if (peek().kind != Tok::kPName) throw syntax("expected prefix name");
    const std::string pname = next().text;
    if (peek().kind != Tok::kIriRef) throw syntax("expected <iri> in PREFIX");
    next();
    static const char* kKnown[] = {"wd:", "wdt:", "p:", "ps:", "pq:", "xsd:"};
    if (std::find(std::begin(kKnown), std::end(kKnown), pname) == std::end(kKnown)) {
      throw unsupported("prefix " + pname);
    }
  }

  SelectQuery parse_query() {
    reject_unsupported_word();
    expect_word("SELECT");
    SelectQuery q;
    q.head = parse_head();
    if (is_word("WHERE")) next();
    const Token open = peek();
    expect_punct("{", "to open the query group");
    parse_group(q, open);
    parse_modifiers(q.modifiers);
    return q;
  }

  Head parse_head() {
    bool distinct = false;
    if (is_word("DISTINCT")) {
      next();
      distinct = true;
    }
    reject_unsupported_word();
    if (is_punct("(")) {
      next();
      AggregateHead agg;
      if (peek().kind != Tok::kWord) throw syntax("expected aggregate function");
      const std::string fn = upper(peek().text);
      if (fn == "COUNT") agg.fn = AggregateFn::kCount;
      else if (fn == "SUM") agg.fn = AggregateFn::kSum;
      else if (fn == "AVG") agg.fn = AggregateFn::kAvg;
      else if (fn == "MIN") agg.fn = AggregateFn::kMin;
      else if (fn == "MAX") agg.fn = AggregateFn::kMax;
      else throw unsupported("projection expression " + fn);
      next();
      expect_punct("(", "after aggregate name");
      if (!is_word("DISTINCT")) {
        if (is_punct("*")) throw unsupported("COUNT(*)");
        throw unsupported("aggregate without DISTINCT");
      }
      next();
      agg.arg = expect_var("as aggregate argument");
      expect_punct(")", "to close aggregate");
      expect_word("AS");
      agg.alias = expect_var("as aggregate alias");
      expect_punct(")", "to close projection");
      if (peek().kind == Tok::kVar) agg.group = Variable{next().text};
      if (peek().kind == Tok::kVar || is_punct("(")) throw unsupported("multi-item aggregate projection");
      return agg;
    }
    Projection proj;
    proj.distinct = distinct;
    if (is_punct("*")) {
      next();
      proj.star = true;
      return proj;
    }
    while (peek().kind == Tok::kVar) proj.vars.push_back(Variable{next().text});
    if (proj.vars.empty()) throw syntax("expected projection after SELECT");
    if (is_punct("(")) throw unsupported("mixed projection");
    return proj;
  }

  void parse_group(SelectQuery& q, const Token& open) {
    for (;;) {
      if (peek().kind == Tok::kEnd) throw syntax_at("unclosed group", open);
      if (is_punct("}")) {
        next();
        return;
      }
      reject_unsupported_word();
      if (is_punct("{")) {
        const Token sub_open = next();
        if (!is_word("SELECT")) {
          reject_unsupported_word();
          throw unsupported("nested group pattern");
        }
        q.subqueries.push_back(parse_query());
        if (peek().kind == Tok::kEnd) throw syntax_at("unclosed group", sub_open);
        expect_punct("}", "to close subquery");
        if (is_punct("}") == false && is_word("UNION")) throw unsupported("UNION");
        skip_dot();
      } else if (is_word("FILTER")) {
        next();
        expect_punct("(", "after FILTER");
        Filter f{parse_expr(), Comparator::kEq, {}};
        f.cmp = parse_comparator();
        f.rhs = parse_expr();
        expect_punct(")", "to close FILTER");
        skip_dot();
        q.patterns.emplace_back(std::move(f));
      } else if (is_word("BIND")) {
        next();
        expect_punct("(", "after BIND");
        Expression e = parse_expr();
        expect_word("AS");
        Variable v = expect_var("as BIND target");
        expect_punct(")", "to close BIND");
        skip_dot();
        q.patterns.emplace_back(Bind{std::move(e), std::move(v)});
      } else if (is_word("VALUES")) {
        next();
        if (is_punct("(")) throw unsupported("multi-variable VALUES");
        ValuesBlock vb;
        vb.var = expect_var("after VALUES");
        expect_punct("{", "to open VALUES block");
        while (!is_punct("}")) {
          if (peek().kind == Tok::kEnd) throw syntax("unclosed VALUES block");
          if (peek().kind == Tok::kVar) throw syntax("variable inside VALUES block");
          vb.terms.push_back(parse_term());
        }
        next();
        skip_dot();
        q.patterns.emplace_back(std::move(vb));
      } else {
        TriplePattern t;
        t.subject = parse_term();
        t.predicate = parse_predicate();
        t.object = parse_term();
        if (is_punct(";")) throw unsupported("predicate-object list ';'");
        if (is_punct(",")) throw unsupported("object list ','");
        if (is_punct(".")) {
          next();
        } else if (!is_punct("}")) {
          if (peek().kind == Tok::kEnd) throw syntax_at("unclosed group", open);
          reject_unsupported_word();
          throw syntax("expected '.' after triple pattern, found '" + peek().text + "'");
        }
        q.patterns.emplace_back(std::move(t));
      }
    }
  }

  void skip_dot() {
    if (is_punct(".")) next();
  }

  Term parse_term() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kVar:
        return Variable{next().text};
      case Tok::kPName: {
        const std::string text = t.text;
        const auto colon = text.find(':');
        const std::string prefix = text.substr(0, colon + 1);
        const std::string local = text.substr(colon + 1);
        if (prefix != "wd:") {
          if (prefix == "wdt:" || prefix == "p:" || prefix == "ps:" || prefix == "pq:" || prefix == "xsd:") {
            throw unsupported("property IRI in term position " + text);
          }
          throw unsupported("prefix " + prefix);
        }
        if (local.empty()) throw syntax("empty local name after wd:");
        next();
        return Iri{local};
      }
      case Tok::kNumber: {
        auto x = parse_number(t.text);
        if (!x) throw syntax("bad number '" + t.text + "'");
        next();
        return Literal{Value::number(*x)};
      }
      case Tok::kString: {
        const Token s = next();
        if (is_punct("^^")) {
          next();
          if (peek().kind != Tok::kPName || peek().text != "xsd:dateTime") {
            throw unsupported("datatype " + peek().text);
          }
          next();
          auto d = parse_iso_date(s.text);
          if (!d) throw syntax_at("bad date literal \"" + s.text + "\"", s);
          return Literal{Value::date(*d)};
        }
        if (is_punct("@")) throw unsupported("language tag");
        return Literal{Value::text(s.text)};
      }
      case Tok::kPunct:
        if (t.text == "-" && peek(1).kind == Tok::kNumber) {
          next();
          auto x = parse_number(next().text);
          if (!x) throw syntax("bad number");
          return Literal{Value::number(-*x)};
        }
        if (t.text == "[") throw unsupported("blank node");
        break;
      case Tok::kIriRef:
        throw unsupported("full IRI <" + t.text + ">");
      case Tok::kWord: {
        const std::string up = upper(t.text);
        if (is_unsupported_keyword(up)) throw unsupported(up);
        if (up == "TRUE" || up == "FALSE") throw unsupported("boolean literal");
        if (t.text == "a") throw unsupported("'a' (rdf:type)");
        break;
      }
      case Tok::kEnd:
        throw syntax("unexpected end of input");
    }
    throw syntax("expected term, found '" + t.text + "'");
  }

  Predicate parse_predicate() {
    const Token& t = peek();
    if (t.kind == Tok::kVar) throw unsupported("variable predicate");
    if (t.kind == Tok::kWord && t.text == "a") throw unsupported("'a' (rdf:type)");
    if (t.kind == Tok::kPunct && (t.text == "^" || t.text == "(" || t.text == "!")) throw unsupported("property path");
    if (t.kind != Tok::kPName) {
      reject_unsupported_word();
      if (t.kind == Tok::kEnd) throw syntax("unexpected end of input, expected predicate");
      throw syntax("expected predicate, found '" + t.text + "'");
    }
    const std::string text = next().text;
    const auto colon = text.find(':');
    const std::string prefix = text.substr(0, colon + 1);
    const std::string local = text.substr(colon + 1);
    if (local.empty()) throw syntax("empty property id");
    Predicate p;
    p.id = local;
    if (prefix == "wdt:") p.kind = PredicateKind::kDirect;
    else if (prefix == "p:") p.kind = PredicateKind::kStatement;
    else if (prefix == "ps:") p.kind = PredicateKind::kStatementValue;
    else if (prefix == "pq:") p.kind = PredicateKind::kQualifier;
    else if (prefix == "wd:") throw unsupported("entity IRI as predicate " + text);
    else throw unsupported("prefix " + prefix);
    if (is_punct("/") || is_punct("|") || is_punct("*") || is_punct("+") || is_punct("?")) {
      if (text == "wdt:P31" && is_punct("/") && peek(1).kind == Tok::kPName && peek(1).text == "wdt:P279" &&
          peek(2).kind == Tok::kPunct && peek(2).text == "*") {
        next();
        next();
        next();
        if (is_punct("/") || is_punct("|")) throw unsupported("property path");
        return Predicate::type_path();
      }
      throw unsupported("property path");
    }
    return p;
  }

  Comparator parse_comparator() {
    const Token& t = peek();
    if (t.kind == Tok::kPunct) {
      if (auto c = comparator_from_symbol(t.text)) {
        next();
        return *c;
      }
      if (t.text == "!=") throw unsupported("comparator !=");
      if (t.text == "&&" || t.text == "||") throw unsupported("logical connective " + t.text);
    }
    throw syntax("expected comparator, found '" + t.text + "'");
  }

  Expression parse_expr() {
    Expression lhs = parse_mul();
    while (is_punct("+") || is_punct("-")) {
      const BinaryOp op = next().text == "+" ? BinaryOp::kAdd : BinaryOp::kSub;
      lhs = Expression::binary(op, std::move(lhs), parse_mul());
    }
    return lhs;
  }

  Expression parse_mul() {
    Expression lhs = parse_primary();
    while (is_punct("*") || is_punct("/")) {
      const BinaryOp op = next().text == "*" ? BinaryOp::kMul : BinaryOp::kDiv;
      lhs = Expression::binary(op, std::move(lhs), parse_primary());
    }
    return lhs;
  }

  Expression parse_primary() {
    if (is_punct("(")) {
      next();
      Expression e = parse_expr();
      expect_punct(")", "to close parenthesis");
      return e;
    }
    if (peek().kind == Tok::kWord) {
      const std::string up = upper(peek().text);
      if (up == "ABS" || up == "CEIL" || up == "FLOOR") {
        next();
        expect_punct("(", "after function name");
        Expression arg = parse_expr();
        expect_punct(")", "to close function call");
        const UnaryOp op = up == "ABS" ? UnaryOp::kAbs : up == "CEIL" ? UnaryOp::kCeil : UnaryOp::kFloor;
        return Expression::unary(op, std::move(arg));
      }
      if (up == "IF") {
        next();
        expect_punct("(", "after IF");
        Expression lhs = parse_expr();
        const Comparator cmp = parse_comparator();
        Expression rhs = parse_expr();
        expect_punct(",", "in IF");
        if (peek().kind != Tok::kString || peek().text != "TRUE") throw unsupported("general IF branches");
        next();
        expect_punct(",", "in IF");
        if (peek().kind != Tok::kString || peek().text != "FALSE") throw unsupported("general IF branches");
        next();
        expect_punct(")", "to close IF");
        return Expression::conditional(cmp, std::move(lhs), std::move(rhs));
      }
      if (!is_unsupported_keyword(up) && is_punct("(", 1)) throw unsupported("function " + up);
    }
    return Expression::term(parse_term());
  }

  void parse_modifiers(Modifiers& m) {
    if (is_word("GROUP")) {
      next();
      expect_word("BY");
      m.group_by = expect_var("after GROUP BY");
      if (peek().kind == Tok::kVar) throw unsupported("multi-variable GROUP BY");
    }
    reject_unsupported_word();
    if (is_word("ORDER")) {
      next();
      expect_word("BY");
      OrderBy ob;
      if (is_word("ASC") || is_word("DESC")) {
        ob.descending = upper(next().text) == "DESC";
        expect_punct("(", "after ASC/DESC");
        ob.var = expect_var("in ORDER BY");
        expect_punct(")", "to close ORDER BY key");
      } else {
        ob.var = expect_var("in ORDER BY");
      }
      if (peek().kind == Tok::kVar || is_word("ASC") || is_word("DESC")) throw unsupported("multi-key ORDER BY");
      m.order_by = ob;
    }
    for (int i = 0; i < 2; ++i) {
      if (is_word("LIMIT") && !m.limit) {
        next();
        m.limit = parse_count("LIMIT");
      } else if (is_word("OFFSET") && !m.offset) {
        next();
        m.offset = parse_count("OFFSET");
      }
    }
    reject_unsupported_word();
  }

  std::uint64_t parse_count(const char* what) {
    if (peek().kind != Tok::kNumber) throw syntax(std::string("expected integer after ") + what);
    const std::string text = next().text;
    if (!std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw syntax(std::string("expected integer after ") + what);
    }
    return std::stoull(text);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

SelectQuery parse(std::string_view text) { return Parser(Lexer(text).run()).parse_document(); }

Expression parse_expression(std::string_view text) {
  return Parser(Lexer(text).run()).parse_standalone_expression();
}

}  // namespace pyql::sparql
