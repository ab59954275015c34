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

#include <string>

#include "pyql/builder.h"
#include "pyql/eval.h"
#include "test_util.h"

namespace pyql {
namespace {

using testing::code_of;
using testing::ent_line;
using testing::ent_triple_line;
using testing::num_line;

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

std::string statement_line(const std::string& id, const std::string& s, const std::string& p, const std::string& v,
                           const std::string& quals) {
  return "{\"kind\":\"statement\",\"id\":\"" + id + "\",\"s\":\"" + s + "\",\"p\":\"" + p + "\",\"v\":" + v +
         ",\"quals\":{" + quals + "}}\n";
}

std::string qty(double x) { return "{\"type\":\"quantity\",\"amount\":" + format_number(x) + "}"; }
std::string day(const std::string& iso) { return "{\"type\":\"date\",\"value\":\"" + iso + "\"}"; }
std::string ent(const std::string& id) { return "{\"type\":\"entity\",\"id\":\"" + id + "\"}"; }

Value run(const QueryBuilder& q, const KnowledgeBase& kb) {
  return unique_answer(evaluate(q.to_ast(), kb));
}

TEST(AddFact, Patterns) {
  QueryBuilder q;
  q.add_fact("Q42", "P19", "?pob");
  q.add_fact("?x", "P31", "Q5");
  q.set_answer("?pob");
  const std::string s = q.compile();
  EXPECT_TRUE(contains(s, "wd:Q42 wdt:P19 ?pob.\n"));
  EXPECT_TRUE(contains(s, "?x wdt:P31 wd:Q5.\n"));
}

TEST(AddFact, BadTerm) {
  QueryBuilder q;
  EXPECT_EQ(code_of([&] { q.add_fact("Q4x2", "P19", "?p"); }), ErrorCode::kBadTerm);
  EXPECT_EQ(code_of([&] { q.add_fact("Q42", "X19", "?p"); }), ErrorCode::kBadTerm);
}

TEST(AddFact, TwoHopOnSmallKb) {
  const KnowledgeBase kb = KnowledgeBase::from_jsonl(ent_line("Q42") + ent_line("Q100") + ent_line("Q101") +
                                                     ent_triple_line("Q42", "P19", "Q100") +
                                                     num_line("Q100", "P1082", 5000) + num_line("Q101", "P1082", 70));
  QueryBuilder q;
  q.add_fact("Q42", "P19", "?pob");
  q.add_fact("?pob", "P1082", "?pop");
  q.set_answer("?pop");
  EXPECT_EQ(run(q, kb), Value::number(5000));
}

TEST(AddQuantity, PatternAndLookup) {
  QueryBuilder q;
  q.add_quantity("Q12345", "P2043", "?len");
  q.set_answer("?len");
  EXPECT_TRUE(contains(q.compile(), "wd:Q12345 wdt:P2043 ?len.\n"));

  const KnowledgeBase kb = KnowledgeBase::from_jsonl(ent_line("Q1") + num_line("Q1", "P2043", 10.0));
  QueryBuilder r;
  r.add_quantity("Q1", "P2043", "?len");
  r.set_answer("?len");
  EXPECT_EQ(run(r, kb), Value::number(10));
}

TEST(AddQuantity, BindAliasReuseClashes) {
  QueryBuilder q;
  q.add_quantity("Q1", "P2043", "?len");
  EXPECT_EQ(code_of([&] { q.add_bind(ArithmeticExpr("?len"), "?len"); }), ErrorCode::kVarClash);
  QueryBuilder r;
  r.add_bind(arith(ArithKind::kAdd, Rounding::kNone, {1.0, 2.0}), "?s");
  EXPECT_EQ(code_of([&] { r.add_quantity("Q1", "P2043", "?s"); }), ErrorCode::kVarClash);
}

TEST(Qualifier, ReifiedBlockWithFreshStatementVars) {
  QueryBuilder q;
  q.add_quantity_with_qualifier("Q1", "P1082", "?pop", "P585", "\"2020-01-01\"^^xsd:dateTime");
  q.add_quantity_with_qualifier("Q2", "P1082", "?pop2", "P585", "\"2020-01-01\"^^xsd:dateTime");
  q.set_answer("?pop");
  const std::string s = q.compile();
  EXPECT_TRUE(contains(s, "wd:Q1 p:P1082 ?st_1.\n?st_1 ps:P1082 ?pop.\n?st_1 pq:P585 \"2020-01-01"));
  EXPECT_TRUE(contains(s, "wd:Q2 p:P1082 ?st_2.\n?st_2 ps:P1082 ?pop2.\n"));
}

TEST(Qualifier, OnlyMatchingDatedValue) {
  const KnowledgeBase kb = KnowledgeBase::from_jsonl(
      ent_line("Q1") + statement_line("S1", "Q1", "P1082", qty(100), "\"P585\":" + day("2010-01-01")) +
      statement_line("S2", "Q1", "P1082", qty(120), "\"P585\":" + day("2020-01-01")));
  QueryBuilder q;
  q.add_quantity_with_qualifier("Q1", "P1082", "?pop", "P585", "\"2020-01-01T00:00:00Z\"^^xsd:dateTime");
  q.set_answer("?pop");
  EXPECT_EQ(run(q, kb), Value::number(120));
}

TEST(Qualifier, ByQualifierBindsVotes) {
  const KnowledgeBase kb = KnowledgeBase::from_jsonl(
      ent_line("Q1") + ent_line("Q99") + ent_line("Q98") +
      statement_line("S1", "Q1", "P1346", ent("Q99"), "\"P1111\":" + qty(507)) +
      statement_line("S2", "Q1", "P1346", ent("Q98"), ""));
  QueryBuilder q;
  q.add_quantity_by_qualifier("Q1", "P1346", "Q99", "P1111", "?votes");
  q.set_answer("?votes");
  EXPECT_TRUE(contains(q.compile(), "wd:Q1 p:P1346 ?st_1.\n?st_1 ps:P1346 wd:Q99.\n?st_1 pq:P1111 ?votes.\n"));
  EXPECT_EQ(run(q, kb), Value::number(507));

  QueryBuilder absent;
  absent.add_quantity_by_qualifier("Q1", "P1346", "Q98", "P1111", "?votes");
  absent.set_answer("?votes");
  EXPECT_TRUE(evaluate(absent.to_ast(), kb).rows.empty());
}

TEST(TypeConstrain, TemplateAndClosure) {
  QueryBuilder q;
  q.add_type_constrain("Q5", "?person");
  q.set_answer("?person");
  EXPECT_TRUE(contains(q.compile(), "?person wdt:P31/wdt:P279* wd:Q5.\n"));

  const KnowledgeBase kb = KnowledgeBase::from_jsonl(
      ent_line("Q5") + ent_line("Q6") + ent_line("Q7") + ent_line("Q9") + ent_line("Q11") +
      ent_triple_line("Q7", "P279", "Q6") + ent_triple_line("Q6", "P279", "Q5") + ent_triple_line("Q9", "P31", "Q7"));
  // Q11 has no type at all
  EXPECT_EQ(run(q, kb), Value::entity("Q9"));
}

TEST(Filter, TemplateAndRows) {
  QueryBuilder q;
  q.add_quantity("?x", "P2048", "?h");
  q.add_filter("?h", ">", 100.0);
  q.set_answer("?x");
  EXPECT_TRUE(contains(q.compile(), "FILTER(?h > 100).\n"));
  const KnowledgeBase kb = KnowledgeBase::from_jsonl(ent_line("Q1") + ent_line("Q2") + num_line("Q1", "P2048", 90) +
                                                     num_line("Q2", "P2048", 150));
  EXPECT_EQ(run(q, kb), Value::entity("Q2"));
}

TEST(Filter, BadOperator) {
  QueryBuilder q;
  EXPECT_EQ(code_of([&] { q.add_filter("?h", "!=", 1.0); }), ErrorCode::kBadOperator);
  EXPECT_EQ(code_of([&] { q.add_compare("?h", "<>", 1.0); }), ErrorCode::kBadOperator);
}

TEST(Arith, Shapes) {
  EXPECT_EQ(arith(ArithKind::kSub, Rounding::kNone, {"?a", "?b"}).text(), "?a - ?b");
  EXPECT_EQ(arith(ArithKind::kDiv, Rounding::kCeil, {"?a", 2.0}).text(), "CEIL(?a / 2)");
  EXPECT_EQ(arith(ArithKind::kAdd, Rounding::kNone, {"?a", "?b", "?c"}).text(), "(?a + ?b) + ?c");
  EXPECT_EQ(code_of([] { arith(ArithKind::kSub, Rounding::kNone, {"?a"}); }), ErrorCode::kArityError);
  EXPECT_EQ(code_of([] { arith(ArithKind::kMul, Rounding::kNone, {"?a", "?b", "?c"}); }), ErrorCode::kArityError);
  EXPECT_EQ(code_of([] { arith(ArithKind::kDiv, Rounding::kNone, {"?a", 0.0}); }), ErrorCode::kZeroConstDivisor);
}

TEST(Arith, AbsEvaluates) {
  const auto e = abs(arith(ArithKind::kSub, Rounding::kNone, {"?a", "?b"}));
  const Binding b{{"a", Value::number(3)}, {"b", Value::number(5)}};
  EXPECT_EQ(eval_expression(e.expression(), b), Value::number(2));
}

TEST(Bind, TemplateAndAnswerResolution) {
  QueryBuilder q;
  q.add_quantity("Q1", "P1", "?a");
  q.add_quantity("Q1", "P2", "?b");
  q.add_bind(arith(ArithKind::kAdd, Rounding::kNone, {"?a", "?b"}), "?sum");
  const std::string s = q.compile();
  EXPECT_TRUE(contains(s, "BIND( (?a + ?b) AS ?sum )\n"));
  EXPECT_EQ(s.substr(0, s.find('\n')), "SELECT DISTINCT ?sum {");

  q.add_bind_text("?sum * 2", "?dbl");
  EXPECT_EQ(std::get<sparql::Projection>(q.to_ast().head).vars[0].name, "dbl");
  q.set_answer("?a");
  EXPECT_EQ(std::get<sparql::Projection>(q.to_ast().head).vars[0].name, "a");
}

TEST(Assignment, TemplateAndEmpty) {
  QueryBuilder q;
  q.add_assignment({"wd:Q1", "wd:Q2"}, "?cand");
  q.set_answer("?cand");
  EXPECT_TRUE(contains(q.compile(), "Values ?cand {wd:Q1 wd:Q2}\n"));
  QueryBuilder e;
  EXPECT_EQ(code_of([&] { e.add_assignment({}, "?x"); }), ErrorCode::kEmptyValues);
}

TEST(Assignment, HighestOfCandidates) {
  const KnowledgeBase kb = KnowledgeBase::from_jsonl(ent_line("Q1") + ent_line("Q2") + ent_line("Q3") +
                                                     num_line("Q1", "P2044", 800) + num_line("Q2", "P2044", 1200) +
                                                     num_line("Q3", "P2044", 9000));
  QueryBuilder q;
  q.add_assignment({"wd:Q1", "Q2"}, "?cand");
  q.add_quantity("?cand", "P2044", "?elev");
  q.add_max("?elev", "?cand");
  EXPECT_EQ(run(q, kb), Value::entity("Q2"));
}

KnowledgeBase country_kb() {
  // countries C1, C2 with cities and heights; per-country maxima 9 and 4
  std::string t;
  for (const char* id : {"Q1", "Q2", "Q11", "Q12", "Q13", "Q21", "Q22", "Q23"}) t += ent_line(id);
  const std::vector<std::tuple<std::string, std::string, double>> rows{
      {"Q11", "Q1", 5}, {"Q12", "Q1", 9}, {"Q13", "Q1", 7}, {"Q21", "Q2", 4}, {"Q22", "Q2", 2}, {"Q23", "Q2", 1}};
  for (const auto& [c, k, h] : rows) t += ent_triple_line(c, "P17", k) + num_line(c, "P2048", h);
  return KnowledgeBase::from_jsonl(t);
}

TEST(SubQuery, AverageOfPerGroupMaxima) {
  QueryBuilder inner;
  inner.add_fact("?city", "P17", "?country");
  inner.add_quantity("?city", "P2048", "?h");
  inner.add_sum("?h", "?total", std::string_view("?country"));
  QueryBuilder outer;
  outer.add_sub_query({&inner});
  outer.add_avg("?total", "?mean");
  const std::string s = outer.compile();
  EXPECT_EQ(s.rfind("SELECT (AVG(DISTINCT ?total) AS ?mean) {\n{\nSELECT (SUM(DISTINCT ?h) AS ?total) ?country {", 0),
            0u);
  // sums per country: 21 and 7
  EXPECT_EQ(run(outer, country_kb()), Value::number(14));

  // average of the two per-country maxima, 9 and 4
  QueryBuilder a;
  a.add_fact("?c1", "P17", "Q1");
  a.add_quantity("?c1", "P2048", "?h1");
  a.add_max("?h1", "?h1");
  QueryBuilder b;
  b.add_fact("?c2", "P17", "Q2");
  b.add_quantity("?c2", "P2048", "?h2");
  b.add_max("?h2", "?h2");
  QueryBuilder o;
  o.add_sub_query({&a, &b});
  o.add_bind(arith(ArithKind::kDiv, Rounding::kNone, {arith(ArithKind::kAdd, Rounding::kNone, {"?h1", "?h2"}), 2.0}),
             "?avg");
  EXPECT_EQ(run(o, country_kb()), Value::number(6.5));
}

TEST(SubQuery, Headless) {
  QueryBuilder inner;
  inner.add_fact("?x", "P17", "?y");
  QueryBuilder outer;
  EXPECT_EQ(code_of([&] { outer.add_sub_query({&inner}); }), ErrorCode::kHeadlessSubquery);
}

TEST(OrderBy, MaxDefaults) {
  QueryBuilder q;
  q.add_quantity("?e", "P2048", "?h");
  q.add_max("?h");
  const std::string s = q.compile();
  EXPECT_TRUE(contains(s, "\n}\nORDER BY DESC(?h)\nLIMIT 1"));
  EXPECT_FALSE(contains(s, "OFFSET"));
}

TEST(OrderBy, WindowAndSortOracle) {
  std::string t;
  const std::vector<std::pair<std::string, double>> hs{{"Q1", 5}, {"Q2", 9}, {"Q3", 7}, {"Q4", 3}};
  for (const auto& [e, h] : hs) t += ent_line(e) + num_line(e, "P2048", h);
  const KnowledgeBase kb = KnowledgeBase::from_jsonl(t);
  QueryBuilder top;
  top.add_quantity("?ent", "P2048", "?h");
  top.add_max("?h", "?ent");
  EXPECT_EQ(run(top, kb), Value::entity("Q2"));

  QueryBuilder window;
  window.add_quantity("?ent", "P2048", "?h");
  window.add_max("?h", "?ent", 1, 2);
  const ResultSet r = evaluate(window.to_ast(), kb);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0][0], Value::entity("Q3"));
  EXPECT_EQ(r.rows[1][0], Value::entity("Q1"));

  QueryBuilder low;
  low.add_quantity("?ent", "P2048", "?h");
  low.add_min("?h", "?ent");
  EXPECT_TRUE(contains(low.compile(), "ORDER BY ASC(?h)"));
  EXPECT_EQ(run(low, kb), Value::entity("Q4"));

  QueryBuilder bad;
  bad.add_quantity("?ent", "P2048", "?h");
  EXPECT_EQ(code_of([&] { bad.add_max("?h", "?ent", -1); }), ErrorCode::kNegativeWindow);
}

TEST(Aggregate, HeadTemplates) {
  QueryBuilder q;
  q.add_fact("?x", "P17", "?c");
  q.add_count("?x", "?n");
  EXPECT_EQ(q.compile().rfind("SELECT (COUNT(DISTINCT ?x) AS ?n) {", 0), 0u);

  QueryBuilder g;
  g.add_fact("?x", "P17", "?c");
  g.add_count("?x", "?n", std::string_view("?c"));
  const std::string s = g.compile();
  EXPECT_EQ(s.rfind("SELECT (COUNT(DISTINCT ?x) AS ?n) ?c {", 0), 0u);
  EXPECT_TRUE(contains(s, "\n}\nGROUP BY ?c"));
}

TEST(Aggregate, SecondHeadRejected) {
  QueryBuilder q;
  q.add_fact("?x", "P17", "?c");
  q.add_count("?x", "?n");
  EXPECT_EQ(code_of([&] { q.add_sum("?x", "?m"); }), ErrorCode::kHeadAlreadySet);
}

TEST(Aggregate, DistinctValuesOnKb) {
  const KnowledgeBase kb = KnowledgeBase::from_jsonl(ent_line("Q1") + ent_line("Q2") + ent_line("Q3") +
                                                     num_line("Q1", "P1", 2) + num_line("Q2", "P1", 2) +
                                                     num_line("Q3", "P1", 3));
  auto agg = [&](auto method) {
    QueryBuilder q;
    q.add_quantity("?e", "P1", "?v");
    (q.*method)("?v", "?out", std::nullopt);
    return run(q, kb).as_number();
  };
  EXPECT_EQ(agg(&QueryBuilder::add_count), 2);
  EXPECT_EQ(agg(&QueryBuilder::add_sum), 5);
  EXPECT_EQ(agg(&QueryBuilder::add_avg), 2.5);
}

Value rank_of(const std::vector<double>& values, double own) {
  std::string t = ent_line("Q100") + num_line("Q100", "P1", own);
  int i = 0;
  for (double x : values) {
    const std::string id = "Q" + std::to_string(++i);
    t += ent_line(id) + num_line(id, "P2", x);
  }
  const KnowledgeBase kb = KnowledgeBase::from_jsonl(t);
  QueryBuilder q;
  q.add_quantity("Q100", "P1", "?own");
  q.add_quantity("?other", "P2", "?all");
  q.add_rank("?own", "?all");
  return run(q, kb);
}

TEST(Rank, DenseDescending) {
  EXPECT_EQ(rank_of({5, 7, 9}, 7), Value::number(2));
  EXPECT_EQ(rank_of({5, 7, 9}, 9), Value::number(1));
  EXPECT_EQ(rank_of({9, 9, 7}, 9), Value::number(1));
  EXPECT_EQ(rank_of({9, 9, 7}, 7), Value::number(2));
}

TEST(Compare, IfTemplate) {
  QueryBuilder q;
  q.add_compare(3.0, ">", 2.0);
  const std::string s = q.compile();
  EXPECT_TRUE(contains(s, "BIND( (IF(3 > 2, \"TRUE\", \"FALSE\")) AS ?answer )"));
  EXPECT_EQ(run(q, KnowledgeBase::from_jsonl(ent_line("Q1"))), Value::boolean(true));
}

TEST(Compare, Reflexive) {
  const KnowledgeBase kb = KnowledgeBase::from_jsonl(ent_line("Q1") + num_line("Q1", "P1", 12.25));
  QueryBuilder q;
  q.add_quantity("Q1", "P1", "?x");
  q.add_compare("?x", "=", "?x");
  EXPECT_EQ(run(q, kb), Value::boolean(true));
}

TEST(Compare, TwoAverages) {
  // group A {1,3}, group B {2,4}: avg 2 < 3
  std::string t;
  for (const char* e : {"Q1", "Q2", "Q3", "Q4", "Q10", "Q20"}) t += ent_line(e);
  t += ent_triple_line("Q1", "P17", "Q10") + ent_triple_line("Q2", "P17", "Q10") + ent_triple_line("Q3", "P17", "Q20") +
       ent_triple_line("Q4", "P17", "Q20") + num_line("Q1", "P1", 1) + num_line("Q2", "P1", 3) +
       num_line("Q3", "P1", 2) + num_line("Q4", "P1", 4);
  const KnowledgeBase kb = KnowledgeBase::from_jsonl(t);
  QueryBuilder a;
  a.add_fact("?x", "P17", "Q10");
  a.add_quantity("?x", "P1", "?va");
  a.add_avg("?va", "?ma");
  QueryBuilder b;
  b.add_fact("?y", "P17", "Q20");
  b.add_quantity("?y", "P1", "?vb");
  b.add_avg("?vb", "?mb");
  QueryBuilder q;
  q.add_sub_query({&a, &b});
  q.add_compare("?ma", "<", "?mb");
  EXPECT_EQ(run(q, kb), Value::boolean(true));
}

TEST(SetAnswer, ProjectionAndAggregateWins) {
  QueryBuilder q;
  q.add_fact("?x", "P17", "?c");
  q.set_answer("?x");
  EXPECT_EQ(q.compile().rfind("SELECT DISTINCT ?x {", 0), 0u);
  QueryBuilder a;
  a.add_fact("?x", "P17", "?c");
  a.add_count("?x", "?n");
  const std::string before = a.compile();
  a.set_answer("?c");
  EXPECT_EQ(a.compile(), before);
}

TEST(SetAnswer, MissingAnswer) {
  QueryBuilder empty;
  EXPECT_EQ(code_of([&] { empty.compile(); }), ErrorCode::kMissingAnswer);
  QueryBuilder q;
  q.add_fact("?x", "P17", "?c");
  EXPECT_EQ(code_of([&] { q.compile(); }), ErrorCode::kMissingAnswer);
}

TEST(Time, Properties) {
  QueryBuilder q;
  q.add_time("Q55", "?t");
  q.add_start_time("Q55", "?s");
  q.add_end_time("Q55", "?e");
  q.set_answer("?t");
  const std::string s = q.compile();
  EXPECT_TRUE(contains(s, "wd:Q55 wdt:P585 ?t.\n"));
  EXPECT_TRUE(contains(s, "wd:Q55 wdt:P580 ?s.\n"));
  EXPECT_TRUE(contains(s, "wd:Q55 wdt:P582 ?e.\n"));
}

int duration(const std::string& start, const std::string& end) {
  const KnowledgeBase kb = KnowledgeBase::from_jsonl(ent_line("Q55") + testing::date_line("Q55", "P580", start) +
                                                     testing::date_line("Q55", "P582", end));
  QueryBuilder q;
  q.add_start_time("Q55", "?s");
  q.add_end_time("Q55", "?e");
  q.add_bind(arith(ArithKind::kSub, Rounding::kNone, {"?e", "?s"}), "?days");
  return static_cast<int>(run(q, kb).as_number());
}

TEST(Time, OneYearDurations) {
  EXPECT_EQ(duration("2019-03-01", "2020-03-01"), 366);
  EXPECT_EQ(duration("2021-03-01", "2022-03-01"), 365);
  EXPECT_EQ(duration("1900-01-01", "1901-01-01"), 365);
  EXPECT_EQ(duration("2000-01-01", "2001-01-01"), 366);
}

TEST(Compile, OrderPreservedAndParses) {
  QueryBuilder q;
  q.add_fact("Q42", "P19", "?pob");
  q.add_quantity("?pob", "P1082", "?pop");
  q.add_quantity("?pob", "P2046", "?area");
  q.add_bind(arith(ArithKind::kDiv, Rounding::kNone, {"?pop", "?area"}), "?density");
  const std::string s = q.compile();
  const auto first = s.find("wdt:P19");
  const auto second = s.find("wdt:P1082");
  const auto third = s.find("wdt:P2046");
  const auto bind = s.find("BIND");
  EXPECT_TRUE(first < second && second < third && third < bind);
  EXPECT_EQ(sparql::parse(s), q.to_ast());
}

}  // namespace
}  // namespace pyql
