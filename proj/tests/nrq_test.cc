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

#include <functional>
#include <set>

#include "pyql/eval.h"
#include "pyql/gen.h"
#include "pyql/nrq.h"
#include "test_util.h"

namespace pyql {
namespace {

using testing::code_of;
using testing::ent_line;
using testing::ent_triple_line;
using testing::num_line;
using N = NrqNode;

N height_of(const std::string& e) { return N::des({{"P2048", N::entity(e)}}); }
N humans() { return N::des({{"^P31", N::entity("Q5")}}); }
N human_heights() { return N::des({{"P2048", humans()}}); }

KnowledgeBase people_kb() {
  // Q1..Q4 humans, Q6 a building; ten entities in all
  std::string t;
  for (const char* e : {"Q1", "Q2", "Q3", "Q4", "Q5", "Q6", "Q7", "Q8", "Q9", "Q10"}) t += ent_line(e);
  for (const char* e : {"Q1", "Q2", "Q3", "Q4"}) t += ent_triple_line(e, "P31", "Q5");
  t += num_line("Q1", "P2048", 10) + num_line("Q2", "P2048", 4) + num_line("Q3", "P2048", 8) +
       num_line("Q4", "P2048", 5) + num_line("Q6", "P2048", 300) + num_line("Q7", "P2048", 4) +
       num_line("Q7", "P2048", 6) + ent_triple_line("Q1", "P19", "Q8") + ent_triple_line("Q2", "P19", "Q8");
  return KnowledgeBase::from_jsonl(t);
}

Value compiled(const N& tree, const KnowledgeBase& kb, const LowerOptions& opt = {}) {
  return unique_answer(evaluate(elaborate(lower_to_pyql(tree, opt)).query, kb));
}

std::vector<std::string> rules(const N& tree) {
  std::vector<std::string> out;
  for (const auto& d : validate_tree(tree)) out.push_back(d.to_string());
  return out;
}

TEST(Operators, FivePerCategory) {
  const auto& ops = nrq_operators();
  ASSERT_EQ(ops.size(), 15u);
  std::map<OpCategory, int> per;
  for (auto op : ops) per[nrq_category(op)]++;
  EXPECT_EQ(per[OpCategory::kArithmetic], 5);
  EXPECT_EQ(per[OpCategory::kAggregation], 5);
  EXPECT_EQ(per[OpCategory::kComparison], 5);
  EXPECT_EQ(std::set<std::string_view>(ops.begin(), ops.end()).size(), 15u);
}

TEST(Validate, Examples) {
  EXPECT_TRUE(rules(N::func("sub", {height_of("Q1"), height_of("Q2")})).empty());
  auto bad = rules(N::func("abs", {N::number(1), N::number(2)}));
  ASSERT_EQ(bad.size(), 1u);
  EXPECT_EQ(bad[0].rfind("ArityError(abs,2)", 0), 0u);
  // an NRQ in Var position
  EXPECT_TRUE(rules(N::func("count", {N::des({{"^P2048", N::func("add", {N::number(6), N::number(4)})}})})).empty());
  EXPECT_FALSE(rules(N::func("add", {N::number(1)})).empty());
  EXPECT_FALSE(rules(N::func("count", {N::number(1)})).empty());
  EXPECT_FALSE(rules(N::func("pow", {N::number(1), N::number(2)})).empty());
}

TEST(Validate, ComparisonOnlyAtRoot) {
  EXPECT_TRUE(rules(N::func("gt", {N::number(3), N::number(2)})).empty());
  EXPECT_FALSE(rules(N::func("add", {N::func("gt", {N::number(3), N::number(2)}), N::number(1)})).empty());
}

TEST(Json, RoundTrip) {
  const N tree = N::func("div", {N::func("sub", {height_of("Q1"), N::number(2.5)}), N::func("count", {humans()})});
  const Json j = tree_to_json(tree);
  EXPECT_EQ(j.dump(),
            R"({"func":"div","args":[{"func":"sub","args":[{"des":[["P2048",{"ent":"Q1"}]]},{"num":2.5}]},)"
            R"({"func":"count","args":[{"des":[["^P31",{"ent":"Q5"}]]}]}]})");
  EXPECT_EQ(tree_from_json(j), tree);
  EXPECT_EQ(code_of([] { tree_from_json(Json::parse(R"({"fun":"sub"})")); }), ErrorCode::kParseError);
}

TEST(Lower, SubShape) {
  const auto lines = serialize_lines(lower_to_pyql(N::func("sub", {height_of("Q1"), height_of("Q2")})));
  EXPECT_EQ(lines, (std::vector<std::string>{"q = PyQL()", "q.add_quantity(\"Q1\",\"P2048\",\"?e_1\")",
                                             "q.add_quantity(\"Q2\",\"P2048\",\"?e_2\")",
                                             "q.sub(\"?e_1\",\"?e_2\",\"?v_3\")"}));
}

TEST(Lower, CountShape) {
  const auto lines = serialize_lines(lower_to_pyql(N::func("count", {humans()})));
  EXPECT_EQ(lines, (std::vector<std::string>{"q = PyQL()", "q.add_type_constrain(\"Q5\",\"?e_1\")",
                                             "q.add_count(\"?e_1\",\"?v_2\")"}));
}

TEST(Lower, RatioOfMaxAndMinUsesSubqueries) {
  const N tree = N::func("div", {N::func("argmax", {human_heights()}), N::func("argmin", {human_heights()})});
  const ProgramIR ir = lower_to_pyql(tree);
  int subs = 0, divs = 0;
  for (const auto& st : ir.statements)
    if (const auto* c = std::get_if<Call>(&st)) {
      subs += c->function == "add_sub_query";
      divs += c->function == "div";
    }
  EXPECT_GE(subs, 1);
  EXPECT_EQ(divs, 1);
  const KnowledgeBase kb = people_kb();
  EXPECT_EQ(interpret(tree, kb), Value::number(10.0 / 4.0));
  EXPECT_EQ(compiled(tree, kb), Value::number(2.5));
}

TEST(Lower, Deterministic) {
  const KnowledgeBase kb = random_kb(3);
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const N t = random_tree(kb, rng);
    EXPECT_EQ(lower_to_pyql(t), lower_to_pyql(t));
  }
}

TEST(Lower, InvalidTreeRejected) {
  EXPECT_EQ(code_of([] { lower_to_pyql(N::func("abs", {N::number(1), N::number(2)})); }), ErrorCode::kInvalidAst);
}

TEST(Interpret, Examples) {
  const KnowledgeBase kb = people_kb();
  EXPECT_EQ(interpret(N::number(7), kb), Value::number(7));
  EXPECT_EQ(interpret(N::func("sub", {height_of("Q1"), height_of("Q2")}), kb), Value::number(6));
  EXPECT_EQ(interpret(N::func("count", {humans()}), kb), Value::number(4));
  EXPECT_EQ(interpret(N::func("avg", {human_heights()}), kb), Value::number(27.0 / 4));
  EXPECT_EQ(interpret(N::func("argmax", {human_heights()}), kb), Value::entity("Q1"));
  EXPECT_EQ(interpret(N::func("argmin", {human_heights()}), kb), Value::entity("Q2"));
  EXPECT_EQ(interpret(N::func("lt", {height_of("Q2"), height_of("Q4")}), kb), Value::boolean(true));
  EXPECT_EQ(interpret(N::func("eq", {height_of("Q2"), N::number(4)}), kb), Value::boolean(true));
  EXPECT_EQ(interpret(N::func("abs", {N::func("sub", {height_of("Q2"), height_of("Q1")})}), kb), Value::number(6));
  EXPECT_EQ(interpret(N::func("count", {N::des({{"^P2048", N::func("add", {N::number(6), N::number(4)})}})}), kb),
            Value::number(1));
}

TEST(Interpret, TwoHopDescription) {
  const KnowledgeBase kb = people_kb();
  // people born in the birthplace of Q1
  const N born_there = N::des({{"^P19", N::des({{"P19", N::entity("Q1")}})}});
  EXPECT_EQ(interpret(N::func("count", {born_there}), kb), Value::number(2));
  EXPECT_EQ(compiled(N::func("count", {born_there}), kb), Value::number(2));
}

TEST(Interpret, Errors) {
  const KnowledgeBase kb = people_kb();
  const N nobody = N::des({{"P2048", N::des({{"^P31", N::entity("Q9")}})}});
  EXPECT_EQ(code_of([&] { interpret(N::func("avg", {nobody}), kb); }), ErrorCode::kUnbound);
  EXPECT_EQ(interpret(N::func("count", {nobody}), kb), Value::number(0));
  EXPECT_EQ(interpret(N::func("sum", {nobody}), kb), Value::number(0));
  EXPECT_EQ(code_of([&] { interpret(N::func("add", {height_of("Q7"), N::number(1)}), kb); }),
            ErrorCode::kNonUniqueOperand);
  EXPECT_EQ(code_of([&] { interpret(N::func("div", {height_of("Q1"), N::number(0)}), kb); }),
            ErrorCode::kDivByZero);
}

TEST(Stats, Counts) {
  const OperatorStats s = operator_stats(N::func("sub", {height_of("Q1"), height_of("Q2")}));
  EXPECT_EQ(s.arithmetic, 1);
  EXPECT_EQ(s.aggregation, 0);
  EXPECT_EQ(s.comparison, 0);
  EXPECT_EQ(s.total(), 1);
  // quotient of a difference by a quantity
  const OperatorStats f =
      operator_stats(N::func("div", {N::func("sub", {height_of("Q1"), height_of("Q2")}), height_of("Q3")}));
  EXPECT_GE(f.arithmetic, 2);
  EXPECT_EQ(f.per_operator.at("div"), 1);
}

int count_funcs(const N& n) {
  int c = n.kind == N::Kind::kFunc ? 1 : 0;
  for (const auto& a : n.args) c += count_funcs(a);
  for (const auto& v : n.vars) c += count_funcs(v);
  return c;
}

TEST(Property, StatsAdditiveAndPreservedByLowering) {
  for (int k = 0; k < 10; ++k) {
    const KnowledgeBase kb = random_kb(500 + k);
    Rng rng(k);
    for (int i = 0; i < 30; ++i) {
      const N t = random_tree(kb, rng);
      const OperatorStats s = operator_stats(t);
      int per = 0;
      for (const auto& [op, n] : s.per_operator) per += n;
      ASSERT_EQ(s.total(), per);
      ASSERT_EQ(s.total(), count_funcs(t)) << tree_to_json(t).dump();
      ASSERT_EQ(operator_stats(lower_to_pyql(t)), s) << tree_to_json(t).dump();
    }
  }
}

struct OracleTally {
  int agree = 0;
  int disagree = 0;
  int excluded = 0;
};

OracleTally run_oracle(int kbs, int per_kb, const LowerOptions& options) {
  OracleTally tally;
  for (int k = 0; k < kbs; ++k) {
    const KnowledgeBase kb = random_kb(7000 + k);
    Rng rng(900 + k);
    for (int i = 0; i < per_kb; ++i) {
      const N t = random_tree(kb, rng);
      Value want;
      try {
        want = interpret(t, kb);
      } catch (const Error&) {
        ++tally.excluded;
        continue;
      }
      try {
        (answers_agree(want, compiled(t, kb, options)) ? tally.agree : tally.disagree)++;
      } catch (const Error&) {
        ++tally.disagree;
      }
    }
  }
  return tally;
}

TEST(Property, InterpreterAgreesWithCompiledQuery) {
  const OracleTally t = run_oracle(50, 12, {});
  EXPECT_EQ(t.disagree, 0);
  EXPECT_GE(t.agree, 500);
}

TEST(Property, SwappedOperandsAreCaught) {
  LowerOptions broken;
  broken.swap_operands = true;
  const OracleTally t = run_oracle(10, 12, broken);
  EXPECT_GT(t.disagree, 0);
  // and on a single hand tree
  EXPECT_EQ(compiled(N::func("sub", {height_of("Q1"), height_of("Q2")}), people_kb(), broken), Value::number(-6));
}

TEST(AnswersAgree, Tolerance) {
  EXPECT_TRUE(answers_agree(Value::number(1.0), Value::number(1.0 + 1e-12)));
  EXPECT_FALSE(answers_agree(Value::number(1.0), Value::number(1.0 + 1e-6)));
  EXPECT_TRUE(answers_agree(Value::number(0), Value::number(0)));
  EXPECT_FALSE(answers_agree(Value::entity("Q1"), Value::entity("Q2")));
  EXPECT_FALSE(answers_agree(Value::number(1), Value::boolean(true)));
}

}  // namespace
}  // namespace pyql
