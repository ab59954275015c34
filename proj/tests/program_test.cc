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

#include <random>

#include "pyql/dataset.h"
#include "pyql/gen.h"
#include "pyql/program.h"
#include "test_util.h"

namespace pyql {
namespace {

using testing::code_of;

const char* kThreeLines = "q = PyQL()\nq.add_fact(\"Q42\",\"P19\",\"?p\")\nq.set_answer(\"?p\")";

Error error_of(std::string_view text) {
  try {
    elaborate(parse_program(text));
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error for " << text;
  return Error(ErrorCode::kIoError, "");
}

TEST(Parse, ThreeLineProgram) {
  const ProgramIR ir = parse_program(kThreeLines);
  ASSERT_EQ(ir.statements.size(), 3u);
  EXPECT_EQ(std::get<Declaration>(ir.statements[0]).object, "q");
  const Call& fact = std::get<Call>(ir.statements[1]);
  EXPECT_EQ(fact.function, "add_fact");
  EXPECT_EQ(fact.args, (std::vector<ProgramArg>{ProgramArg::string("Q42"), ProgramArg::string("P19"),
                                                ProgramArg::string("?p")}));
  EXPECT_EQ(std::get<Call>(ir.statements[2]).function, "set_answer");
}

TEST(Parse, SameIrFromBuilderCalls) {
  ProgramIR ir;
  ir.declare("q")
      .call("q", "add_fact", {ProgramArg::string("Q42"), ProgramArg::string("P19"), ProgramArg::string("?p")})
      .call("q", "set_answer", {ProgramArg::string("?p")});
  EXPECT_EQ(parse_program(kThreeLines), ir);
  EXPECT_EQ(serialize_program(ir), std::string(kThreeLines) + "\n");
}

TEST(Parse, CommentsAndBlankLines) {
  const std::string text = "# header\nq = PyQL()\n\n  # inside\nq.add_fact(\"Q42\", \"P19\", \"?p\")  # trailing\n"
                           "q.set_answer(\"?p\")\n";
  EXPECT_EQ(parse_program(text), parse_program(kThreeLines));
}

TEST(Parse, Errors) {
  EXPECT_EQ(code_of([] { parse_program("q = PyQL()\nq.add_fact(\"Q1\")"); }), ErrorCode::kArityError);
  EXPECT_EQ(code_of([] { parse_program("q = PyQL()\nq.add_facts(\"Q1\",\"P1\",\"?x\")"); }),
            ErrorCode::kUnknownFunction);
  EXPECT_EQ(code_of([] { parse_program("r.add_fact(\"Q1\",\"P1\",\"?x\")"); }), ErrorCode::kUndeclaredObject);
  EXPECT_EQ(code_of([] { parse_program("a = PyQL()\nb = PyQL()\na.add_sub_query(b)\nb.add_sub_query(a)"); }),
            ErrorCode::kCyclicSubquery);
}

TEST(Parse, SyntaxErrorPosition) {
  try {
    parse_program("q = PyQL()\nq.add_fact(\"Q1\",,\"?x\")");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSyntaxError);
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 17);
  }
}

TEST(Parse, NamedArguments) {
  const ProgramIR ir = parse_program("q = PyQL()\nq.add_quantity(\"?e\",\"P1\",\"?h\")\nq.add_max(\"?h\",return_obj=\"?e\",offset=1)");
  const Call& c = std::get<Call>(ir.statements[2]);
  ASSERT_EQ(c.args.size(), 3u);
  EXPECT_EQ(c.args[1].keyword, "return_obj");
  EXPECT_EQ(c.args[2], ProgramArg::num(1).named("offset"));
  EXPECT_EQ(code_of([] { parse_program("q = PyQL()\nq.add_fact(\"Q1\",property=\"P1\",\"?x\")"); }),
            ErrorCode::kSyntaxError);
}

TEST(Elaborate, ThreeLineSparql) {
  EXPECT_EQ(elaborate(parse_program(kThreeLines)).sparql, "SELECT DISTINCT ?p {\nwd:Q42 wdt:P19 ?p.\n}\n");
}

TEST(Elaborate, ErrorTaggedWithStatement) {
  const Error e = error_of(
      "q = PyQL()\nq.add_quantity(\"Q1\",\"P1\",\"?a\")\nq.add_bind(\"?a + 1\",\"?b\")\nq.add_quantity(\"Q1\",\"P2\",\"?b\")");
  EXPECT_EQ(e.code(), ErrorCode::kVarClash);
  EXPECT_EQ(e.statement(), 4);
}

TEST(Elaborate, FirstFailingStatementReported) {
  const Error e = error_of("q = PyQL()\nq.add_filter(\"?a\",\"!=\",1)\nq.add_assignment([],\"?v\")");
  EXPECT_EQ(e.code(), ErrorCode::kBadOperator);
  EXPECT_EQ(e.statement(), 2);
}

TEST(Elaborate, CallAfterConsumedIsRejected) {
  const Error e = error_of(
      "a = PyQL()\na.add_fact(\"?x\",\"P1\",\"?y\")\na.set_answer(\"?y\")\nb = PyQL()\nb.add_sub_query(a)\n"
      "a.add_fact(\"?y\",\"P2\",\"?z\")\nb.set_answer(\"?y\")");
  EXPECT_EQ(e.statement(), 6);
}

TEST(Elaborate, StepsOnePerStatement) {
  const Elaboration el = elaborate(parse_program(kThreeLines));
  ASSERT_EQ(el.steps.size(), 3u);
  EXPECT_EQ(el.steps[0].function, "PyQL");
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(el.steps[i].index, i + 1);
    EXPECT_FALSE(el.steps[i].description.empty());
  }
  EXPECT_EQ(el.steps[1].function, "add_fact");
  EXPECT_EQ(steps_to_json(el.steps).size(), 3u);
  EXPECT_EQ(el.root, "q");
}

TEST(Elaborate, ArithmeticStatementsTargetLast) {
  const std::string text =
      "q = PyQL()\nq.add_quantity(\"Q1\",\"P1\",\"?a\")\nq.add_quantity(\"Q1\",\"P2\",\"?b\")\n"
      "q.sub(\"?a\",\"?b\",\"?d\")";
  const std::string s = elaborate(parse_program(text)).sparql;
  EXPECT_NE(s.find("BIND( (?a - ?b) AS ?d )"), std::string::npos);
  EXPECT_EQ(s.rfind("SELECT DISTINCT ?d {", 0), 0u);
}

TEST(Elaborate, Deterministic) {
  for (const auto& r : load_records(testing::data_path("seeds.jsonl"))) {
    const ProgramIR ir = program_from_lines(r.pyql);
    EXPECT_EQ(elaborate(ir).sparql, elaborate(ir).sparql);
  }
}

TEST(Serialize, SubqueryObjectEmittedBeforeReference) {
  const ProgramIR ir = parse_program(
      "inner = PyQL()\ninner.add_fact(\"?x\",\"P17\",\"?c\")\ninner.add_count(\"?x\",\"?n\",\"?c\")\n"
      "outer = PyQL()\nouter.add_sub_query(inner)\nouter.add_max(\"?n\",\"?c\")");
  const auto lines = serialize_lines(ir);
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[4], "outer.add_sub_query(inner)");
  EXPECT_EQ(elaborate(ir).root, "outer");
}

TEST(Corpus, RoundTripAndUniqueAnswers) {
  const auto records = load_records(testing::data_path("seeds.jsonl"));
  ASSERT_GE(records.size(), 50u);
  for (const auto& r : records) {
    const ProgramIR ir = program_from_lines(r.pyql);
    EXPECT_EQ(serialize_lines(ir), r.pyql) << r.qid;
    EXPECT_EQ(parse_program(serialize_program(ir)), ir) << r.qid;
    const Elaboration el = elaborate(ir);
    EXPECT_EQ(sparql::parse(el.sparql), el.query) << r.qid;
    EXPECT_NO_THROW(unique_answer(evaluate(el.query, testing::toy_kb()))) << r.qid;
  }
}

TEST(Property, RandomIrRoundTrip) {
  Rng rng(20240202);
  for (int i = 0; i < 1000; ++i) {
    const ProgramIR ir = random_program(rng);
    const std::string text = serialize_program(ir);
    ASSERT_EQ(parse_program(text), ir) << text;
    ASSERT_EQ(serialize_program(parse_program(text)), text);
  }
}

TEST(Property, RandomProgramsElaborateToParsableSparql) {
  Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    const ProgramIR ir = random_program(rng);
    const Elaboration el = elaborate(ir);
    ASSERT_EQ(sparql::parse(el.sparql), el.query) << serialize_program(ir);
  }
}

}  // namespace
}  // namespace pyql
