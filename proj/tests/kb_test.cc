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
#include <map>
#include <random>
#include <set>
#include <fstream>
#include <sstream>

#include "pyql/dataset.h"
#include "pyql/gen.h"
#include "pyql/kb.h"
#include "test_util.h"

namespace pyql {
namespace {

using testing::code_of;
using testing::ent_line;
using testing::ent_triple_line;

TEST(Load, ThreeLineFile) {
  const KnowledgeBase kb = KnowledgeBase::from_jsonl(
      "{\"kind\":\"entity\",\"id\":\"Q1\",\"label\":\"Alpha\",\"aliases\":[\"A\"]}\n"
      "{\"kind\":\"triple\",\"s\":\"Q1\",\"p\":\"P2043\",\"o\":{\"type\":\"quantity\",\"amount\":10.5,"
      "\"unit\":\"Q11573\"}}\n"
      "{\"kind\":\"statement\",\"id\":\"S1\",\"s\":\"Q1\",\"p\":\"P1082\",\"v\":{\"type\":\"quantity\","
      "\"amount\":7},\"quals\":{\"P585\":{\"type\":\"date\",\"value\":\"2020-01-01\"}}}\n");
  EXPECT_EQ(kb.statements().size(), 1u);
  EXPECT_EQ(kb.triples().size(), 1u);
  ASSERT_NE(kb.statement("S1"), nullptr);
  EXPECT_EQ(kb.statement("S1")->qualifiers.at("P585").value, Value::date(*parse_iso_date("2020-01-01")));
  EXPECT_EQ(kb.triples()[0].object.unit, "Q11573");
  EXPECT_EQ(kb.entity_for_alias("A"), "Q1");
}

TEST(Load, SharedAliasIsAmbiguous) {
  const std::string text =
      "{\"kind\":\"entity\",\"id\":\"Q1\",\"label\":\"Alpha\",\"aliases\":[\"X\"]}\n"
      "{\"kind\":\"entity\",\"id\":\"Q2\",\"label\":\"Beta\",\"aliases\":[\"X\"]}\n";
  EXPECT_EQ(code_of([&] { KnowledgeBase::from_jsonl(text); }), ErrorCode::kAmbiguousAlias);
}

TEST(Load, AliasEqualToAnotherLabelIsAmbiguous) {
  const std::string text =
      "{\"kind\":\"entity\",\"id\":\"Q1\",\"label\":\"Alpha\",\"aliases\":[\"Beta\"]}\n"
      "{\"kind\":\"entity\",\"id\":\"Q2\",\"label\":\"Beta\"}\n";
  EXPECT_EQ(code_of([&] { KnowledgeBase::from_jsonl(text); }), ErrorCode::kAmbiguousAlias);
}

TEST(Load, DuplicateStatementId) {
  const std::string st =
      "{\"kind\":\"statement\",\"id\":\"S1\",\"s\":\"Q1\",\"p\":\"P1\",\"v\":{\"type\":\"quantity\",\"amount\":1},"
      "\"quals\":{}}\n";
  EXPECT_EQ(code_of([&] { KnowledgeBase::from_jsonl(ent_line("Q1") + st + st); }), ErrorCode::kDuplicateStatementId);
}

TEST(Load, StatementSubjectMustExist) {
  const std::string st =
      "{\"kind\":\"statement\",\"id\":\"S1\",\"s\":\"Q9\",\"p\":\"P1\",\"v\":{\"type\":\"quantity\",\"amount\":1},"
      "\"quals\":{}}\n";
  EXPECT_EQ(code_of([&] { KnowledgeBase::from_jsonl(ent_line("Q1") + st); }), ErrorCode::kUnknownEntity);
}

TEST(Load, SubclassCycle) {
  const std::string text = ent_line("Q1") + ent_line("Q2") + ent_line("Q3") + ent_triple_line("Q1", "P279", "Q2") +
                           ent_triple_line("Q2", "P279", "Q3") + ent_triple_line("Q3", "P279", "Q1");
  EXPECT_EQ(code_of([&] { KnowledgeBase::from_jsonl(text); }), ErrorCode::kCyclicSubclass);
}

TEST(Load, MalformedLineReportsLine) {
  try {
    KnowledgeBase::from_jsonl(ent_line("Q1") + "{\"kind\":\"triple\",\"s\":\"Q1\"}\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(Load, RoundTripThroughJsonl) {
  const KnowledgeBase& kb = testing::toy_kb();
  const KnowledgeBase again = KnowledgeBase::from_jsonl(kb.to_jsonl());
  EXPECT_EQ(again.to_jsonl(), kb.to_jsonl());
}

KnowledgeBase small_kb() {
  return KnowledgeBase::from_jsonl(ent_line("Q5", "human") + ent_line("Q6") + ent_line("Q7") + ent_line("Q8") +
                                   ent_line("Q9") + ent_line("Q10") + ent_triple_line("Q7", "P279", "Q6") +
                                   ent_triple_line("Q6", "P279", "Q5") + ent_triple_line("Q9", "P31", "Q7") +
                                   ent_triple_line("Q10", "P31", "Q5") + ent_triple_line("Q8", "P31", "Q8"));
}

TEST(MatchDirect, DirectInstances) {
  const KnowledgeBase kb = small_kb();
  const auto rows = kb.match_direct(std::string("x"), "P31", Value::entity("Q5"));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].at("x"), Value::entity("Q10"));
}

TEST(MatchDirect, ConcreteTripleGivesOneEmptyBinding) {
  const KnowledgeBase kb = small_kb();
  const auto rows = kb.match_direct(Value::entity("Q9"), "P31", Value::entity("Q7"));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].empty());
}

TEST(MatchDirect, NoMatch) {
  const KnowledgeBase kb = small_kb();
  EXPECT_TRUE(kb.match_direct(Value::entity("Q9"), "P31", Value::entity("Q5")).empty());
  EXPECT_TRUE(kb.match_direct(std::string("x"), "P999", std::string("y")).empty());
}

TEST(MatchDirect, SameVariableTwice) {
  const KnowledgeBase kb = small_kb();
  const auto rows = kb.match_direct(std::string("x"), "P31", std::string("x"));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].at("x"), Value::entity("Q8"));
}

TEST(TypeClosure, SubclassChain) {
  const KnowledgeBase kb = small_kb();
  const auto xs = kb.instances_of_transitive("Q5");
  EXPECT_EQ(xs, (std::vector<std::string>{"Q9", "Q10"}));
}

TEST(TypeClosure, ZeroLengthPathAndUnrelatedType) {
  const KnowledgeBase kb = small_kb();
  EXPECT_EQ(kb.instances_of_transitive("Q7"), std::vector<std::string>{"Q9"});
  EXPECT_TRUE(kb.instances_of_transitive("Q8") == std::vector<std::string>{"Q8"});
  EXPECT_TRUE(kb.instances_of_transitive("Q10").empty());
}

// Closure by explicit path enumeration over the raw triple list.
std::set<std::string> brute_instances(const KnowledgeBase& kb, const std::string& type) {
  std::set<std::string> out;
  for (const auto& t : kb.triples()) {
    if (t.property != "P31" || !t.object.value.is_entity()) continue;
    std::vector<std::string> frontier{t.object.value.as_entity()};
    std::set<std::string> seen;
    bool hit = false;
    while (!frontier.empty() && !hit) {
      const std::string c = frontier.back();
      frontier.pop_back();
      if (!seen.insert(c).second) continue;
      if (c == type) hit = true;
      for (const auto& u : kb.triples())
        if (u.subject == c && u.property == "P279" && u.object.value.is_entity())
          frontier.push_back(u.object.value.as_entity());
    }
    if (hit) out.insert(t.subject);
  }
  return out;
}

TEST(Property, TypeClosureMatchesPathEnumeration) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    RandomKbOptions opt;
    opt.entities = seed == 6 ? 1000 : 150;
    opt.classes = seed == 6 ? 25 : 8;
    const KnowledgeBase kb = random_kb(seed, opt);
    for (const auto& id : kb.entity_ids()) {
      const auto got = kb.instances_of_transitive(id);
      const auto want = brute_instances(kb, id);
      ASSERT_EQ(std::set<std::string>(got.begin(), got.end()), want) << "seed " << seed << " type " << id;
    }
    if (seed == 6) break;
  }
}

TEST(Property, LoadIsOrderIndependent) {
  std::ifstream f(testing::data_path("kb.jsonl"));
  std::vector<std::string> lines;
  for (std::string l; std::getline(f, l);) lines.push_back(l);
  std::mt19937_64 rng(99);
  std::shuffle(lines.begin(), lines.end(), rng);
  std::string text;
  for (const auto& l : lines) text += l + "\n";
  const KnowledgeBase permuted = KnowledgeBase::from_jsonl(text);
  const KnowledgeBase& kb = testing::toy_kb();
  EXPECT_EQ(permuted.to_jsonl(), kb.to_jsonl());

  for (const auto& r : load_records(testing::data_path("seeds.jsonl"))) {
    const auto q = elaborate(program_from_lines(r.pyql)).query;
    EXPECT_EQ(evaluate(q, permuted), evaluate(q, kb)) << r.qid;
  }
}

}  // namespace
}  // namespace pyql
