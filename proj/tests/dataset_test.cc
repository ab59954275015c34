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

#include "pyql/dataset.h"
#include "test_util.h"

namespace pyql {
namespace {

using testing::code_of;

const char* kLine =
    R"j({"qid":"a1","question":"Population?","pyql":["q = PyQL()","q.add_quantity(\"Q1001\",\"P1082\",\"?p\")",)j"
    R"j("q.set_answer(\"?p\")"],"sparql":"SELECT DISTINCT ?p {\nwd:Q1001 wdt:P1082 ?p.\n}\n",)j"
    R"j("answer":{"type":"number","value":38443000},"level":"iid"})j";

TEST(Record, ReadWriteRoundTrip) {
  const auto rs = read_records(std::string(kLine) + "\n\n");
  ASSERT_EQ(rs.size(), 1u);
  const DatasetRecord& r = rs[0];
  EXPECT_EQ(r.qid, "a1");
  EXPECT_EQ(r.pyql.size(), 3u);
  EXPECT_EQ(r.answer, Value::number(38443000));
  EXPECT_EQ(r.level, "iid");
  EXPECT_FALSE(r.nrq.has_value());
  const auto again = read_records(write_records(rs));
  ASSERT_EQ(again.size(), 1u);
  EXPECT_EQ(record_to_json(again[0]), record_to_json(r));
}

TEST(Record, MalformedLineNumber) {
  try {
    read_records(std::string(kLine) + "\n{\"qid\":\"a2\"}\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_EQ(e.line(), 2);
  }
  EXPECT_EQ(code_of([] { load_records("/nonexistent/records.jsonl"); }), ErrorCode::kIoError);
}

TEST(Record, BadLevelRejected) {
  std::string bad = kLine;
  bad.replace(bad.find("\"iid\""), 5, "\"hard\"");
  EXPECT_EQ(code_of([&] { read_records(bad); }), ErrorCode::kParseError);
}

TEST(Check, ConsistentAndBroken) {
  const KnowledgeBase& kb = testing::toy_kb();
  DatasetRecord r = read_records(kLine)[0];
  EXPECT_EQ(check_record(r, kb), "");
  DatasetRecord wrong_answer = r;
  wrong_answer.answer = Value::number(1);
  EXPECT_NE(check_record(wrong_answer, kb), "");
  DatasetRecord drifted = r;
  drifted.sparql = "SELECT DISTINCT ?p {\nwd:Q1001 wdt:P1082 ?p .\n}\n";
  EXPECT_NE(check_record(drifted, kb), "");
  DatasetRecord broken = r;
  broken.pyql[1] = "q.add_quantity(\"Q1001\")";
  EXPECT_NE(check_record(broken, kb), "");
}

TEST(Check, BundledCorpusConsistent) {
  const auto rs = load_records(testing::data_path("seeds.jsonl"));
  ASSERT_GE(rs.size(), 50u);
  for (const auto& r : rs) EXPECT_EQ(check_record(r, testing::toy_kb()), "") << r.qid;
}

TEST(Tokens, WhitespaceSplit) {
  EXPECT_EQ(token_count(""), 0u);
  EXPECT_EQ(token_count("  \n\t "), 0u);
  EXPECT_EQ(token_count("a  b\n c"), 3u);
  EXPECT_EQ(token_count("q.add_fact(\"Q1\",\"P2\",\"?x\")"), 1u);
}

TEST(Tokens, Conciseness) {
  const DatasetRecord r = read_records(kLine)[0];
  // pyql: q = PyQL() | add_quantity | set_answer -> 5; sparql: 4 + 3 + 1 -> 8
  EXPECT_DOUBLE_EQ(conciseness(r), 5.0 / 8.0);
}

TEST(Tokens, CorpusMeanRatio) {
  const auto rs = load_records(testing::data_path("seeds.jsonl"));
  double sum = 0;
  for (const auto& r : rs) {
    std::size_t p = 0;
    for (const auto& l : r.pyql) p += token_count(l);
    sum += double(p) / double(token_count(r.sparql));
  }
  const double mean = sum / double(rs.size());
  EXPECT_LE(mean, 0.75);
  double lib = 0;
  for (const auto& r : rs) lib += conciseness(r);
  EXPECT_DOUBLE_EQ(lib / double(rs.size()), mean);
}

}  // namespace
}  // namespace pyql
