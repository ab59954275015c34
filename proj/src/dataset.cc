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

#include <fstream>
#include <sstream>

#include "pyql/error.h"
#include "pyql/eval.h"
#include "pyql/nrq.h"
#include "pyql/program.h"

namespace pyql {

namespace {

const Json& field(const Json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw Error(ErrorCode::kParseError, std::string("record lacks \"") + name + "\"");
  return *it;
}

std::string string_field(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_string()) throw Error(ErrorCode::kParseError, std::string("\"") + name + "\" must be a string");
  return v.get<std::string>();
}

}  // namespace

DatasetRecord record_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kParseError, "record must be an object");
  DatasetRecord r;
  r.qid = string_field(j, "qid");
  r.question = string_field(j, "question");
  const Json& lines = field(j, "pyql");
  if (!lines.is_array()) throw Error(ErrorCode::kParseError, "\"pyql\" must be an array");
  for (const auto& l : lines) {
    if (!l.is_string()) throw Error(ErrorCode::kParseError, "\"pyql\" items must be strings");
    r.pyql.push_back(l.get<std::string>());
  }
  r.sparql = string_field(j, "sparql");
  r.answer = answer_from_json(field(j, "answer"));
  if (j.contains("level")) {
    r.level = string_field(j, "level");
    if (*r.level != "iid" && *r.level != "comp" && *r.level != "zero")
      throw Error(ErrorCode::kParseError, "unknown level \"" + *r.level + "\"");
  }
  if (j.contains("nrq")) r.nrq = j["nrq"];
  return r;
}

Json record_to_json(const DatasetRecord& r) {
  Json j;
  j["qid"] = r.qid;
  j["question"] = r.question;
  j["pyql"] = r.pyql;
  j["sparql"] = r.sparql;
  j["answer"] = answer_to_json(r.answer);
  if (r.level) j["level"] = *r.level;
  if (r.nrq) j["nrq"] = *r.nrq;
  return j;
}

std::vector<DatasetRecord> read_records(std::string_view text) {
  std::vector<DatasetRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(Json::parse(line)));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(n) + ": " + e.what()).at(n, 0);
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(n) + ": " + e.message()).at(n, 0);
    }
  }
  return out;
}

std::vector<DatasetRecord> load_records(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIoError, "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return read_records(ss.str());
}

std::string write_records(const std::vector<DatasetRecord>& records) {
  std::string out;
  for (const auto& r : records) out += record_to_json(r).dump() + "\n";
  return out;
}

std::string check_record(const DatasetRecord& r, const KnowledgeBase& kb) {
  try {
    Elaboration e = elaborate(program_from_lines(r.pyql));
    if (e.sparql != r.sparql) return "compiled SPARQL differs from the stored text";
    Value got = unique_answer(evaluate(sparql::parse(r.sparql), kb));
    if (!answers_agree(got, r.answer))
      return "answer " + got.to_string() + " differs from the stored " + r.answer.to_string();
  } catch (const Error& e) {
    std::string msg = std::string(error_code_name(e.code())) + ": " + e.message();
    if (e.statement() > 0) msg = "stmt " + std::to_string(e.statement()) + ": " + msg;
    return msg;
  }
  return "";
}

std::size_t token_count(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::size_t n = 0;
  std::string w;
  while (in >> w) ++n;
  return n;
}

double conciseness(const DatasetRecord& r) {
  std::string program;
  for (const auto& l : r.pyql) program += l + "\n";
  return double(token_count(program)) / double(token_count(r.sparql));
}

}  // namespace pyql
