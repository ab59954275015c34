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

/// @file dataset.h
/// @brief Dataset records: one question with its PyQL lines, compiled SPARQL
/// and answer, stored one JSON object per line.
///
///     {"qid":"s001","question":"...","pyql":["q = PyQL()",...],
///      "sparql":"SELECT ...","answer":{"type":"number","value":6},
///      "level":"iid","nrq":{...}}
///
/// `level` and `nrq` are optional. `nrq` holds the computational tree the
/// record was derived from, when there is one.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pyql/json_io.h"
#include "pyql/kb.h"
#include "pyql/value.h"

namespace pyql {

struct DatasetRecord {
  std::string qid;
  std::string question;
  std::vector<std::string> pyql;
  std::string sparql;
  Value answer;
  std::optional<std::string> level;  // iid | comp | zero
  std::optional<Json> nrq;
};

/// Throws ParseError on missing or mistyped fields.
DatasetRecord record_from_json(const Json& j);
Json record_to_json(const DatasetRecord& r);

/// Blank lines are skipped. Throws IoError, or ParseError tagged with the
/// 1-based line number.
std::vector<DatasetRecord> read_records(std::string_view text);
std::vector<DatasetRecord> load_records(const std::string& path);
std::string write_records(const std::vector<DatasetRecord>& records);

/// Empty when the record is consistent: its pyql elaborates to exactly the
/// stored sparql and the sparql evaluates on `kb` to the stored answer.
/// Otherwise a one-line reason.
std::string check_record(const DatasetRecord& r, const KnowledgeBase& kb);

/// Whitespace-separated tokens.
std::size_t token_count(std::string_view text);
/// tokens(pyql lines joined by newlines) / tokens(sparql).
double conciseness(const DatasetRecord& r);

}  // namespace pyql
