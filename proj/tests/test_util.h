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

// Shared helpers for the test binaries.

#pragma once

#include <functional>
#include <string>
#include <string_view>

#include <gtest/gtest.h>

#include "pyql/error.h"
#include "pyql/eval.h"
#include "pyql/kb.h"
#include "pyql/program.h"

namespace pyql::testing {

inline std::string data_path(std::string_view name) { return std::string(PYQL_DATA_DIR) + "/" + std::string(name); }

inline const KnowledgeBase& toy_kb() {
  static const KnowledgeBase kb = KnowledgeBase::load(data_path("kb.jsonl"));
  return kb;
}

// The error code raised by `f`; records a failure when nothing is thrown.
inline ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kIoError;
}

inline ResultSet run_program(std::string_view text, const KnowledgeBase& kb) {
  return evaluate(elaborate(parse_program(text)).query, kb);
}

inline Value answer_of(std::string_view text, const KnowledgeBase& kb) {
  return unique_answer(run_program(text, kb));
}

// JSONL line helpers for small hand-built KBs.
inline std::string ent_line(std::string_view id, std::string_view label = "") {
  return "{\"kind\":\"entity\",\"id\":\"" + std::string(id) + "\",\"label\":\"" +
         std::string(label.empty() ? id : label) + "\"}\n";
}
inline std::string num_line(std::string_view s, std::string_view p, double x) {
  return "{\"kind\":\"triple\",\"s\":\"" + std::string(s) + "\",\"p\":\"" + std::string(p) +
         "\",\"o\":{\"type\":\"quantity\",\"amount\":" + format_number(x) + "}}\n";
}
inline std::string ent_triple_line(std::string_view s, std::string_view p, std::string_view o) {
  return "{\"kind\":\"triple\",\"s\":\"" + std::string(s) + "\",\"p\":\"" + std::string(p) +
         "\",\"o\":{\"type\":\"entity\",\"id\":\"" + std::string(o) + "\"}}\n";
}
inline std::string date_line(std::string_view s, std::string_view p, std::string_view iso) {
  return "{\"kind\":\"triple\",\"s\":\"" + std::string(s) + "\",\"p\":\"" + std::string(p) +
         "\",\"o\":{\"type\":\"date\",\"value\":\"" + std::string(iso) + "\"}}\n";
}

}  // namespace pyql::testing
