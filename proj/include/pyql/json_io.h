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

#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "pyql/kb.h"
#include "pyql/value.h"

namespace pyql {

using Json = nlohmann::ordered_json;

// KB object encoding: {"type":"entity","id":...} | {"type":"quantity",
// "amount":..,"unit":..} | {"type":"date","value":"YYYY-MM-DD"} |
// {"type":"text","value":...}. Throws Error(kParseError).
KbValue kb_value_from_json(const Json& j);
Json kb_value_to_json(const KbValue& v);

// Answer encoding: {"type":"number|entity|date|boolean|text","value":...}.
Json answer_to_json(const Value& v);
Value answer_from_json(const Json& j);

// Plain cell rendering used in result rows: numbers as JSON numbers, other
// kinds as strings, unbound as null.
Json cell_to_json(const std::optional<Value>& v);

}  // namespace pyql
