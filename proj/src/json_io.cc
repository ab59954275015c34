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

#include "pyql/json_io.h"

#include <cmath>

#include "pyql/error.h"

namespace pyql {
namespace {

Error bad(const std::string& msg) { return Error(ErrorCode::kParseError, msg); }

std::string required_string(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) throw bad(std::string("missing string field \"") + key + "\"");
  return j[key].get<std::string>();
}

}  // namespace

KbValue kb_value_from_json(const Json& j) {
  if (!j.is_object()) throw bad("value must be an object");
  const std::string type = required_string(j, "type");
  if (type == "entity") return {Value::entity(required_string(j, "id")), ""};
  if (type == "quantity") {
    if (!j.contains("amount") || !j["amount"].is_number()) throw bad("quantity needs numeric \"amount\"");
    const double amount = j["amount"].get<double>();
    if (!std::isfinite(amount)) throw bad("quantity amount must be finite");
    std::string unit;
    if (j.contains("unit") && !j["unit"].is_null()) unit = j["unit"].get<std::string>();
    return {Value::number(amount), unit};
  }
  if (type == "date") {
    const std::string text = required_string(j, "value");
    auto days = parse_iso_date(text);
    if (!days) throw bad("bad date \"" + text + "\"");
    return {Value::date(*days), ""};
  }
  if (type == "text") return {Value::text(required_string(j, "value")), ""};
  throw bad("unknown value type \"" + type + "\"");
}

Json kb_value_to_json(const KbValue& v) {
  const Value& x = v.value;
  if (x.is_entity()) return Json{{"type", "entity"}, {"id", x.as_entity()}};
  if (x.is_number()) {
    Json j{{"type", "quantity"}, {"amount", x.as_number()}};
    if (!v.unit.empty()) j["unit"] = v.unit;
    return j;
  }
  if (x.is_date()) return Json{{"type", "date"}, {"value", format_iso_date(x.as_date())}};
  return Json{{"type", "text"}, {"value", x.as_text()}};
}

Json answer_to_json(const Value& v) {
  Json j;
  j["type"] = std::string(v.kind_name());
  if (v.is_number()) {
    j["value"] = v.as_number();
  } else {
    j["value"] = v.to_string();
  }
  return j;
}

Value answer_from_json(const Json& j) {
  if (!j.is_object()) throw bad("answer must be an object");
  const std::string type = required_string(j, "type");
  if (type == "number") {
    if (!j.contains("value") || !j["value"].is_number()) throw bad("numeric answer needs a number");
    return Value::number(j["value"].get<double>());
  }
  const std::string text = required_string(j, "value");
  if (type == "entity") return Value::entity(text);
  if (type == "boolean" || type == "text") return Value::text(text);
  if (type == "date") {
    auto d = parse_iso_date(text);
    if (!d) throw bad("bad date answer");
    return Value::date(*d);
  }
  throw bad("unknown answer type \"" + type + "\"");
}

Json cell_to_json(const std::optional<Value>& v) {
  if (!v) return nullptr;
  if (v->is_number()) return v->as_number();
  return v->to_string();
}

}  // namespace pyql
