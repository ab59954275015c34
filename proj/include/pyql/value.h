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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace pyql {

// An entity id such as "Q42". Statement nodes also use this type ("S1").
struct EntityId {
  std::string id;
  bool operator==(const EntityId&) const = default;
};

// A calendar day, stored as days since 1970-01-01.
struct Date {
  std::int64_t days = 0;
  bool operator==(const Date&) const = default;
};

struct Text {
  std::string value;
  bool operator==(const Text&) const = default;
};

// A solution value. Quantities surface as plain numbers; units stay in the
// knowledge base.
class Value {
 public:
  using Variant = std::variant<double, EntityId, Date, Text>;

  Value() : v_(0.0) {}
  static Value number(double x) { return Value(Variant(x)); }
  static Value entity(std::string id) { return Value(Variant(EntityId{std::move(id)})); }
  static Value date(std::int64_t days) { return Value(Variant(Date{days})); }
  static Value text(std::string s) { return Value(Variant(Text{std::move(s)})); }
  static Value boolean(bool b) { return text(b ? "TRUE" : "FALSE"); }

  bool is_number() const { return std::holds_alternative<double>(v_); }
  bool is_entity() const { return std::holds_alternative<EntityId>(v_); }
  bool is_date() const { return std::holds_alternative<Date>(v_); }
  bool is_text() const { return std::holds_alternative<Text>(v_); }
  // "TRUE"/"FALSE" strings produced by the IF idiom.
  bool is_boolean() const;

  double as_number() const { return std::get<double>(v_); }
  const std::string& as_entity() const { return std::get<EntityId>(v_).id; }
  std::int64_t as_date() const { return std::get<Date>(v_).days; }
  const std::string& as_text() const { return std::get<Text>(v_).value; }

  // Kind name used in answer JSON: number, entity, date, boolean, text.
  std::string_view kind_name() const;
  // Human-readable rendering: 10.5, Q42, 2020-01-01, TRUE.
  std::string to_string() const;

  const Variant& variant() const { return v_; }
  bool operator==(const Value& other) const;

 private:
  explicit Value(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

// Total order used wherever results must be deterministic: numbers < dates <
// entities < text; entities by natural id order (Q2 < Q10).
std::weak_ordering compare_values(const Value& a, const Value& b);
std::weak_ordering compare_cells(const std::optional<Value>& a, const std::optional<Value>& b);
std::weak_ordering compare_entity_ids(std::string_view a, std::string_view b);

// Shortest decimal text that parses back to the same double.
std::string format_number(double x);
std::optional<double> parse_number(std::string_view text);

// ISO-8601 day <-> days since epoch. Time-of-day suffixes are truncated.
std::optional<std::int64_t> parse_iso_date(std::string_view text);
std::string format_iso_date(std::int64_t days);

}  // namespace pyql
