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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "pyql/value.h"

namespace pyql {

inline constexpr std::string_view kInstanceOf = "P31";
inline constexpr std::string_view kSubclassOf = "P279";

// A stored value. `unit` is only meaningful for quantities and is compared by
// identity; it never takes part in matching.
struct KbValue {
  Value value;
  std::string unit;
  bool operator==(const KbValue&) const = default;
};

struct Entity {
  std::string id;
  std::string label;
  std::vector<std::string> aliases;
};

struct DirectTriple {
  std::string subject;
  std::string property;
  KbValue object;
};

// Reified fact: subject p:P stmt, stmt ps:P value, stmt pq:Q qualifier.
struct Statement {
  std::string id;
  std::string subject;
  std::string property;
  KbValue value;
  std::map<std::string, KbValue> qualifiers;
};

// Either a variable name (without '?') or a concrete value.
using PatternTerm = std::variant<std::string, Value>;
using Binding = std::map<std::string, Value>;

/// In-memory triple store. Build with the add_* calls, then finalize(), or
/// use the loaders, which finalize. Immutable and freely shareable once
/// finalized.
class KnowledgeBase {
 public:
  static KnowledgeBase load(const std::string& path);
  static KnowledgeBase from_jsonl(std::string_view text);
  std::string to_jsonl() const;

  void add_entity(std::string id, std::string label, std::vector<std::string> aliases = {});
  void add_triple(std::string subject, std::string property, Value object, std::string unit = "");
  void add_statement(Statement st);
  // Builds indexes and checks the store invariants. Throws
  // DuplicateStatementId, UnknownEntity, CyclicSubclass or AmbiguousAlias.
  void finalize();

  const Entity* entity(std::string_view id) const;
  bool has_entity(std::string_view id) const { return entity(id) != nullptr; }
  const std::vector<std::string>& entity_ids() const { return entity_ids_; }
  // Entity owning `alias` as an alias, if any.
  std::optional<std::string> entity_for_alias(std::string_view alias) const;

  const std::vector<DirectTriple>& triples() const { return triples_; }
  const std::vector<Statement>& statements() const { return statements_; }
  const Statement* statement(std::string_view id) const;

  // Sorted, de-duplicated objects of (subject, property).
  const std::vector<Value>& objects(std::string_view subject, std::string_view property) const;
  // Sorted (subject, object) pairs of a property.
  const std::vector<std::pair<std::string, Value>>& property_pairs(std::string_view property) const;
  // Sorted subjects having `object` under `property`.
  std::vector<std::string> subjects(std::string_view property, const Value& object) const;
  // Properties that appear on direct triples, sorted.
  std::vector<std::string> properties() const;

  // Statement ids for (subject, property), sorted.
  const std::vector<std::string>& statements_of(std::string_view subject, std::string_view property) const;
  const std::vector<std::string>& statements_with_property(std::string_view property) const;

  /// All consistent bindings for a direct (wdt:) pattern, sorted.
  std::vector<Binding> match_direct(const PatternTerm& subject, std::string_view property,
                                    const PatternTerm& object) const;

  /// { e : e P31 t, t reaches `type_id` by zero or more P279 edges }, sorted.
  std::vector<std::string> instances_of_transitive(std::string_view type_id) const;
  /// Types `entity_id` belongs to through P31/P279*, sorted.
  std::vector<std::string> types_of_transitive(std::string_view entity_id) const;

 private:
  std::vector<Entity> entities_;
  std::vector<DirectTriple> triples_;
  std::vector<Statement> statements_;

  std::unordered_map<std::string, std::size_t> entity_index_;
  std::vector<std::string> entity_ids_;
  std::unordered_map<std::string, std::string> alias_owner_;
  std::unordered_map<std::string, std::unordered_map<std::string, std::vector<Value>>> spo_;
  std::unordered_map<std::string, std::vector<std::pair<std::string, Value>>> pso_;
  std::unordered_map<std::string, std::size_t> statement_index_;
  std::unordered_map<std::string, std::unordered_map<std::string, std::vector<std::string>>> statements_sp_;
  std::unordered_map<std::string, std::vector<std::string>> statements_p_;
  std::unordered_map<std::string, std::vector<std::string>> subclasses_;    // parent -> children
  std::unordered_map<std::string, std::vector<std::string>> superclasses_;  // child -> parents
};

}  // namespace pyql
