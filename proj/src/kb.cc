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

#include "pyql/kb.h"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "pyql/error.h"
#include "pyql/json_io.h"

namespace pyql {
namespace {

const std::vector<Value> kNoValues;
const std::vector<std::string> kNoIds;
const std::vector<std::pair<std::string, Value>> kNoPairs;

bool value_less(const Value& a, const Value& b) { return compare_values(a, b) < 0; }

bool entity_less(const std::string& a, const std::string& b) { return compare_entity_ids(a, b) < 0; }

void sort_ids(std::vector<std::string>& ids) {
  std::sort(ids.begin(), ids.end(), entity_less);
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

}  // namespace

KnowledgeBase KnowledgeBase::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_jsonl(ss.str());
}

KnowledgeBase KnowledgeBase::from_jsonl(std::string_view text) {
  KnowledgeBase kb;
  std::size_t start = 0;
  int line_no = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      if (end == text.size()) break;
      continue;
    }
    try {
      const Json j = Json::parse(line);
      if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
        throw Error(ErrorCode::kParseError, "record needs a \"kind\"");
      }
      const std::string kind = j["kind"].get<std::string>();
      auto str = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_string()) {
          throw Error(ErrorCode::kParseError, std::string("missing string field \"") + key + "\"");
        }
        return j[key].get<std::string>();
      };
      if (kind == "entity") {
        std::vector<std::string> aliases;
        if (j.contains("aliases")) aliases = j["aliases"].get<std::vector<std::string>>();
        kb.add_entity(str("id"), j.value("label", std::string()), std::move(aliases));
      } else if (kind == "triple") {
        if (!j.contains("o")) throw Error(ErrorCode::kParseError, "triple needs \"o\"");
        KbValue o = kb_value_from_json(j["o"]);
        kb.add_triple(str("s"), str("p"), o.value, o.unit);
      } else if (kind == "statement") {
        Statement st;
        st.id = str("id");
        st.subject = str("s");
        st.property = str("p");
        if (!j.contains("v")) throw Error(ErrorCode::kParseError, "statement needs \"v\"");
        st.value = kb_value_from_json(j["v"]);
        if (j.contains("quals")) {
          for (const auto& [k, v] : j["quals"].items()) st.qualifiers[k] = kb_value_from_json(v);
        }
        kb.add_statement(std::move(st));
      } else {
        throw Error(ErrorCode::kParseError, "unknown kind \"" + kind + "\"");
      }
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": " + e.what()).at(line_no, 0);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kParseError) throw;
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": " + e.message()).at(line_no, 0);
    }
    if (end == text.size()) break;
  }
  kb.finalize();
  return kb;
}

std::string KnowledgeBase::to_jsonl() const {
  std::string out;
  for (const auto& e : entities_) {
    Json j{{"kind", "entity"}, {"id", e.id}, {"label", e.label}};
    if (!e.aliases.empty()) j["aliases"] = e.aliases;
    out += j.dump() + "\n";
  }
  for (const auto& t : triples_) {
    Json j{{"kind", "triple"}, {"s", t.subject}, {"p", t.property}, {"o", kb_value_to_json(t.object)}};
    out += j.dump() + "\n";
  }
  for (const auto& st : statements_) {
    Json j{{"kind", "statement"}, {"id", st.id}, {"s", st.subject}, {"p", st.property},
           {"v", kb_value_to_json(st.value)}};
    if (!st.qualifiers.empty()) {
      Json q = Json::object();
      for (const auto& [k, v] : st.qualifiers) q[k] = kb_value_to_json(v);
      j["quals"] = q;
    }
    out += j.dump() + "\n";
  }
  return out;
}

void KnowledgeBase::add_entity(std::string id, std::string label, std::vector<std::string> aliases) {
  entities_.push_back({std::move(id), std::move(label), std::move(aliases)});
}

void KnowledgeBase::add_triple(std::string subject, std::string property, Value object, std::string unit) {
  triples_.push_back({std::move(subject), std::move(property), {std::move(object), std::move(unit)}});
}

void KnowledgeBase::add_statement(Statement st) { statements_.push_back(std::move(st)); }

void KnowledgeBase::finalize() {
  std::sort(entities_.begin(), entities_.end(),
            [](const Entity& a, const Entity& b) { return entity_less(a.id, b.id); });
  entity_index_.clear();
  entity_ids_.clear();
  for (std::size_t i = 0; i < entities_.size(); ++i) {
    if (!entity_index_.emplace(entities_[i].id, i).second) {
      throw Error(ErrorCode::kParseError, "duplicate entity " + entities_[i].id);
    }
    entity_ids_.push_back(entities_[i].id);
    std::sort(entities_[i].aliases.begin(), entities_[i].aliases.end());
  }

  // Aliases: unique across entities and never another entity's label.
  alias_owner_.clear();
  std::unordered_map<std::string, std::string> label_owner;
  for (const auto& e : entities_) {
    if (!e.label.empty()) label_owner.emplace(e.label, e.id);
  }
  for (const auto& e : entities_) {
    for (const auto& alias : e.aliases) {
      auto [it, fresh] = alias_owner_.emplace(alias, e.id);
      if (!fresh && it->second != e.id) {
        throw Error(ErrorCode::kAmbiguousAlias, "alias \"" + alias + "\" shared by " + it->second + " and " + e.id);
      }
      auto lab = label_owner.find(alias);
      if (lab != label_owner.end() && lab->second != e.id) {
        throw Error(ErrorCode::kAmbiguousAlias,
                    "alias \"" + alias + "\" of " + e.id + " is the label of " + lab->second);
      }
    }
  }

  auto triple_less = [](const DirectTriple& a, const DirectTriple& b) {
    if (auto c = compare_entity_ids(a.subject, b.subject); c != 0) return c < 0;
    if (auto c = compare_entity_ids(a.property, b.property); c != 0) return c < 0;
    return value_less(a.object.value, b.object.value);
  };
  std::sort(triples_.begin(), triples_.end(), triple_less);
  triples_.erase(std::unique(triples_.begin(), triples_.end(),
                             [](const DirectTriple& a, const DirectTriple& b) {
                               return a.subject == b.subject && a.property == b.property &&
                                      a.object.value == b.object.value;
                             }),
                 triples_.end());
  spo_.clear();
  pso_.clear();
  subclasses_.clear();
  superclasses_.clear();
  for (const auto& t : triples_) {
    if (!entity_index_.count(t.subject)) throw Error(ErrorCode::kUnknownEntity, "triple subject " + t.subject);
    spo_[t.subject][t.property].push_back(t.object.value);
    pso_[t.property].emplace_back(t.subject, t.object.value);
    if (t.property == kSubclassOf && t.object.value.is_entity()) {
      subclasses_[t.object.value.as_entity()].push_back(t.subject);
      superclasses_[t.subject].push_back(t.object.value.as_entity());
    }
  }

  std::sort(statements_.begin(), statements_.end(),
            [](const Statement& a, const Statement& b) { return compare_entity_ids(a.id, b.id) < 0; });
  statement_index_.clear();
  statements_sp_.clear();
  statements_p_.clear();
  for (std::size_t i = 0; i < statements_.size(); ++i) {
    const auto& st = statements_[i];
    if (!statement_index_.emplace(st.id, i).second || entity_index_.count(st.id)) {
      throw Error(ErrorCode::kDuplicateStatementId, "statement id " + st.id);
    }
    if (!entity_index_.count(st.subject)) {
      throw Error(ErrorCode::kUnknownEntity, "statement " + st.id + " subject " + st.subject);
    }
    statements_sp_[st.subject][st.property].push_back(st.id);
    statements_p_[st.property].push_back(st.id);
  }

  // P279 must be acyclic: iterative DFS with colors.
  std::unordered_map<std::string, int> color;
  for (const auto& [start, _] : superclasses_) {
    if (color[start] != 0) continue;
    std::vector<std::pair<std::string, std::size_t>> stack{{start, 0}};
    color[start] = 1;
    while (!stack.empty()) {
      auto& [node, idx] = stack.back();
      auto it = superclasses_.find(node);
      if (it == superclasses_.end() || idx >= it->second.size()) {
        color[node] = 2;
        stack.pop_back();
        continue;
      }
      const std::string child = it->second[idx++];
      int& c = color[child];
      if (c == 1) throw Error(ErrorCode::kCyclicSubclass, "P279 cycle through " + child);
      if (c == 0) {
        c = 1;
        stack.emplace_back(child, 0);
      }
    }
  }
}

const Entity* KnowledgeBase::entity(std::string_view id) const {
  auto it = entity_index_.find(std::string(id));
  return it == entity_index_.end() ? nullptr : &entities_[it->second];
}

std::optional<std::string> KnowledgeBase::entity_for_alias(std::string_view alias) const {
  auto it = alias_owner_.find(std::string(alias));
  if (it == alias_owner_.end()) return std::nullopt;
  return it->second;
}

const Statement* KnowledgeBase::statement(std::string_view id) const {
  auto it = statement_index_.find(std::string(id));
  return it == statement_index_.end() ? nullptr : &statements_[it->second];
}

const std::vector<Value>& KnowledgeBase::objects(std::string_view subject, std::string_view property) const {
  auto it = spo_.find(std::string(subject));
  if (it == spo_.end()) return kNoValues;
  auto jt = it->second.find(std::string(property));
  return jt == it->second.end() ? kNoValues : jt->second;
}

const std::vector<std::pair<std::string, Value>>& KnowledgeBase::property_pairs(std::string_view property) const {
  auto it = pso_.find(std::string(property));
  return it == pso_.end() ? kNoPairs : it->second;
}

std::vector<std::string> KnowledgeBase::subjects(std::string_view property, const Value& object) const {
  std::vector<std::string> out;
  for (const auto& [s, o] : property_pairs(property)) {
    if (o == object) out.push_back(s);
  }
  return out;
}

std::vector<std::string> KnowledgeBase::properties() const {
  std::vector<std::string> out;
  for (const auto& [p, _] : pso_) out.push_back(p);
  sort_ids(out);
  return out;
}

const std::vector<std::string>& KnowledgeBase::statements_of(std::string_view subject,
                                                             std::string_view property) const {
  auto it = statements_sp_.find(std::string(subject));
  if (it == statements_sp_.end()) return kNoIds;
  auto jt = it->second.find(std::string(property));
  return jt == it->second.end() ? kNoIds : jt->second;
}

const std::vector<std::string>& KnowledgeBase::statements_with_property(std::string_view property) const {
  auto it = statements_p_.find(std::string(property));
  return it == statements_p_.end() ? kNoIds : it->second;
}

std::vector<Binding> KnowledgeBase::match_direct(const PatternTerm& subject, std::string_view property,
                                                 const PatternTerm& object) const {
  std::vector<Binding> out;
  const auto* svar = std::get_if<std::string>(&subject);
  const auto* ovar = std::get_if<std::string>(&object);
  auto emit = [&](const std::string& s, const Value& o) {
    Binding b;
    if (svar) b[*svar] = Value::entity(s);
    if (ovar) {
      if (svar && *svar == *ovar && !(Value::entity(s) == o)) return;
      b[*ovar] = o;
    }
    out.push_back(std::move(b));
  };
  if (!svar) {
    const Value& s = std::get<Value>(subject);
    if (!s.is_entity()) return out;
    for (const Value& o : objects(s.as_entity(), property)) {
      if (ovar || o == std::get<Value>(object)) emit(s.as_entity(), o);
    }
    return out;
  }
  for (const auto& [s, o] : property_pairs(property)) {
    if (ovar || o == std::get<Value>(object)) emit(s, o);
  }
  return out;
}

std::vector<std::string> KnowledgeBase::instances_of_transitive(std::string_view type_id) const {
  std::set<std::string> classes{std::string(type_id)};
  std::deque<std::string> queue{std::string(type_id)};
  while (!queue.empty()) {
    const std::string c = queue.front();
    queue.pop_front();
    auto it = subclasses_.find(c);
    if (it == subclasses_.end()) continue;
    for (const auto& child : it->second) {
      if (classes.insert(child).second) queue.push_back(child);
    }
  }
  std::vector<std::string> out;
  for (const auto& [s, o] : property_pairs(kInstanceOf)) {
    if (o.is_entity() && classes.count(o.as_entity())) out.push_back(s);
  }
  sort_ids(out);
  return out;
}

std::vector<std::string> KnowledgeBase::types_of_transitive(std::string_view entity_id) const {
  std::set<std::string> seen;
  std::deque<std::string> queue;
  for (const Value& t : objects(entity_id, kInstanceOf)) {
    if (t.is_entity() && seen.insert(t.as_entity()).second) queue.push_back(t.as_entity());
  }
  while (!queue.empty()) {
    const std::string c = queue.front();
    queue.pop_front();
    auto it = superclasses_.find(c);
    if (it == superclasses_.end()) continue;
    for (const auto& parent : it->second) {
      if (seen.insert(parent).second) queue.push_back(parent);
    }
  }
  std::vector<std::string> out(seen.begin(), seen.end());
  sort_ids(out);
  return out;
}

}  // namespace pyql
