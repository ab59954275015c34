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

// Exhaustive matching of description specs over a triple set; shares no
// code with the sampler.

#pragma once

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "pyql/kb.h"
#include "pyql/sof.h"

namespace pyql::brute {

using Triple = std::tuple<std::string, std::string, std::string>;

struct TripleIndex {
  std::set<Triple> triples;
  std::vector<std::string> entities;
  explicit TripleIndex(const KnowledgeBase& kb) : entities(kb.entity_ids()) {
    for (const auto& t : kb.triples())
      if (t.object.value.is_entity()) triples.insert({t.subject, t.property, t.object.value.as_entity()});
  }
};

inline std::string ground(const SpecNode& n, const std::string& t, const std::string& i) {
  return n.role == NodeRole::kTarget ? t : n.role == NodeRole::kInner ? i : n.id;
}

inline std::set<std::string> brute_matches(const std::vector<SpecTriple>& triples, const TripleIndex& ix) {
  bool uses_inner = false;
  for (const auto& tr : triples)
    uses_inner |= tr.subject.role == NodeRole::kInner || tr.object.role == NodeRole::kInner;
  const std::vector<std::string> none{""};
  std::set<std::string> out;
  for (const auto& t : ix.entities) {
    for (const auto& i : uses_inner ? ix.entities : none) {
      bool ok = true;
      for (const auto& tr : triples)
        if (!ix.triples.count({ground(tr.subject, t, i), tr.property, ground(tr.object, t, i)})) {
          ok = false;
          break;
        }
      if (ok) {
        out.insert(t);
        break;
      }
    }
  }
  return out;
}

inline bool brute_sufficient(const std::vector<SpecTriple>& triples, const std::string& target, const TripleIndex& ix) {
  return brute_matches(triples, ix) == std::set<std::string>{target};
}

inline bool brute_nonredundant(const SubgraphSpec& s, const TripleIndex& ix) {
  for (std::size_t k = 0; k < s.triples.size(); ++k) {
    auto rest = s.triples;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
    if (brute_sufficient(rest, s.target, ix)) return false;
  }
  return true;
}

// Edge counts per shape: target-const, target-inner, inner-const.
inline std::tuple<int, int, int> shape_of(const SubgraphSpec& s) {
  int tc = 0, ti = 0, ic = 0;
  for (const auto& tr : s.triples) {
    std::multiset<NodeRole> roles{tr.subject.role, tr.object.role};
    if (roles == std::multiset<NodeRole>{NodeRole::kTarget, NodeRole::kConst}) ++tc;
    if (roles == std::multiset<NodeRole>{NodeRole::kTarget, NodeRole::kInner}) ++ti;
    if (roles == std::multiset<NodeRole>{NodeRole::kInner, NodeRole::kConst}) ++ic;
  }
  return {tc, ti, ic};
}

inline const std::map<int, std::tuple<int, int, int>> kShapes{{1, {1, 0, 0}}, {2, {2, 0, 0}}, {3, {0, 1, 1}},
                                                       {4, {1, 1, 1}}, {5, {0, 1, 2}}, {6, {1, 1, 2}}};

}  // namespace pyql::brute
