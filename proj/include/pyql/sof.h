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

/// @file sof.h
/// @brief Seeds-to-Forest sampling: template extraction by entity masking,
/// generalization over a knowledge base, and composition that swaps an
/// entity for a description subgraph.
///
/// Description shapes (T target, I inner entity, c constants; each edge may
/// point either way):
///
///     1  T-c
///     2  T-c1, T-c2
///     3  T-I, I-c
///     4  T-c1, T-I, I-c2
///     5  T-I, I-c1, I-c2
///     6  T-c1, T-I, I-c2, I-c3

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pyql/dataset.h"
#include "pyql/kb.h"
#include "pyql/program.h"

namespace pyql {

// ---- templates -------------------------------------------------------------

struct SlotUse {
  std::size_t statement = 0;  // index into ProgramIR::statements
  std::size_t arg = 0;
  std::size_t slot = 0;
  bool prefixed = false;  // written as wd:Q..
};

struct LiteralUse {
  std::size_t statement = 0;
  std::size_t arg = 0;
  double value = 0;
  int decimals = 0;
  // Only filter and compare thresholds are perturbed.
  bool perturbable = false;
};

struct Template {
  ProgramIR program;                   // entity arguments replaced by slot variables
  std::vector<std::string> slots;      // "?slot1", ...
  std::vector<std::string> originals;  // entity id per slot
  std::vector<SlotUse> uses;
  std::vector<LiteralUse> literals;
};

/// Masks every entity-id string argument. Class ids of add_type_constrain
/// and add_assignment list items stay fixed.
Template extract_template(const ProgramIR& program);

/// Fills the slots with `entities` (one per slot) and, when given, the
/// literal positions with `literals` (one per Template::literals entry).
ProgramIR instantiate(const Template& t, const std::vector<std::string>& entities,
                      const std::vector<double>* literals = nullptr);

/// Entity tuples satisfying the graph patterns of every object with the
/// slots left free, sorted and distinct. Slots no pattern constrains keep
/// their original entity.
std::vector<std::vector<std::string>> template_bindings(const Template& t, const KnowledgeBase& kb);

struct Generated {
  DatasetRecord record;
  std::vector<std::string> binding;
};

/// Up to `max_n` examples over distinct binding tuples other than the seed's
/// own, each with a unique answer. Throws NoBindings.
std::vector<Generated> generalize(const DatasetRecord& seed_record, const KnowledgeBase& kb, int max_n = 30,
                                  std::uint64_t seed = 0);

// ---- descriptions ----------------------------------------------------------

enum class NodeRole { kTarget, kInner, kConst };

struct SpecNode {
  NodeRole role = NodeRole::kConst;
  std::string id;  // the entity; for target and inner, the one being masked
  bool operator==(const SpecNode&) const = default;
};

struct SpecTriple {
  SpecNode subject;
  std::string property;
  SpecNode object;
  bool operator==(const SpecTriple&) const = default;
};

struct SubgraphSpec {
  int structure = 1;
  std::string target;
  std::optional<std::string> inner;
  std::vector<SpecTriple> triples;
};

// {property-id: weight}; sampling weight is weight + 1.
struct PropertyWeights {
  std::map<std::string, double> table;
  double weight(std::string_view property) const;
  static PropertyWeights from_json(const Json& j);
  static PropertyWeights load(const std::string& path);
};

struct SampleOptions {
  int attempt_budget = 100;
  PropertyWeights weights;
};

/// True when the triples have the edge counts of `spec.structure`.
bool has_structure_shape(const SubgraphSpec& spec);

/// Targets the triples admit with target and inner masked, sorted. A spec
/// that never mentions the target admits every entity.
std::vector<std::string> spec_matches(const SubgraphSpec& spec, const KnowledgeBase& kb);
bool check_sufficient(const SubgraphSpec& spec, const KnowledgeBase& kb);
bool check_nonredundant(const SubgraphSpec& spec, const KnowledgeBase& kb);

/// Throws UnknownEntity, or NoValidSubgraph once the attempt budget is spent.
SubgraphSpec sample_description(const KnowledgeBase& kb, std::string_view target, int structure,
                                std::uint64_t seed, const SampleOptions& options = {});

struct Composed {
  DatasetRecord record;
  std::vector<std::string> replaced;  // entity ids, in replacement order
  std::vector<SubgraphSpec> specs;
};

/// Example k (1-based, k <= n) replaces min(k, mentions) entities by
/// sampled descriptions. Candidates that change the answer or lose
/// uniqueness are dropped. Throws NoValidSubgraph when the program mentions
/// no entity.
std::vector<Composed> compose(const DatasetRecord& example, const KnowledgeBase& kb, int n, std::uint64_t seed,
                              const SampleOptions& options = {});

}  // namespace pyql
