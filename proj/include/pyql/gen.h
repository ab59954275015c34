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

/// @file gen.h
/// @brief Seeded generators for the property suites and the fuzz command:
/// random knowledge bases, NRQ trees, PyQL programs and SPARQL ASTs.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pyql/kb.h"
#include "pyql/nrq.h"
#include "pyql/program.h"
#include "pyql/sparql.h"

namespace pyql {

using Rng = std::mt19937_64;

struct RandomKbOptions {
  int entities = 120;  // including classes and countries
  int classes = 6;
  int countries = 4;
  // Probability that an entity carries a second value for a quantity.
  double multi_value = 0.05;
};

/// Classes form a P279 forest (each class points to a lower id), instances
/// carry P31, P17, P131 and the quantities P2048, P2044, P1082, P2043.
KnowledgeBase random_kb(std::uint64_t seed, const RandomKbOptions& options = {});

/// A tree over properties present in `kb`, at most `max_depth` function
/// levels deep. Always passes validate_tree.
NrqNode random_tree(const KnowledgeBase& kb, Rng& rng, int max_depth = 4);

/// A program that respects every builder precondition, so elaboration
/// succeeds. May declare subquery objects before the root.
ProgramIR random_program(Rng& rng);

/// A query that passes sparql::validate, covering every syntax element.
sparql::SelectQuery random_query(Rng& rng, int max_depth = 2);

struct FuzzReport {
  std::size_t total = 0;
  std::size_t valid = 0;
  // One entry per failing program: the reason, a newline, the program text.
  std::vector<std::string> failures;
};

/// Generates `n` programs from `seed` and checks each one: text round trip,
/// elaboration, and the compiled SPARQL parsing back to the same query.
FuzzReport fuzz_programs(std::size_t n, std::uint64_t seed);

}  // namespace pyql
