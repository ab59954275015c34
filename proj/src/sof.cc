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

#include "pyql/sof.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "pyql/builder.h"
#include "pyql/error.h"
#include "pyql/eval.h"
#include "pyql/gen.h"
#include "pyql/nrq.h"

namespace pyql {

namespace {

std::string_view strip_wd(std::string_view s) { return s.starts_with("wd:") ? s.substr(3) : s; }

bool is_mention(const Call& c, std::size_t i) {
  const ProgramArg& a = c.args[i];
  if (a.kind != ProgramArg::Kind::kString || !is_entity_id(a.text)) return false;
  return !(c.function == "add_type_constrain" && i == 0);
}

// Digits after the decimal point in the shortest rendering; -1 for
// exponent forms, which are left alone.
int decimals_of(double x) {
  const std::string s = format_number(x);
  if (s.find_first_of("eE") != std::string::npos) return -1;
  const auto dot = s.find('.');
  return dot == std::string::npos ? 0 : int(s.size() - dot - 1);
}

double uniform01(Rng& rng) { return double(rng() >> 11) * 0x1.0p-53; }

template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
}

std::set<std::string> variables_in(const ProgramIR& ir) {
  std::set<std::string> out;
  for (const auto& st : ir.statements) {
    const auto* c = std::get_if<Call>(&st);
    if (!c) continue;
    for (const auto& a : c->args) {
      if (a.kind == ProgramArg::Kind::kString && a.text.starts_with("?")) out.insert(a.text);
      for (const auto& item : a.items)
        if (item.kind == ProgramArg::Kind::kString && item.text.starts_with("?")) out.insert(item.text);
    }
  }
  return out;
}

struct RunResult {
  Elaboration elaboration;
  Value answer;
};

std::optional<RunResult> run_unique(const ProgramIR& ir, const KnowledgeBase& kb) {
  try {
    Elaboration e = elaborate(ir);
    Value v = unique_answer(evaluate(e.query, kb));
    return RunResult{std::move(e), std::move(v)};
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::vector<std::string> surface_forms(const KnowledgeBase& kb, std::string_view id) {
  std::vector<std::string> out;
  if (const Entity* e = kb.entity(id)) {
    if (!e->label.empty()) out.push_back(e->label);
    for (const auto& a : e->aliases)
      if (!a.empty()) out.push_back(a);
  }
  return out;
}

// Replaces the longest form of `id` found in `text`. False if none occurs.
bool replace_mention(std::string& text, const KnowledgeBase& kb, std::string_view id, const std::string& with) {
  std::vector<std::string> forms = surface_forms(kb, id);
  std::stable_sort(forms.begin(), forms.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
  for (const auto& f : forms) {
    const auto pos = text.find(f);
    if (pos != std::string::npos) {
      text.replace(pos, f.size(), with);
      return true;
    }
  }
  return false;
}

const std::set<std::string_view>& pattern_functions() {
  static const std::set<std::string_view> fns = {
      "add_fact",      "add_quantity",   "add_quantity_with_qualifier", "add_quantity_by_qualifier",
      "add_type_constrain", "add_assignment", "add_time", "add_start_time", "add_end_time"};
  return fns;
}

struct Table {
  std::vector<std::size_t> cols;
  std::set<std::vector<std::string>> rows;
};

Table join(const Table& a, const Table& b) {
  Table out;
  out.cols = a.cols;
  std::vector<std::pair<std::size_t, std::size_t>> shared;
  std::vector<std::size_t> extra;
  for (std::size_t j = 0; j < b.cols.size(); ++j) {
    auto it = std::find(a.cols.begin(), a.cols.end(), b.cols[j]);
    if (it == a.cols.end()) {
      extra.push_back(j);
      out.cols.push_back(b.cols[j]);
    } else {
      shared.emplace_back(std::size_t(it - a.cols.begin()), j);
    }
  }
  for (const auto& ra : a.rows) {
    for (const auto& rb : b.rows) {
      bool ok = true;
      for (auto [i, j] : shared) ok = ok && ra[i] == rb[j];
      if (!ok) continue;
      std::vector<std::string> r = ra;
      for (auto j : extra) r.push_back(rb[j]);
      out.rows.insert(std::move(r));
    }
  }
  return out;
}

}  // namespace

// ---- templates -------------------------------------------------------------

Template extract_template(const ProgramIR& program) {
  Template t;
  t.program = program;
  const std::set<std::string> used = variables_in(program);
  std::map<std::string, std::size_t> slot_of;
  for (std::size_t s = 0; s < t.program.statements.size(); ++s) {
    auto* c = std::get_if<Call>(&t.program.statements[s]);
    if (!c) continue;
    for (std::size_t i = 0; i < c->args.size(); ++i) {
      ProgramArg& a = c->args[i];
      if (a.kind == ProgramArg::Kind::kNumber) {
        const int d = decimals_of(a.number);
        const bool threshold = c->function == "add_filter" || c->function == "add_compare";
        t.literals.push_back({s, i, a.number, std::max(d, 0), threshold && d >= 0});
        continue;
      }
      if (!is_mention(*c, i)) continue;
      const std::string id(strip_wd(a.text));
      auto [it, fresh] = slot_of.try_emplace(id, t.slots.size());
      if (fresh) {
        std::string name = "?slot" + std::to_string(t.slots.size() + 1);
        while (used.count(name)) name += "_";
        t.slots.push_back(name);
        t.originals.push_back(id);
      }
      t.uses.push_back({s, i, it->second, a.text.starts_with("wd:")});
      a.text = t.slots[it->second];
    }
  }
  return t;
}

ProgramIR instantiate(const Template& t, const std::vector<std::string>& entities,
                      const std::vector<double>* literals) {
  if (entities.size() != t.slots.size())
    throw Error(ErrorCode::kArityError, "expected " + std::to_string(t.slots.size()) + " slot values");
  ProgramIR out = t.program;
  for (const auto& u : t.uses) {
    const std::string& v = entities[u.slot];
    auto& a = std::get<Call>(out.statements[u.statement]).args[u.arg];
    a.text = (u.prefixed && !v.starts_with("?")) ? "wd:" + v : v;
  }
  if (literals) {
    if (literals->size() != t.literals.size())
      throw Error(ErrorCode::kArityError, "expected " + std::to_string(t.literals.size()) + " literal values");
    for (std::size_t k = 0; k < t.literals.size(); ++k) {
      const auto& l = t.literals[k];
      std::get<Call>(out.statements[l.statement]).args[l.arg].number = (*literals)[k];
    }
  }
  return out;
}

std::vector<std::vector<std::string>> template_bindings(const Template& t, const KnowledgeBase& kb) {
  Table acc;
  acc.rows.insert(std::vector<std::string>{});
  std::vector<std::string> objects;
  for (const auto& st : t.program.statements)
    if (const auto* d = std::get_if<Declaration>(&st)) objects.push_back(d->object);

  for (const auto& obj : objects) {
    ProgramIR part;
    part.declare(obj);
    std::set<std::size_t> cols;
    for (const auto& st : t.program.statements) {
      const auto* c = std::get_if<Call>(&st);
      if (!c || c->object != obj || !pattern_functions().count(c->function)) continue;
      part.statements.push_back(*c);
      for (const auto& a : c->args)
        for (std::size_t k = 0; k < t.slots.size(); ++k)
          if (a.kind == ProgramArg::Kind::kString && a.text == t.slots[k]) cols.insert(k);
    }
    if (cols.empty()) continue;
    part.call(obj, "set_answer", {ProgramArg::string("*")});
    ResultSet rs;
    try {
      rs = evaluate(elaborate(part).query, kb);
    } catch (const Error&) {
      continue;
    }
    Table tab;
    std::vector<std::size_t> idx;
    for (auto k : cols) {
      auto it = std::find(rs.columns.begin(), rs.columns.end(), t.slots[k].substr(1));
      if (it == rs.columns.end()) continue;
      tab.cols.push_back(k);
      idx.push_back(std::size_t(it - rs.columns.begin()));
    }
    for (const auto& row : rs.rows) {
      std::vector<std::string> r;
      bool ok = true;
      for (auto i : idx) {
        const Cell& c = row[i];
        if (!c || !c->is_entity() || !kb.has_entity(c->as_entity())) {
          ok = false;
          break;
        }
        r.push_back(c->as_entity());
      }
      if (ok) tab.rows.insert(std::move(r));
    }
    acc = join(acc, tab);
  }

  std::vector<std::vector<std::string>> out;
  for (const auto& r : acc.rows) {
    std::vector<std::string> full = t.originals;
    for (std::size_t j = 0; j < acc.cols.size(); ++j) full[acc.cols[j]] = r[j];
    out.push_back(std::move(full));
  }
  auto less = [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto c = compare_entity_ids(a[i], b[i]);
      if (c != 0) return c < 0;
    }
    return false;
  };
  std::sort(out.begin(), out.end(), less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Generated> generalize(const DatasetRecord& seed_record, const KnowledgeBase& kb, int max_n,
                                  std::uint64_t seed) {
  if (max_n < 1) throw Error(ErrorCode::kArityError, "max_n must be at least 1");
  const Template t = extract_template(program_from_lines(seed_record.pyql));
  std::vector<std::vector<std::string>> candidates = template_bindings(t, kb);
  if (candidates.empty()) throw Error(ErrorCode::kNoBindings, "the template matches nothing");
  std::erase(candidates, t.originals);

  Rng rng(seed);
  shuffle(candidates, rng);

  std::vector<double> base;
  for (const auto& l : t.literals) base.push_back(l.value);
  const bool perturb = std::any_of(t.literals.begin(), t.literals.end(), [](const auto& l) { return l.perturbable; });

  std::vector<Generated> out;
  for (const auto& binding : candidates) {
    if (int(out.size()) >= max_n) break;
    std::optional<RunResult> run;
    std::vector<double> lits = base;
    // A few perturbation draws, then the seed's own literals.
    for (int attempt = 0; attempt < (perturb ? 4 : 0) && !run; ++attempt) {
      lits = base;
      for (std::size_t k = 0; k < t.literals.size(); ++k) {
        const auto& l = t.literals[k];
        if (!l.perturbable) continue;
        const double scale = std::pow(10.0, l.decimals);
        lits[k] = std::round(l.value * (0.8 + 0.45 * uniform01(rng)) * scale) / scale;
      }
      run = run_unique(instantiate(t, binding, &lits), kb);
    }
    if (!run) {
      lits = base;
      run = run_unique(instantiate(t, binding, &lits), kb);
    }
    if (!run) continue;

    Generated g;
    g.binding = binding;
    DatasetRecord& r = g.record;
    r.qid = seed_record.qid + "-g" + std::to_string(out.size() + 1);
    r.question = seed_record.question;
    for (std::size_t k = 0; k < binding.size(); ++k) {
      if (binding[k] == t.originals[k]) continue;
      std::vector<std::string> forms = surface_forms(kb, binding[k]);
      const std::string with = forms.empty() ? binding[k] : forms[rng() % forms.size()];
      replace_mention(r.question, kb, t.originals[k], with);
    }
    for (std::size_t k = 0; k < t.literals.size(); ++k) {
      if (lits[k] == base[k]) continue;
      const std::string from = format_number(base[k]);
      const auto pos = r.question.find(from);
      if (pos != std::string::npos) r.question.replace(pos, from.size(), format_number(lits[k]));
    }
    r.pyql = serialize_lines(instantiate(t, binding, &lits));
    r.sparql = run->elaboration.sparql;
    r.answer = run->answer;
    out.push_back(std::move(g));
  }
  return out;
}

// ---- descriptions ----------------------------------------------------------

double PropertyWeights::weight(std::string_view property) const {
  auto it = table.find(std::string(property));
  return (it == table.end() ? 0.0 : it->second) + 1.0;
}

PropertyWeights PropertyWeights::from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kParseError, "property weights must be an object");
  PropertyWeights w;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_number() || it.value().get<double>() < 0)
      throw Error(ErrorCode::kParseError, "weight of " + it.key() + " must be a non-negative number");
    w.table[it.key()] = it.value().get<double>();
  }
  return w;
}

PropertyWeights PropertyWeights::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::kIoError, "cannot read " + path);
  try {
    return from_json(Json::parse(f));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string(path) + ": " + e.what());
  }
}

namespace {

struct Shape {
  int target_consts;
  bool inner;
  int inner_consts;
};

Shape shape_of(int structure) {
  static const Shape shapes[] = {{1, false, 0}, {2, false, 0}, {0, true, 1},
                                 {1, true, 1},  {0, true, 2},  {1, true, 2}};
  if (structure < 1 || structure > 6) throw Error(ErrorCode::kArityError, "structure must be 1..6");
  return shapes[structure - 1];
}

sparql::Term node_term(const SpecNode& n) {
  switch (n.role) {
    case NodeRole::kTarget: return sparql::Variable{"t"};
    case NodeRole::kInner: return sparql::Variable{"i"};
    case NodeRole::kConst: break;
  }
  return sparql::Iri{n.id};
}

struct Edge {
  std::string property;
  std::string other;
  bool outgoing;  // node -property-> other
};

using Adjacency = std::unordered_map<std::string, std::vector<Edge>>;

Adjacency adjacency(const KnowledgeBase& kb) {
  Adjacency adj;
  for (const auto& tr : kb.triples()) {
    if (!tr.object.value.is_entity()) continue;
    const std::string& o = tr.object.value.as_entity();
    if (o == tr.subject || !kb.has_entity(o) || !kb.has_entity(tr.subject)) continue;
    adj[tr.subject].push_back({tr.property, o, true});
    adj[o].push_back({tr.property, tr.subject, false});
  }
  return adj;
}

template <class Pred>
const Edge* pick_edge(const std::vector<Edge>& edges, const PropertyWeights& w, Rng& rng, Pred ok) {
  double total = 0;
  for (const auto& e : edges)
    if (ok(e)) total += w.weight(e.property);
  if (total <= 0) return nullptr;
  double x = uniform01(rng) * total;
  const Edge* last = nullptr;
  for (const auto& e : edges) {
    if (!ok(e)) continue;
    last = &e;
    x -= w.weight(e.property);
    if (x < 0) return &e;
  }
  return last;
}

SpecTriple edge_triple(const SpecNode& from, const Edge& e, NodeRole other_role) {
  SpecNode other{other_role, e.other};
  return e.outgoing ? SpecTriple{from, e.property, other} : SpecTriple{other, e.property, from};
}

std::string node_text(const SpecNode& n, const std::string& target_var, const std::string& inner_var) {
  switch (n.role) {
    case NodeRole::kTarget: return target_var;
    case NodeRole::kInner: return inner_var;
    case NodeRole::kConst: break;
  }
  return n.id;
}

std::string describe(const SubgraphSpec& spec, const KnowledgeBase& kb) {
  auto name = [&](const SpecNode& n) -> std::string {
    if (n.role == NodeRole::kTarget) return "it";
    if (n.role == NodeRole::kInner) return "something";
    const Entity* e = kb.entity(n.id);
    return e && !e->label.empty() ? e->label : n.id;
  };
  std::string out = "[";
  for (std::size_t i = 0; i < spec.triples.size(); ++i) {
    const auto& t = spec.triples[i];
    if (i) out += "; ";
    out += name(t.subject) + " " + t.property + " " + name(t.object);
  }
  return out + "]";
}

}  // namespace

bool has_structure_shape(const SubgraphSpec& spec) {
  if (spec.structure < 1 || spec.structure > 6) return false;
  const Shape want = shape_of(spec.structure);
  if (want.inner != spec.inner.has_value()) return false;
  int tc = 0, ti = 0, ic = 0;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& tr : spec.triples) {
    auto a = tr.subject.role, b = tr.object.role;
    if (a > b) std::swap(a, b);
    if (a == NodeRole::kTarget && b == NodeRole::kConst) ++tc;
    else if (a == NodeRole::kTarget && b == NodeRole::kInner) ++ti;
    else if (a == NodeRole::kInner && b == NodeRole::kConst) ++ic;
    else return false;
    if (tr.subject.role == NodeRole::kTarget && tr.subject.id != spec.target) return false;
    if (tr.object.role == NodeRole::kTarget && tr.object.id != spec.target) return false;
  }
  return tc == want.target_consts && ti == (want.inner ? 1 : 0) && ic == want.inner_consts;
}

std::vector<std::string> spec_matches(const SubgraphSpec& spec, const KnowledgeBase& kb) {
  bool mentions_target = false;
  sparql::SelectQuery q;
  for (const auto& tr : spec.triples) {
    mentions_target = mentions_target || tr.subject.role == NodeRole::kTarget || tr.object.role == NodeRole::kTarget;
    q.patterns.push_back(
        sparql::TriplePattern{node_term(tr.subject), sparql::Predicate::direct(tr.property), node_term(tr.object)});
  }
  if (!mentions_target) return kb.entity_ids();
  q.head = sparql::Projection{true, false, {sparql::Variable{"t"}}};
  std::vector<std::string> out;
  for (const auto& row : evaluate(q, kb).rows)
    if (row[0] && row[0]->is_entity()) out.push_back(row[0]->as_entity());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return compare_entity_ids(a, b) < 0; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool check_sufficient(const SubgraphSpec& spec, const KnowledgeBase& kb) {
  const auto m = spec_matches(spec, kb);
  return m.size() == 1 && m[0] == spec.target;
}

bool check_nonredundant(const SubgraphSpec& spec, const KnowledgeBase& kb) {
  for (std::size_t i = 0; i < spec.triples.size(); ++i) {
    SubgraphSpec ablated = spec;
    ablated.triples.erase(ablated.triples.begin() + std::ptrdiff_t(i));
    if (check_sufficient(ablated, kb)) return false;
  }
  return true;
}

SubgraphSpec sample_description(const KnowledgeBase& kb, std::string_view target, int structure,
                                std::uint64_t seed, const SampleOptions& options) {
  if (!kb.has_entity(target)) throw Error(ErrorCode::kUnknownEntity, "unknown entity " + std::string(target));
  const Shape shape = shape_of(structure);
  const Adjacency adj = adjacency(kb);
  static const std::vector<Edge> none;
  auto edges_of = [&](const std::string& id) -> const std::vector<Edge>& {
    auto it = adj.find(id);
    return it == adj.end() ? none : it->second;
  };
  const std::string t(target);
  const SpecNode tnode{NodeRole::kTarget, t};
  Rng rng(seed);

  for (int attempt = 0; attempt < options.attempt_budget; ++attempt) {
    SubgraphSpec spec;
    spec.structure = structure;
    spec.target = t;
    std::set<std::string> consts;
    bool ok = true;
    auto fresh_triple = [&](const SpecTriple& tr) {
      return std::find(spec.triples.begin(), spec.triples.end(), tr) == spec.triples.end();
    };

    for (int k = 0; k < shape.target_consts && ok; ++k) {
      const Edge* e = pick_edge(edges_of(t), options.weights, rng, [&](const Edge& e) { return e.other != t; });
      if (!e || !fresh_triple(edge_triple(tnode, *e, NodeRole::kConst))) {
        ok = false;
        break;
      }
      consts.insert(e->other);
      spec.triples.push_back(edge_triple(tnode, *e, NodeRole::kConst));
    }
    if (ok && shape.inner) {
      const Edge* e = pick_edge(edges_of(t), options.weights, rng,
                                [&](const Edge& x) { return x.other != t && !consts.count(x.other); });
      if (!e) {
        ok = false;
      } else {
        spec.inner = e->other;
        spec.triples.push_back(edge_triple(tnode, *e, NodeRole::kInner));
        const SpecNode inode{NodeRole::kInner, *spec.inner};
        for (int k = 0; k < shape.inner_consts && ok; ++k) {
          const Edge* f = pick_edge(edges_of(*spec.inner), options.weights, rng,
                                    [&](const Edge& f) { return f.other != t && f.other != *spec.inner; });
          if (!f || !fresh_triple(edge_triple(inode, *f, NodeRole::kConst))) {
            ok = false;
            break;
          }
          spec.triples.push_back(edge_triple(inode, *f, NodeRole::kConst));
        }
      }
    }
    if (ok && check_sufficient(spec, kb) && check_nonredundant(spec, kb)) return spec;
  }
  throw Error(ErrorCode::kNoValidSubgraph, "no structure-" + std::to_string(structure) + " description of " + t +
                                               " within " + std::to_string(options.attempt_budget) + " attempts");
}

std::vector<Composed> compose(const DatasetRecord& example, const KnowledgeBase& kb, int n, std::uint64_t seed,
                              const SampleOptions& options) {
  if (n < 1 || n > 2) throw Error(ErrorCode::kArityError, "n must be 1 or 2");
  const ProgramIR ir = program_from_lines(example.pyql);
  const Template t = extract_template(ir);
  if (t.slots.empty()) throw Error(ErrorCode::kNoValidSubgraph, "the program mentions no entity");
  const Value original = unique_answer(evaluate(elaborate(ir).query, kb));

  std::set<std::string> used = variables_in(ir);
  int var_counter = 0;
  auto fresh_pair = [&] {
    for (;;) {
      ++var_counter;
      std::string a = "?d" + std::to_string(var_counter);
      std::string b = a + "_in";
      if (!used.count(a) && !used.count(b)) {
        used.insert(a);
        used.insert(b);
        return std::pair{a, b};
      }
    }
  };

  Rng rng(seed);
  std::vector<Composed> out;
  std::set<std::vector<std::string>> seen;
  for (int k = 1; k <= n; ++k) {
    const std::size_t m = std::min<std::size_t>(std::size_t(k), t.slots.size());
    std::vector<std::size_t> order(t.slots.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    shuffle(order, rng);
    order.resize(m);

    Composed c;
    std::vector<std::string> values = t.originals;
    // object name -> description calls to splice after its declaration
    std::map<std::string, std::vector<Call>> splice;
    bool ok = true;
    for (auto slot : order) {
      std::vector<int> structures = {1, 2, 3, 4, 5, 6};
      shuffle(structures, rng);
      std::optional<SubgraphSpec> spec;
      for (int s : structures) {
        try {
          spec = sample_description(kb, t.originals[slot], s, rng(), options);
          break;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kNoValidSubgraph) throw;
        }
      }
      if (!spec) {
        ok = false;
        break;
      }
      const auto [tv, iv] = fresh_pair();
      values[slot] = tv;
      std::set<std::string> objects;
      for (const auto& u : t.uses)
        if (u.slot == slot) objects.insert(std::get<Call>(t.program.statements[u.statement]).object);
      for (const auto& obj : objects)
        for (const auto& tr : spec->triples)
          splice[obj].push_back(Call{obj,
                                     "add_fact",
                                     {ProgramArg::string(node_text(tr.subject, tv, iv)), ProgramArg::string(tr.property),
                                      ProgramArg::string(node_text(tr.object, tv, iv))}});
      c.replaced.push_back(t.originals[slot]);
      c.specs.push_back(std::move(*spec));
    }
    if (!ok) continue;

    const ProgramIR filled = instantiate(t, values);
    ProgramIR composed;
    for (const auto& st : filled.statements) {
      composed.statements.push_back(st);
      if (const auto* d = std::get_if<Declaration>(&st))
        for (const auto& call : splice[d->object]) composed.statements.push_back(call);
    }
    auto run = run_unique(composed, kb);
    if (!run || !answers_agree(run->answer, original)) continue;
    c.record.pyql = serialize_lines(composed);
    if (!seen.insert(c.record.pyql).second) continue;

    c.record.qid = example.qid + "-c" + std::to_string(out.size() + 1);
    c.record.question = example.question;
    for (std::size_t i = 0; i < c.replaced.size(); ++i) {
      const std::string desc = describe(c.specs[i], kb);
      if (!replace_mention(c.record.question, kb, c.replaced[i], desc)) c.record.question += " " + desc;
    }
    c.record.sparql = run->elaboration.sparql;
    c.record.answer = run->answer;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace pyql
