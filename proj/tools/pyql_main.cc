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

// pyql: compile, run and check PyQL programs; sample and audit corpora.
//
// Exit codes: 0 ok, 1 check failed, 2 input error, 3 non-unique answer,
// 4 knowledge base error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pyql/dataset.h"
#include "pyql/error.h"
#include "pyql/eval.h"
#include "pyql/gen.h"
#include "pyql/nrq.h"
#include "pyql/program.h"
#include "pyql/sof.h"

namespace {

using namespace pyql;

enum Exit { kOk = 0, kCheckFailed = 1, kInputError = 2, kNonUnique = 3, kKbError = 4 };

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIoError, "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIoError, "cannot write " + path);
  f << text;
}

std::string describe(const Error& e) {
  std::string msg = std::string(error_code_name(e.code())) + ": " + e.message();
  if (e.statement() > 0) msg = "stmt " + std::to_string(e.statement()) + ": " + msg;
  return msg;
}

int exit_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kNonUniqueAnswer:
    case ErrorCode::kNonUniqueOperand:
      return kNonUnique;
    default:
      return kInputError;
  }
}

// KB load failures map to their own exit code.
bool load_kb(const std::string& path, KnowledgeBase& kb) {
  try {
    kb = KnowledgeBase::load(path);
    return true;
  } catch (const Error& e) {
    std::cerr << "kb: " << describe(e) << "\n";
    return false;
  }
}

struct Options {
  std::string input, output, kb, tree, weights;
  bool prefixes = false, json = false, swap = false;
  double eq_epsilon = 0, rel_tol = 1e-9;
  std::size_t n = 0;
  int max_n = 30, replacements = 2, budget = 100;
  std::uint64_t seed = 0;
};

int cmd_compile(const Options& o) {
  try {
    std::string sparql = compile_program(parse_program(read_file(o.input)));
    if (o.prefixes) sparql = sparql::prefix_header() + sparql;
    write_output(o.output, sparql);
    return kOk;
  } catch (const Error& e) {
    std::cerr << describe(e) << "\n";
    return kInputError;
  }
}

int cmd_run(const Options& o) {
  KnowledgeBase kb;
  if (!load_kb(o.kb, kb)) return kKbError;
  try {
    const Elaboration e = elaborate(parse_program(read_file(o.input)));
    const ResultSet rs = evaluate(e.query, kb, EvalOptions{o.eq_epsilon});
    if (o.json) {
      std::cout << result_to_json(rs).dump(2) << "\n";
      return kOk;
    }
    std::cout << unique_answer(rs).to_string() << "\n";
    return kOk;
  } catch (const Error& e) {
    std::cerr << describe(e);
    std::cerr << "\n";
    return exit_for(e);
  }
}

int cmd_oracle(const Options& o) {
  KnowledgeBase kb;
  if (!load_kb(o.kb, kb)) return kKbError;
  NrqNode tree;
  try {
    tree = tree_from_json(Json::parse(read_file(o.tree)));
  } catch (const Json::exception& e) {
    std::cerr << "ParseError: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    std::cerr << describe(e) << "\n";
    return kInputError;
  }
  try {
    const Value direct = interpret(tree, kb);
    const ProgramIR program = lower_to_pyql(tree, LowerOptions{o.swap});
    const Value compiled = unique_answer(evaluate(elaborate(program).query, kb));
    const bool agree = answers_agree(direct, compiled, o.rel_tol);
    std::cout << "interpret: " << direct.to_string() << "\n"
              << "compiled:  " << compiled.to_string() << "\n"
              << (agree ? "AGREE" : "DISAGREE") << "\n";
    return agree ? kOk : kCheckFailed;
  } catch (const Error& e) {
    std::cerr << describe(e) << "\n";
    return exit_for(e);
  }
}

int cmd_lower(const Options& o) {
  try {
    write_output(o.output, serialize_program(lower_to_pyql(tree_from_json(Json::parse(read_file(o.tree))),
                                                           LowerOptions{o.swap})));
    return kOk;
  } catch (const Json::exception& e) {
    std::cerr << "ParseError: " << e.what() << "\n";
  } catch (const Error& e) {
    std::cerr << describe(e) << "\n";
  }
  return kInputError;
}

int cmd_fuzz(const Options& o) {
  const FuzzReport r = fuzz_programs(o.n, o.seed);
  std::cout << r.valid << "/" << r.total << " valid\n";
  for (const auto& f : r.failures) std::cerr << "---\n" << f << "\n";
  return r.failures.empty() ? kOk : kCheckFailed;
}

bool load_corpus(const std::string& path, std::vector<DatasetRecord>& out) {
  try {
    out = load_records(path);
    return true;
  } catch (const Error& e) {
    std::cerr << path << ": " << describe(e) << "\n";
    return false;
  }
}

std::uint64_t record_seed(std::uint64_t seed, std::size_t index) { return seed * 1000003u + index; }

int cmd_gen(const Options& o) {
  KnowledgeBase kb;
  if (!load_kb(o.kb, kb)) return kKbError;
  std::vector<DatasetRecord> seeds;
  if (!load_corpus(o.input, seeds)) return kInputError;
  std::vector<DatasetRecord> out;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    try {
      for (auto& g : generalize(seeds[i], kb, o.max_n, record_seed(o.seed, i))) out.push_back(std::move(g.record));
    } catch (const Error& e) {
      std::cerr << seeds[i].qid << ": " << describe(e) << "\n";
    }
  }
  try {
    write_output(o.output, write_records(out));
  } catch (const Error& e) {
    std::cerr << describe(e) << "\n";
    return kInputError;
  }
  std::cerr << out.size() << " records from " << seeds.size() << " seeds\n";
  return kOk;
}

int cmd_compose(const Options& o) {
  KnowledgeBase kb;
  if (!load_kb(o.kb, kb)) return kKbError;
  std::vector<DatasetRecord> inputs;
  if (!load_corpus(o.input, inputs)) return kInputError;
  SampleOptions so;
  so.attempt_budget = o.budget;
  try {
    if (!o.weights.empty()) so.weights = PropertyWeights::load(o.weights);
  } catch (const Error& e) {
    std::cerr << describe(e) << "\n";
    return kInputError;
  }
  std::vector<DatasetRecord> out;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    try {
      for (auto& c : compose(inputs[i], kb, o.replacements, record_seed(o.seed, i), so))
        out.push_back(std::move(c.record));
    } catch (const Error& e) {
      std::cerr << inputs[i].qid << ": " << describe(e) << "\n";
    }
  }
  try {
    write_output(o.output, write_records(out));
  } catch (const Error& e) {
    std::cerr << describe(e) << "\n";
    return kInputError;
  }
  std::cerr << out.size() << " records from " << inputs.size() << " inputs\n";
  return kOk;
}

std::string percent(int part, int whole) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", whole ? 100.0 * part / whole : 0.0);
  return buf;
}

int cmd_stats(const Options& o) {
  std::vector<DatasetRecord> records;
  if (!load_corpus(o.input, records)) return kInputError;
  OperatorStats total;
  int with_arith = 0, with_agg = 0, with_cmp = 0;
  double ratio = 0;
  Json per_record = Json::array();
  for (const auto& r : records) {
    OperatorStats s;
    try {
      s = operator_stats(program_from_lines(r.pyql));
    } catch (const Error& e) {
      std::cerr << r.qid << ": " << describe(e) << "\n";
      return kInputError;
    }
    total += s;
    with_arith += s.arithmetic > 0;
    with_agg += s.aggregation > 0;
    with_cmp += s.comparison > 0;
    ratio += conciseness(r);
    per_record.push_back({{"qid", r.qid},
                          {"operators", s.total()},
                          {"arithmetic", s.arithmetic},
                          {"aggregation", s.aggregation},
                          {"comparison", s.comparison}});
  }
  const int n = int(records.size());
  const double mean = n ? double(total.total()) / n : 0.0;
  if (o.json) {
    Json j;
    j["records"] = n;
    j["operators"] = total.total();
    j["mean_operators"] = mean;
    j["categories"] = {{"arithmetic", total.arithmetic}, {"aggregation", total.aggregation},
                       {"comparison", total.comparison}};
    j["records_with"] = {{"arithmetic", with_arith}, {"aggregation", with_agg}, {"comparison", with_cmp}};
    j["per_operator"] = total.per_operator;
    j["token_ratio"] = n ? ratio / n : 0.0;
    j["per_record"] = per_record;
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", mean);
  std::cout << "records: " << n << "\n"
            << "operators: " << total.total() << "\n"
            << "mean operators per record: " << buf << "\n";
  std::cout << "arithmetic: " << total.arithmetic << " (" << percent(total.arithmetic, total.total())
            << " of operators, " << percent(with_arith, n) << " of records)\n";
  std::cout << "aggregation: " << total.aggregation << " (" << percent(total.aggregation, total.total())
            << " of operators, " << percent(with_agg, n) << " of records)\n";
  std::cout << "comparison: " << total.comparison << " (" << percent(total.comparison, total.total())
            << " of operators, " << percent(with_cmp, n) << " of records)\n";
  for (const auto& [op, count] : total.per_operator) std::cout << "  " << op << ": " << count << "\n";
  std::snprintf(buf, sizeof buf, "%.3f", n ? ratio / n : 0.0);
  std::cout << "mean PyQL/SPARQL token ratio: " << buf << "\n";
  return kOk;
}

int cmd_check(const Options& o) {
  KnowledgeBase kb;
  if (!load_kb(o.kb, kb)) return kKbError;
  std::vector<DatasetRecord> records;
  if (!load_corpus(o.input, records)) return kInputError;
  std::size_t good = 0;
  for (const auto& r : records) {
    const std::string why = check_record(r, kb);
    if (why.empty()) {
      ++good;
    } else {
      std::cout << r.qid << ": " << why << "\n";
    }
  }
  std::cout << good << "/" << records.size() << " records consistent\n";
  return good == records.size() ? kOk : kCheckFailed;
}

// Completes draft records (qid, question, pyql, optional level and nrq) with
// their compiled SPARQL and answer. A draft carrying a tree must agree with
// the interpreter; without pyql the tree is lowered.
int cmd_fill(const Options& o) {
  KnowledgeBase kb;
  if (!load_kb(o.kb, kb)) return kKbError;
  std::string text;
  try {
    text = read_file(o.input);
  } catch (const Error& e) {
    std::cerr << describe(e) << "\n";
    return kInputError;
  }
  std::istringstream in(text);
  std::string line, out;
  int status = kOk;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    std::string qid = "?";
    try {
      j = Json::parse(line);
      qid = j.at("qid").get<std::string>();
      if (!j.contains("pyql") && j.contains("nrq")) j["pyql"] = serialize_lines(lower_to_pyql(tree_from_json(j["nrq"])));
      const Elaboration e = elaborate(program_from_lines(j.at("pyql").get<std::vector<std::string>>()));
      const Value answer = unique_answer(evaluate(e.query, kb));
      if (j.contains("nrq")) {
        const Value direct = interpret(tree_from_json(j["nrq"]), kb);
        if (!answers_agree(direct, answer)) {
          std::cerr << qid << ": interpreter gives " << direct.to_string() << ", query gives " << answer.to_string()
                    << "\n";
          status = kCheckFailed;
          continue;
        }
      }
      j["sparql"] = e.sparql;
      j["answer"] = answer_to_json(answer);
      out += record_to_json(record_from_json(j)).dump() + "\n";
    } catch (const Json::exception& e) {
      std::cerr << qid << ": ParseError: " << e.what() << "\n";
      status = kInputError;
    } catch (const Error& e) {
      std::cerr << qid << ": " << describe(e) << "\n";
      status = status == kOk ? exit_for(e) : status;
    }
  }
  try {
    write_output(o.output, out);
  } catch (const Error& e) {
    std::cerr << describe(e) << "\n";
    return kInputError;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PyQL toolkit: compile, run and sample PyQL programs"};
  app.require_subcommand(1);
  Options o;

  auto* compile = app.add_subcommand("compile", "Compile a PyQL program to SPARQL");
  compile->add_option("-i,--input", o.input, "Program file")->required();
  compile->add_option("-o,--output", o.output, "Output file (default stdout)");
  compile->add_flag("--prefixes", o.prefixes, "Prepend the PREFIX header");

  auto* run = app.add_subcommand("run", "Execute a program against a knowledge base");
  run->add_option("--kb", o.kb, "Knowledge base JSONL")->required();
  run->add_option("-q,--query", o.input, "Program file")->required();
  run->add_flag("--json", o.json, "Print the full result set");
  run->add_option("--eq-epsilon", o.eq_epsilon, "Tolerance for numeric =");

  auto* oracle = app.add_subcommand("oracle", "Compare the tree interpreter with the compiled query");
  oracle->add_option("--kb", o.kb, "Knowledge base JSONL")->required();
  oracle->add_option("--tree", o.tree, "Tree JSON")->required();
  oracle->add_option("--rel-tol", o.rel_tol, "Relative tolerance for numbers");
  oracle->add_flag("--swap-operands", o.swap, "Lower with operands swapped (negative control)");

  auto* lower = app.add_subcommand("lower", "Lower a computational tree to a PyQL program");
  lower->add_option("--tree", o.tree, "Tree JSON")->required();
  lower->add_option("-o,--output", o.output, "Output file (default stdout)");
  lower->add_flag("--swap-operands", o.swap, "Swap operands (negative control)");

  auto* fuzz = app.add_subcommand("fuzz", "Round-trip random builder programs");
  fuzz->add_option("--n", o.n, "Number of programs")->required();
  fuzz->add_option("--seed", o.seed, "Seed");

  auto* gen = app.add_subcommand("gen", "Generalize seed records over the knowledge base");
  gen->add_option("--kb", o.kb, "Knowledge base JSONL")->required();
  gen->add_option("-i,--input", o.input, "Seed corpus JSONL")->required();
  gen->add_option("-o,--output", o.output, "Output JSONL (default stdout)");
  gen->add_option("--max-n", o.max_n, "Examples per seed")->check(CLI::Range(1, 1000000));
  gen->add_option("--seed", o.seed, "Seed");

  auto* comp = app.add_subcommand("compose", "Replace entities by sampled descriptions");
  comp->add_option("--kb", o.kb, "Knowledge base JSONL")->required();
  comp->add_option("-i,--input", o.input, "Corpus JSONL")->required();
  comp->add_option("-o,--output", o.output, "Output JSONL (default stdout)");
  comp->add_option("--n", o.replacements, "New examples per input (1 or 2)")->check(CLI::Range(1, 2));
  comp->add_option("--seed", o.seed, "Seed");
  comp->add_option("--weights", o.weights, "Property weight table JSON");
  comp->add_option("--budget", o.budget, "Sampling attempts per entity and structure")->check(CLI::PositiveNumber);

  auto* stats = app.add_subcommand("stats", "Operator statistics of a corpus");
  stats->add_option("-i,--input", o.input, "Corpus JSONL")->required();
  stats->add_flag("--json", o.json, "Machine-readable output");

  auto* check = app.add_subcommand("check", "Check records against their SPARQL and answers");
  check->add_option("--kb", o.kb, "Knowledge base JSONL")->required();
  check->add_option("-i,--input", o.input, "Corpus JSONL")->required();

  auto* fill = app.add_subcommand("fill", "Complete draft records with SPARQL and answers");
  fill->add_option("--kb", o.kb, "Knowledge base JSONL")->required();
  fill->add_option("-i,--input", o.input, "Draft JSONL")->required();
  fill->add_option("-o,--output", o.output, "Output JSONL (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  if (*compile) return cmd_compile(o);
  if (*run) return cmd_run(o);
  if (*oracle) return cmd_oracle(o);
  if (*lower) return cmd_lower(o);
  if (*fuzz) return cmd_fuzz(o);
  if (*gen) return cmd_gen(o);
  if (*comp) return cmd_compose(o);
  if (*stats) return cmd_stats(o);
  if (*check) return cmd_check(o);
  if (*fill) return cmd_fill(o);
  return kInputError;
}
