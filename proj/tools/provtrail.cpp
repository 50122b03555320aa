// Copyright (c) provtrail contributors.
// SPDX-License-Identifier: MIT

// provtrail: seeded test generation with per-component provenance, plus the
// post-processing workflows built on it (reduce, normalize, pseudoprov,
// report, trace). Single binary, subcommand style; every randomized command
// takes an explicit --rng-seed so outputs are reproducible byte for byte.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "provtrail/corpus.hpp"
#include "provtrail/engine.hpp"
#include "provtrail/error.hpp"
#include "provtrail/postprocess.hpp"
#include "provtrail/pseudoprov.hpp"
#include "provtrail/report.hpp"
#include "provtrail/sut.hpp"

namespace fs = std::filesystem;

namespace {

using namespace provtrail;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(fmt::format("cannot read '{}'", path.string()));
  }
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return text;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) {
    throw Error(fmt::format("cannot write '{}'", path.string()));
  }
}

Test load_test_file(const fs::path& path) {
  return parse_test(path.filename().string(), read_file(path));
}

struct GenerateArgs {
  std::string sut;
  std::string seeds;
  std::string out;
  GenConfig cfg;
  std::string mode = "subsequence";
};

void run_generate(const GenerateArgs& args) {
  GenConfig cfg = args.cfg;
  cfg.mode = args.mode == "weighted" ? GenMode::weighted : GenMode::subsequence;
  if (cfg.k == 0 || cfg.k > cfg.max_test_length) {
    throw Error("k must satisfy 1 <= k <= max test length");
  }
  const Corpus seeds = load_corpus(args.seeds);
  const CampaignResult result = campaign(seeds, args.sut, cfg);

  const fs::path out_dir(args.out);
  fs::create_directories(out_dir);
  for (const std::string& name : result.generated_names) {
    write_file(out_dir / name, serialize_test(result.corpus.at(name)));
  }
  if (result.best) {
    write_file(out_dir / "best.test", serialize_test(*result.best));
  }

  nlohmann::json manifest;
  manifest["config"] = {
      {"sut", args.sut},
      {"k", cfg.k},
      {"max_test_length", cfg.max_test_length},
      {"budget_tests", cfg.budget_tests},
      {"rng_seed", cfg.rng_seed},
      {"mode", args.mode},
      {"weight_exponent", cfg.weight_exponent},
      {"fault_injection", cfg.fault_injection},
  };
  manifest["coverage_counts"] = nlohmann::json::object();
  for (const auto& [name, coverage] : result.ledger.per_test) {
    manifest["coverage_counts"][name] = coverage.size();
  }
  manifest["generated"] = result.generated_names;
  manifest["ledger_size"] = result.ledger.seen.size();
  if (result.best) {
    manifest["best"] = {{"file", "best.test"}, {"coverage", result.best_coverage.size()}};
  } else {
    manifest["best"] = nullptr;
    std::cerr << "no tests generated\n";
  }
  write_file(out_dir / "campaign.json", manifest.dump(2) + "\n");
  std::cerr << fmt::format("generated {} tests; ledger covers {} points\n",
                           result.generated_names.size(), result.ledger.seen.size());
}

Predicate make_predicate(const std::string& preserve, const Test& t, const std::string& sut,
                         bool inject_bug) {
  if (preserve == "failure") {
    return PreservesFailure{};
  }
  RunOptions options;
  options.skip_disabled = false;
  options.fault_injection = inject_bug;
  return PreservesCoverage{run_test(sut, t, options).coverage};
}

void run_reduce(const std::string& sut, const std::string& test_path,
                const std::string& preserve, bool inject_bug, const std::string& out,
                bool do_normalize) {
  const Test t = load_test_file(test_path);
  const Predicate p = make_predicate(preserve, t, sut, inject_bug);
  const Test result = do_normalize ? normalize(t, p, sut, inject_bug)
                                   : ddmin_reduce(t, p, sut, inject_bug);
  write_file(out, serialize_test(result));
}

void run_pseudoprov(const std::string& seeds_dir, const std::string& test_path, bool abstracted,
                    const std::string& generated_dir, bool check, const std::string& out) {
  const bool include_generated = !generated_dir.empty();
  const Corpus sources =
      include_generated ? load_corpus(seeds_dir, fs::path(generated_dir)) : load_corpus(seeds_dir);
  const Test t = load_test_file(test_path);
  const MatchMode mode = abstracted ? MatchMode::abstracted : MatchMode::exact;
  const Test annotated = greedy_pseudo_provenance(t, sources, mode, include_generated);
  write_file(out, serialize_test(annotated));
  if (check) {
    const size_t greedy_runs = runs_of(annotated).size();
    const size_t optimal_runs = oracle_min_segmentation(t, sources, mode, include_generated);
    std::cout << fmt::format("greedy_runs {}\noptimal_runs {}\n", greedy_runs, optimal_runs);
  }
}

void run_report(const std::string& tests_dir, const std::string& seeds_dir, bool transitive,
                bool learned_only, bool abstracted, const std::string& format,
                const std::string& out) {
  const Corpus corpus = load_corpus(seeds_dir, fs::path(tests_dir));
  std::vector<Test> tabulated;
  for (const auto& entry : fs::directory_iterator(tests_dir)) {
    if (entry.path().extension() != ".test") {
      continue;
    }
    tabulated.push_back(corpus.at(entry.path().filename().string()));
  }
  std::sort(tabulated.begin(), tabulated.end(),
            [](const Test& a, const Test& b) { return a.name < b.name; });
  if (learned_only) {
    std::erase_if(tabulated, [](const Test& t) {
      return std::all_of(t.components.begin(), t.components.end(), [](const Component& c) {
        return std::holds_alternative<std::monostate>(c.annotation);
      });
    });
  }
  ReportOptions options;
  options.resolve_transitive = transitive;
  options.abstract_kinds = abstracted;
  const ContributionTable table = contribution_table(tabulated, corpus, options);
  const std::string rendered =
      render(table, format == "json" ? ReportFormat::json : ReportFormat::text);
  if (out.empty()) {
    std::cout << rendered;
  } else {
    write_file(out, rendered);
  }
}

void run_trace(const std::string& corpus_dir, const std::string& seeds_dir,
               const std::string& test_name, size_t step) {
  const Corpus corpus = seeds_dir.empty() ? load_mixed_corpus(corpus_dir)
                                          : load_corpus(seeds_dir, fs::path(corpus_dir));
  if (!corpus.contains(test_name)) {
    throw CorpusError(fmt::format("no test named '{}' in corpus", test_name));
  }
  const std::vector<Origin> chain = trace_to_seed(corpus, test_name, step);
  if (chain.empty()) {
    std::cout << "(seed)\n";
    return;
  }
  for (const Origin& hop : chain) {
    std::cout << fmt::format("{}:{}\n", hop.test_name, hop.position);
  }
}

void run_sut_info(const std::string& sut_id) {
  const Sut& sut = get_sut(sut_id);
  nlohmann::json j;
  j["points"] = sut.points();
  j["actions"] = sut.actions();
  std::cout << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seeded test generation with fine-grained provenance"};
  app.require_subcommand(1);

  GenerateArgs gen_args;
  auto* gen = app.add_subcommand("generate", "run a generation campaign");
  gen->add_option("--sut", gen_args.sut, "system under test")->required();
  gen->add_option("--seeds", gen_args.seeds, "seed corpus directory")->required();
  gen->add_option("--out", gen_args.out, "output directory")->required();
  gen->add_option("--k", gen_args.cfg.k, "sub-sequence length");
  gen->add_option("--budget-tests", gen_args.cfg.budget_tests, "generation attempts")->required();
  gen->add_option("--max-length", gen_args.cfg.max_test_length, "maximum test length");
  gen->add_option("--rng-seed", gen_args.cfg.rng_seed, "PRNG seed (no wall-clock default)")
      ->required();
  gen->add_option("--mode", gen_args.mode, "generation mode")
      ->check(CLI::IsMember({"subsequence", "weighted"}));
  gen->add_option("--alpha", gen_args.cfg.weight_exponent, "weighted-mode exponent");
  gen->add_flag("--inject-bug", gen_args.cfg.fault_injection, "enable the bundled fault");

  std::string pp_sut, pp_test, pp_preserve, pp_out;
  bool pp_inject = false;
  for (const auto& [name, description, normalize_mode] :
       {std::tuple{"reduce", "ddmin-reduce a test under a predicate", false},
        std::tuple{"normalize", "rewrite a test toward canonical form", true}}) {
    auto* cmd = app.add_subcommand(name, description);
    cmd->add_option("--sut", pp_sut, "system under test")->required();
    cmd->add_option("--test", pp_test, "input test file")->required();
    cmd->add_option("--preserve", pp_preserve, "predicate to preserve")
        ->required()
        ->check(CLI::IsMember({"failure", "coverage"}));
    cmd->add_flag("--inject-bug", pp_inject, "enable the bundled fault");
    cmd->add_option("--out", pp_out, "output test file")->required();
    const bool is_normalize = normalize_mode;
    cmd->callback(
        [&, is_normalize] { run_reduce(pp_sut, pp_test, pp_preserve, pp_inject, pp_out, is_normalize); });
  }

  std::string ps_seeds, ps_test, ps_generated, ps_out;
  bool ps_abstract = false, ps_check = false;
  auto* pseudo = app.add_subcommand("pseudoprov", "reconstruct pseudo-provenance");
  pseudo->add_option("--seeds", ps_seeds, "seed corpus directory")->required();
  pseudo->add_option("--test", ps_test, "input test file")->required();
  pseudo->add_flag("--abstract", ps_abstract, "match on action kind, not text");
  pseudo->add_option("--include-generated", ps_generated,
                     "directory of generated tests used as extra sources");
  pseudo->add_flag("--check", ps_check, "also run the segmentation oracle");
  pseudo->add_option("--out", ps_out, "output test file")->required();
  pseudo->callback(
      [&] { run_pseudoprov(ps_seeds, ps_test, ps_abstract, ps_generated, ps_check, ps_out); });

  std::string rp_tests, rp_seeds, rp_format = "text", rp_out;
  bool rp_transitive = false, rp_learned = false, rp_abstract = false;
  auto* report = app.add_subcommand("report", "collective provenance statistics");
  report->add_option("--tests", rp_tests, "directory of tests to tabulate")->required();
  report->add_option("--seeds", rp_seeds, "seed corpus directory")->required();
  report->add_flag("--transitive", rp_transitive, "charge origins to seeds via trace");
  report->add_flag("--learned-only", rp_learned, "skip tests with no annotations");
  report->add_flag("--abstract", rp_abstract, "key kinds by operation type");
  report->add_option("--format", rp_format, "output format")
      ->check(CLI::IsMember({"text", "json"}));
  report->add_option("--out", rp_out, "output file (default stdout)");
  report->callback([&] {
    run_report(rp_tests, rp_seeds, rp_transitive, rp_learned, rp_abstract, rp_format, rp_out);
  });

  std::string tr_corpus, tr_seeds, tr_test;
  size_t tr_step = 0;
  auto* trace = app.add_subcommand("trace", "follow provenance back to a seed");
  trace->add_option("--corpus", tr_corpus, "corpus directory")->required();
  trace->add_option("--seeds", tr_seeds, "seed directory (default: infer roots)");
  trace->add_option("--test", tr_test, "test name")->required();
  trace->add_option("--step", tr_step, "component index")->required();
  trace->callback([&] { run_trace(tr_corpus, tr_seeds, tr_test, tr_step); });

  std::string si_sut;
  auto* info = app.add_subcommand("sut-info", "dump a SUT's actions and coverage points");
  info->add_option("--sut", si_sut, "system under test")->required();
  info->callback([&] { run_sut_info(si_sut); });

  gen->callback([&] { run_generate(gen_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
