// Copyright (c) provtrail contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "provtrail/corpus.hpp"
#include "provtrail/rng.hpp"
#include "provtrail/sut.hpp"

namespace provtrail {

// A contiguous fragment of a source test. `actions` equals the source's
// components [start, start + actions.size()).
struct Subsequence {
  std::string source;
  size_t start = 0;
  std::vector<std::string> actions;

  bool operator==(const Subsequence&) const = default;
};

// The learned population of fragments driving generation. Duplicates are
// kept: uniform selection over entries then weights fragments by frequency.
struct SubsequencePool {
  std::vector<Subsequence> entries;
};

struct CoverageLedger {
  CoverageSet seen;
  std::map<std::string, CoverageSet> per_test;
};

enum class GenMode { subsequence, weighted };

struct GenConfig {
  size_t k = 3;
  size_t max_test_length = 50;
  size_t budget_tests = 0;
  uint64_t rng_seed = 0;
  GenMode mode = GenMode::subsequence;
  double weight_exponent = 2.0;  // alpha in the (1 + count)^alpha sampling law
  bool fault_injection = false;
};

// Consecutive disjoint chunks [0,k), [k,2k), ...; the final chunk may be
// shorter. Every component lands in exactly one chunk.
std::vector<Subsequence> split_into_subsequences(const Test& t, size_t k);

// Draws pool entries and replays them best-effort: enabled actions are
// executed and appended with a Single annotation pointing at their fragment
// position; disabled actions are skipped without aborting the fragment.
// Stops at max_test_length, on a failure, or after max_test_length fragment
// draws. The returned result is exactly the strict replay of the returned
// test.
std::pair<Test, ExecutionResult> generate_test(const SubsequencePool& pool,
                                               const std::string& sut_id, const GenConfig& cfg,
                                               Rng& rng);

// Samples each next action among the currently enabled ones with probability
// proportional to (1 + count(a))^alpha, where count(a) is the number of
// corpus tests containing a. Components are annotated with the full set of
// contributing tests and their per-test occurrence counts; actions appearing
// in no test keep base weight 1 and yield no annotation.
std::pair<Test, ExecutionResult> weighted_generate(const Corpus& corpus,
                                                   const std::string& sut_id,
                                                   const GenConfig& cfg, Rng& rng);

// If the result covers anything outside ledger.seen, names the test
// (gen<counter>.test), stores it in the corpus, splits it into the pool, and
// updates the ledger. Returns whether the test was kept.
bool learn(Test& t, const ExecutionResult& r, SubsequencePool& pool, CoverageLedger& ledger,
           Corpus& corpus, const GenConfig& cfg, size_t& gen_counter);

struct CampaignResult {
  Corpus corpus;                             // seeds plus every learned test
  std::vector<std::string> generated_names;  // learned tests in creation order
  CoverageLedger ledger;
  std::optional<Test> best;  // named "best.test"; highest |coverage|, earliest wins ties
  CoverageSet best_coverage;
};

// The generation loop: seed executions initialize the ledger, seeds fill the
// pool, then budget_tests generate/learn iterations.
CampaignResult campaign(const Corpus& seeds, const std::string& sut_id, const GenConfig& cfg);

}  // namespace provtrail
