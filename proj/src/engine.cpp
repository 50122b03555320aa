// Copyright (c) provtrail contributors.
// SPDX-License-Identifier: MIT

#include "provtrail/engine.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "provtrail/error.hpp"

namespace provtrail {

std::vector<Subsequence> split_into_subsequences(const Test& t, size_t k) {
  if (k == 0) {
    throw Error("subsequence length k must be positive");
  }
  std::vector<Subsequence> out;
  for (size_t start = 0; start < t.components.size(); start += k) {
    Subsequence sub;
    sub.source = t.name;
    sub.start = start;
    const size_t end = std::min(start + k, t.components.size());
    for (size_t i = start; i < end; ++i) {
      sub.actions.push_back(t.components[i].action);
    }
    out.push_back(std::move(sub));
  }
  return out;
}

std::pair<Test, ExecutionResult> generate_test(const SubsequencePool& pool,
                                               const std::string& sut_id, const GenConfig& cfg,
                                               Rng& rng) {
  if (pool.entries.empty()) {
    throw CorpusError("no seeds loaded");
  }
  const Sut& sut = get_sut(sut_id);
  RunOptions options;
  options.fault_injection = cfg.fault_injection;
  auto state = sut.make_state(options);
  state->reset();

  Test t;
  ExecutionResult result;
  bool failed = false;
  // The draw budget bounds the walk even if every fragment is disabled
  // everywhere.
  for (size_t draw = 0; draw < cfg.max_test_length && !failed; ++draw) {
    if (t.components.size() >= cfg.max_test_length) {
      break;
    }
    const Subsequence& sub = pool.entries[rng.uniform_index(pool.entries.size())];
    for (size_t offset = 0; offset < sub.actions.size(); ++offset) {
      if (t.components.size() >= cfg.max_test_length) {
        break;
      }
      const std::string& action = sub.actions[offset];
      if (!state->enabled(action)) {
        continue;  // best-effort: skip, keep walking the fragment
      }
      StepOutcome outcome = state->execute(action);
      const size_t index = t.components.size();
      t.components.push_back(
          Component{action, SingleAnnotation{Origin{sub.source, sub.start + offset}, false}});
      result.executed.push_back(ExecutedStep{index, action, false});
      result.coverage.insert(outcome.touched.begin(), outcome.touched.end());
      if (outcome.failure) {
        result.failure = Failure{index, *outcome.failure};
        failed = true;
        break;
      }
    }
  }
  return {std::move(t), std::move(result)};
}

std::pair<Test, ExecutionResult> weighted_generate(const Corpus& corpus,
                                                   const std::string& sut_id,
                                                   const GenConfig& cfg, Rng& rng) {
  if (corpus.tests.empty()) {
    throw CorpusError("no seeds loaded");
  }
  const Sut& sut = get_sut(sut_id);

  // count(a) = number of corpus tests containing a; contributors keep the
  // per-test occurrence count for the annotation.
  std::map<std::string, std::map<std::string, double>> contributors;
  for (const auto& [name, test] : corpus.tests) {
    for (const Component& c : test.components) {
      contributors[c.action][name] += 1.0;
    }
  }

  RunOptions options;
  options.fault_injection = cfg.fault_injection;
  auto state = sut.make_state(options);
  state->reset();

  Test t;
  ExecutionResult result;
  std::vector<const std::string*> enabled_actions;
  std::vector<double> weights;
  while (t.components.size() < cfg.max_test_length) {
    enabled_actions.clear();
    weights.clear();
    for (const std::string& action : sut.actions()) {
      if (!state->enabled(action)) {
        continue;
      }
      enabled_actions.push_back(&action);
      auto it = contributors.find(action);
      const double count = it == contributors.end() ? 0.0 : double(it->second.size());
      weights.push_back(std::pow(1.0 + count, cfg.weight_exponent));
    }
    if (enabled_actions.empty()) {
      break;
    }
    const std::string& action = *enabled_actions[rng.pick_weighted(weights)];
    StepOutcome outcome = state->execute(action);
    const size_t index = t.components.size();
    Annotation annotation;
    if (auto it = contributors.find(action); it != contributors.end()) {
      annotation = WeightedAnnotation{it->second};
    }
    t.components.push_back(Component{action, std::move(annotation)});
    result.executed.push_back(ExecutedStep{index, action, false});
    result.coverage.insert(outcome.touched.begin(), outcome.touched.end());
    if (outcome.failure) {
      result.failure = Failure{index, *outcome.failure};
      break;
    }
  }
  return {std::move(t), std::move(result)};
}

bool learn(Test& t, const ExecutionResult& r, SubsequencePool& pool, CoverageLedger& ledger,
           Corpus& corpus, const GenConfig& cfg, size_t& gen_counter) {
  const bool novel = std::any_of(r.coverage.begin(), r.coverage.end(),
                                 [&](const CoveragePoint& p) { return !ledger.seen.contains(p); });
  if (!novel) {
    return false;
  }
  t.name = fmt::format("gen{:06}.test", gen_counter);
  ++gen_counter;
  for (Subsequence& sub : split_into_subsequences(t, cfg.k)) {
    pool.entries.push_back(std::move(sub));
  }
  ledger.per_test[t.name] = r.coverage;
  ledger.seen.insert(r.coverage.begin(), r.coverage.end());
  corpus.tests.emplace(t.name, t);
  return true;
}

CampaignResult campaign(const Corpus& seeds, const std::string& sut_id, const GenConfig& cfg) {
  if (seeds.tests.empty()) {
    throw CorpusError("no seeds loaded");
  }
  CampaignResult res;
  res.corpus = seeds;

  RunOptions run_options;
  run_options.skip_disabled = true;
  run_options.fault_injection = cfg.fault_injection;

  SubsequencePool pool;
  for (const auto& [name, test] : res.corpus.tests) {
    ExecutionResult r = run_test(sut_id, test, run_options);
    res.ledger.per_test[name] = r.coverage;
    res.ledger.seen.insert(r.coverage.begin(), r.coverage.end());
    for (Subsequence& sub : split_into_subsequences(test, cfg.k)) {
      pool.entries.push_back(std::move(sub));
    }
  }

  Rng rng(cfg.rng_seed);
  size_t gen_counter = 0;
  for (size_t iter = 0; iter < cfg.budget_tests; ++iter) {
    auto [t, r] = cfg.mode == GenMode::weighted
                      ? weighted_generate(res.corpus, sut_id, cfg, rng)
                      : generate_test(pool, sut_id, cfg, rng);
    if (learn(t, r, pool, res.ledger, res.corpus, cfg, gen_counter)) {
      res.generated_names.push_back(t.name);
      const size_t size = r.coverage.size();
      if (!res.best || size > res.best_coverage.size()) {
        res.best = t;
        res.best->name = "best.test";
        res.best_coverage = r.coverage;
      }
    }
  }
  return res;
}

}  // namespace provtrail
