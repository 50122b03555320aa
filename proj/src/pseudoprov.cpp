// Copyright (c) provtrail contributors.
// SPDX-License-Identifier: MIT

#include "provtrail/pseudoprov.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <map>

#include "provtrail/actions.hpp"
#include "provtrail/error.hpp"

namespace provtrail {

namespace {

bool usable_source(const Corpus& sources, const std::string& name, bool include_generated,
                   const std::string& exclude) {
  if (name == exclude) {
    return false;
  }
  return include_generated || sources.is_seed(name);
}

std::set<Origin> matches_for(const Component& c, const Corpus& sources, MatchMode mode,
                             bool include_generated, const std::string& exclude) {
  if (const auto* single = std::get_if<SingleAnnotation>(&c.annotation)) {
    return {single->origin};
  }
  std::set<Origin> out;
  const std::string needle =
      mode == MatchMode::abstracted ? mask_action(c.action) : c.action;
  for (const auto& [name, test] : sources.tests) {
    if (!usable_source(sources, name, include_generated, exclude)) {
      continue;
    }
    for (size_t j = 0; j < test.components.size(); ++j) {
      const std::string& candidate = test.components[j].action;
      const bool hit = mode == MatchMode::abstracted ? mask_action(candidate) == needle
                                                     : candidate == needle;
      if (hit) {
        out.insert(Origin{name, j});
      }
    }
  }
  return out;
}

bool component_compatible(const Component& target, const Component& source, MatchMode mode) {
  return mode == MatchMode::abstracted ? mask_action(source.action) == mask_action(target.action)
                                       : source.action == target.action;
}

}  // namespace

std::set<Origin> compatible_positions(const Component& c, const Corpus& sources, MatchMode mode,
                                      bool include_generated) {
  return matches_for(c, sources, mode, include_generated, /*exclude=*/"");
}

Test greedy_pseudo_provenance(const Test& t, const Corpus& sources, MatchMode mode,
                              bool include_generated) {
  Test result = t;
  const size_t n = t.components.size();

  // Closes the run [run_start, end] using the lexicographically least
  // surviving origin, writing annotations backwards. The survivors extend
  // back to run_start by construction; this is verified, not assumed.
  auto close_run = [&](size_t run_start, size_t end, const std::set<Origin>& live) {
    const Origin& chosen = *live.begin();
    const Test& source = sources.at(chosen.test_name);
    for (size_t idx = run_start; idx <= end; ++idx) {
      const size_t source_pos = chosen.position - (end - idx);
      if (source_pos >= source.components.size() ||
          !component_compatible(result.components[idx], source.components[source_pos], mode)) {
        throw ProvenanceError(
            fmt::format("surviving origin {}:{} does not span the whole run", chosen.test_name,
                        chosen.position));
      }
      result.components[idx].annotation =
          SingleAnnotation{Origin{chosen.test_name, source_pos}, mode == MatchMode::abstracted};
    }
  };

  std::set<Origin> live;
  size_t run_start = 0;
  for (size_t i = 0; i < n; ++i) {
    const Component& c = t.components[i];
    // Pre-annotated components are left alone and end the current run;
    // weighted provenance is likewise never rewritten.
    if (!std::holds_alternative<std::monostate>(c.annotation)) {
      if (!live.empty()) {
        close_run(run_start, i - 1, live);
        live.clear();
      }
      continue;
    }
    std::set<Origin> comp = matches_for(c, sources, mode, include_generated, t.name);
    if (comp.empty()) {
      if (!live.empty()) {
        close_run(run_start, i - 1, live);
        live.clear();
      }
      continue;
    }
    if (live.empty()) {
      live = std::move(comp);
      run_start = i;
      continue;
    }
    std::set<Origin> extended;
    for (const Origin& o : comp) {
      if (o.position > 0 && live.contains(Origin{o.test_name, o.position - 1})) {
        extended.insert(o);
      }
    }
    if (!extended.empty()) {
      live = std::move(extended);
    } else {
      close_run(run_start, i - 1, live);
      live = std::move(comp);
      run_start = i;
    }
  }
  if (!live.empty()) {
    close_run(run_start, n - 1, live);
  }
  return result;
}

std::vector<ProvenanceRun> runs_of(const Test& t) {
  std::vector<ProvenanceRun> runs;
  std::optional<ProvenanceRun> open;
  for (size_t i = 0; i < t.components.size(); ++i) {
    const Annotation& a = t.components[i].annotation;
    if (std::holds_alternative<WeightedAnnotation>(a)) {
      throw ProvenanceError("runs undefined for weighted provenance");
    }
    const auto* single = std::get_if<SingleAnnotation>(&a);
    if (!single) {
      if (open) {
        runs.push_back(*open);
        open.reset();
      }
      continue;
    }
    const Origin& o = single->origin;
    if (open && open->source == o.test_name &&
        o.position == open->source_start + (i - open->start)) {
      open->end = i;
      continue;
    }
    if (open) {
      runs.push_back(*open);
    }
    open = ProvenanceRun{i, i, o.test_name, o.position};
  }
  if (open) {
    runs.push_back(*open);
  }
  return runs;
}

size_t oracle_min_segmentation(const Test& t, const Corpus& sources, MatchMode mode,
                               bool include_generated) {
  constexpr size_t kMaxOracleLength = 20;
  if (t.components.size() > kMaxOracleLength) {
    throw Error(fmt::format("oracle limited to tests of length <= {}", kMaxOracleLength));
  }
  size_t total = 0;
  std::map<Origin, size_t> prev;  // min runs for the block prefix, per end origin
  bool in_block = false;
  for (const Component& c : t.components) {
    std::set<Origin> comp;
    if (std::holds_alternative<std::monostate>(c.annotation) ||
        std::holds_alternative<SingleAnnotation>(c.annotation)) {
      comp = matches_for(c, sources, mode, include_generated, t.name);
    }
    if (comp.empty()) {
      // Unmatchable component: runs cannot span it, so the block closes.
      if (in_block) {
        size_t best = std::numeric_limits<size_t>::max();
        for (const auto& [origin, runs] : prev) {
          (void)origin;
          best = std::min(best, runs);
        }
        total += best;
        prev.clear();
        in_block = false;
      }
      continue;
    }
    std::map<Origin, size_t> cur;
    size_t best_prev = std::numeric_limits<size_t>::max();
    for (const auto& [origin, runs] : prev) {
      (void)origin;
      best_prev = std::min(best_prev, runs);
    }
    for (const Origin& o : comp) {
      size_t best = in_block ? best_prev + 1 : 1;  // start a fresh run here
      if (in_block && o.position > 0) {
        auto it = prev.find(Origin{o.test_name, o.position - 1});
        if (it != prev.end()) {
          best = std::min(best, it->second);  // extend the previous run
        }
      }
      cur.emplace(o, best);
    }
    prev = std::move(cur);
    in_block = true;
  }
  if (in_block) {
    size_t best = std::numeric_limits<size_t>::max();
    for (const auto& [origin, runs] : prev) {
      (void)origin;
      best = std::min(best, runs);
    }
    total += best;
  }
  return total;
}

}  // namespace provtrail
