// Copyright (c) provtrail contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <set>
#include <string>
#include <vector>

#include "provtrail/corpus.hpp"

namespace provtrail {

// exact: components match on identical action text.
// abstracted: components match on action type (mask_action); reconstructed
// annotations carry the `~` marker.
enum class MatchMode { exact, abstracted };

// A maximal contiguous mapping from a span of a test onto a span of one
// source test. Indices are inclusive.
struct ProvenanceRun {
  size_t start = 0;
  size_t end = 0;
  std::string source;
  size_t source_start = 0;

  bool operator==(const ProvenanceRun&) const = default;
};

// All positions in the alignment sources compatible with the component. A
// component that already carries a Single annotation is pinned: its compatible
// set is exactly that origin. Sources are the corpus seeds, or every corpus
// test with include_generated.
std::set<Origin> compatible_positions(const Component& c, const Corpus& sources, MatchMode mode,
                                      bool include_generated = false);

// Greedy pseudo-provenance reconstruction: a forward pass keeps the set of
// source positions that extend the current sub-sequence, restarting from the
// full compatible set when extension is impossible; each closed run is
// annotated backwards from its end using the lexicographically least
// surviving origin. Components with no compatible position stay unannotated
// and break runs; pre-existing Single annotations are never overwritten and
// act as hard run boundaries. A source test with the same name as `t` is
// ignored so a test is never aligned against itself.
Test greedy_pseudo_provenance(const Test& t, const Corpus& sources, MatchMode mode,
                              bool include_generated = false);

// Derives the run structure from annotations: maximal spans of consecutive
// components annotated with the same source and consecutive positions.
// Throws on weighted annotations.
std::vector<ProvenanceRun> runs_of(const Test& t);

// Exact minimum number of runs that can annotate all matchable components,
// by dynamic programming over (position, origin) states. Verification
// oracle only; guarded to tests of length <= 20.
size_t oracle_min_segmentation(const Test& t, const Corpus& sources, MatchMode mode,
                               bool include_generated = false);

}  // namespace provtrail
