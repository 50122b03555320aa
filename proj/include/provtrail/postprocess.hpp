// Copyright (c) provtrail contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <variant>

#include "provtrail/corpus.hpp"
#include "provtrail/sut.hpp"

namespace provtrail {

// Reduction predicates, evaluated by strict replay (skip_disabled=false). A
// candidate that makes a later step disabled falsifies the predicate instead
// of silently skipping.
struct PreservesFailure {};

struct PreservesCoverage {
  CoverageSet target;
};

struct PreservesCoverageCount {
  size_t min_points = 0;
};

using Predicate = std::variant<PreservesFailure, PreservesCoverage, PreservesCoverageCount>;

bool evaluate_predicate(const Predicate& p, const Test& t, const std::string& sut_id,
                        bool fault_injection);

// Classic ddmin over the component list (granularity doubling, complements
// tried earliest-chunk first). The result is a subsequence of the input,
// satisfies p, and is 1-minimal: deleting any single remaining component
// falsifies p. Retained components keep their annotations verbatim.
Test ddmin_reduce(const Test& t, const Predicate& p, const std::string& sut_id,
                  bool fault_injection = false);

// Rewrites the test to a fixpoint under two rules, accepting a rewrite only
// when p still holds:
//   R1: canonical variable renumbering by first use per variable family;
//   R2: per-component lowering of numeric constants to the least vocabulary
//       value preserving p.
// Components whose action text changed lose their provenance (Annotation
// becomes None); untouched components keep theirs. Length never changes.
Test normalize(const Test& t, const Predicate& p, const std::string& sut_id,
               bool fault_injection = false);

}  // namespace provtrail
