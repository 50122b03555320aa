// Copyright (c) provtrail contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "provtrail/corpus.hpp"

namespace provtrail {

// Collective provenance statistics over a set of tests. Weighted annotations
// contribute fractionally (degree-normalized per component), so integer-mode
// counts are whole numbers and every annotated component has total mass 1.
struct ContributionTable {
  std::map<std::string, double> by_seed;
  std::map<std::string, double> by_kind;
  size_t total_annotated = 0;
  size_t total_components = 0;
  std::map<size_t, size_t> run_length_histogram;

  bool operator==(const ContributionTable&) const = default;
};

struct ReportOptions {
  // Trace origins in generated tests back to seeds before counting.
  bool resolve_transitive = false;
  // Key by_kind by operation type (mask_action) instead of exact action text.
  bool abstract_kinds = false;
};

ContributionTable contribution_table(const std::vector<Test>& tests, const Corpus& corpus,
                                     const ReportOptions& options);

// Kinds by descending count, ties broken lexicographically.
std::vector<std::pair<std::string, double>> rank_kinds(const ContributionTable& table);

enum class ReportFormat { text, json };

std::string render(const ContributionTable& table, ReportFormat format);

// Inverse of render(table, json). render/parse round-trips exactly.
ContributionTable table_from_json(const std::string& json_text);

}  // namespace provtrail
