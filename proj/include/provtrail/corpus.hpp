// Copyright (c) provtrail contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "provtrail/error.hpp"

namespace provtrail {

// A position inside a named test: `quick3.test:5` means component 5 (zero
// based) of quick3.test. Positions index components, not file lines.
struct Origin {
  std::string test_name;
  size_t position = 0;

  auto operator<=>(const Origin&) const = default;
};

// Provenance of one component pointing at the single source it was copied
// from. `abstract_match` marks reconstructed provenance that matched by
// action type rather than exact text; it serializes with a `~` prefix.
struct SingleAnnotation {
  Origin origin;
  bool abstract_match = false;

  auto operator<=>(const SingleAnnotation&) const = default;
};

// Provenance naming every test that contributed to the component's selection
// probability, with its degree of contribution (occurrence count). Entries
// are keyed by test name; degrees are strictly positive.
struct WeightedAnnotation {
  std::map<std::string, double> entries;

  auto operator<=>(const WeightedAnnotation&) const = default;
};

// monostate = no provenance (seed components, or provenance destroyed by
// normalization).
using Annotation = std::variant<std::monostate, SingleAnnotation, WeightedAnnotation>;

// One test action plus its provenance. The action text is non-empty,
// newline-free, and never contains the reserved separator " ;;; ".
struct Component {
  std::string action;
  Annotation annotation;

  bool operator==(const Component&) const = default;
};

struct Test {
  std::string name;
  std::vector<Component> components;

  bool operator==(const Test&) const = default;
  size_t size() const { return components.size(); }
  bool empty() const { return components.empty(); }
};

// A set of tests with some designated as seeds. Loaded corpora are validated:
// every origin resolves, exact-match origins point at identical action text,
// and the origin-reference relation is acyclic.
struct Corpus {
  std::map<std::string, Test> tests;
  std::set<std::string> seed_names;

  bool contains(const std::string& name) const { return tests.count(name) != 0; }
  bool is_seed(const std::string& name) const { return seed_names.count(name) != 0; }

  const Test& at(const std::string& name) const;
  const Component& component_at(const Origin& origin) const;
};

// Reserved separator between action text and annotation.
inline constexpr const char* kAnnotationSeparator = " ;;; ";

// Parses one test from its on-disk text. Each non-blank line yields one
// component:
//   `<action>[  # STEP <i>][ ;;; <origin | ~origin | {name=deg,...}>]`
// A `# STEP` comment, when present, must match the component's index.
Test parse_test(const std::string& name, const std::string& text);

// Canonical serialization: one line per component, aligned columns, `# STEP`
// always emitted. parse_test(serialize_test(t)) == t for every valid test.
std::string serialize_test(const Test& t);

std::string serialize_annotation(const Annotation& a);

// Loads `*.test` files from seed_dir (the seeds) and optionally from
// generated_dir, then validates resolution and acyclicity.
Corpus load_corpus(const std::filesystem::path& seed_dir,
                   const std::optional<std::filesystem::path>& generated_dir = std::nullopt);

// Loads a single directory that mixes seeds and generated tests. Tests with
// no annotated component are taken to be the roots (seeds).
Corpus load_mixed_corpus(const std::filesystem::path& dir);

// Validates the resolution and acyclicity invariants; throws CorpusError.
void validate_corpus(const Corpus& c);

// Follows Single annotations from the given component through intermediate
// generated tests until a seed component is reached. Returns the chain of
// origins, seed last; empty for a component of a seed test. Throws
// ProvenanceError if the chain hits a missing annotation ("provenance lost")
// or a weighted one ("ambiguous provenance").
std::vector<Origin> trace_to_seed(const Corpus& c, const std::string& test_name, size_t step);

}  // namespace provtrail
