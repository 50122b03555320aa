// Copyright (c) provtrail contributors.
// SPDX-License-Identifier: MIT

#include "provtrail/postprocess.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>

#include "provtrail/actions.hpp"
#include "provtrail/error.hpp"

namespace provtrail {

namespace {

std::string join_tokens(const std::vector<ActionToken>& tokens) {
  std::string out;
  for (const ActionToken& tok : tokens) {
    out += tok.text;
  }
  return out;
}

Test project(const Test& t, const std::vector<size_t>& indices) {
  Test out;
  out.name = t.name;
  for (size_t i : indices) {
    out.components.push_back(t.components[i]);
  }
  return out;
}

}  // namespace

bool evaluate_predicate(const Predicate& p, const Test& t, const std::string& sut_id,
                        bool fault_injection) {
  RunOptions options;
  options.skip_disabled = false;
  options.fault_injection = fault_injection;
  ExecutionResult result;
  try {
    result = run_test(sut_id, t, options);
  } catch (const InfeasibleTestError&) {
    return false;
  }
  return std::visit(
      [&](const auto& pred) -> bool {
        using P = std::decay_t<decltype(pred)>;
        if constexpr (std::is_same_v<P, PreservesFailure>) {
          return result.failure.has_value();
        } else if constexpr (std::is_same_v<P, PreservesCoverage>) {
          return std::includes(result.coverage.begin(), result.coverage.end(),
                               pred.target.begin(), pred.target.end());
        } else {
          return result.coverage.size() >= pred.min_points;
        }
      },
      p);
}

Test ddmin_reduce(const Test& t, const Predicate& p, const std::string& sut_id,
                  bool fault_injection) {
  if (!evaluate_predicate(p, t, sut_id, fault_injection)) {
    throw Error("predicate does not hold on original");
  }
  std::vector<size_t> indices(t.components.size());
  std::iota(indices.begin(), indices.end(), size_t{0});

  size_t n = 2;
  while (indices.size() >= 2) {
    const size_t len = indices.size();
    const size_t chunk = (len + n - 1) / n;
    bool reduced = false;
    for (size_t start = 0; start < len && !reduced; start += chunk) {
      const size_t end = std::min(start + chunk, len);
      std::vector<size_t> complement;
      complement.reserve(len - (end - start));
      complement.insert(complement.end(), indices.begin(), indices.begin() + start);
      complement.insert(complement.end(), indices.begin() + end, indices.end());
      if (evaluate_predicate(p, project(t, complement), sut_id, fault_injection)) {
        indices = std::move(complement);
        n = std::max<size_t>(n - 1, 2);
        reduced = true;
      }
    }
    if (!reduced) {
      if (n >= len) {
        break;  // every single-component deletion falsifies p: 1-minimal
      }
      n = std::min(n * 2, len);
    }
  }
  return project(t, indices);
}

namespace {

// R1: renumber each variable family by order of first use. Atomic: either the
// whole renaming is accepted (predicate still holds, every rewritten action is
// in the vocabulary) or the test is left alone.
bool apply_renumbering(Test& current, const Sut& sut, const Predicate& p,
                       const std::string& sut_id, bool fault_injection) {
  std::map<std::string, std::map<size_t, size_t>> renames;
  for (const Component& c : current.components) {
    for (const ActionToken& tok : lex_action(c.action)) {
      if (tok.type == ActionToken::Type::identifier && is_variable_token(tok.text)) {
        auto [family, index] = split_variable(tok.text);
        auto& table = renames[family];
        if (!table.contains(index)) {
          const size_t next = table.size();
          table.emplace(index, next);
        }
      }
    }
  }
  bool identity = true;
  for (const auto& [family, table] : renames) {
    for (const auto& [from, to] : table) {
      identity = identity && from == to;
    }
  }
  if (identity) {
    return false;
  }

  Test candidate = current;
  for (size_t i = 0; i < candidate.components.size(); ++i) {
    std::vector<ActionToken> tokens = lex_action(candidate.components[i].action);
    for (ActionToken& tok : tokens) {
      if (tok.type == ActionToken::Type::identifier && is_variable_token(tok.text)) {
        auto [family, index] = split_variable(tok.text);
        tok.text = fmt::format("{}{}", family, renames.at(family).at(index));
      }
    }
    candidate.components[i].action = join_tokens(tokens);
    if (candidate.components[i].action != current.components[i].action &&
        !sut.knows(candidate.components[i].action)) {
      return false;
    }
  }
  if (!evaluate_predicate(p, candidate, sut_id, fault_injection)) {
    return false;
  }
  current = std::move(candidate);
  return true;
}

// R2: for one numeric literal, try vocabulary constants strictly below the
// current value, smallest first, and keep the first rewrite under which the
// predicate still holds.
bool lower_one_literal(Test& current, size_t component, size_t token_index, const Sut& sut,
                       const Predicate& p, const std::string& sut_id, bool fault_injection) {
  std::vector<ActionToken> tokens = lex_action(current.components[component].action);
  const unsigned long value = std::stoul(tokens[token_index].text);
  for (unsigned long candidate_value = 0; candidate_value < value; ++candidate_value) {
    tokens[token_index].text = fmt::format("{}", candidate_value);
    const std::string candidate_action = join_tokens(tokens);
    if (!sut.knows(candidate_action)) {
      continue;
    }
    Test candidate = current;
    candidate.components[component].action = candidate_action;
    if (evaluate_predicate(p, candidate, sut_id, fault_injection)) {
      current = std::move(candidate);
      return true;
    }
  }
  return false;
}

}  // namespace

Test normalize(const Test& t, const Predicate& p, const std::string& sut_id,
               bool fault_injection) {
  if (!evaluate_predicate(p, t, sut_id, fault_injection)) {
    throw Error("predicate does not hold on original");
  }
  const Sut& sut = get_sut(sut_id);
  Test current = t;

  // Each accepted rewrite strictly decreases (variable indices, constants), so
  // the fixpoint is reached well within this bound.
  const size_t max_rounds = 64 * (t.components.size() + 1);
  for (size_t round = 0; round < max_rounds; ++round) {
    bool changed = apply_renumbering(current, sut, p, sut_id, fault_injection);
    for (size_t i = 0; i < current.components.size(); ++i) {
      const std::vector<ActionToken> tokens = lex_action(current.components[i].action);
      for (size_t j = 0; j < tokens.size(); ++j) {
        if (tokens[j].type == ActionToken::Type::number) {
          changed = lower_one_literal(current, i, j, sut, p, sut_id, fault_injection) || changed;
        }
      }
    }
    if (!changed) {
      break;
    }
  }

  for (size_t i = 0; i < current.components.size(); ++i) {
    if (current.components[i].action != t.components[i].action) {
      current.components[i].annotation = std::monostate{};
    }
  }
  return current;
}

}  // namespace provtrail
