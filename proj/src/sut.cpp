// Copyright (c) provtrail contributors.
// SPDX-License-Identifier: MIT
#include "provtrail/sut.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>

#include "provtrail/actions.hpp"
#include "sut_builtin.hpp"

namespace provtrail {

bool Sut::knows(const std::string& action) const {
  const auto& all = actions();
  return std::find(all.begin(), all.end(), action) != all.end();
}

namespace {

std::map<std::string, std::unique_ptr<Sut>>& registry() {
  static std::map<std::string, std::unique_ptr<Sut>> suts = [] {
    std::map<std::string, std::unique_ptr<Sut>> initial;
    auto avl = make_avl_sut();
    initial.emplace(avl->id(), std::move(avl));
    auto fs = make_fs_sut();
    initial.emplace(fs->id(), std::move(fs));
    return initial;
  }();
  return suts;
}

}  // namespace

const Sut& get_sut(const std::string& sut_id) {
  const auto& suts = registry();
  auto it = suts.find(sut_id);
  if (it == suts.end()) {
    std::string known;
    const char* sep = "";
    for (const auto& [id, sut] : suts) {
      (void)sut;
      known += sep;
      known += id;
      sep = ", ";
    }
    throw SutError(fmt::format("unknown SUT '{}' (available: {})", sut_id, known));
  }
  return *it->second;
}

void register_sut(std::unique_ptr<Sut> sut) {
  const std::string id = sut->id();
  if (!registry().emplace(id, std::move(sut)).second) {
    throw SutError(fmt::format("SUT '{}' is already registered", id));
  }
}

std::vector<std::string> sut_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, sut] : registry()) {
    (void)sut;
    ids.push_back(id);
  }
  return ids;
}

ExecutionResult run_test(const std::string& sut_id, const Test& t, const RunOptions& options) {
  const Sut& sut = get_sut(sut_id);
  auto state = sut.make_state(options);
  ExecutionResult result;
  for (size_t i = 0; i < t.components.size(); ++i) {
    const std::string& action = t.components[i].action;
    if (!state->enabled(action)) {
      if (!options.skip_disabled) {
        throw InfeasibleTestError(
            fmt::format("infeasible test: step {} ('{}') is not enabled", i, action));
      }
      result.executed.push_back({i, action, /*skipped=*/true});
      continue;
    }
    StepOutcome outcome = state->execute(action);
    result.executed.push_back({i, action, /*skipped=*/false});
    result.coverage.insert(outcome.touched.begin(), outcome.touched.end());
    if (outcome.failure) {
      result.failure = Failure{i, *outcome.failure};
      break;
    }
  }
  return result;
}

ActionKind abstract_action(const std::string& sut_id, const std::string& action) {
  const Sut& sut = get_sut(sut_id);
  if (sut.knows(action)) {
    return mask_action(action);
  }
  // Kind-shaped strings abstract to themselves.
  for (const std::string& known : sut.actions()) {
    if (mask_action(known) == action) {
      return action;
    }
  }
  throw SutError(fmt::format("'{}' is not an action of SUT '{}'", action, sut_id));
}

}  // namespace provtrail
