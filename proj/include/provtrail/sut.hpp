// Copyright (c) provtrail contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "provtrail/corpus.hpp"
#include "provtrail/error.hpp"

namespace provtrail {

// Stable identifier of an instrumentation site, `<kind>:<site>` with kind in
// {stmt, branch}.
using CoveragePoint = std::string;
using CoverageSet = std::set<CoveragePoint>;

// An action abstracted to its operation type (`avl?.insert(int?)`).
using ActionKind = std::string;

struct RunOptions {
  bool skip_disabled = true;
  bool fault_injection = false;
};

struct ExecutedStep {
  size_t index = 0;
  std::string action;
  bool skipped = false;

  bool operator==(const ExecutedStep&) const = default;
};

struct Failure {
  size_t step = 0;
  std::string message;

  bool operator==(const Failure&) const = default;
};

struct ExecutionResult {
  std::vector<ExecutedStep> executed;
  CoverageSet coverage;
  std::optional<Failure> failure;

  bool operator==(const ExecutionResult&) const = default;
};

struct StepOutcome {
  CoverageSet touched;
  std::optional<std::string> failure;
};

// Mutable per-run state. Single-owner: one state drives one run at a time.
class SutState {
 public:
  virtual ~SutState() = default;

  virtual void reset() = 0;

  // True iff every variable the action reads is bound and SUT guards hold.
  // Throws SutError for actions outside the vocabulary.
  virtual bool enabled(const std::string& action) const = 0;

  // Advances the state. Calling this on a disabled action is a contract
  // violation and throws SutError.
  virtual StepOutcome execute(const std::string& action) = 0;
};

// A system under test: a finite action vocabulary, a coverage-point universe,
// and a state factory. Implementations are immutable after construction.
class Sut {
 public:
  virtual ~Sut() = default;

  virtual std::string id() const = 0;

  // All syntactically possible actions, enabled or not, in a fixed order.
  virtual const std::vector<std::string>& actions() const = 0;

  // Every instrumentation point the SUT can ever touch.
  virtual const std::vector<CoveragePoint>& points() const = 0;

  virtual std::unique_ptr<SutState> make_state(const RunOptions& options) const = 0;

  bool knows(const std::string& action) const;
};

// Registry of available SUTs. The bundled `avl` and `fs` SUTs are installed
// on first use; additional SUTs may be registered at startup.
const Sut& get_sut(const std::string& sut_id);
void register_sut(std::unique_ptr<Sut> sut);
std::vector<std::string> sut_ids();

// Runs the test from a fresh state. Disabled components are either skipped
// (recorded with skipped=true) or, with skip_disabled=false, raise
// InfeasibleTestError naming the step. A failure halts the run; coverage up
// to the failing step is kept.
ExecutionResult run_test(const std::string& sut_id, const Test& t, const RunOptions& options);

// Masks identifiers and literals of a vocabulary action (`avl1.insert(int2)`
// -> `avl?.insert(int?)`). Accepts kind-shaped strings and returns them
// unchanged; anything else throws SutError.
ActionKind abstract_action(const std::string& sut_id, const std::string& action);

}  // namespace provtrail
