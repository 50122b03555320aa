// Copyright (c) provtrail contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <string>

namespace provtrail {

// Base for all domain errors. The CLI maps these to exit code 2.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed test file contents (bad annotation syntax, STEP mismatch, ...).
struct ParseError : Error {
  using Error::Error;
};

// Corpus-level violations: dangling origins, cycles, missing seeds.
struct CorpusError : Error {
  using Error::Error;
};

// Unknown SUT, unknown action, or executing a disabled action.
struct SutError : Error {
  using Error::Error;
};

// Strict replay hit a disabled component.
struct InfeasibleTestError : Error {
  using Error::Error;
};

// Broken or ambiguous provenance chains.
struct ProvenanceError : Error {
  using Error::Error;
};

}  // namespace provtrail
