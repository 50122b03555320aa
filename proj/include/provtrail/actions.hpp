// Copyright (c) provtrail contributors.
// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <vector>

namespace provtrail {

// Lexical view of an action string. Actions in this project come from finite
// per-SUT grammars of the shape `avl1.insert(int2)` / `fs.rename("/a","/b")`,
// so a small lexer is enough to support abstraction and rewriting without
// consulting a SUT.
struct ActionToken {
  enum class Type { identifier, number, string_literal, other };
  Type type;
  std::string text;
};

std::vector<ActionToken> lex_action(const std::string& action);

// True if the identifier belongs to a numbered variable family (`int2`,
// `avl0`, ...): a non-digit stem followed by one or more digits.
bool is_variable_token(const std::string& identifier);

// Splits a variable token into (family, index), e.g. `int2` -> ("int", 2).
std::pair<std::string, size_t> split_variable(const std::string& identifier);

// The action's operation type with variables and literals masked by `?`:
// `avl1.insert(int2)` -> `avl?.insert(int?)`, `int1 = 13` -> `int? = ?`,
// `fs.rename("/a","/b")` -> `fs.rename(?,?)`. Masking an already-masked
// string returns it unchanged.
std::string mask_action(const std::string& action);

}  // namespace provtrail
