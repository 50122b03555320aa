// Copyright (c) provtrail contributors.
// SPDX-License-Identifier: MIT
#include "provtrail/actions.hpp"

#include <cctype>

namespace provtrail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

}  // namespace

std::vector<ActionToken> lex_action(const std::string& action) {
  std::vector<ActionToken> tokens;
  size_t i = 0;
  const size_t n = action.size();
  while (i < n) {
    const char c = action[i];
    if (ident_start(c)) {
      size_t j = i + 1;
      while (j < n && ident_char(action[j])) {
        ++j;
      }
      tokens.push_back({ActionToken::Type::identifier, action.substr(i, j - i)});
      i = j;
    } else if (digit(c)) {
      size_t j = i + 1;
      while (j < n && digit(action[j])) {
        ++j;
      }
      tokens.push_back({ActionToken::Type::number, action.substr(i, j - i)});
      i = j;
    } else if (c == '"') {
      size_t j = i + 1;
      while (j < n && action[j] != '"') {
        ++j;
      }
      if (j < n) {
        ++j;  // closing quote
      }
      tokens.push_back({ActionToken::Type::string_literal, action.substr(i, j - i)});
      i = j;
    } else {
      tokens.push_back({ActionToken::Type::other, std::string(1, c)});
      ++i;
    }
  }
  return tokens;
}

bool is_variable_token(const std::string& identifier) {
  if (identifier.empty() || !digit(identifier.back())) {
    return false;
  }
  size_t stem = identifier.size();
  while (stem > 0 && digit(identifier[stem - 1])) {
    --stem;
  }
  return stem > 0;
}

std::pair<std::string, size_t> split_variable(const std::string& identifier) {
  size_t stem = identifier.size();
  while (stem > 0 && digit(identifier[stem - 1])) {
    --stem;
  }
  return {identifier.substr(0, stem), std::stoul(identifier.substr(stem))};
}

std::string mask_action(const std::string& action) {
  std::string out;
  for (const auto& tok : lex_action(action)) {
    switch (tok.type) {
      case ActionToken::Type::identifier:
        if (is_variable_token(tok.text)) {
          out += split_variable(tok.text).first;
          out += '?';
        } else {
          out += tok.text;
        }
        break;
      case ActionToken::Type::number:
      case ActionToken::Type::string_literal:
        out += '?';
        break;
      case ActionToken::Type::other:
        out += tok.text;
        break;
    }
  }
  return out;
}

}  // namespace provtrail
