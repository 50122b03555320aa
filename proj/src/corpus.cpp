// Copyright (c) provtrail contributors.
// SPDX-License-Identifier: MIT
#include "provtrail/corpus.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "provtrail/actions.hpp"

namespace provtrail {

namespace fs = std::filesystem;

const Test& Corpus::at(const std::string& name) const {
  auto it = tests.find(name);
  if (it == tests.end()) {
    throw CorpusError(fmt::format("unknown test '{}'", name));
  }
  return it->second;
}

const Component& Corpus::component_at(const Origin& origin) const {
  const Test& t = at(origin.test_name);
  if (origin.position >= t.components.size()) {
    throw CorpusError(fmt::format("origin {}:{} is out of range (test has {} components)",
                                  origin.test_name, origin.position, t.components.size()));
  }
  return t.components[origin.position];
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool all_digits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

[[noreturn]] void fail_line(const std::string& test, size_t line_no, const std::string& what) {
  throw ParseError(fmt::format("{}:{}: {}", test, line_no, what));
}

Origin parse_origin(std::string_view text, const std::string& test, size_t line_no) {
  const size_t colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size()) {
    fail_line(test, line_no, fmt::format("malformed origin '{}'", std::string(text)));
  }
  const std::string_view pos = text.substr(colon + 1);
  if (!all_digits(pos)) {
    fail_line(test, line_no, fmt::format("malformed origin position '{}'", std::string(pos)));
  }
  return Origin{std::string(text.substr(0, colon)), std::stoul(std::string(pos))};
}

Annotation parse_annotation(std::string_view text, const std::string& test, size_t line_no) {
  text = trim(text);
  if (text.empty()) {
    fail_line(test, line_no, "empty annotation after separator");
  }
  if (text.front() == '{') {
    if (text.back() != '}') {
      fail_line(test, line_no, "weighted annotation missing closing brace");
    }
    WeightedAnnotation weighted;
    std::string_view body = text.substr(1, text.size() - 2);
    while (!body.empty()) {
      const size_t comma = body.find(',');
      std::string_view entry = trim(body.substr(0, comma));
      body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
      const size_t eq = entry.find('=');
      if (eq == std::string_view::npos || eq == 0 || eq + 1 == entry.size()) {
        fail_line(test, line_no, fmt::format("malformed weighted entry '{}'", std::string(entry)));
      }
      const std::string name(trim(entry.substr(0, eq)));
      double degree = 0.0;
      try {
        size_t used = 0;
        const std::string degree_text(trim(entry.substr(eq + 1)));
        degree = std::stod(degree_text, &used);
        if (used != degree_text.size()) {
          throw std::invalid_argument("trailing junk");
        }
      } catch (const std::exception&) {
        fail_line(test, line_no, fmt::format("malformed degree in '{}'", std::string(entry)));
      }
      if (degree <= 0.0) {
        fail_line(test, line_no, fmt::format("degree must be positive in '{}'", std::string(entry)));
      }
      if (!weighted.entries.emplace(name, degree).second) {
        fail_line(test, line_no, fmt::format("duplicate contributor '{}'", name));
      }
    }
    if (weighted.entries.empty()) {
      fail_line(test, line_no, "weighted annotation has no entries");
    }
    return weighted;
  }
  bool abstract_match = false;
  if (text.front() == '~') {
    abstract_match = true;
    text.remove_prefix(1);
  }
  return SingleAnnotation{parse_origin(text, test, line_no), abstract_match};
}

// Splits `<action>  # STEP <i>` into action text and the optional index. The
// comment is only recognized at the end of the field, so action text that
// merely contains a '#' is left intact.
std::pair<std::string, std::optional<size_t>> split_step_comment(std::string_view head) {
  std::string_view s = trim(head);
  size_t hash = s.rfind('#');
  while (hash != std::string_view::npos) {
    std::string_view tail = trim(s.substr(hash + 1));
    if (tail.substr(0, 4) == "STEP") {
      std::string_view index = trim(tail.substr(4));
      const bool preceded_by_space = hash > 0 && std::isspace(static_cast<unsigned char>(s[hash - 1]));
      if (preceded_by_space && all_digits(index)) {
        return {std::string(trim(s.substr(0, hash))), std::stoul(std::string(index))};
      }
    }
    hash = hash == 0 ? std::string_view::npos : s.rfind('#', hash - 1);
  }
  return {std::string(s), std::nullopt};
}

void check_action_text(const std::string& action, const std::string& test, size_t line_no) {
  if (action.empty()) {
    fail_line(test, line_no, "empty action text");
  }
  if (action.find('\n') != std::string::npos) {
    fail_line(test, line_no, "action text contains a newline");
  }
  if (action.find(kAnnotationSeparator) != std::string::npos) {
    fail_line(test, line_no,
              fmt::format("action text contains the reserved separator '{}'", kAnnotationSeparator));
  }
}

std::string format_degree(double degree) {
  return fmt::format("{}", degree);
}

}  // namespace

Test parse_test(const std::string& name, const std::string& text) {
  Test t;
  t.name = name;
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (trim(line).empty()) {
      continue;
    }
    std::string_view rest = line;
    Annotation annotation;
    const size_t sep = rest.find(kAnnotationSeparator);
    if (sep != std::string_view::npos) {
      annotation = parse_annotation(rest.substr(sep + 5), name, line_no);
      rest = rest.substr(0, sep);
    }
    auto [action, step] = split_step_comment(rest);
    check_action_text(action, name, line_no);
    if (step && *step != t.components.size()) {
      fail_line(name, line_no,
                fmt::format("# STEP {} does not match component index {}", *step,
                            t.components.size()));
    }
    t.components.push_back({action, annotation});
  }
  return t;
}

std::string serialize_annotation(const Annotation& a) {
  if (std::holds_alternative<std::monostate>(a)) {
    return "";
  }
  if (const auto* single = std::get_if<SingleAnnotation>(&a)) {
    return fmt::format("{}{}:{}", single->abstract_match ? "~" : "", single->origin.test_name,
                       single->origin.position);
  }
  const auto& weighted = std::get<WeightedAnnotation>(a);
  std::string out = "{";
  const char* sep = "";
  for (const auto& [contributor, degree] : weighted.entries) {
    out += fmt::format("{}{}={}", sep, contributor, format_degree(degree));
    sep = ",";
  }
  out += "}";
  return out;
}

std::string serialize_test(const Test& t) {
  if (t.components.empty()) {
    return "";
  }
  size_t action_width = 0;
  for (const auto& c : t.components) {
    action_width = std::max(action_width, c.action.size());
  }
  action_width = std::max(action_width + 1, size_t{28});
  const size_t index_width = fmt::format("{}", t.components.size() - 1).size();

  std::string out;
  for (size_t i = 0; i < t.components.size(); ++i) {
    const Component& c = t.components[i];
    std::string line = fmt::format("{:<{}}# STEP {:<{}}", c.action, action_width, i, index_width);
    const std::string annotation = serialize_annotation(c.annotation);
    if (!annotation.empty()) {
      line += kAnnotationSeparator;
      line += annotation;
    } else {
      while (!line.empty() && line.back() == ' ') {
        line.pop_back();
      }
    }
    out += line;
    out += '\n';
  }
  return out;
}

namespace {

std::vector<fs::path> list_test_files(const fs::path& dir) {
  if (!fs::exists(dir) || !fs::is_directory(dir)) {
    throw CorpusError(fmt::format("not a directory: {}", dir.string()));
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".test") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw CorpusError(fmt::format("cannot read {}", path.string()));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void load_dir_into(Corpus& corpus, const fs::path& dir, bool as_seeds) {
  for (const auto& path : list_test_files(dir)) {
    const std::string name = path.filename().string();
    if (corpus.contains(name)) {
      throw CorpusError(fmt::format("duplicate test name '{}' (from {})", name, dir.string()));
    }
    corpus.tests.emplace(name, parse_test(name, read_file(path)));
    if (as_seeds) {
      corpus.seed_names.insert(name);
    }
  }
}

bool has_provenance(const Test& t) {
  return std::any_of(t.components.begin(), t.components.end(), [](const Component& c) {
    return !std::holds_alternative<std::monostate>(c.annotation);
  });
}

}  // namespace

void validate_corpus(const Corpus& c) {
  // Resolution: every referenced origin must exist, and exact-match origins
  // must carry identical action text. Abstract-match origins only have to
  // agree on operation type.
  for (const auto& [name, test] : c.tests) {
    for (size_t i = 0; i < test.components.size(); ++i) {
      const Component& comp = test.components[i];
      if (const auto* single = std::get_if<SingleAnnotation>(&comp.annotation)) {
        if (!c.contains(single->origin.test_name)) {
          throw CorpusError(fmt::format("{}:{} references missing test '{}'", name, i,
                                        single->origin.test_name));
        }
        const Test& source = c.at(single->origin.test_name);
        if (single->origin.position >= source.components.size()) {
          throw CorpusError(fmt::format("{}:{} references {}:{}, past the end ({} components)",
                                        name, i, single->origin.test_name,
                                        single->origin.position, source.components.size()));
        }
        const std::string& origin_action = source.components[single->origin.position].action;
        if (!single->abstract_match && origin_action != comp.action) {
          throw CorpusError(
              fmt::format("{}:{} claims origin {}:{} but actions differ ('{}' vs '{}')", name, i,
                          single->origin.test_name, single->origin.position, comp.action,
                          origin_action));
        }
        if (single->abstract_match && mask_action(origin_action) != mask_action(comp.action)) {
          throw CorpusError(fmt::format("{}:{} claims abstract origin {}:{} of a different kind",
                                        name, i, single->origin.test_name,
                                        single->origin.position));
        }
      } else if (const auto* weighted = std::get_if<WeightedAnnotation>(&comp.annotation)) {
        for (const auto& [contributor, degree] : weighted->entries) {
          (void)degree;
          if (!c.contains(contributor)) {
            throw CorpusError(
                fmt::format("{}:{} references missing contributor '{}'", name, i, contributor));
          }
        }
      }
    }
  }

  // Acyclicity of the origin-reference relation, via iterative DFS.
  enum class Mark { unvisited, active, done };
  std::map<std::string, Mark> marks;
  for (const auto& [name, test] : c.tests) {
    (void)test;
    marks[name] = Mark::unvisited;
  }
  auto references = [&c](const std::string& name) {
    std::set<std::string> out;
    for (const Component& comp : c.at(name).components) {
      if (const auto* single = std::get_if<SingleAnnotation>(&comp.annotation)) {
        if (single->origin.test_name != name) {
          out.insert(single->origin.test_name);
        } else {
          out.insert(name);  // self-reference is a cycle of length 1
        }
      } else if (const auto* weighted = std::get_if<WeightedAnnotation>(&comp.annotation)) {
        for (const auto& [contributor, degree] : weighted->entries) {
          (void)degree;
          out.insert(contributor);
        }
      }
    }
    return out;
  };
  for (const auto& [start, mark] : marks) {
    if (mark != Mark::unvisited) {
      continue;
    }
    std::vector<std::pair<std::string, std::vector<std::string>>> stack;
    auto push = [&](const std::string& name) {
      marks[name] = Mark::active;
      const auto refs = references(name);
      stack.emplace_back(name, std::vector<std::string>(refs.begin(), refs.end()));
    };
    push(start);
    while (!stack.empty()) {
      auto& [name, pending] = stack.back();
      if (pending.empty()) {
        marks[name] = Mark::done;
        stack.pop_back();
        continue;
      }
      const std::string next = pending.back();
      pending.pop_back();
      if (marks[next] == Mark::active) {
        std::string cycle = next;
        for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
          cycle += " -> " + it->first;
          if (it->first == next) {
            break;
          }
        }
        throw CorpusError(fmt::format("origin references form a cycle: {}", cycle));
      }
      if (marks[next] == Mark::unvisited) {
        push(next);
      }
    }
  }
}

Corpus load_corpus(const fs::path& seed_dir, const std::optional<fs::path>& generated_dir) {
  Corpus corpus;
  load_dir_into(corpus, seed_dir, /*as_seeds=*/true);
  if (corpus.seed_names.empty()) {
    throw CorpusError(fmt::format("no seeds in {}", seed_dir.string()));
  }
  if (generated_dir) {
    load_dir_into(corpus, *generated_dir, /*as_seeds=*/false);
  }
  validate_corpus(corpus);
  return corpus;
}

Corpus load_mixed_corpus(const fs::path& dir) {
  Corpus corpus;
  load_dir_into(corpus, dir, /*as_seeds=*/false);
  for (const auto& [name, test] : corpus.tests) {
    if (!has_provenance(test)) {
      corpus.seed_names.insert(name);
    }
  }
  if (corpus.seed_names.empty()) {
    throw CorpusError(fmt::format("no seeds in {}", dir.string()));
  }
  validate_corpus(corpus);
  return corpus;
}

std::vector<Origin> trace_to_seed(const Corpus& c, const std::string& test_name, size_t step) {
  const Test& t = c.at(test_name);
  if (step >= t.components.size()) {
    throw CorpusError(
        fmt::format("{} has no component {} ({} components)", test_name, step, t.components.size()));
  }
  std::vector<Origin> chain;
  if (c.is_seed(test_name)) {
    return chain;  // already a root
  }
  Origin current{test_name, step};
  while (true) {
    const Component& comp = c.component_at(current);
    if (std::holds_alternative<std::monostate>(comp.annotation)) {
      throw ProvenanceError(
          fmt::format("provenance lost at {}:{}", current.test_name, current.position));
    }
    if (const auto* weighted = std::get_if<WeightedAnnotation>(&comp.annotation)) {
      std::string contributors;
      const char* sep = "";
      for (const auto& [contributor, degree] : weighted->entries) {
        (void)degree;
        contributors += sep;
        contributors += contributor;
        sep = ", ";
      }
      throw ProvenanceError(fmt::format("ambiguous provenance at {}:{} (contributors: {})",
                                        current.test_name, current.position, contributors));
    }
    const Origin origin = std::get<SingleAnnotation>(comp.annotation).origin;
    chain.push_back(origin);
    if (c.is_seed(origin.test_name)) {
      return chain;
    }
    if (chain.size() > c.tests.size()) {
      throw CorpusError(fmt::format("provenance chain from {}:{} exceeds corpus size (cycle?)",
                                    test_name, step));
    }
    current = origin;
  }
}

}  // namespace provtrail
