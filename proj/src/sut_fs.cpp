// Copyright (c) provtrail contributors.
// SPDX-License-Identifier: MIT

// Bundled in-memory filesystem SUT. Actions are calls like
// `fs.makedirs("/a/b/c")` over a fixed path vocabulary: every path of depth
// 1..4 whose segments are distinct names from {a, b, c, d}. Operations never
// disable; error outcomes (missing parent, busy directory, dangling link...)
// are ordinary covered branches, which is what makes them worth generating.

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "provtrail/sut.hpp"
#include "sut_builtin.hpp"

namespace provtrail {

namespace {

const std::vector<std::string>& fs_paths() {
  static const std::vector<std::string> paths = [] {
    const std::vector<std::string> segments = {"a", "b", "c", "d"};
    std::vector<std::string> out;
    // All depth-1..4 paths with pairwise distinct segments, shortest first.
    std::vector<std::string> frontier = {""};
    for (int depth = 1; depth <= 4; ++depth) {
      std::vector<std::string> next;
      for (const std::string& prefix : frontier) {
        for (const std::string& seg : segments) {
          if (prefix.find("/" + seg + "/") != std::string::npos ||
              prefix.ends_with("/" + seg)) {
            continue;
          }
          next.push_back(prefix + "/" + seg);
        }
      }
      out.insert(out.end(), next.begin(), next.end());
      frontier = std::move(next);
    }
    return out;
  }();
  return paths;
}

const std::vector<std::string>& fs_unary_ops() {
  static const std::vector<std::string> ops = {"mkdir", "makedirs", "rmdir", "remove",
                                               "open",  "close",    "write"};
  return ops;
}

const std::vector<std::string>& fs_binary_ops() {
  static const std::vector<std::string> ops = {"rename", "symlink"};
  return ops;
}

struct FsActionSpec {
  std::string op;
  std::vector<std::string> args;
};

// Parses `fs.<op>("<path>")` or `fs.<op>("<path>","<path>")` against the
// fixed vocabulary. Returns nothing for any deviation.
std::optional<FsActionSpec> parse_fs_action(const std::string& action) {
  static const std::set<std::string> known_paths(fs_paths().begin(), fs_paths().end());
  if (!action.starts_with("fs.")) {
    return std::nullopt;
  }
  const size_t open_paren = action.find('(', 3);
  if (open_paren == std::string::npos || !action.ends_with(")")) {
    return std::nullopt;
  }
  FsActionSpec spec;
  spec.op = action.substr(3, open_paren - 3);
  const bool unary = std::find(fs_unary_ops().begin(), fs_unary_ops().end(), spec.op) !=
                     fs_unary_ops().end();
  const bool binary = std::find(fs_binary_ops().begin(), fs_binary_ops().end(), spec.op) !=
                      fs_binary_ops().end();
  if (!unary && !binary) {
    return std::nullopt;
  }
  std::string args = action.substr(open_paren + 1, action.size() - open_paren - 2);
  size_t pos = 0;
  while (pos < args.size()) {
    if (args[pos] != '"') {
      return std::nullopt;
    }
    const size_t close = args.find('"', pos + 1);
    if (close == std::string::npos) {
      return std::nullopt;
    }
    spec.args.push_back(args.substr(pos + 1, close - pos - 1));
    pos = close + 1;
    if (pos < args.size()) {
      if (args[pos] != ',') {
        return std::nullopt;
      }
      ++pos;
    }
  }
  if (spec.args.size() != (unary ? 1u : 2u)) {
    return std::nullopt;
  }
  for (const std::string& arg : spec.args) {
    if (!known_paths.contains(arg)) {
      return std::nullopt;
    }
  }
  return spec;
}

const std::vector<CoveragePoint>& fs_points() {
  static const std::vector<CoveragePoint> points = {
      "stmt:mkdir_entry",
      "stmt:makedirs_entry",
      "stmt:rmdir_entry",
      "stmt:remove_entry",
      "stmt:rename_entry",
      "stmt:symlink_entry",
      "stmt:open_entry",
      "stmt:close_entry",
      "stmt:write_entry",
      "branch:mkdir_no_parent",
      "branch:mkdir_exists",
      "branch:mkdir_ok",
      "branch:makedirs_exists",
      "branch:makedirs_conflict",
      "branch:makedirs_ok",
      "branch:rmdir_missing",
      "branch:rmdir_not_dir",
      "branch:rmdir_not_empty",
      "branch:rmdir_ok",
      "branch:remove_missing",
      "branch:remove_is_dir",
      "branch:remove_ok",
      "branch:rename_missing",
      "branch:rename_target_exists",
      "branch:rename_no_parent",
      "branch:rename_into_self",
      "branch:rename_ok",
      "branch:symlink_exists",
      "branch:symlink_no_parent",
      "branch:symlink_ok",
      "branch:open_no_parent",
      "branch:open_is_dir",
      "branch:open_via_link",
      "branch:open_dangling_link",
      "branch:open_create",
      "branch:open_existing",
      "branch:open_reopen",
      "branch:close_not_open",
      "branch:close_ok",
      "branch:write_missing",
      "branch:write_not_file",
      "branch:write_not_open",
      "branch:write_ok",
  };
  return points;
}

enum class NodeType { directory, file, symlink };

struct FsNode {
  NodeType type = NodeType::file;
  std::string link_target;
  std::string content;
};

class FsState final : public SutState {
 public:
  void reset() override {
    nodes_.clear();
    open_.clear();
  }

  bool enabled(const std::string& action) const override {
    if (!parse_fs_action(action)) {
      throw SutError(fmt::format("unknown fs action '{}'", action));
    }
    return true;
  }

  StepOutcome execute(const std::string& action) override {
    auto spec = parse_fs_action(action);
    if (!spec) {
      throw SutError(fmt::format("unknown fs action '{}'", action));
    }
    StepOutcome outcome;
    hits_ = &outcome.touched;
    hit(fmt::format("stmt:{}_entry", spec->op));
    if (spec->op == "mkdir") {
      do_mkdir(spec->args[0]);
    } else if (spec->op == "makedirs") {
      do_makedirs(spec->args[0]);
    } else if (spec->op == "rmdir") {
      do_rmdir(spec->args[0]);
    } else if (spec->op == "remove") {
      do_remove(spec->args[0]);
    } else if (spec->op == "rename") {
      do_rename(spec->args[0], spec->args[1]);
    } else if (spec->op == "symlink") {
      do_symlink(spec->args[0], spec->args[1]);
    } else if (spec->op == "open") {
      do_open(spec->args[0]);
    } else if (spec->op == "close") {
      do_close(spec->args[0]);
    } else {
      do_write(spec->args[0]);
    }
    hits_ = nullptr;
    return outcome;
  }

 private:
  void hit(const std::string& point) { hits_->insert(point); }

  static std::string parent_of(const std::string& path) {
    const size_t slash = path.rfind('/');
    return slash == 0 ? "/" : path.substr(0, slash);
  }

  const FsNode* node_at(const std::string& path) const {
    auto it = nodes_.find(path);
    return it == nodes_.end() ? nullptr : &it->second;
  }

  bool dir_exists(const std::string& path) const {
    if (path == "/") {
      return true;
    }
    const FsNode* node = node_at(path);
    return node && node->type == NodeType::directory;
  }

  // Follows symlink chains (bounded by the map size, so termination is
  // structural). Returns the final path; the node there may not exist.
  std::string resolve(const std::string& path) const {
    std::string current = path;
    for (size_t hop = 0; hop <= nodes_.size(); ++hop) {
      const FsNode* node = node_at(current);
      if (!node || node->type != NodeType::symlink) {
        return current;
      }
      current = node->link_target;
    }
    return current;
  }

  void do_mkdir(const std::string& path) {
    if (!dir_exists(parent_of(path))) {
      hit("branch:mkdir_no_parent");
      return;
    }
    if (node_at(path)) {
      hit("branch:mkdir_exists");
      return;
    }
    hit("branch:mkdir_ok");
    nodes_[path] = FsNode{NodeType::directory, {}, {}};
  }

  void do_makedirs(const std::string& path) {
    if (node_at(path)) {
      hit("branch:makedirs_exists");
      return;
    }
    // Walk outermost-first; any non-directory ancestor aborts the call.
    std::vector<std::string> chain;
    for (std::string p = path; p != "/"; p = parent_of(p)) {
      chain.push_back(p);
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const FsNode* node = node_at(*it);
      if (node && node->type != NodeType::directory) {
        hit("branch:makedirs_conflict");
        return;
      }
    }
    hit("branch:makedirs_ok");
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      if (!node_at(*it)) {
        nodes_[*it] = FsNode{NodeType::directory, {}, {}};
      }
    }
  }

  bool has_children(const std::string& path) const {
    auto it = nodes_.upper_bound(path);
    return it != nodes_.end() && it->first.starts_with(path + "/");
  }

  void do_rmdir(const std::string& path) {
    const FsNode* node = node_at(path);
    if (!node) {
      hit("branch:rmdir_missing");
      return;
    }
    if (node->type != NodeType::directory) {
      hit("branch:rmdir_not_dir");
      return;
    }
    if (has_children(path)) {
      hit("branch:rmdir_not_empty");
      return;
    }
    hit("branch:rmdir_ok");
    nodes_.erase(path);
  }

  void do_remove(const std::string& path) {
    const FsNode* node = node_at(path);
    if (!node) {
      hit("branch:remove_missing");
      return;
    }
    if (node->type == NodeType::directory) {
      hit("branch:remove_is_dir");
      return;
    }
    hit("branch:remove_ok");
    nodes_.erase(path);
    open_.erase(path);
  }

  void do_rename(const std::string& from, const std::string& to) {
    if (!node_at(from)) {
      hit("branch:rename_missing");
      return;
    }
    if (node_at(to)) {
      hit("branch:rename_target_exists");
      return;
    }
    if (!dir_exists(parent_of(to))) {
      hit("branch:rename_no_parent");
      return;
    }
    if (to.starts_with(from + "/")) {
      hit("branch:rename_into_self");
      return;
    }
    hit("branch:rename_ok");
    // Move the node and, for directories, the whole subtree.
    std::map<std::string, FsNode> moved;
    for (auto it = nodes_.lower_bound(from); it != nodes_.end();) {
      if (it->first != from && !it->first.starts_with(from + "/")) {
        break;
      }
      moved[to + it->first.substr(from.size())] = std::move(it->second);
      it = nodes_.erase(it);
    }
    for (auto& [path, node] : moved) {
      nodes_[path] = std::move(node);
    }
  }

  void do_symlink(const std::string& target, const std::string& link) {
    if (node_at(link)) {
      hit("branch:symlink_exists");
      return;
    }
    if (!dir_exists(parent_of(link))) {
      hit("branch:symlink_no_parent");
      return;
    }
    hit("branch:symlink_ok");
    // The target may dangle; resolution happens at open time.
    nodes_[link] = FsNode{NodeType::symlink, target, {}};
  }

  void do_open(const std::string& path) {
    std::string real = path;
    if (const FsNode* node = node_at(path); node && node->type == NodeType::symlink) {
      hit("branch:open_via_link");
      real = resolve(path);
      if (const FsNode* final_node = node_at(real);
          (!final_node && !dir_exists(parent_of(real))) ||
          (final_node && final_node->type == NodeType::symlink)) {
        hit("branch:open_dangling_link");
        return;
      }
    }
    const FsNode* node = node_at(real);
    if (node && node->type == NodeType::directory) {
      hit("branch:open_is_dir");
      return;
    }
    if (!node) {
      if (!dir_exists(parent_of(real))) {
        hit("branch:open_no_parent");
        return;
      }
      hit("branch:open_create");
      nodes_[real] = FsNode{NodeType::file, {}, {}};
    } else {
      hit("branch:open_existing");
    }
    if (!open_.insert(real).second) {
      hit("branch:open_reopen");
    }
  }

  void do_close(const std::string& path) {
    const std::string real = resolve(path);
    if (open_.erase(real) == 0) {
      hit("branch:close_not_open");
      return;
    }
    hit("branch:close_ok");
  }

  void do_write(const std::string& path) {
    const std::string real = resolve(path);
    const FsNode* node = node_at(real);
    if (!node) {
      hit("branch:write_missing");
      return;
    }
    if (node->type != NodeType::file) {
      hit("branch:write_not_file");
      return;
    }
    if (!open_.contains(real)) {
      hit("branch:write_not_open");
      return;
    }
    hit("branch:write_ok");
    nodes_[real].content += "x";
  }

  std::map<std::string, FsNode> nodes_;
  std::set<std::string> open_;
  CoverageSet* hits_ = nullptr;
};

class FsSut final : public Sut {
 public:
  FsSut() {
    for (const std::string& op : fs_unary_ops()) {
      for (const std::string& path : fs_paths()) {
        actions_.push_back(fmt::format("fs.{}(\"{}\")", op, path));
      }
    }
    for (const std::string& op : fs_binary_ops()) {
      for (const std::string& first : fs_paths()) {
        for (const std::string& second : fs_paths()) {
          actions_.push_back(fmt::format("fs.{}(\"{}\",\"{}\")", op, first, second));
        }
      }
    }
  }

  std::string id() const override { return "fs"; }
  const std::vector<std::string>& actions() const override { return actions_; }
  const std::vector<CoveragePoint>& points() const override { return fs_points(); }

  std::unique_ptr<SutState> make_state(const RunOptions&) const override {
    return std::make_unique<FsState>();
  }

 private:
  std::vector<std::string> actions_;
};

}  // namespace

std::unique_ptr<Sut> make_fs_sut() { return std::make_unique<FsSut>(); }

}  // namespace provtrail

