// Copyright (c) provtrail contributors.
// SPDX-License-Identifier: MIT

// Bundled AVL-tree SUT. A TSTL-style action grid over 3 integer variables
// (constants 0..19), 2 tree variables, and the methods insert/delete/find/
// display. Every branch and statement site of the tree implementation below
// carries a hand-assigned, stably named instrumentation point.

#include <fmt/format.h>

#include <array>
#include <map>
#include <memory>
#include <optional>

#include "provtrail/sut.hpp"
#include "sut_builtin.hpp"

namespace provtrail {

namespace {

constexpr int kIntVars = 3;
constexpr int kAvlVars = 2;
constexpr int kMaxConstant = 19;

// Raised by the injected bug; converted to a step failure by execute().
struct InjectedFault {
  std::string message;
};

class CoverageSink {
 public:
  explicit CoverageSink(CoverageSet& out) : out_(out) {}
  void hit(const char* point) { out_.insert(point); }

 private:
  CoverageSet& out_;
};

struct AvlNode {
  int key;
  int height = 1;
  std::unique_ptr<AvlNode> left;
  std::unique_ptr<AvlNode> right;

  explicit AvlNode(int k) : key(k) {}
};

class AvlTree {
 public:
  void insert(int key, CoverageSink& cov) {
    cov.hit("stmt:insert_entry");
    if (!root_) {
      cov.hit("branch:insert_empty");
      root_ = std::make_unique<AvlNode>(key);
      return;
    }
    root_ = insert_rec(std::move(root_), key, cov);
  }

  bool erase(int key, bool inject_fault, CoverageSink& cov) {
    cov.hit("stmt:delete_entry");
    bool removed = false;
    root_ = erase_rec(std::move(root_), key, inject_fault, removed, cov);
    return removed;
  }

  bool find(int key, CoverageSink& cov) const {
    cov.hit("stmt:find_entry");
    const AvlNode* node = root_.get();
    while (node) {
      if (key < node->key) {
        cov.hit("branch:find_left");
        node = node->left.get();
      } else if (key > node->key) {
        cov.hit("branch:find_right");
        node = node->right.get();
      } else {
        cov.hit("branch:find_hit");
        return true;
      }
    }
    cov.hit("branch:find_miss");
    return false;
  }

  std::string display(CoverageSink& cov) const {
    cov.hit("stmt:display_entry");
    if (!root_) {
      cov.hit("branch:display_empty");
      return "[]";
    }
    std::string out = "[";
    display_rec(root_.get(), out, cov);
    out += "]";
    return out;
  }

 private:
  static int height(const std::unique_ptr<AvlNode>& node) { return node ? node->height : 0; }

  static void update_height(AvlNode& node) {
    node.height = 1 + std::max(height(node.left), height(node.right));
  }

  static int balance(const AvlNode& node) { return height(node.left) - height(node.right); }

  static std::unique_ptr<AvlNode> rotate_right(std::unique_ptr<AvlNode> y, CoverageSink& cov) {
    cov.hit("stmt:rotate_right");
    std::unique_ptr<AvlNode> x = std::move(y->left);
    y->left = std::move(x->right);
    update_height(*y);
    x->right = std::move(y);
    update_height(*x);
    return x;
  }

  static std::unique_ptr<AvlNode> rotate_left(std::unique_ptr<AvlNode> x, CoverageSink& cov) {
    cov.hit("stmt:rotate_left");
    std::unique_ptr<AvlNode> y = std::move(x->right);
    x->right = std::move(y->left);
    update_height(*x);
    y->left = std::move(x);
    update_height(*y);
    return y;
  }

  static std::unique_ptr<AvlNode> insert_rec(std::unique_ptr<AvlNode> node, int key,
                                             CoverageSink& cov) {
    if (!node) {
      cov.hit("branch:insert_new_leaf");
      return std::make_unique<AvlNode>(key);
    }
    if (key < node->key) {
      cov.hit("branch:insert_left");
      node->left = insert_rec(std::move(node->left), key, cov);
    } else if (key > node->key) {
      cov.hit("branch:insert_right");
      node->right = insert_rec(std::move(node->right), key, cov);
    } else {
      cov.hit("branch:insert_dup");
      return node;
    }
    update_height(*node);
    const int bf = balance(*node);
    if (bf > 1 && key < node->left->key) {
      cov.hit("branch:ins_rot_ll");
      return rotate_right(std::move(node), cov);
    }
    if (bf > 1) {
      cov.hit("branch:ins_rot_lr");
      node->left = rotate_left(std::move(node->left), cov);
      return rotate_right(std::move(node), cov);
    }
    if (bf < -1 && key > node->right->key) {
      cov.hit("branch:ins_rot_rr");
      return rotate_left(std::move(node), cov);
    }
    if (bf < -1) {
      cov.hit("branch:ins_rot_rl");
      node->right = rotate_right(std::move(node->right), cov);
      return rotate_left(std::move(node), cov);
    }
    return node;
  }

  static std::unique_ptr<AvlNode> erase_rec(std::unique_ptr<AvlNode> node, int key,
                                            bool inject_fault, bool& removed, CoverageSink& cov) {
    if (!node) {
      cov.hit("branch:delete_missing");
      return nullptr;
    }
    if (key < node->key) {
      cov.hit("branch:delete_desc_left");
      node->left = erase_rec(std::move(node->left), key, inject_fault, removed, cov);
    } else if (key > node->key) {
      cov.hit("branch:delete_desc_right");
      node->right = erase_rec(std::move(node->right), key, inject_fault, removed, cov);
    } else {
      removed = true;
      if (node->left && node->right) {
        cov.hit("branch:delete_two_children");
        if (inject_fault) {
          throw InjectedFault{
              fmt::format("injected bug: delete of node {} with two children", node->key)};
        }
        // Replace with the in-order successor, then remove it from the right
        // subtree.
        const AvlNode* successor = node->right.get();
        while (successor->left) {
          successor = successor->left.get();
        }
        node->key = successor->key;
        bool successor_removed = false;
        node->right =
            erase_rec(std::move(node->right), node->key, inject_fault, successor_removed, cov);
      } else if (node->left) {
        cov.hit("branch:delete_left_only");
        node = std::move(node->left);
      } else if (node->right) {
        cov.hit("branch:delete_right_only");
        node = std::move(node->right);
      } else {
        cov.hit("branch:delete_leaf");
        return nullptr;
      }
    }
    if (!node) {
      return nullptr;
    }
    update_height(*node);
    const int bf = balance(*node);
    if (bf > 1 && balance(*node->left) >= 0) {
      cov.hit("branch:del_rot_ll");
      return rotate_right(std::move(node), cov);
    }
    if (bf > 1) {
      cov.hit("branch:del_rot_lr");
      node->left = rotate_left(std::move(node->left), cov);
      return rotate_right(std::move(node), cov);
    }
    if (bf < -1 && balance(*node->right) <= 0) {
      cov.hit("branch:del_rot_rr");
      return rotate_left(std::move(node), cov);
    }
    if (bf < -1) {
      cov.hit("branch:del_rot_rl");
      node->right = rotate_right(std::move(node->right), cov);
      return rotate_left(std::move(node), cov);
    }
    return node;
  }

  static void display_rec(const AvlNode* node, std::string& out, CoverageSink& cov) {
    if (!node) {
      return;
    }
    cov.hit("branch:display_node");
    display_rec(node->left.get(), out, cov);
    if (out.size() > 1) {
      out += ' ';
    }
    out += fmt::format("{}", node->key);
    display_rec(node->right.get(), out, cov);
  }

  std::unique_ptr<AvlNode> root_;
};

struct AvlActionSpec {
  enum class Op { assign_int, construct, insert, erase, find, display };
  Op op;
  int avl_index = 0;
  int int_index = 0;
  int constant = 0;
};

struct AvlGrammar {
  std::vector<std::string> actions;
  std::map<std::string, AvlActionSpec> specs;

  AvlGrammar() {
    auto add = [this](std::string text, AvlActionSpec spec) {
      specs.emplace(text, spec);
      actions.push_back(std::move(text));
    };
    for (int i = 0; i < kIntVars; ++i) {
      for (int c = 0; c <= kMaxConstant; ++c) {
        add(fmt::format("int{} = {}", i, c),
            {AvlActionSpec::Op::assign_int, 0, i, c});
      }
    }
    for (int j = 0; j < kAvlVars; ++j) {
      add(fmt::format("avl{} = avl.AVLTree()", j), {AvlActionSpec::Op::construct, j, 0, 0});
    }
    for (int j = 0; j < kAvlVars; ++j) {
      for (const auto& [method, op] :
           {std::pair{"insert", AvlActionSpec::Op::insert}, {"delete", AvlActionSpec::Op::erase},
            {"find", AvlActionSpec::Op::find}}) {
        for (int i = 0; i < kIntVars; ++i) {
          add(fmt::format("avl{}.{}(int{})", j, method, i), {op, j, i, 0});
        }
      }
    }
    for (int j = 0; j < kAvlVars; ++j) {
      add(fmt::format("avl{}.display()", j), {AvlActionSpec::Op::display, j, 0, 0});
    }
  }
};

const std::vector<CoveragePoint>& avl_points() {
  static const std::vector<CoveragePoint> points = {
      "stmt:tree_init",
      "stmt:insert_entry",
      "stmt:delete_entry",
      "stmt:find_entry",
      "stmt:display_entry",
      "stmt:rotate_left",
      "stmt:rotate_right",
      "branch:insert_empty",
      "branch:insert_new_leaf",
      "branch:insert_left",
      "branch:insert_right",
      "branch:insert_dup",
      "branch:ins_rot_ll",
      "branch:ins_rot_lr",
      "branch:ins_rot_rr",
      "branch:ins_rot_rl",
      "branch:delete_missing",
      "branch:delete_desc_left",
      "branch:delete_desc_right",
      "branch:delete_leaf",
      "branch:delete_left_only",
      "branch:delete_right_only",
      "branch:delete_two_children",
      "branch:del_rot_ll",
      "branch:del_rot_lr",
      "branch:del_rot_rr",
      "branch:del_rot_rl",
      "branch:find_left",
      "branch:find_right",
      "branch:find_hit",
      "branch:find_miss",
      "branch:display_empty",
      "branch:display_node",
  };
  return points;
}

class AvlState final : public SutState {
 public:
  AvlState(const AvlGrammar& grammar, const RunOptions& options)
      : grammar_(grammar), inject_(options.fault_injection) {}

  void reset() override {
    ints_ = {};
    trees_ = {};
  }

  bool enabled(const std::string& action) const override {
    const AvlActionSpec& spec = lookup(action);
    switch (spec.op) {
      case AvlActionSpec::Op::assign_int:
      case AvlActionSpec::Op::construct:
        return true;
      case AvlActionSpec::Op::insert:
      case AvlActionSpec::Op::erase:
      case AvlActionSpec::Op::find:
        return trees_[spec.avl_index].has_value() && ints_[spec.int_index].has_value();
      case AvlActionSpec::Op::display:
        return trees_[spec.avl_index].has_value();
    }
    return false;
  }

  StepOutcome execute(const std::string& action) override {
    const AvlActionSpec& spec = lookup(action);
    if (!enabled(action)) {
      throw SutError(fmt::format("action '{}' executed while disabled", action));
    }
    StepOutcome outcome;
    CoverageSink cov(outcome.touched);
    try {
      switch (spec.op) {
        case AvlActionSpec::Op::assign_int:
          ints_[spec.int_index] = spec.constant;
          break;
        case AvlActionSpec::Op::construct:
          trees_[spec.avl_index].emplace();
          cov.hit("stmt:tree_init");
          break;
        case AvlActionSpec::Op::insert:
          trees_[spec.avl_index]->insert(*ints_[spec.int_index], cov);
          break;
        case AvlActionSpec::Op::erase:
          trees_[spec.avl_index]->erase(*ints_[spec.int_index], inject_, cov);
          break;
        case AvlActionSpec::Op::find:
          trees_[spec.avl_index]->find(*ints_[spec.int_index], cov);
          break;
        case AvlActionSpec::Op::display:
          trees_[spec.avl_index]->display(cov);
          break;
      }
    } catch (const InjectedFault& fault) {
      outcome.failure = fault.message;
    }
    return outcome;
  }

 private:
  const AvlActionSpec& lookup(const std::string& action) const {
    auto it = grammar_.specs.find(action);
    if (it == grammar_.specs.end()) {
      throw SutError(fmt::format("unknown avl action '{}'", action));
    }
    return it->second;
  }

  const AvlGrammar& grammar_;
  bool inject_;
  std::array<std::optional<int>, kIntVars> ints_;
  std::array<std::optional<AvlTree>, kAvlVars> trees_;
};

class AvlSut final : public Sut {
 public:
  std::string id() const override { return "avl"; }
  const std::vector<std::string>& actions() const override { return grammar_.actions; }
  const std::vector<CoveragePoint>& points() const override { return avl_points(); }

  std::unique_ptr<SutState> make_state(const RunOptions& options) const override {
    return std::make_unique<AvlState>(grammar_, options);
  }

 private:
  AvlGrammar grammar_;
};

}  // namespace

std::unique_ptr<Sut> make_avl_sut() { return std::make_unique<AvlSut>(); }

}  // namespace provtrail
