// Copyright 2026 The bmolab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bmolab/filtration.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "bmolab/config.hpp"
#include "bmolab/random.hpp"

namespace bmolab {

namespace {

struct Pending {
  const NodeSpec* node;
  int parent;
  std::string path;
};

}  // namespace

FiltrationTree FiltrationTree::from_spec(int depth, const NodeSpec& root,
                                         const std::string& path_prefix) {
  if (depth < 0) throw FormatError("/depth", "depth must be nonnegative");
  if (depth > kMaxDepth) {
    throw SizeError("tree depth " + std::to_string(depth) +
                    " exceeds the cap of " + std::to_string(kMaxDepth));
  }
  if (!(std::abs(root.mass - 1.0) <= kMassTolerance)) {
    throw FormatError(path_prefix + "/mass", "root mass must be 1");
  }

  FiltrationTree tree;
  tree.levels_.resize(static_cast<std::size_t>(depth) + 1);
  std::vector<Pending> current{{&root, -1, path_prefix}};
  std::uint64_t nodes = 0;
  for (int n = 0; n <= depth; ++n) {
    Level& level = tree.levels_[n];
    std::vector<Pending> next;
    for (std::size_t i = 0; i < current.size(); ++i) {
      const Pending& item = current[i];
      const NodeSpec& node = *item.node;
      if (!std::isfinite(node.mass) || node.mass <= 0.0 || node.mass > 1.0) {
        throw FormatError(item.path + "/mass", "mass must lie in (0, 1]");
      }
      if (++nodes > kMaxNodes) {
        throw SizeError("tree exceeds the cap of " + std::to_string(kMaxNodes) +
                        " nodes");
      }
      level.mass.push_back(node.mass);
      level.parent.push_back(item.parent);
      if (n == depth) {
        if (!node.children.empty()) {
          throw FormatError(item.path + "/children",
                            "atoms at the horizon level must be leaves");
        }
        continue;
      }
      if (node.children.empty()) {
        throw FormatError(item.path + "/children",
                          "leaf above the horizon level " + std::to_string(depth));
      }
      level.child_begin.push_back(static_cast<int>(next.size()));
      double sum = 0.0;
      for (std::size_t c = 0; c < node.children.size(); ++c) {
        std::string child_path = item.path + "/children/" + std::to_string(c);
        const double m = node.children[c].mass;
        if (!std::isfinite(m) || m <= 0.0 || m > 1.0) {
          throw FormatError(child_path + "/mass", "mass must lie in (0, 1]");
        }
        sum += m;
        next.push_back({&node.children[c], static_cast<int>(i), std::move(child_path)});
      }
      if (!(std::abs(sum - node.mass) <= kMassTolerance)) {
        throw FormatError(item.path + "/children",
                          "children masses sum to " + std::to_string(sum) +
                              ", expected " + std::to_string(node.mass));
      }
    }
    if (n < depth) level.child_begin.push_back(static_cast<int>(next.size()));
    double level_sum = 0.0;
    for (double m : level.mass) level_sum += m;
    if (!(std::abs(level_sum - 1.0) <= kMassTolerance)) {
      throw FormatError(path_prefix, "masses of level " + std::to_string(n) +
                                         " sum to " + std::to_string(level_sum));
    }
    current = std::move(next);
  }
  tree.index_leaves();
  return tree;
}

void FiltrationTree::index_leaves() {
  const int depth = this->depth();
  Level& last = levels_[depth];
  last.leaf_begin.resize(last.mass.size() + 1);
  for (std::size_t i = 0; i <= last.mass.size(); ++i) {
    last.leaf_begin[i] = static_cast<int>(i);
  }
  for (int n = depth - 1; n >= 0; --n) {
    Level& level = levels_[n];
    const Level& below = levels_[n + 1];
    level.leaf_begin.resize(level.mass.size() + 1);
    for (std::size_t i = 0; i <= level.mass.size(); ++i) {
      level.leaf_begin[i] = below.leaf_begin[level.child_begin[i]];
    }
  }
}

std::size_t FiltrationTree::atom_count(int level) const {
  check_level(level);
  return levels_[level].mass.size();
}

std::size_t FiltrationTree::node_count() const noexcept {
  std::size_t total = 0;
  for (const auto& level : levels_) total += level.mass.size();
  return total;
}

void FiltrationTree::check_level(int n) const {
  if (n < 0 || n > depth()) {
    throw std::out_of_range("level " + std::to_string(n) +
                            " outside [0, " + std::to_string(depth()) + "]");
  }
}

void FiltrationTree::check_atom(AtomRef atom) const {
  check_level(atom.level);
  if (atom.index < 0 ||
      static_cast<std::size_t>(atom.index) >= levels_[atom.level].mass.size()) {
    throw std::out_of_range("atom index " + std::to_string(atom.index) +
                            " outside level " + std::to_string(atom.level));
  }
}

double FiltrationTree::mass(AtomRef atom) const {
  check_atom(atom);
  return levels_[atom.level].mass[atom.index];
}

std::span<const double> FiltrationTree::masses(int level) const {
  check_level(level);
  return levels_[level].mass;
}

bool FiltrationTree::is_leaf(AtomRef atom) const {
  check_atom(atom);
  return atom.level == depth();
}

AtomRef FiltrationTree::parent(AtomRef atom) const {
  check_atom(atom);
  if (atom.level == 0) throw std::out_of_range("the root has no parent");
  return {atom.level - 1, levels_[atom.level].parent[atom.index]};
}

std::pair<int, int> FiltrationTree::children_range(AtomRef atom) const {
  check_atom(atom);
  if (atom.level == depth()) return {0, 0};
  const auto& begin = levels_[atom.level].child_begin;
  return {begin[atom.index], begin[atom.index + 1]};
}

std::pair<int, int> FiltrationTree::leaf_range(AtomRef atom) const {
  check_atom(atom);
  const auto& begin = levels_[atom.level].leaf_begin;
  return {begin[atom.index], begin[atom.index + 1]};
}

std::vector<AtomRef> FiltrationTree::atoms_at_level(int n) const {
  check_level(n);
  std::vector<AtomRef> atoms;
  atoms.reserve(levels_[n].mass.size());
  for (std::size_t i = 0; i < levels_[n].mass.size(); ++i) {
    atoms.push_back({n, static_cast<int>(i)});
  }
  return atoms;
}

int FiltrationTree::ancestor_index(int leaf_index, int n) const {
  check_level(n);
  const auto& begin = levels_[n].leaf_begin;
  if (leaf_index < 0 || leaf_index >= begin.back()) {
    throw std::out_of_range("leaf index " + std::to_string(leaf_index));
  }
  auto it = std::upper_bound(begin.begin(), begin.end(), leaf_index);
  return static_cast<int>(it - begin.begin()) - 1;
}

AtomRef FiltrationTree::atom_containing(AtomRef leaf, int n) const {
  check_atom(leaf);
  if (leaf.level != depth()) {
    throw std::invalid_argument("atom_containing expects a leaf");
  }
  return {n, ancestor_index(leaf.index, n)};
}

NodeSpec FiltrationTree::to_spec() const {
  // Bottom-up: assemble each level's specs from the level below.
  std::vector<NodeSpec> below(levels_.back().mass.size());
  for (std::size_t i = 0; i < below.size(); ++i) {
    below[i].mass = levels_.back().mass[i];
  }
  for (int n = depth() - 1; n >= 0; --n) {
    const Level& level = levels_[n];
    std::vector<NodeSpec> here(level.mass.size());
    for (std::size_t i = 0; i < here.size(); ++i) {
      here[i].mass = level.mass[i];
      for (int c = level.child_begin[i]; c < level.child_begin[i + 1]; ++c) {
        here[i].children.push_back(std::move(below[c]));
      }
    }
    below = std::move(here);
  }
  return std::move(below.front());
}

bool operator==(const FiltrationTree& a, const FiltrationTree& b) {
  if (a.levels_.size() != b.levels_.size()) return false;
  for (std::size_t n = 0; n < a.levels_.size(); ++n) {
    const auto& la = a.levels_[n];
    const auto& lb = b.levels_[n];
    if (la.parent != lb.parent || la.child_begin != lb.child_begin) return false;
    if (la.mass.size() != lb.mass.size()) return false;
    for (std::size_t i = 0; i < la.mass.size(); ++i) {
      if (std::bit_cast<std::uint64_t>(la.mass[i]) !=
          std::bit_cast<std::uint64_t>(lb.mass[i])) {
        return false;
      }
    }
  }
  return true;
}

void require_same_tree(const FiltrationTree& a, const FiltrationTree& b) {
  if (!same_tree(a, b)) throw std::invalid_argument("objects live on different trees");
}

TreePtr build_dyadic(int depth) {
  if (depth < 0) throw std::invalid_argument("depth must be nonnegative");
  if (depth > kMaxDepth) {
    throw SizeError("dyadic depth " + std::to_string(depth) +
                    " exceeds the cap of " + std::to_string(kMaxDepth));
  }
  NodeSpec leaf{std::ldexp(1.0, -depth), {}};
  NodeSpec node = leaf;
  for (int n = depth - 1; n >= 0; --n) {
    NodeSpec parent{std::ldexp(1.0, -n), {node, node}};
    node = std::move(parent);
  }
  return std::make_shared<const FiltrationTree>(
      FiltrationTree::from_spec(depth, node));
}

namespace {

void grow(NodeSpec& node, int remaining, int max_branch, Rng& rng,
          std::uint64_t& budget) {
  if (remaining == 0) return;
  const int branches = 1 + static_cast<int>(rng.below(max_branch));
  if (budget < static_cast<std::uint64_t>(branches)) {
    throw SizeError("random tree exceeds the cap of " +
                    std::to_string(kMaxNodes) + " nodes");
  }
  budget -= branches;
  std::vector<double> weights(branches);
  double total = 0.0;
  for (double& w : weights) {
    w = 0.1 + rng.exponential();
    total += w;
  }
  node.children.resize(branches);
  double assigned = 0.0;
  for (int c = 0; c < branches; ++c) {
    double m = c + 1 < branches ? node.mass * (weights[c] / total)
                                : node.mass - assigned;
    node.children[c].mass = m;
    assigned += m;
  }
  for (auto& child : node.children) {
    grow(child, remaining - 1, max_branch, rng, budget);
  }
}

}  // namespace

TreePtr build_random(std::uint64_t seed, int depth, int max_branch) {
  if (depth < 0) throw std::invalid_argument("depth must be nonnegative");
  if (max_branch < 1) throw std::invalid_argument("max_branch must be >= 1");
  if (depth > kMaxDepth) {
    throw SizeError("random tree depth " + std::to_string(depth) +
                    " exceeds the cap of " + std::to_string(kMaxDepth));
  }
  Rng rng(seed);
  NodeSpec root{1.0, {}};
  std::uint64_t budget = kMaxNodes - 1;
  grow(root, depth, max_branch, rng, budget);
  return std::make_shared<const FiltrationTree>(
      FiltrationTree::from_spec(depth, root));
}

std::uint64_t count_stopping_times(const FiltrationTree& tree) {
  constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();
  const int depth = tree.depth();
  std::vector<std::uint64_t> below(tree.atom_count(depth), 2);
  for (int n = depth - 1; n >= 0; --n) {
    std::vector<std::uint64_t> here(tree.atom_count(n));
    for (std::size_t i = 0; i < here.size(); ++i) {
      auto [cb, ce] = tree.children_range({n, static_cast<int>(i)});
      std::uint64_t product = 1;
      for (int c = cb; c < ce; ++c) {
        if (below[c] != 0 && product > kSaturated / below[c]) {
          product = kSaturated;
          break;
        }
        product *= below[c];
      }
      here[i] = product == kSaturated ? kSaturated : product + 1;
    }
    below = std::move(here);
  }
  return below.front();
}

}  // namespace bmolab
