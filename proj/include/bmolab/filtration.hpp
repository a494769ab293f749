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

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace bmolab {

// An atom of F_level, addressed by its position in the level's
// left-to-right order.
struct AtomRef {
  int level = 0;
  int index = 0;

  friend auto operator<=>(const AtomRef&, const AtomRef&) = default;
};

// Nested description of a tree, used by builders and loaders.
struct NodeSpec {
  double mass = 1.0;
  std::vector<NodeSpec> children;
};

// A finite filtration F_0 ⊆ ... ⊆ F_N on a finite probability space,
// stored as a rooted tree of atoms. Atoms of level n+1 are stored in
// breadth-first order, so the children of each atom and the leaves below
// each atom occupy contiguous index ranges.
//
// Invariants (checked at construction): the root has mass 1, every internal
// atom's children masses sum to the parent mass, every mass lies in (0, 1],
// all leaves sit at level N, and the masses of every level sum to 1.
class FiltrationTree {
 public:
  // Validates `root` and builds the tree. Throws FormatError naming the
  // offending node (JSON-pointer style, rooted at `path_prefix`).
  static FiltrationTree from_spec(int depth, const NodeSpec& root,
                                  const std::string& path_prefix = "/root");

  int depth() const noexcept { return static_cast<int>(levels_.size()) - 1; }
  std::size_t atom_count(int level) const;
  std::size_t leaf_count() const noexcept { return levels_.back().mass.size(); }
  std::size_t node_count() const noexcept;

  double mass(AtomRef atom) const;
  std::span<const double> masses(int level) const;
  // Leaf masses, i.e. P on the finest σ-field.
  std::span<const double> leaf_masses() const noexcept {
    return levels_.back().mass;
  }

  bool is_leaf(AtomRef atom) const;
  AtomRef parent(AtomRef atom) const;
  // Index of the parent at level-1 of atom `index` at `level` (level >= 1).
  int parent_index(int level, int index) const {
    return levels_[level].parent[index];
  }
  // Child indices at level+1, half-open.
  std::pair<int, int> children_range(AtomRef atom) const;
  // Leaf indices under the atom, half-open.
  std::pair<int, int> leaf_range(AtomRef atom) const;

  std::vector<AtomRef> atoms_at_level(int n) const;
  // Ancestor at level n of a leaf.
  AtomRef atom_containing(AtomRef leaf, int n) const;
  int ancestor_index(int leaf_index, int n) const;

  NodeSpec to_spec() const;

  // Throws std::out_of_range unless 0 <= n <= depth().
  void check_level(int n) const;
  void check_atom(AtomRef atom) const;

  // Structural and bitwise mass equality.
  friend bool operator==(const FiltrationTree& a, const FiltrationTree& b);

 private:
  struct Level {
    std::vector<double> mass;
    std::vector<int> parent;
    std::vector<int> child_begin;  // size = atoms + 1 (internal levels)
    std::vector<int> leaf_begin;   // size = atoms + 1
  };

  FiltrationTree() = default;
  void index_leaves();

  std::vector<Level> levels_;
};

using TreePtr = std::shared_ptr<const FiltrationTree>;

// Uniform binary tree: every atom at level n has mass 2^-n.
TreePtr build_dyadic(int depth);

// Random tree, a pure function of its arguments. Each internal atom gets
// 1..max_branch children (uniform) with masses proportional to 0.1 + Exp(1)
// draws; the last child takes the remainder so masses sum exactly.
TreePtr build_random(std::uint64_t seed, int depth, int max_branch);

// Identity or structural equality; operations combining objects require it.
inline bool same_tree(const FiltrationTree& a, const FiltrationTree& b) {
  return &a == &b || a == b;
}
void require_same_tree(const FiltrationTree& a, const FiltrationTree& b);

// Number of stopping times (antichains plus the empty set) on the tree,
// saturating at UINT64_MAX: T(leaf) = 2, T(internal) = 1 + prod T(child).
std::uint64_t count_stopping_times(const FiltrationTree& tree);

}  // namespace bmolab
