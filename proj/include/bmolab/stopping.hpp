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

#include <climits>
#include <cstdint>
#include <functional>
#include <vector>

#include "bmolab/filtration.hpp"
#include "bmolab/process.hpp"

namespace bmolab {

// A stopping time τ with values in {0, ..., N, ∞}, represented by its stop
// set: an antichain of atoms. τ(ω) is the level of the stop atom above ω's
// leaf, or ∞ when there is none. The tent τ̂ = {(ω, k) : k >= τ(ω) < ∞}.
class StoppingTime {
 public:
  static constexpr int kNever = INT_MAX;

  // Throws std::invalid_argument unless `stops` is an antichain of valid
  // atoms. Stops are kept sorted by (level, index).
  StoppingTime(TreePtr tree, std::vector<AtomRef> stops);
  static StoppingTime never(TreePtr tree) { return StoppingTime(std::move(tree), {}); }

  const FiltrationTree& tree() const noexcept { return *tree_; }
  const TreePtr& tree_ptr() const noexcept { return tree_; }
  const std::vector<AtomRef>& stops() const noexcept { return stops_; }

  // τ on a leaf; kNever encodes ∞.
  int at_leaf(std::size_t leaf) const { return leaf_time_[leaf]; }
  const std::vector<int>& leaf_times() const noexcept { return leaf_time_; }
  // Whether τ <= n on the level-n atom (F_n-measurability makes this
  // constant on the atom).
  bool stopped_by(int n, std::size_t atom) const;
  bool in_tent(std::size_t leaf, int k) const { return leaf_time_[leaf] <= k; }
  // Every atom (v, k) of the tent: descendants of stop atoms at all levels
  // from the stop level to N.
  std::vector<AtomRef> tent_atoms() const;

  // P(τ < ∞) = Σ stop masses.
  double probability_finite() const;

  friend bool operator==(const StoppingTime& a, const StoppingTime& b) {
    return a.stops_ == b.stops_;
  }

 private:
  TreePtr tree_;
  std::vector<AtomRef> stops_;
  std::vector<int> leaf_time_;
};

// τ_A = n on A, ∞ elsewhere. A must be nonempty and lie at level n.
StoppingTime tau_a(const TreePtr& tree, int n, const std::vector<AtomRef>& atoms);

// τ = inf{n : |g_n| > λ} for a scalar adapted process.
StoppingTime first_passage(const AdaptedProcess& g, double lambda);

// Visits every stopping time of the tree (including τ ≡ ∞) depth-first,
// trying "stop here" before "defer to the children". Throws SizeError when
// the count exceeds `cap` (default: enumeration_cap()).
void for_each_stopping_time(const TreePtr& tree,
                            const std::function<void(const StoppingTime&)>& visit,
                            std::uint64_t cap = 0);
std::vector<StoppingTime> enumerate_stopping_times(const TreePtr& tree,
                                                   std::uint64_t cap = 0);

// f_n = χ_{τ <= n}.
AdaptedProcess indicator_process(const StoppingTime& tau);

// f_{τ-1} pointwise, with f_{-1} = 0 where τ = 0 and f_N where τ = ∞.
RandomVariable stopped_before(const Martingale& f, const StoppingTime& tau);

}  // namespace bmolab
