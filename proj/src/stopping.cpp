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

#include "bmolab/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bmolab/config.hpp"

namespace bmolab {

StoppingTime::StoppingTime(TreePtr tree, std::vector<AtomRef> stops)
    : tree_(std::move(tree)), stops_(std::move(stops)) {
  if (!tree_) throw std::invalid_argument("stopping time without a tree");
  std::sort(stops_.begin(), stops_.end());
  leaf_time_.assign(tree_->leaf_count(), kNever);
  // Two atoms are comparable iff their leaf ranges overlap, so an antichain
  // is exactly a family with disjoint leaf ranges.
  for (const AtomRef& stop : stops_) {
    tree_->check_atom(stop);
    auto [lb, le] = tree_->leaf_range(stop);
    for (int leaf = lb; leaf < le; ++leaf) {
      if (leaf_time_[leaf] != kNever) {
        throw std::invalid_argument(
            "stop set is not an antichain: atom (" + std::to_string(stop.level) +
            ", " + std::to_string(stop.index) + ") is comparable to another stop");
      }
      leaf_time_[leaf] = stop.level;
    }
  }
}

bool StoppingTime::stopped_by(int n, std::size_t atom) const {
  auto [lb, le] = tree_->leaf_range({n, static_cast<int>(atom)});
  (void)le;
  return leaf_time_[lb] <= n;
}

std::vector<AtomRef> StoppingTime::tent_atoms() const {
  std::vector<AtomRef> atoms;
  for (int n = 0; n <= tree_->depth(); ++n) {
    for (std::size_t a = 0; a < tree_->atom_count(n); ++a) {
      if (stopped_by(n, a)) atoms.push_back({n, static_cast<int>(a)});
    }
  }
  return atoms;
}

double StoppingTime::probability_finite() const {
  double p = 0.0;
  for (const AtomRef& stop : stops_) p += tree_->mass(stop);
  return p;
}

StoppingTime tau_a(const TreePtr& tree, int n, const std::vector<AtomRef>& atoms) {
  tree->check_level(n);
  if (atoms.empty()) throw std::invalid_argument("τ_A needs a nonempty A");
  for (const AtomRef& a : atoms) {
    if (a.level != n) {
      throw std::invalid_argument("τ_A: atom at level " + std::to_string(a.level) +
                                  " mixed into a level-" + std::to_string(n) + " set");
    }
  }
  return StoppingTime(tree, atoms);
}

StoppingTime first_passage(const AdaptedProcess& g, double lambda) {
  if (g.dim() != 1) throw std::invalid_argument("first_passage needs a scalar process");
  const FiltrationTree& tree = g.tree();
  std::vector<AtomRef> stops;
  // Atoms still running (no earlier exceedance), level by level.
  std::vector<int> alive{0};
  for (int n = 0; n <= tree.depth() && !alive.empty(); ++n) {
    std::vector<int> next;
    for (int a : alive) {
      if (std::abs(g.at(n, a)[0]) > lambda) {
        stops.push_back({n, a});
      } else if (n < tree.depth()) {
        auto [cb, ce] = tree.children_range({n, a});
        for (int c = cb; c < ce; ++c) next.push_back(c);
      }
    }
    alive = std::move(next);
  }
  return StoppingTime(g.tree_ptr(), std::move(stops));
}

namespace {

class Enumerator {
 public:
  Enumerator(const TreePtr& tree, const std::function<void(const StoppingTime&)>& visit)
      : tree_(tree), visit_(visit) {}

  void run() {
    std::vector<AtomRef> pending{{0, 0}};
    recurse(pending);
  }

 private:
  // `pending` is a stack of undecided atoms; its top is decided first.
  void recurse(std::vector<AtomRef>& pending) {
    if (pending.empty()) {
      visit_(StoppingTime(tree_, stops_));
      return;
    }
    const AtomRef atom = pending.back();
    pending.pop_back();

    stops_.push_back(atom);
    recurse(pending);
    stops_.pop_back();

    if (atom.level < tree_->depth()) {
      auto [cb, ce] = tree_->children_range(atom);
      for (int c = ce - 1; c >= cb; --c) pending.push_back({atom.level + 1, c});
      recurse(pending);
      pending.resize(pending.size() - (ce - cb));
    } else {
      recurse(pending);
    }
    pending.push_back(atom);
  }

  const TreePtr& tree_;
  const std::function<void(const StoppingTime&)>& visit_;
  std::vector<AtomRef> stops_;
};

}  // namespace

void for_each_stopping_time(const TreePtr& tree,
                            const std::function<void(const StoppingTime&)>& visit,
                            std::uint64_t cap) {
  if (cap == 0) cap = enumeration_cap();
  const std::uint64_t count = count_stopping_times(*tree);
  if (count > cap) {
    throw SizeError("tree has " + std::to_string(count) +
                    " stopping times, above the enumeration cap of " +
                    std::to_string(cap) +
                    "; use a fast mode (atom-fast / node-fast) or raise BMO_LAB_MAX_ENUM");
  }
  Enumerator(tree, visit).run();
}

std::vector<StoppingTime> enumerate_stopping_times(const TreePtr& tree,
                                                   std::uint64_t cap) {
  std::vector<StoppingTime> out;
  for_each_stopping_time(tree, [&](const StoppingTime& t) { out.push_back(t); }, cap);
  return out;
}

AdaptedProcess indicator_process(const StoppingTime& tau) {
  const FiltrationTree& tree = tau.tree();
  std::vector<std::vector<double>> levels;
  for (int n = 0; n <= tree.depth(); ++n) {
    std::vector<double> level(tree.atom_count(n));
    for (std::size_t a = 0; a < level.size(); ++a) {
      level[a] = tau.stopped_by(n, a) ? 1.0 : 0.0;
    }
    levels.push_back(std::move(level));
  }
  return AdaptedProcess(tau.tree_ptr(), 1, std::move(levels));
}

RandomVariable stopped_before(const Martingale& f, const StoppingTime& tau) {
  const FiltrationTree& tree = f.tree();
  require_same_tree(tree, tau.tree());
  const int dim = f.dim();
  const int depth = tree.depth();
  std::vector<double> values(tree.leaf_count() * dim, 0.0);
  for (std::size_t leaf = 0; leaf < tree.leaf_count(); ++leaf) {
    const int t = tau.at_leaf(leaf);
    if (t == 0) continue;
    const int level = t == StoppingTime::kNever ? depth : t - 1;
    auto v = f.at(level, tree.ancestor_index(static_cast<int>(leaf), level));
    std::copy(v.begin(), v.end(), values.begin() + leaf * dim);
  }
  return RandomVariable(f.tree_ptr(), dim, std::move(values));
}

}  // namespace bmolab
