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

#include "bmolab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bmolab {

Martingale transform(const Martingale& f, const PredictableSequence& v) {
  require_same_tree(f.tree(), v.tree());
  const FiltrationTree& tree = f.tree();
  const int dim = f.dim();
  const DifferenceSequence d = differences(f);
  std::vector<std::vector<double>> levels(tree.depth() + 1);
  levels[0].resize(dim);
  for (int c = 0; c < dim; ++c) levels[0][c] = v.multiplier(0, 0) * d.at(0, 0)[c];
  for (int k = 1; k <= tree.depth(); ++k) {
    levels[k].resize(tree.atom_count(k) * dim);
    for (std::size_t a = 0; a < tree.atom_count(k); ++a) {
      const int parent = tree.parent_index(k, static_cast<int>(a));
      const double vk = v.multiplier(k, a);
      auto dk = d.at(k, a);
      for (int c = 0; c < dim; ++c) {
        levels[k][a * dim + c] = levels[k - 1][parent * dim + c] + vk * dk[c];
      }
    }
  }
  return Martingale::assume_valid(AdaptedProcess(f.tree_ptr(), dim, std::move(levels)));
}

Martingale l2_lift(const Martingale& f) {
  if (f.dim() != 1) throw std::invalid_argument("l2_lift takes a scalar martingale");
  const FiltrationTree& tree = f.tree();
  const int depth = tree.depth();
  const int dim = depth + 1;
  const DifferenceSequence d = differences(f);
  std::vector<std::vector<double>> levels(depth + 1);
  levels[0].assign(dim, 0.0);
  levels[0][0] = d.at(0, 0)[0];
  for (int k = 1; k <= depth; ++k) {
    levels[k].assign(tree.atom_count(k) * dim, 0.0);
    for (std::size_t a = 0; a < tree.atom_count(k); ++a) {
      const int parent = tree.parent_index(k, static_cast<int>(a));
      std::copy_n(levels[k - 1].begin() + parent * dim, dim,
                  levels[k].begin() + a * dim);
      levels[k][a * dim + k] = d.at(k, a)[0];
    }
  }
  return Martingale::assume_valid(AdaptedProcess(f.tree_ptr(), dim, std::move(levels)));
}

AdaptedProcess square_function(const Martingale& f) {
  const FiltrationTree& tree = f.tree();
  const DifferenceSequence d = differences(f);
  // Running sums of |d_k f|² before the square root.
  std::vector<std::vector<double>> sums(tree.depth() + 1);
  sums[0] = {squared_norm(d.at(0, 0))};
  for (int k = 1; k <= tree.depth(); ++k) {
    sums[k].resize(tree.atom_count(k));
    for (std::size_t a = 0; a < tree.atom_count(k); ++a) {
      sums[k][a] = sums[k - 1][tree.parent_index(k, static_cast<int>(a))] +
                   squared_norm(d.at(k, a));
    }
  }
  for (auto& level : sums) {
    for (double& s : level) s = std::sqrt(s);
  }
  return AdaptedProcess(f.tree_ptr(), 1, std::move(sums));
}

MaximalFunction maximal(const AdaptedProcess& g) {
  const FiltrationTree& tree = g.tree();
  std::vector<std::vector<double>> running(tree.depth() + 1);
  running[0] = {g.norm_at(0, 0)};
  for (int k = 1; k <= tree.depth(); ++k) {
    running[k].resize(tree.atom_count(k));
    for (std::size_t a = 0; a < tree.atom_count(k); ++a) {
      running[k][a] = std::max(running[k - 1][tree.parent_index(k, static_cast<int>(a))],
                               g.norm_at(k, a));
    }
  }
  AdaptedProcess process(g.tree_ptr(), 1, std::move(running));
  RandomVariable final = process.final_value();
  return {std::move(final), std::move(process)};
}

}  // namespace bmolab
