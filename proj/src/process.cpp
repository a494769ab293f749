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

#include "bmolab/process.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "bmolab/config.hpp"
#include "bmolab/random.hpp"

namespace bmolab {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(std::string(what) + " contains a non-finite value");
    }
  }
}

}  // namespace

double squared_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

RandomVariable::RandomVariable(TreePtr tree, int dim, std::vector<double> values)
    : tree_(std::move(tree)), dim_(dim), values_(std::move(values)) {
  if (!tree_) throw std::invalid_argument("random variable without a tree");
  if (dim_ < 1) throw std::invalid_argument("dimension must be positive");
  if (values_.size() != tree_->leaf_count() * static_cast<std::size_t>(dim_)) {
    throw std::invalid_argument("random variable needs one value per leaf");
  }
  require_finite(values_, "random variable");
}

RandomVariable RandomVariable::constant(TreePtr tree, double value, int dim) {
  const std::size_t n = tree->leaf_count() * static_cast<std::size_t>(dim);
  return RandomVariable(std::move(tree), dim, std::vector<double>(n, value));
}

double RandomVariable::norm_at(std::size_t leaf) const {
  if (dim_ == 1) return std::abs(values_[leaf]);
  return std::sqrt(squared_norm(at(leaf)));
}

AdaptedProcess::AdaptedProcess(TreePtr tree, int dim,
                               std::vector<std::vector<double>> levels)
    : tree_(std::move(tree)), dim_(dim), levels_(std::move(levels)) {
  if (!tree_) throw std::invalid_argument("process without a tree");
  if (dim_ < 1) throw std::invalid_argument("dimension must be positive");
  if (levels_.size() != static_cast<std::size_t>(tree_->depth()) + 1) {
    throw std::invalid_argument("process needs one level per time 0..N");
  }
  for (int n = 0; n <= tree_->depth(); ++n) {
    if (levels_[n].size() != tree_->atom_count(n) * dim_) {
      throw std::invalid_argument("level " + std::to_string(n) +
                                  " needs one value per atom");
    }
    require_finite(levels_[n], "adapted process");
  }
}

AdaptedProcess AdaptedProcess::zeros(TreePtr tree, int dim) {
  std::vector<std::vector<double>> levels;
  for (int n = 0; n <= tree->depth(); ++n) {
    levels.emplace_back(tree->atom_count(n) * dim, 0.0);
  }
  return AdaptedProcess(std::move(tree), dim, std::move(levels));
}

double AdaptedProcess::norm_at(int level, std::size_t atom) const {
  if (dim_ == 1) return std::abs(levels_[level][atom]);
  return std::sqrt(squared_norm(at(level, atom)));
}

RandomVariable AdaptedProcess::lift(int n) const {
  tree_->check_level(n);
  std::vector<double> values(tree_->leaf_count() * dim_);
  for (std::size_t a = 0; a < tree_->atom_count(n); ++a) {
    auto [lb, le] = tree_->leaf_range({n, static_cast<int>(a)});
    auto src = at(n, a);
    for (int leaf = lb; leaf < le; ++leaf) {
      std::copy(src.begin(), src.end(), values.begin() + leaf * dim_);
    }
  }
  return RandomVariable(tree_, dim_, std::move(values));
}

Martingale::Martingale(AdaptedProcess process) : process_(std::move(process)) {
  const FiltrationTree& tree = process_.tree();
  const int dim = process_.dim();
  for (int n = 0; n < tree.depth(); ++n) {
    for (std::size_t a = 0; a < tree.atom_count(n); ++a) {
      AtomRef atom{n, static_cast<int>(a)};
      auto [cb, ce] = tree.children_range(atom);
      const double m = tree.mass(atom);
      for (int d = 0; d < dim; ++d) {
        double children = 0.0;
        for (int c = cb; c < ce; ++c) {
          children += process_.at(n + 1, c)[d] * tree.masses(n + 1)[c];
        }
        if (!(std::abs(process_.at(n, a)[d] * m - children) <= kMartingaleTolerance)) {
          throw std::invalid_argument(
              "martingale property fails at level " + std::to_string(n) +
              ", atom " + std::to_string(a));
        }
      }
    }
  }
}

PredictableSequence::PredictableSequence(TreePtr tree,
                                         std::vector<std::vector<double>> values)
    : tree_(std::move(tree)), values_(std::move(values)) {
  if (!tree_) throw std::invalid_argument("predictable sequence without a tree");
  if (values_.size() != static_cast<std::size_t>(tree_->depth()) + 1) {
    throw std::invalid_argument("predictable sequence needs v_0..v_N");
  }
  if (values_[0].size() != 1) {
    throw std::invalid_argument("v_0 must be a single constant");
  }
  for (int k = 1; k <= tree_->depth(); ++k) {
    if (values_[k].size() != tree_->atom_count(k - 1)) {
      throw std::invalid_argument("v_" + std::to_string(k) +
                                  " needs one value per level-" +
                                  std::to_string(k - 1) + " atom");
    }
  }
  for (const auto& level : values_) require_finite(level, "predictable sequence");
}

PredictableSequence PredictableSequence::constant(TreePtr tree, double value) {
  std::vector<std::vector<double>> values{{value}};
  for (int k = 1; k <= tree->depth(); ++k) {
    values.emplace_back(tree->atom_count(k - 1), value);
  }
  return PredictableSequence(std::move(tree), std::move(values));
}

double PredictableSequence::multiplier(int k, std::size_t atom) const {
  if (k == 0) return values_[0][0];
  return values_[k][tree_->parent_index(k, static_cast<int>(atom))];
}

double PredictableSequence::bound() const {
  double b = 0.0;
  for (const auto& level : values_) {
    for (double v : level) b = std::max(b, std::abs(v));
  }
  return b;
}

RandomVariable omega_weight(const TreePtr& tree, int n) {
  tree->check_level(n);
  std::vector<double> values(tree->leaf_count());
  auto masses = tree->masses(n);
  for (std::size_t a = 0; a < masses.size(); ++a) {
    auto [lb, le] = tree->leaf_range({n, static_cast<int>(a)});
    for (int leaf = lb; leaf < le; ++leaf) values[leaf] = masses[a];
  }
  return RandomVariable(tree, 1, std::move(values));
}

std::vector<double> conditional_expectation(const RandomVariable& x, int n) {
  const FiltrationTree& tree = x.tree();
  tree.check_level(n);
  const int dim = x.dim();
  auto leaf_mass = tree.leaf_masses();
  std::vector<double> out(tree.atom_count(n) * dim, 0.0);
  for (std::size_t a = 0; a < tree.atom_count(n); ++a) {
    AtomRef atom{n, static_cast<int>(a)};
    auto [lb, le] = tree.leaf_range(atom);
    for (int leaf = lb; leaf < le; ++leaf) {
      auto v = x.at(leaf);
      for (int d = 0; d < dim; ++d) out[a * dim + d] += v[d] * leaf_mass[leaf];
    }
    const double m = tree.mass(atom);
    for (int d = 0; d < dim; ++d) out[a * dim + d] /= m;
  }
  return out;
}

Martingale martingale_from_final(const RandomVariable& x) {
  const int depth = x.tree().depth();
  std::vector<std::vector<double>> levels;
  levels.reserve(depth + 1);
  for (int n = 0; n < depth; ++n) levels.push_back(conditional_expectation(x, n));
  // The final level is X itself; no averaging round-off at the leaves.
  levels.emplace_back(x.values().begin(), x.values().end());
  return Martingale::assume_valid(
      AdaptedProcess(x.tree_ptr(), x.dim(), std::move(levels)));
}

DifferenceSequence differences(const AdaptedProcess& g) {
  const FiltrationTree& tree = g.tree();
  const int dim = g.dim();
  std::vector<std::vector<double>> levels;
  levels.emplace_back(g.level(0).begin(), g.level(0).end());
  for (int k = 1; k <= tree.depth(); ++k) {
    std::vector<double> d(tree.atom_count(k) * dim);
    for (std::size_t a = 0; a < tree.atom_count(k); ++a) {
      auto here = g.at(k, a);
      auto before = g.at(k - 1, tree.parent_index(k, static_cast<int>(a)));
      for (int c = 0; c < dim; ++c) d[a * dim + c] = here[c] - before[c];
    }
    levels.push_back(std::move(d));
  }
  return {AdaptedProcess(g.tree_ptr(), dim, std::move(levels))};
}

Martingale random_martingale(const TreePtr& tree, std::uint64_t seed, int dim) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  Rng rng(seed);
  std::vector<double> values(tree->leaf_count() * dim);
  for (double& v : values) v = rng.normal();
  return martingale_from_final(RandomVariable(tree, dim, std::move(values)));
}

std::vector<double> expectation(const RandomVariable& x) {
  std::vector<double> out(x.dim(), 0.0);
  auto leaf_mass = x.tree().leaf_masses();
  for (std::size_t leaf = 0; leaf < x.leaf_count(); ++leaf) {
    auto v = x.at(leaf);
    for (int d = 0; d < x.dim(); ++d) out[d] += v[d] * leaf_mass[leaf];
  }
  return out;
}

}  // namespace bmolab
