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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bmolab/filtration.hpp"

namespace bmolab {

// A function on Ω with values in R^dim, stored leaf by leaf (row-major).
// Scalars are dim == 1; larger dims model finite-dimensional Hilbert values.
class RandomVariable {
 public:
  RandomVariable(TreePtr tree, int dim, std::vector<double> values);
  static RandomVariable constant(TreePtr tree, double value, int dim = 1);

  const FiltrationTree& tree() const noexcept { return *tree_; }
  const TreePtr& tree_ptr() const noexcept { return tree_; }
  int dim() const noexcept { return dim_; }
  std::size_t leaf_count() const noexcept { return values_.size() / dim_; }

  std::span<const double> at(std::size_t leaf) const {
    return {values_.data() + leaf * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<const double> values() const noexcept { return values_; }
  // Euclidean norm of the value on a leaf.
  double norm_at(std::size_t leaf) const;

 private:
  TreePtr tree_;
  int dim_;
  std::vector<double> values_;
};

// A process (g_n)_{0<=n<=N} with g_n constant on F_n atoms. Adaptedness is
// structural: level n stores one R^dim value per level-n atom.
class AdaptedProcess {
 public:
  AdaptedProcess(TreePtr tree, int dim, std::vector<std::vector<double>> levels);
  static AdaptedProcess zeros(TreePtr tree, int dim = 1);

  const FiltrationTree& tree() const noexcept { return *tree_; }
  const TreePtr& tree_ptr() const noexcept { return tree_; }
  int dim() const noexcept { return dim_; }
  int depth() const noexcept { return tree_->depth(); }

  std::span<const double> at(int level, std::size_t atom) const {
    return {levels_[level].data() + atom * dim_, static_cast<std::size_t>(dim_)};
  }
  double norm_at(int level, std::size_t atom) const;
  std::span<const double> level(int n) const { return levels_.at(n); }
  const std::vector<std::vector<double>>& levels() const noexcept {
    return levels_;
  }

  // g_n viewed as a random variable (lifted to the leaves).
  RandomVariable lift(int n) const;
  RandomVariable final_value() const { return lift(depth()); }

 private:
  TreePtr tree_;
  int dim_;
  std::vector<std::vector<double>> levels_;
};

// An adapted process with E(f_{n+1} | F_n) = f_n.
class Martingale {
 public:
  // Validates the martingale property: on every internal atom A,
  // value(A)·mass(A) equals Σ value(B)·mass(B) over its children to 1e-10.
  explicit Martingale(AdaptedProcess process);
  // For processes that are martingales by construction.
  static Martingale assume_valid(AdaptedProcess process) {
    return Martingale(std::move(process), Unchecked{});
  }

  const AdaptedProcess& process() const noexcept { return process_; }
  const FiltrationTree& tree() const noexcept { return process_.tree(); }
  const TreePtr& tree_ptr() const noexcept { return process_.tree_ptr(); }
  int dim() const noexcept { return process_.dim(); }
  int depth() const noexcept { return process_.depth(); }
  std::span<const double> at(int level, std::size_t atom) const {
    return process_.at(level, atom);
  }
  RandomVariable final_value() const { return process_.final_value(); }

 private:
  struct Unchecked {};
  Martingale(AdaptedProcess process, Unchecked) : process_(std::move(process)) {}
  AdaptedProcess process_;
};

// d_0 f = f_0 and d_k f = f_k - f_{k-1} on level-k atoms.
struct DifferenceSequence {
  AdaptedProcess increments;

  std::span<const double> at(int k, std::size_t atom) const {
    return increments.at(k, atom);
  }
};

// Scalar multipliers v_0, ..., v_N with v_k constant on F_{k-1} atoms
// (v_0 a single constant). Level k >= 1 stores one value per level-(k-1) atom.
class PredictableSequence {
 public:
  PredictableSequence(TreePtr tree, std::vector<std::vector<double>> values);
  static PredictableSequence constant(TreePtr tree, double value);

  const FiltrationTree& tree() const noexcept { return *tree_; }
  const TreePtr& tree_ptr() const noexcept { return tree_; }
  // v_k on the level-k atom `atom` (read off its parent for k >= 1).
  double multiplier(int k, std::size_t atom) const;
  // sup_k ||v_k||_inf.
  double bound() const;
  const std::vector<std::vector<double>>& values() const noexcept {
    return values_;
  }

 private:
  TreePtr tree_;
  std::vector<std::vector<double>> values_;
};

// ω_n: on each leaf, the mass of its level-n atom.
RandomVariable omega_weight(const TreePtr& tree, int n);

// E(X | F_n) as one R^dim value per level-n atom (row-major).
std::vector<double> conditional_expectation(const RandomVariable& x, int n);

// f_n = E(X | F_n) for every n.
Martingale martingale_from_final(const RandomVariable& x);

DifferenceSequence differences(const AdaptedProcess& g);
inline DifferenceSequence differences(const Martingale& f) {
  return differences(f.process());
}

// Leaf values drawn i.i.d. standard normal per coordinate.
Martingale random_martingale(const TreePtr& tree, std::uint64_t seed, int dim);

// ∫ X dP per coordinate.
std::vector<double> expectation(const RandomVariable& x);

double squared_norm(std::span<const double> v);

}  // namespace bmolab
