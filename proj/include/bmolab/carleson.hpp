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
#include <optional>
#include <span>
#include <vector>

#include "bmolab/norms.hpp"
#include "bmolab/process.hpp"
#include "bmolab/stopping.hpp"

namespace bmolab {

// dμ = μ_k dP ⊗ dm on Ω × {0, ..., N}, dm the counting measure. Each density
// μ_k is a nonnegative function on the leaves; no adaptedness is imposed.
class CarlesonMeasure {
 public:
  CarlesonMeasure(TreePtr tree, std::vector<std::vector<double>> densities);
  static CarlesonMeasure zero(TreePtr tree);

  const FiltrationTree& tree() const noexcept { return *tree_; }
  const TreePtr& tree_ptr() const noexcept { return tree_; }
  std::span<const double> density(int k) const { return densities_.at(k); }
  const std::vector<std::vector<double>>& densities() const noexcept {
    return densities_;
  }
  // μ(Ω × {0..N}).
  double total_mass() const;

 private:
  TreePtr tree_;
  std::vector<std::vector<double>> densities_;
};

// μ(τ̂) = Σ_k Σ_leaves [τ(leaf) <= k] μ_k(leaf) P(leaf), summed in (k, leaf)
// order.
double tent_mass(const CarlesonMeasure& mu, const StoppingTime& tau);

// μ(τ̂) / P(τ<∞)^{1+2α}; 0 for τ ≡ ∞.
double carleson_ratio_at(const CarlesonMeasure& mu, double alpha, const StoppingTime& tau);

// ‖|μ|‖_α = sup_τ μ(τ̂) / P(τ<∞)^{1+2α}, α ∈ [0, 1).
// kNodeFast scans single nodes v with c_v = Σ_{k >= level(v)} ∫_v μ_k dP;
// the sup over antichains reduces to nodes by the same mediant bound as the
// BMO atom reduction. The witness is always a StoppingTime.
NormResult carleson_alpha_norm(const CarlesonMeasure& mu, double alpha,
                               CarlesonMode mode = CarlesonMode::kNodeFast);

// μ_k = |d_k f|² lifted to the leaves.
CarlesonMeasure from_martingale(const Martingale& f);

struct InequalityCheck {
  double lhs = 0.0;             // Σ_k ∫ |f_k|^p μ_k dP, direct sum
  double lhs_layer_cake = 0.0;  // same quantity via the layer-cake formula
  double carleson_norm = 0.0;   // ‖|μ|‖_α
  double maximal_strong = 0.0;  // ‖Mf‖_{L^{1/(2α)}}
  double maximal_weak = 0.0;    // ‖Mf‖_{L^{1/(2α),∞}}
  double maximal_power = 0.0;   // ‖Mf‖_{L^{p-1}}^{p-1}
  // ‖|μ|‖_α p ∫ λ^{p-1} P(Mf > λ)^{1+2α} dλ, the first bound of the chain.
  double tent_bound = 0.0;
  // (p/(p-1)) ‖|μ|‖_α ‖Mf‖_{weak} ‖Mf‖_{p-1}^{p-1}.
  double rhs_weak = 0.0;
  // (p/(p-1)) ‖|μ|‖_α ‖Mf‖_{1/(2α)} ‖Mf‖_{p-1}^{p-1}.
  double rhs = 0.0;
  bool holds = false;  // lhs <= rhs + 1e-9
};

// The Carleson inequality for a scalar adapted f, 1 < p < ∞, 0 < α < 1.
InequalityCheck carleson_inequality_check(const AdaptedProcess& f,
                                          const CarlesonMeasure& mu, double p,
                                          double alpha);

struct ConverseResult {
  bool norm_bound_satisfied = false;  // every ratio <= C_p + 1e-9
  double max_ratio = 0.0;
  std::optional<StoppingTime> witness;
  std::size_t stopping_times = 0;
  // lhs(χ_{τ<=n}) == μ(τ̂) bit-for-bit on every τ.
  bool tent_identity_exact = true;
  // M(χ_{τ<=n}) == χ_{τ<∞} on every τ.
  bool maximal_identity_exact = true;
  // max over τ of |C_p ‖Mf‖_{1/(2α)} ‖Mf‖_{p-1}^{p-1} - C_p P(τ<∞)^{1+2α}|,
  // relative to the larger side.
  double rhs_identity_residual = 0.0;
  double fast_norm = 0.0;
  bool agrees_with_fast = false;  // max_ratio vs node-fast, 1e-10 relative
};

// Plugs every indicator process f_n = χ_{τ<=n} into the inequality with
// constant C_p: ‖|μ|‖_α <= C_p exactly when every tent ratio is <= C_p.
ConverseResult converse_extraction(const CarlesonMeasure& mu, double alpha,
                                   double c_p, double p);

}  // namespace bmolab
