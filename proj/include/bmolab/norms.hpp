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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bmolab/process.hpp"
#include "bmolab/stopping.hpp"

namespace bmolab {

// Algorithms for the BMO^α norm
//   ||f|| = sup_{n>=0} sup_{A ∈ F_n} P(A)^{-1/2-α} (∫_A |f - f_{n-1}|² dP)^{1/2}
// with f_{-1} = 0.
//
//  - kSubsetBruteforce: every nonempty union of level-n atoms, every n.
//  - kAtomFast: single atoms only. Exact, because for atoms A_i of one level
//    with c_i = ∫_{A_i}|f - f_{n-1}|², m_i = P(A_i) and M = max c_i/m_i^{1+2α},
//    Σ c_i <= M Σ m_i^{1+2α} <= M (Σ m_i)^{1+2α} since 1 + 2α >= 1.
//  - kStoppingBruteforce: sup over stopping times of
//    P(τ<∞)^{-1/2-α} ||f - f_{τ-1}||_{L²}.
//  - kOmegaForm: sup_n || ω_n^{-α} E(|f - f_{n-1}|² | F_n)^{1/2} ||_∞.
enum class BmoMode { kSubsetBruteforce, kAtomFast, kStoppingBruteforce, kOmegaForm };
enum class CarlesonMode { kStoppingBruteforce, kNodeFast };

std::string_view mode_name(BmoMode mode);
std::string_view mode_name(CarlesonMode mode);
std::optional<BmoMode> parse_bmo_mode(std::string_view name);
std::optional<CarlesonMode> parse_carleson_mode(std::string_view name);

// A level and a nonempty set of atoms at that level; the set's union is the
// maximizing A ∈ F_level.
struct AtomSetWitness {
  int level = 0;
  std::vector<int> atoms;

  friend bool operator==(const AtomSetWitness&, const AtomSetWitness&) = default;
};

using Witness = std::variant<AtomSetWitness, StoppingTime>;

struct NormResult {
  double value = 0.0;
  Witness witness;
  std::string mode;
};

// (Σ ||X||^p dP)^{1/p}; a quasi-norm for p < 1.
double lp_norm(const RandomVariable& x, double p);

// sup_λ λ P(||X|| > λ)^{1/q}, evaluated as max over the distinct values v of
// ||X|| of v · P(||X|| >= v)^{1/q}.
double weak_lq_norm(const RandomVariable& x, double q);

// p ∫_0^∞ λ^{p-1} μ(|g| > λ) dλ for a finitely supported pair
// (magnitudes[i], weights[i]), evaluated exactly as
// Σ_j (v_j^p - v_{j-1}^p) μ(|g| >= v_j) over the sorted distinct values.
double layer_cake(std::span<const double> magnitudes,
                  std::span<const double> weights, double p);
// Same with μ = P.
double layer_cake(const RandomVariable& x, double p);
// Σ |g_i|^p w_i, the direct form of the above.
double power_sum(std::span<const double> magnitudes,
                 std::span<const double> weights, double p);

// c[n][a] = ∫_{A} ||g_N - g_{n-1}||^p dP over the level-n atom A = (n, a),
// with g_{-1} = 0.
std::vector<std::vector<double>> oscillation_integrals(const AdaptedProcess& g,
                                                       double p = 2.0);

NormResult bmo_alpha_norm(const Martingale& f, double alpha,
                          BmoMode mode = BmoMode::kAtomFast);

// Re-evaluates the defining ratio (to the power 1/2) at a witness.
double bmo_ratio_at(const Martingale& f, double alpha, const Witness& witness);

// sup P(A)^{-1/p-α} (∫_A |f - f_{n-1}|^p)^{1/p}. Only kAtomFast and
// kSubsetBruteforce are accepted.
NormResult bmo_alpha_p_norm(const Martingale& f, double alpha, double p,
                            BmoMode mode = BmoMode::kAtomFast);

// The BMO^α functional with the process's own previous value in place of a
// conditional expectation: |g_N - g_{n-1}|, g_{-1} = 0.
NormResult process_bmo_alpha_norm(const AdaptedProcess& g, double alpha);

// BMO^α norm of the martingale generated by g_N (E(g_N | F_{n-1}) in place
// of g_{n-1}).
NormResult process_bmo_alpha_norm_conditional(const AdaptedProcess& g, double alpha);

void require_alpha(double alpha, bool allow_one = true);

}  // namespace bmolab
