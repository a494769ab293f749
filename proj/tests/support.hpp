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

// Shared fixtures and slow reference implementations for the unit tests.
// The oracles here work directly from leaf values and leaf masses and do
// not call the library's norm, enumeration or conditional-expectation code.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "bmolab/carleson.hpp"
#include "bmolab/filtration.hpp"
#include "bmolab/process.hpp"
#include "bmolab/stopping.hpp"

namespace support {

using namespace bmolab;

inline constexpr int kInf = StoppingTime::kNever;

inline bool rel_close(double a, double b, double tol) {
  const double scale = std::max({std::abs(a), std::abs(b), 1.0});
  return std::abs(a - b) <= tol * scale;
}

inline RandomVariable scalar_rv(TreePtr tree, std::vector<double> values) {
  return RandomVariable(std::move(tree), 1, std::move(values));
}

// Dyadic depth 1 with final value (+1, -1).
inline Martingale r1() { return martingale_from_final(scalar_rv(build_dyadic(1), {1.0, -1.0})); }

// Dyadic depth 2 with final value (2, 0, -1, -1).
inline Martingale d2f() {
  return martingale_from_final(scalar_rv(build_dyadic(2), {2.0, 0.0, -1.0, -1.0}));
}

// Level-n ancestor of every leaf, found by walking parents upward.
inline std::vector<int> ancestors_at(const FiltrationTree& tree, int n) {
  std::vector<int> out(tree.leaf_count());
  for (std::size_t leaf = 0; leaf < out.size(); ++leaf) {
    int index = static_cast<int>(leaf);
    for (int level = tree.depth(); level > n; --level) index = tree.parent_index(level, index);
    out[leaf] = index;
  }
  return out;
}

// E(X | F_n) evaluated on every leaf, coordinate-major within a leaf.
inline std::vector<double> leafwise_conditional(const RandomVariable& x, int n) {
  const FiltrationTree& tree = x.tree();
  const int d = x.dim();
  const std::vector<int> anc = ancestors_at(tree, n);
  const auto mass = tree.leaf_masses();
  std::vector<double> out(x.values().size(), 0.0);
  for (std::size_t i = 0; i < anc.size(); ++i) {
    double total = 0.0;
    std::vector<double> acc(d, 0.0);
    for (std::size_t j = 0; j < anc.size(); ++j) {
      if (anc[j] != anc[i]) continue;
      total += mass[j];
      for (int c = 0; c < d; ++c) acc[c] += x.at(j)[c] * mass[j];
    }
    for (int c = 0; c < d; ++c) out[i * d + c] = acc[c] / total;
  }
  return out;
}

// Every map leaf -> {0..N, ∞} for which {τ <= n} is a union of level-n atoms,
// found by trying all (N+2)^leaves assignments.
inline std::vector<std::vector<int>> oracle_stopping_times(const FiltrationTree& tree) {
  const int N = tree.depth();
  const std::size_t leaves = tree.leaf_count();
  std::vector<std::vector<int>> anc(N + 1);
  for (int n = 0; n <= N; ++n) anc[n] = ancestors_at(tree, n);
  std::vector<std::vector<int>> out;
  std::vector<int> digits(leaves, 0);
  for (;;) {
    std::vector<int> times(leaves);
    for (std::size_t i = 0; i < leaves; ++i) times[i] = digits[i] == N + 1 ? kInf : digits[i];
    bool adapted = true;
    for (int n = 0; n <= N && adapted; ++n) {
      for (std::size_t i = 0; i < leaves && adapted; ++i) {
        for (std::size_t j = i + 1; j < leaves && adapted; ++j) {
          if (anc[n][i] == anc[n][j] && (times[i] <= n) != (times[j] <= n)) adapted = false;
        }
      }
    }
    if (adapted) out.push_back(times);
    std::size_t pos = 0;
    while (pos < leaves && digits[pos] == N + 1) digits[pos++] = 0;
    if (pos == leaves) break;
    ++digits[pos];
  }
  return out;
}

// sup over n and nonempty unions A of level-n atoms of
// P(A)^{-1/p-α} (∫_A |f_N - f_{n-1}|^p)^{1/p}, from leaf values only.
inline double oracle_bmo(const Martingale& f, double alpha, double p = 2.0) {
  const FiltrationTree& tree = f.tree();
  const RandomVariable x = f.final_value();
  const int d = x.dim();
  const auto mass = tree.leaf_masses();
  double best = 0.0;
  for (int n = 0; n <= tree.depth(); ++n) {
    std::vector<double> prev(x.values().size(), 0.0);
    if (n > 0) prev = leafwise_conditional(x, n - 1);
    const std::vector<int> anc = ancestors_at(tree, n);
    const std::size_t atoms = tree.atom_count(n);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << atoms); ++mask) {
      double pa = 0.0, integral = 0.0;
      for (std::size_t leaf = 0; leaf < anc.size(); ++leaf) {
        if (!((mask >> anc[leaf]) & 1)) continue;
        pa += mass[leaf];
        double sq = 0.0;
        for (int c = 0; c < d; ++c) {
          const double diff = x.at(leaf)[c] - prev[leaf * d + c];
          sq += diff * diff;
        }
        integral += std::pow(std::sqrt(sq), p) * mass[leaf];
      }
      best = std::max(best, std::pow(pa, -1.0 / p - alpha) * std::pow(integral, 1.0 / p));
    }
  }
  return best;
}

// sup over all adapted leaf-time maps of μ(τ̂) / P(τ<∞)^{1+2α}.
inline double oracle_carleson(const CarlesonMeasure& mu, double alpha) {
  const FiltrationTree& tree = mu.tree();
  const auto mass = tree.leaf_masses();
  double best = 0.0;
  for (const auto& times : oracle_stopping_times(tree)) {
    double tent = 0.0, pfin = 0.0;
    for (std::size_t leaf = 0; leaf < times.size(); ++leaf) {
      if (times[leaf] == kInf) continue;
      pfin += mass[leaf];
      for (int k = times[leaf]; k <= tree.depth(); ++k) tent += mu.density(k)[leaf] * mass[leaf];
    }
    if (pfin > 0.0) best = std::max(best, tent / std::pow(pfin, 1.0 + 2.0 * alpha));
  }
  return best;
}

}  // namespace support
