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

#include "bmolab/carleson.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "bmolab/operators.hpp"

namespace bmolab {

namespace {

constexpr double kInequalitySlack = 1e-9;

void require_inequality_params(double p, double alpha) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("the Carleson inequality needs 1 < p < ∞");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("the Carleson inequality needs 0 < α < 1");
  }
}

// (|f_k(leaf)|, μ_k(leaf) P(leaf)) over Ω × {0..N}, in (k, leaf) order.
struct ProductSample {
  std::vector<double> magnitudes;
  std::vector<double> weights;
};

ProductSample sample_product(const AdaptedProcess& f, const CarlesonMeasure& mu) {
  const FiltrationTree& tree = f.tree();
  auto leaf_mass = tree.leaf_masses();
  ProductSample s;
  const std::size_t leaves = tree.leaf_count();
  s.magnitudes.reserve(leaves * (tree.depth() + 1));
  s.weights.reserve(leaves * (tree.depth() + 1));
  for (int k = 0; k <= tree.depth(); ++k) {
    auto density = mu.density(k);
    for (std::size_t a = 0; a < tree.atom_count(k); ++a) {
      const double v = f.norm_at(k, a);
      auto [lb, le] = tree.leaf_range({k, static_cast<int>(a)});
      for (int leaf = lb; leaf < le; ++leaf) {
        s.magnitudes.push_back(v);
        s.weights.push_back(density[leaf] * leaf_mass[leaf]);
      }
    }
  }
  return s;
}

// p ∫ λ^{p-1} P(X > λ)^{exponent} dλ for a nonnegative X on the leaves.
double tail_power_integral(const RandomVariable& x, double p, double exponent) {
  auto leaf_mass = x.tree().leaf_masses();
  std::vector<std::pair<double, double>> points;
  for (std::size_t leaf = 0; leaf < x.leaf_count(); ++leaf) {
    points.emplace_back(x.norm_at(leaf), leaf_mass[leaf]);
  }
  std::sort(points.begin(), points.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  double total = 0.0;
  double tail = 0.0;
  for (std::size_t i = 0; i < points.size();) {
    const double v = points[i].first;
    if (v <= 0.0) break;
    while (i < points.size() && points[i].first == v) tail += points[i++].second;
    const double below = i < points.size() ? points[i].first : 0.0;
    total += (std::pow(v, p) - std::pow(below, p)) * std::pow(tail, exponent);
  }
  return total;
}

}  // namespace

CarlesonMeasure::CarlesonMeasure(TreePtr tree, std::vector<std::vector<double>> densities)
    : tree_(std::move(tree)), densities_(std::move(densities)) {
  if (!tree_) throw std::invalid_argument("measure without a tree");
  if (densities_.size() != static_cast<std::size_t>(tree_->depth()) + 1) {
    throw std::invalid_argument("measure needs densities μ_0..μ_N");
  }
  for (std::size_t k = 0; k < densities_.size(); ++k) {
    if (densities_[k].size() != tree_->leaf_count()) {
      throw std::invalid_argument("density μ_" + std::to_string(k) +
                                  " needs one value per leaf");
    }
    for (double v : densities_[k]) {
      if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument("density μ_" + std::to_string(k) +
                                    " must be finite and nonnegative");
      }
    }
  }
}

CarlesonMeasure CarlesonMeasure::zero(TreePtr tree) {
  std::vector<std::vector<double>> densities(
      tree->depth() + 1, std::vector<double>(tree->leaf_count(), 0.0));
  return CarlesonMeasure(std::move(tree), std::move(densities));
}

double CarlesonMeasure::total_mass() const {
  auto leaf_mass = tree_->leaf_masses();
  double total = 0.0;
  for (const auto& density : densities_) {
    for (std::size_t leaf = 0; leaf < density.size(); ++leaf) {
      total += density[leaf] * leaf_mass[leaf];
    }
  }
  return total;
}

double tent_mass(const CarlesonMeasure& mu, const StoppingTime& tau) {
  require_same_tree(mu.tree(), tau.tree());
  auto leaf_mass = mu.tree().leaf_masses();
  double total = 0.0;
  for (int k = 0; k <= mu.tree().depth(); ++k) {
    auto density = mu.density(k);
    for (std::size_t leaf = 0; leaf < density.size(); ++leaf) {
      if (tau.in_tent(leaf, k)) total += density[leaf] * leaf_mass[leaf];
    }
  }
  return total;
}

double carleson_ratio_at(const CarlesonMeasure& mu, double alpha, const StoppingTime& tau) {
  if (tau.stops().empty()) return 0.0;
  return tent_mass(mu, tau) / std::pow(tau.probability_finite(), 1.0 + 2.0 * alpha);
}

NormResult carleson_alpha_norm(const CarlesonMeasure& mu, double alpha, CarlesonMode mode) {
  require_alpha(alpha, /*allow_one=*/false);
  const double exponent = 1.0 + 2.0 * alpha;
  const FiltrationTree& tree = mu.tree();
  if (mode == CarlesonMode::kStoppingBruteforce) {
    double best = -1.0;
    std::optional<StoppingTime> witness;
    for_each_stopping_time(mu.tree_ptr(), [&](const StoppingTime& tau) {
      if (tau.stops().empty()) return;
      const double r = carleson_ratio_at(mu, alpha, tau);
      if (r > best) {
        best = r;
        witness = tau;
      }
    });
    return {best, *witness, std::string(mode_name(mode))};
  }

  // suffix[leaf] = Σ_{k >= n} μ_k(leaf) P(leaf), built from k = N down.
  const int depth = tree.depth();
  auto leaf_mass = tree.leaf_masses();
  std::vector<double> suffix(tree.leaf_count(), 0.0);
  std::vector<std::vector<double>> node_mass(depth + 1);
  for (int n = depth; n >= 0; --n) {
    auto density = mu.density(n);
    for (std::size_t leaf = 0; leaf < suffix.size(); ++leaf) {
      suffix[leaf] += density[leaf] * leaf_mass[leaf];
    }
    node_mass[n].assign(tree.atom_count(n), 0.0);
    for (std::size_t a = 0; a < tree.atom_count(n); ++a) {
      auto [lb, le] = tree.leaf_range({n, static_cast<int>(a)});
      for (int leaf = lb; leaf < le; ++leaf) node_mass[n][a] += suffix[leaf];
    }
  }
  double best = -1.0;
  AtomRef best_node{0, 0};
  for (int n = 0; n <= depth; ++n) {
    auto masses = tree.masses(n);
    for (std::size_t a = 0; a < masses.size(); ++a) {
      const double r = node_mass[n][a] / std::pow(masses[a], exponent);
      if (r > best) {
        best = r;
        best_node = {n, static_cast<int>(a)};
      }
    }
  }
  return {best, StoppingTime(mu.tree_ptr(), {best_node}), std::string(mode_name(mode))};
}

CarlesonMeasure from_martingale(const Martingale& f) {
  const FiltrationTree& tree = f.tree();
  const DifferenceSequence d = differences(f);
  std::vector<std::vector<double>> densities;
  for (int k = 0; k <= tree.depth(); ++k) {
    std::vector<double> density(tree.leaf_count());
    for (std::size_t a = 0; a < tree.atom_count(k); ++a) {
      const double sq = squared_norm(d.at(k, a));
      auto [lb, le] = tree.leaf_range({k, static_cast<int>(a)});
      for (int leaf = lb; leaf < le; ++leaf) density[leaf] = sq;
    }
    densities.push_back(std::move(density));
  }
  return CarlesonMeasure(f.tree_ptr(), std::move(densities));
}

InequalityCheck carleson_inequality_check(const AdaptedProcess& f,
                                          const CarlesonMeasure& mu, double p,
                                          double alpha) {
  require_inequality_params(p, alpha);
  if (f.dim() != 1) throw std::invalid_argument("the Carleson inequality check takes a scalar process");
  require_same_tree(f.tree(), mu.tree());

  InequalityCheck out;
  const ProductSample sample = sample_product(f, mu);
  out.lhs = power_sum(sample.magnitudes, sample.weights, p);
  out.lhs_layer_cake = layer_cake(sample.magnitudes, sample.weights, p);
  out.carleson_norm = carleson_alpha_norm(mu, alpha).value;

  const RandomVariable mf = maximal(f).final;
  const double q = 1.0 / (2.0 * alpha);
  out.maximal_strong = lp_norm(mf, q);
  out.maximal_weak = weak_lq_norm(mf, q);
  out.maximal_power = power_sum(mf.values(), mf.tree().leaf_masses(), p - 1.0);
  out.tent_bound = out.carleson_norm * tail_power_integral(mf, p, 1.0 + 2.0 * alpha);
  const double factor = p / (p - 1.0) * out.carleson_norm * out.maximal_power;
  out.rhs_weak = factor * out.maximal_weak;
  out.rhs = factor * out.maximal_strong;
  out.holds = out.lhs <= out.rhs + kInequalitySlack;
  return out;
}

ConverseResult converse_extraction(const CarlesonMeasure& mu, double alpha,
                                   double c_p, double p) {
  require_inequality_params(p, alpha);
  if (!(c_p >= 0.0)) throw std::invalid_argument("C_p must be nonnegative");
  const double exponent = 1.0 + 2.0 * alpha;
  const double q = 1.0 / (2.0 * alpha);
  ConverseResult out;
  double best = -1.0;
  for_each_stopping_time(mu.tree_ptr(), [&](const StoppingTime& tau) {
    ++out.stopping_times;
    const AdaptedProcess f = indicator_process(tau);
    const ProductSample sample = sample_product(f, mu);
    const double lhs = power_sum(sample.magnitudes, sample.weights, p);
    const double tent = tent_mass(mu, tau);
    if (lhs != tent) out.tent_identity_exact = false;

    const RandomVariable mf = maximal(f).final;
    for (std::size_t leaf = 0; leaf < mf.leaf_count(); ++leaf) {
      const double expected = tau.at_leaf(leaf) != StoppingTime::kNever ? 1.0 : 0.0;
      if (mf.values()[leaf] != expected) out.maximal_identity_exact = false;
    }

    const double prob = tau.probability_finite();
    const double rhs_norms =
        c_p * lp_norm(mf, q) * power_sum(mf.values(), mf.tree().leaf_masses(), p - 1.0);
    const double rhs_prob = c_p * std::pow(prob, exponent);
    const double scale = std::max({std::abs(rhs_norms), std::abs(rhs_prob), 1e-300});
    out.rhs_identity_residual =
        std::max(out.rhs_identity_residual, std::abs(rhs_norms - rhs_prob) / scale);

    if (tau.stops().empty()) return;
    const double ratio = tent / std::pow(prob, exponent);
    if (ratio > best) {
      best = ratio;
      out.witness = tau;
    }
  });
  out.max_ratio = std::max(best, 0.0);
  out.norm_bound_satisfied = out.max_ratio <= c_p + kInequalitySlack;
  out.fast_norm = carleson_alpha_norm(mu, alpha).value;
  const double scale = std::max(std::abs(out.fast_norm), 1e-300);
  out.agrees_with_fast = std::abs(out.max_ratio - out.fast_norm) <= 1e-10 * scale ||
                         (out.max_ratio == 0.0 && out.fast_norm == 0.0);
  return out;
}

}  // namespace bmolab
