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

#include "bmolab/norms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "bmolab/config.hpp"

namespace bmolab {

namespace {

struct Best {
  double ratio = -1.0;
  int level = 0;
  std::vector<int> atoms;
};

// Largest c/m^{exponent} over single atoms; ties keep the earliest (n, atom).
Best best_atom(const FiltrationTree& tree,
               const std::vector<std::vector<double>>& integrals, double exponent) {
  Best best;
  for (int n = 0; n <= tree.depth(); ++n) {
    auto masses = tree.masses(n);
    for (std::size_t a = 0; a < masses.size(); ++a) {
      const double r = integrals[n][a] / std::pow(masses[a], exponent);
      if (r > best.ratio) {
        best.ratio = r;
        best.level = n;
        best.atoms = {static_cast<int>(a)};
      }
    }
  }
  return best;
}

// Largest Σc/(Σm)^{exponent} over nonempty unions of same-level atoms.
// Subsets are visited in increasing bitmask order (bit i = atom i).
Best best_subset(const FiltrationTree& tree,
                 const std::vector<std::vector<double>>& integrals, double exponent) {
  const std::uint64_t cap = enumeration_cap();
  std::uint64_t total = 0;
  for (int n = 0; n <= tree.depth(); ++n) {
    const std::size_t m = tree.atom_count(n);
    if (m >= 63 || (total += (std::uint64_t{1} << m) - 1) > cap) {
      throw SizeError("subset enumeration exceeds the cap of " + std::to_string(cap) +
                      " (level " + std::to_string(n) + " has " + std::to_string(m) +
                      " atoms); use atom-fast mode or raise BMO_LAB_MAX_ENUM");
    }
  }
  Best best;
  for (int n = 0; n <= tree.depth(); ++n) {
    auto masses = tree.masses(n);
    const std::size_t m = masses.size();
    const std::uint64_t count = std::uint64_t{1} << m;
    std::vector<double> sum_c(count, 0.0), sum_m(count, 0.0);
    for (std::uint64_t mask = 1; mask < count; ++mask) {
      const int low = std::countr_zero(mask);
      const std::uint64_t rest = mask & (mask - 1);
      sum_c[mask] = sum_c[rest] + integrals[n][low];
      sum_m[mask] = sum_m[rest] + masses[low];
      const double r = sum_c[mask] / std::pow(sum_m[mask], exponent);
      if (r > best.ratio) {
        best.ratio = r;
        best.level = n;
        best.atoms.clear();
        for (std::size_t i = 0; i < m; ++i) {
          if (mask >> i & 1U) best.atoms.push_back(static_cast<int>(i));
        }
      }
    }
  }
  return best;
}

// ||f - f_{τ-1}||²_{L²} / P(τ<∞)^{1+2α}.
double stopping_ratio_squared(const Martingale& f, const StoppingTime& tau,
                              double alpha) {
  const RandomVariable before = stopped_before(f, tau);
  const RandomVariable final = f.final_value();
  auto leaf_mass = f.tree().leaf_masses();
  double integral = 0.0;
  for (std::size_t leaf = 0; leaf < final.leaf_count(); ++leaf) {
    auto a = final.at(leaf);
    auto b = before.at(leaf);
    double s = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
    integral += s * leaf_mass[leaf];
  }
  return integral / std::pow(tau.probability_finite(), 1.0 + 2.0 * alpha);
}

NormResult omega_form(const Martingale& f, double alpha) {
  const FiltrationTree& tree = f.tree();
  const TreePtr& tree_ptr = f.tree_ptr();
  const RandomVariable final = f.final_value();
  double best = -1.0;
  AtomSetWitness witness;
  for (int n = 0; n <= tree.depth(); ++n) {
    // |f - f_{n-1}|² as a random variable.
    std::vector<double> sq(tree.leaf_count(), 0.0);
    for (std::size_t leaf = 0; leaf < sq.size(); ++leaf) {
      auto v = final.at(leaf);
      if (n == 0) {
        sq[leaf] = squared_norm(v);
        continue;
      }
      auto prev = f.at(n - 1, tree.ancestor_index(static_cast<int>(leaf), n - 1));
      double s = 0.0;
      for (std::size_t d = 0; d < v.size(); ++d) s += (v[d] - prev[d]) * (v[d] - prev[d]);
      sq[leaf] = s;
    }
    const RandomVariable oscillation(tree_ptr, 1, std::move(sq));
    const std::vector<double> cond = conditional_expectation(oscillation, n);
    const RandomVariable omega = omega_weight(tree_ptr, n);
    for (std::size_t leaf = 0; leaf < tree.leaf_count(); ++leaf) {
      const int atom = tree.ancestor_index(static_cast<int>(leaf), n);
      const double value =
          std::pow(omega.at(leaf)[0], -alpha) * std::sqrt(cond[atom]);
      if (value > best) {
        best = value;
        witness = {n, {atom}};
      }
    }
  }
  return {best, witness, std::string(mode_name(BmoMode::kOmegaForm))};
}

NormResult from_best(const Best& best, double p, std::string_view mode) {
  const double value = p == 2.0 ? std::sqrt(best.ratio) : std::pow(best.ratio, 1.0 / p);
  return {value, AtomSetWitness{best.level, best.atoms}, std::string(mode)};
}

}  // namespace

void require_alpha(double alpha, bool allow_one) {
  if (!(alpha >= 0.0) || (allow_one ? alpha > 1.0 : alpha >= 1.0)) {
    throw std::invalid_argument("alpha must lie in " +
                                std::string(allow_one ? "[0, 1]" : "[0, 1)"));
  }
}

std::string_view mode_name(BmoMode mode) {
  switch (mode) {
    case BmoMode::kSubsetBruteforce: return "subset-bruteforce";
    case BmoMode::kAtomFast: return "atom-fast";
    case BmoMode::kStoppingBruteforce: return "stopping-bruteforce";
    case BmoMode::kOmegaForm: return "omega-form";
  }
  return "unknown";
}

std::string_view mode_name(CarlesonMode mode) {
  switch (mode) {
    case CarlesonMode::kStoppingBruteforce: return "stopping-bruteforce";
    case CarlesonMode::kNodeFast: return "node-fast";
  }
  return "unknown";
}

std::optional<BmoMode> parse_bmo_mode(std::string_view name) {
  for (BmoMode m : {BmoMode::kSubsetBruteforce, BmoMode::kAtomFast,
                    BmoMode::kStoppingBruteforce, BmoMode::kOmegaForm}) {
    if (mode_name(m) == name) return m;
  }
  return std::nullopt;
}

std::optional<CarlesonMode> parse_carleson_mode(std::string_view name) {
  for (CarlesonMode m : {CarlesonMode::kStoppingBruteforce, CarlesonMode::kNodeFast}) {
    if (mode_name(m) == name) return m;
  }
  return std::nullopt;
}

double lp_norm(const RandomVariable& x, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("lp_norm needs p > 0");
  auto leaf_mass = x.tree().leaf_masses();
  double sum = 0.0;
  for (std::size_t leaf = 0; leaf < x.leaf_count(); ++leaf) {
    const double v = x.norm_at(leaf);
    if (v != 0.0) sum += std::pow(v, p) * leaf_mass[leaf];
  }
  return std::pow(sum, 1.0 / p);
}

double weak_lq_norm(const RandomVariable& x, double q) {
  if (!(q > 0.0)) throw std::invalid_argument("weak_lq_norm needs q > 0");
  auto leaf_mass = x.tree().leaf_masses();
  std::vector<std::pair<double, double>> points;
  points.reserve(x.leaf_count());
  for (std::size_t leaf = 0; leaf < x.leaf_count(); ++leaf) {
    points.emplace_back(x.norm_at(leaf), leaf_mass[leaf]);
  }
  std::sort(points.begin(), points.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  double best = 0.0;
  double tail = 0.0;
  for (std::size_t i = 0; i < points.size();) {
    const double v = points[i].first;
    if (v <= 0.0) break;
    while (i < points.size() && points[i].first == v) tail += points[i++].second;
    best = std::max(best, v * std::pow(tail, 1.0 / q));
  }
  return best;
}

double layer_cake(std::span<const double> magnitudes,
                  std::span<const double> weights, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("layer_cake needs p > 0");
  if (magnitudes.size() != weights.size()) {
    throw std::invalid_argument("layer_cake: magnitudes and weights differ in size");
  }
  std::vector<std::size_t> order(magnitudes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(magnitudes[a]) > std::abs(magnitudes[b]);
  });
  // Walk from the top value down, carrying μ(|g| >= v_j); the increment
  // v_j^p - v_{j-1}^p needs the next smaller distinct value.
  double total = 0.0;
  double tail = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    const double v = std::abs(magnitudes[order[i]]);
    if (v <= 0.0) break;
    while (i < order.size() && std::abs(magnitudes[order[i]]) == v) {
      tail += weights[order[i++]];
    }
    const double below = i < order.size() ? std::abs(magnitudes[order[i]]) : 0.0;
    total += (std::pow(v, p) - std::pow(below, p)) * tail;
  }
  return total;
}

double layer_cake(const RandomVariable& x, double p) {
  std::vector<double> magnitudes(x.leaf_count());
  for (std::size_t leaf = 0; leaf < magnitudes.size(); ++leaf) {
    magnitudes[leaf] = x.norm_at(leaf);
  }
  return layer_cake(magnitudes, x.tree().leaf_masses(), p);
}

double power_sum(std::span<const double> magnitudes,
                 std::span<const double> weights, double p) {
  if (magnitudes.size() != weights.size()) {
    throw std::invalid_argument("power_sum: magnitudes and weights differ in size");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < magnitudes.size(); ++i) {
    const double v = std::abs(magnitudes[i]);
    if (v != 0.0) total += std::pow(v, p) * weights[i];
  }
  return total;
}

std::vector<std::vector<double>> oscillation_integrals(const AdaptedProcess& g,
                                                       double p) {
  const FiltrationTree& tree = g.tree();
  const int depth = tree.depth();
  const int dim = g.dim();
  auto leaf_mass = tree.leaf_masses();
  std::vector<double> diff(dim);
  std::vector<std::vector<double>> out(depth + 1);
  for (int n = 0; n <= depth; ++n) {
    out[n].assign(tree.atom_count(n), 0.0);
    for (std::size_t a = 0; a < tree.atom_count(n); ++a) {
      auto [lb, le] = tree.leaf_range({n, static_cast<int>(a)});
      std::span<const double> prev;
      if (n > 0) prev = g.at(n - 1, tree.parent_index(n, static_cast<int>(a)));
      double sum = 0.0;
      for (int leaf = lb; leaf < le; ++leaf) {
        auto v = g.at(depth, leaf);
        for (int d = 0; d < dim; ++d) diff[d] = n > 0 ? v[d] - prev[d] : v[d];
        const double sq = squared_norm(diff);
        sum += (p == 2.0 ? sq : std::pow(std::sqrt(sq), p)) * leaf_mass[leaf];
      }
      out[n][a] = sum;
    }
  }
  return out;
}

NormResult bmo_alpha_norm(const Martingale& f, double alpha, BmoMode mode) {
  require_alpha(alpha);
  const double exponent = 1.0 + 2.0 * alpha;
  switch (mode) {
    case BmoMode::kAtomFast:
      return from_best(best_atom(f.tree(), oscillation_integrals(f.process()), exponent),
                       2.0, mode_name(mode));
    case BmoMode::kSubsetBruteforce:
      return from_best(best_subset(f.tree(), oscillation_integrals(f.process()), exponent),
                       2.0, mode_name(mode));
    case BmoMode::kOmegaForm:
      return omega_form(f, alpha);
    case BmoMode::kStoppingBruteforce: {
      double best = -1.0;
      std::optional<StoppingTime> witness;
      for_each_stopping_time(f.tree_ptr(), [&](const StoppingTime& tau) {
        if (tau.stops().empty()) return;  // P(τ<∞) = 0
        const double r = stopping_ratio_squared(f, tau, alpha);
        if (r > best) {
          best = r;
          witness = tau;
        }
      });
      return {std::sqrt(best), *witness, std::string(mode_name(mode))};
    }
  }
  throw std::invalid_argument("unknown BMO mode");
}

double bmo_ratio_at(const Martingale& f, double alpha, const Witness& witness) {
  require_alpha(alpha);
  if (const auto* tau = std::get_if<StoppingTime>(&witness)) {
    if (tau->stops().empty()) return 0.0;
    return std::sqrt(stopping_ratio_squared(f, *tau, alpha));
  }
  const auto& set = std::get<AtomSetWitness>(witness);
  const auto integrals = oscillation_integrals(f.process());
  double c = 0.0;
  double m = 0.0;
  for (int a : set.atoms) {
    c += integrals.at(set.level).at(a);
    m += f.tree().mass({set.level, a});
  }
  return std::sqrt(c / std::pow(m, 1.0 + 2.0 * alpha));
}

NormResult bmo_alpha_p_norm(const Martingale& f, double alpha, double p, BmoMode mode) {
  require_alpha(alpha);
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("bmo_alpha_p_norm needs 1 <= p < ∞");
  }
  const double exponent = 1.0 + p * alpha;
  const auto integrals = oscillation_integrals(f.process(), p);
  switch (mode) {
    case BmoMode::kAtomFast:
      return from_best(best_atom(f.tree(), integrals, exponent), p, mode_name(mode));
    case BmoMode::kSubsetBruteforce:
      return from_best(best_subset(f.tree(), integrals, exponent), p, mode_name(mode));
    default:
      throw std::invalid_argument("bmo_alpha_p_norm supports atom-fast and subset-bruteforce");
  }
}

NormResult process_bmo_alpha_norm(const AdaptedProcess& g, double alpha) {
  require_alpha(alpha);
  return from_best(best_atom(g.tree(), oscillation_integrals(g), 1.0 + 2.0 * alpha),
                   2.0, "atom-fast");
}

NormResult process_bmo_alpha_norm_conditional(const AdaptedProcess& g, double alpha) {
  return bmo_alpha_norm(martingale_from_final(g.final_value()), alpha);
}

}  // namespace bmolab
