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

#include <doctest.h>

#include <cmath>

#include "bmolab/config.hpp"
#include "bmolab/norms.hpp"
#include "bmolab/operators.hpp"
#include "bmolab/random.hpp"
#include "support.hpp"

using namespace bmolab;
using support::rel_close;
using support::scalar_rv;

namespace {

constexpr BmoMode kAllModes[] = {BmoMode::kSubsetBruteforce, BmoMode::kAtomFast,
                                 BmoMode::kStoppingBruteforce, BmoMode::kOmegaForm};

RandomVariable indicator_quarter() {
  return scalar_rv(build_dyadic(2), {1.0, 0.0, 0.0, 0.0});
}

// Small random trees whose stopping times can all be listed.
std::vector<TreePtr> small_trees(int count) {
  std::vector<TreePtr> out;
  for (std::uint64_t seed = 1; static_cast<int>(out.size()) < count; ++seed) {
    auto t = build_random(seed, 1 + static_cast<int>(seed % 3), 3);
    if (count_stopping_times(*t) <= 2000) out.push_back(t);
  }
  return out;
}

}  // namespace

TEST_CASE("lp norms") {
  auto t2 = build_dyadic(2);
  for (double p : {0.5, 1.0, 2.0, 7.0}) {
    CHECK(lp_norm(RandomVariable::constant(t2, -3.0), p) == doctest::Approx(3.0));
    CHECK(lp_norm(support::r1().final_value(), p) == 1.0);
  }
  CHECK(lp_norm(indicator_quarter(), 2.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(lp_norm(indicator_quarter(), 0.0), std::invalid_argument);

  const RandomVariable v(build_dyadic(1), 2, {3.0, 4.0, 0.0, 0.0});
  CHECK(lp_norm(v, 1.0) == doctest::Approx(2.5));
}

TEST_CASE("weak lq norms") {
  CHECK(weak_lq_norm(indicator_quarter(), 2.0) == doctest::Approx(0.5));
  CHECK(weak_lq_norm(RandomVariable::constant(build_dyadic(2), 0.0), 3.0) == 0.0);
  CHECK_THROWS_AS(weak_lq_norm(indicator_quarter(), -1.0), std::invalid_argument);

  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto t = build_random(seed, 4, 3);
    const RandomVariable x = random_martingale(t, seed, 1).final_value();
    for (double q : {0.5, 1.0, 1.5, 2.0, 5.0}) {
      CHECK(weak_lq_norm(x, q) <= lp_norm(x, q) * (1.0 + 1e-12));
    }
    // sup over λ of λ P(|X| > λ)^{1/q} by scanning just below each value.
    const double q = 2.0;
    double oracle = 0.0;
    for (std::size_t i = 0; i < x.leaf_count(); ++i) {
      const double v = std::abs(x.values()[i]);
      double tail = 0.0;
      for (std::size_t j = 0; j < x.leaf_count(); ++j) {
        if (std::abs(x.values()[j]) >= v) tail += t->leaf_masses()[j];
      }
      oracle = std::max(oracle, v * std::pow(tail, 1.0 / q));
    }
    CHECK(rel_close(weak_lq_norm(x, q), oracle, 1e-12));
  }
}

TEST_CASE("layer cake equals the direct sum") {
  CHECK(layer_cake(RandomVariable::constant(build_dyadic(2), 0.0), 2.0) == 0.0);
  CHECK(layer_cake(indicator_quarter(), 2.0) == doctest::Approx(0.25));
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto t = build_random(seed, 5, 3);
    const RandomVariable x = random_martingale(t, seed, 2).final_value();
    for (double p : {0.5, 1.0, 1.5, 2.0, 3.0}) {
      double direct = 0.0;
      for (std::size_t leaf = 0; leaf < x.leaf_count(); ++leaf) {
        direct += std::pow(x.norm_at(leaf), p) * t->leaf_masses()[leaf];
      }
      CHECK(rel_close(layer_cake(x, p), direct, 1e-10));
    }
  }
}

TEST_CASE("mode names round trip") {
  for (BmoMode m : kAllModes) CHECK(parse_bmo_mode(mode_name(m)) == m);
  for (CarlesonMode m : {CarlesonMode::kNodeFast, CarlesonMode::kStoppingBruteforce}) {
    CHECK(parse_carleson_mode(mode_name(m)) == m);
  }
  CHECK_FALSE(parse_bmo_mode("fast").has_value());
  CHECK(mode_name(BmoMode::kOmegaForm) == "omega-form");
}

TEST_CASE("bmo norm examples in every mode") {
  const Martingale zero = martingale_from_final(RandomVariable::constant(build_dyadic(2), 0.0));
  const Martingale r1 = support::r1();
  const Martingale d2f = support::d2f();
  const Martingale c = martingale_from_final(RandomVariable::constant(build_dyadic(2), -2.5));
  for (BmoMode mode : kAllModes) {
    CAPTURE(mode_name(mode));
    for (double alpha : {0.0, 0.25, 0.5, 1.0}) {
      CHECK(bmo_alpha_norm(zero, alpha, mode).value == 0.0);
      CHECK(rel_close(bmo_alpha_norm(r1, alpha, mode).value, std::pow(2.0, alpha), 1e-12));
      CHECK(rel_close(bmo_alpha_norm(c, alpha, mode).value, 2.5, 1e-12));
    }
    CHECK(bmo_alpha_norm(r1, 0.5, mode).value == doctest::Approx(1.41421356).epsilon(1e-8));
    CHECK(rel_close(bmo_alpha_norm(d2f, 0.25, mode).value, std::pow(2.0, 0.75), 1e-12));
    CHECK(bmo_alpha_norm(d2f, 0.25, mode).value ==
          doctest::Approx(1.68179283).epsilon(1e-8));
  }
  const NormResult d = bmo_alpha_norm(d2f, 0.25, BmoMode::kAtomFast);
  CHECK(std::get<AtomSetWitness>(d.witness) == AtomSetWitness{1, {0}});
  CHECK(d.mode == "atom-fast");
}

TEST_CASE("ties resolve to the smallest level") {
  // For R1 at α = 0 the root and each level-1 atom all give ratio 1.
  const NormResult r = bmo_alpha_norm(support::r1(), 0.0, BmoMode::kAtomFast);
  CHECK(std::get<AtomSetWitness>(r.witness) == AtomSetWitness{0, {0}});
  const NormResult s = bmo_alpha_norm(support::r1(), 0.0, BmoMode::kSubsetBruteforce);
  CHECK(std::get<AtomSetWitness>(s.witness) == AtomSetWitness{0, {0}});
}

TEST_CASE("every mode agrees with the subset oracle") {
  int dim = 1;
  for (const auto& tree : small_trees(40)) {
    const Martingale f = random_martingale(tree, tree->leaf_count() * 31 + dim, dim);
    dim = dim == 1 ? 3 : 1;
    for (double alpha : {0.0, 0.25, 0.5, 0.9, 1.0}) {
      const double oracle = support::oracle_bmo(f, alpha);
      for (BmoMode mode : kAllModes) {
        CAPTURE(mode_name(mode));
        const NormResult r = bmo_alpha_norm(f, alpha, mode);
        CHECK(rel_close(r.value, oracle, 1e-10));
        CHECK(rel_close(bmo_ratio_at(f, alpha, r.witness), r.value, 1e-12));
      }
    }
  }
}

TEST_CASE("the exponent-p variant") {
  const Martingale zero = martingale_from_final(RandomVariable::constant(build_dyadic(1), 0.0));
  CHECK(bmo_alpha_p_norm(zero, 0.3, 1.5).value == 0.0);
  CHECK(bmo_alpha_p_norm(support::r1(), 0.0, 1.0).value == doctest::Approx(1.0));
  CHECK(bmo_alpha_p_norm(support::r1(), 0.0, 2.0).value == doctest::Approx(1.0));
  CHECK_THROWS_AS(bmo_alpha_p_norm(zero, 0.3, 0.5), std::invalid_argument);

  for (const auto& tree : small_trees(25)) {
    const Martingale f = random_martingale(tree, tree->leaf_count() + 5, 1);
    for (double alpha : {0.0, 0.25, 0.9}) {
      CHECK(bmo_alpha_p_norm(f, alpha, 2.0).value == bmo_alpha_norm(f, alpha).value);
      double previous = 0.0;
      for (double p : {1.0, 1.5, 2.0, 3.0, 6.0}) {
        const double fast = bmo_alpha_p_norm(f, alpha, p, BmoMode::kAtomFast).value;
        const double subset = bmo_alpha_p_norm(f, alpha, p, BmoMode::kSubsetBruteforce).value;
        CHECK(rel_close(subset, support::oracle_bmo(f, alpha, p), 1e-10));
        // The single-atom reduction holds for every p >= 1 since 1 + pα >= 1.
        CHECK(rel_close(fast, subset, 1e-10));
        CHECK(fast >= previous * (1.0 - 1e-12));
        previous = fast;
      }
    }
  }
}

TEST_CASE("bmo norm is nondecreasing in alpha") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Martingale f = random_martingale(build_random(seed, 5, 3), seed, 2);
    double previous = 0.0;
    for (double alpha = 0.0; alpha <= 1.0; alpha += 0.125) {
      const double v = bmo_alpha_norm(f, alpha).value;
      CHECK(v >= previous);
      previous = v;
    }
  }
}

TEST_CASE("the norm dominates the L2 norm") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Martingale f = random_martingale(build_random(seed, 4, 3), seed, 1);
    CHECK(bmo_alpha_norm(f, 0.0).value >= lp_norm(f.final_value(), 2.0) * (1.0 - 1e-12));
  }
}

TEST_CASE("alpha range and size caps") {
  const Martingale r1 = support::r1();
  CHECK_THROWS_AS(bmo_alpha_norm(r1, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(bmo_alpha_norm(r1, 1.5), std::invalid_argument);
  CHECK_NOTHROW(bmo_alpha_norm(r1, 1.0));

  const Martingale big = random_martingale(build_dyadic(5), 1, 1);
  CHECK_THROWS_AS(bmo_alpha_norm(big, 0.5, BmoMode::kSubsetBruteforce), SizeError);
  CHECK_THROWS_AS(bmo_alpha_norm(big, 0.5, BmoMode::kStoppingBruteforce), SizeError);
  CHECK_NOTHROW(bmo_alpha_norm(big, 0.5, BmoMode::kAtomFast));
}

TEST_CASE("process bmo norm") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Martingale f = random_martingale(build_random(seed, 4, 3), seed, 1);
    for (double alpha : {0.0, 0.5, 1.0}) {
      const double expected = bmo_alpha_norm(f, alpha).value;
      CHECK(process_bmo_alpha_norm(f.process(), alpha).value == expected);
      CHECK(rel_close(process_bmo_alpha_norm_conditional(f.process(), alpha).value, expected,
                      1e-12));
    }
  }

  auto t2 = build_dyadic(2);
  const AdaptedProcess ones(t2, 1, {{1.0}, {1.0, 1.0}, {1.0, 1.0, 1.0, 1.0}});
  CHECK(process_bmo_alpha_norm(ones, 0.7).value == 1.0);

  const AdaptedProcess s = square_function(support::r1());
  for (double alpha : {0.0, 0.25, 0.5, 1.0}) {
    CHECK(rel_close(process_bmo_alpha_norm(s, alpha).value, std::pow(2.0, alpha), 1e-12));
  }
}
