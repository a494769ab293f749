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

#include "bmolab/norms.hpp"
#include "bmolab/operators.hpp"
#include "bmolab/random.hpp"
#include "support.hpp"

using namespace bmolab;
using support::rel_close;

namespace {

PredictableSequence random_predictable(const TreePtr& tree, std::uint64_t seed, double bound,
                                       bool unimodular) {
  Rng rng(seed);
  std::vector<std::vector<double>> values(tree->depth() + 1);
  values[0] = {unimodular ? (rng.uniform() < 0.5 ? -bound : bound)
                          : bound * (2.0 * rng.uniform() - 1.0)};
  for (int k = 1; k <= tree->depth(); ++k) {
    values[k].resize(tree->atom_count(k - 1));
    for (double& v : values[k]) {
      v = unimodular ? (rng.uniform() < 0.5 ? -bound : bound) : bound * (2.0 * rng.uniform() - 1.0);
    }
  }
  return PredictableSequence(tree, std::move(values));
}

}  // namespace

TEST_CASE("transform examples") {
  const Martingale f = random_martingale(build_random(4, 4, 3), 4, 1);
  const Martingale same = transform(f, PredictableSequence::constant(f.tree_ptr(), 1.0));
  for (int n = 0; n <= f.depth(); ++n) {
    for (std::size_t i = 0; i < f.process().level(n).size(); ++i) {
      CHECK(std::abs(same.process().level(n)[i] - f.process().level(n)[i]) <= 1e-12);
    }
  }
  const Martingale none = transform(f, PredictableSequence::constant(f.tree_ptr(), 0.0));
  for (const auto& level : none.process().levels()) {
    for (double v : level) CHECK(v == 0.0);
  }

  const Martingale r1 = support::r1();
  const Martingale flipped = transform(r1, PredictableSequence(r1.tree_ptr(), {{1.0}, {-1.0}}));
  CHECK(flipped.at(1, 0)[0] == -1.0);
  CHECK(flipped.at(1, 1)[0] == 1.0);
  for (double alpha : {0.0, 0.5, 1.0}) {
    CHECK(bmo_alpha_norm(flipped, alpha).value == bmo_alpha_norm(r1, alpha).value);
  }

  CHECK_THROWS_AS(transform(r1, PredictableSequence::constant(build_dyadic(2), 1.0)),
                  std::invalid_argument);
}

TEST_CASE("transform multiplies each increment") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto tree = build_random(seed, 4, 3);
    const Martingale f = random_martingale(tree, seed, 2);
    const PredictableSequence v = random_predictable(tree, seed + 9, 1.5, false);
    const Martingale tf = transform(f, v);
    const DifferenceSequence df = differences(f);
    const DifferenceSequence dt = differences(tf);
    for (int k = 0; k <= f.depth(); ++k) {
      for (std::size_t a = 0; a < tree->atom_count(k); ++a) {
        for (int c = 0; c < 2; ++c) {
          CHECK(std::abs(dt.at(k, a)[c] - v.multiplier(k, a) * df.at(k, a)[c]) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("transform bound, with equality for constant modulus") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto tree = build_random(seed, 5, 3);
    const Martingale f = random_martingale(tree, seed, 1);
    for (double alpha : {0.0, 0.25, 0.5, 0.9}) {
      const double base = bmo_alpha_norm(f, alpha).value;
      const PredictableSequence v = random_predictable(tree, seed * 3, 2.0, false);
      CHECK(bmo_alpha_norm(transform(f, v), alpha).value <= v.bound() * base + 1e-9);
      const PredictableSequence u = random_predictable(tree, seed * 5, 0.75, true);
      CHECK(rel_close(bmo_alpha_norm(transform(f, u), alpha).value, 0.75 * base, 1e-9));
    }
  }
}

TEST_CASE("l2 lift examples") {
  const Martingale zero = martingale_from_final(RandomVariable::constant(build_dyadic(2), 0.0));
  const Martingale uz = l2_lift(zero);
  CHECK(uz.dim() == 3);
  const RandomVariable uzx = uz.final_value();
  for (double v : uzx.values()) CHECK(v == 0.0);

  const Martingale u = l2_lift(support::r1());
  REQUIRE(u.dim() == 2);
  const RandomVariable x = u.final_value();
  CHECK(x.at(0)[0] == 0.0);
  CHECK(x.at(0)[1] == 1.0);
  CHECK(x.at(1)[0] == 0.0);
  CHECK(x.at(1)[1] == -1.0);
  CHECK(x.norm_at(0) == 1.0);
  CHECK(x.norm_at(1) == 1.0);

  CHECK_THROWS_AS(l2_lift(random_martingale(build_dyadic(1), 1, 2)), std::invalid_argument);
}

TEST_CASE("l2 lift: coordinates, partial sums and isometry") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto tree = build_random(seed, 5, 3);
    const Martingale f = random_martingale(tree, seed, 1);
    const Martingale u = l2_lift(f);
    const DifferenceSequence df = differences(f);
    const DifferenceSequence du = differences(u);
    const AdaptedProcess s = square_function(f);
    const int N = f.depth();
    for (int j = 0; j <= N; ++j) {
      for (std::size_t a = 0; a < tree->atom_count(j); ++a) {
        for (int k = 0; k <= N; ++k) {
          CHECK(du.at(j, a)[k] == (j == k ? df.at(j, a)[0] : 0.0));
        }
        CHECK(rel_close(u.process().norm_at(j, a), s.at(j, a)[0], 1e-12));
      }
    }
    for (double alpha : {0.0, 0.25, 0.5, 0.9, 1.0}) {
      CHECK(rel_close(bmo_alpha_norm(u, alpha).value, bmo_alpha_norm(f, alpha).value, 1e-9));
    }
  }
}

TEST_CASE("square function examples and properties") {
  const AdaptedProcess zero =
      square_function(martingale_from_final(RandomVariable::constant(build_dyadic(2), 0.0)));
  for (const auto& level : zero.levels()) {
    for (double v : level) CHECK(v == 0.0);
  }
  const AdaptedProcess s1 = square_function(support::r1());
  CHECK(s1.levels()[0] == std::vector<double>{0.0});
  CHECK(s1.levels()[1] == std::vector<double>{1.0, 1.0});

  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto tree = build_random(seed, 5, 3);
    const Martingale f = random_martingale(tree, seed, 1);
    const AdaptedProcess s = square_function(f);
    CHECK(rel_close(lp_norm(s.final_value(), 2.0), lp_norm(f.final_value(), 2.0), 1e-12));
    for (int n = 1; n <= f.depth(); ++n) {
      for (std::size_t a = 0; a < tree->atom_count(n); ++a) {
        CHECK(s.at(n, a)[0] >= s.at(n - 1, tree->parent_index(n, static_cast<int>(a)))[0]);
      }
    }
    for (double alpha : {0.0, 0.25, 0.5, 0.9}) {
      CHECK(process_bmo_alpha_norm(s, alpha).value <= bmo_alpha_norm(f, alpha).value + 1e-9);
    }
    // |S_N - S_{n-1}| <= ||U f - U_{n-1} f|| on every leaf.
    const Martingale u = l2_lift(f);
    const RandomVariable ufinal = u.final_value();
    const RandomVariable sfinal = s.final_value();
    for (int n = 0; n <= f.depth(); ++n) {
      for (std::size_t leaf = 0; leaf < tree->leaf_count(); ++leaf) {
        const int a = n == 0 ? -1 : tree->ancestor_index(static_cast<int>(leaf), n - 1);
        const double prev_s = n == 0 ? 0.0 : s.at(n - 1, a)[0];
        double sq = 0.0;
        for (int k = 0; k < u.dim(); ++k) {
          const double prev_u = n == 0 ? 0.0 : u.at(n - 1, a)[k];
          sq += (ufinal.at(leaf)[k] - prev_u) * (ufinal.at(leaf)[k] - prev_u);
        }
        CHECK(std::abs(sfinal.at(leaf)[0] - prev_s) <= std::sqrt(sq) + 1e-12);
      }
    }
  }
}

TEST_CASE("maximal function") {
  auto t2 = build_dyadic(2);
  const AdaptedProcess c(t2, 1, {{-2.0}, {-2.0, -2.0}, {-2.0, -2.0, -2.0, -2.0}});
  const MaximalFunction mc = maximal(c);
  for (double v : mc.final.values()) CHECK(v == 2.0);
  const MaximalFunction mr = maximal(support::r1().process());
  for (double v : mr.final.values()) CHECK(v == 1.0);

  const StoppingTime tau(t2, {{1, 0}, {2, 3}});
  const MaximalFunction m = maximal(indicator_process(tau));
  CHECK(m.final.values()[0] == 1.0);
  CHECK(m.final.values()[1] == 1.0);
  CHECK(m.final.values()[2] == 0.0);
  CHECK(m.final.values()[3] == 1.0);

  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto tree = build_random(seed, 5, 3);
    const Martingale f = random_martingale(tree, seed, 2);
    const MaximalFunction mf = maximal(f.process());
    for (std::size_t leaf = 0; leaf < tree->leaf_count(); ++leaf) {
      double running = 0.0;
      for (int n = 0; n <= f.depth(); ++n) {
        const int a = tree->ancestor_index(static_cast<int>(leaf), n);
        running = std::max(running, f.process().norm_at(n, a));
        CHECK(mf.running.at(n, a)[0] == running);
        CHECK(mf.final.values()[leaf] >= f.process().norm_at(n, a));
      }
      CHECK(mf.final.values()[leaf] == running);
    }
  }
}
