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

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "bmolab/carleson.hpp"
#include "bmolab/verify.hpp"
#include "support.hpp"

using namespace bmolab;
using support::rel_close;

namespace {

SuiteOptions quick(std::size_t trials, std::uint64_t seed = 3) {
  SuiteOptions o;
  o.trials = trials;
  o.seed = seed;
  return o;
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("suite names") {
  const auto names = suite_names();
  const std::set<std::string_view> got(names.begin(), names.end());
  for (const char* expected : {"characterization", "lemma", "fast-paths", "carleson-inequality",
                               "converse", "operators"}) {
    CHECK(got.count(expected) == 1);
  }
  CHECK_THROWS_AS(run_suite("no-such-suite", quick(1)), std::invalid_argument);
}

TEST_CASE("characterization on the fixed instances") {
  const Martingale zero = martingale_from_final(RandomVariable::constant(build_dyadic(2), 0.0));
  CHECK(carleson_alpha_norm(from_martingale(zero), 0.5).value == 0.0);
  CHECK(bmo_alpha_norm(zero, 0.5).value == 0.0);

  const double r1 = std::sqrt(carleson_alpha_norm(from_martingale(support::r1()), 0.5).value);
  CHECK(rel_close(r1, std::sqrt(2.0), 1e-12));
  CHECK(rel_close(bmo_alpha_norm(support::r1(), 0.5, BmoMode::kSubsetBruteforce).value, r1, 1e-12));

  const double d =
      std::sqrt(carleson_alpha_norm(from_martingale(support::d2f()), 0.25,
                                    CarlesonMode::kStoppingBruteforce)
                    .value);
  CHECK(rel_close(d, std::pow(2.0, 0.75), 1e-12));
  CHECK(rel_close(bmo_alpha_norm(support::d2f(), 0.25, BmoMode::kSubsetBruteforce).value, d,
                  1e-12));
}

TEST_CASE("lemma form on the fixed instances") {
  for (double alpha : {0.0, 0.5, 1.0}) {
    CHECK(bmo_alpha_norm(support::r1(), alpha, BmoMode::kStoppingBruteforce).value ==
          doctest::Approx(std::pow(2.0, alpha)).epsilon(1e-12));
  }
}

TEST_CASE("every suite passes on a few trials") {
  for (std::string_view name : suite_names()) {
    CAPTURE(name);
    const VerificationReport r = run_suite(name, quick(4));
    CHECK(r.passed);
    CHECK(r.failures() == 0);
    CHECK_FALSE(r.cases.empty());
    CHECK(r.suite == name);
  }
}

TEST_CASE("suite options override the defaults") {
  SuiteOptions o = quick(2);
  o.alphas = {0.3};
  o.max_depth = 2;
  const VerificationReport r = run_suite("characterization", o);
  for (const auto& c : r.cases) {
    CHECK(c.alpha == 0.3);
    CHECK(c.depth <= 2);
  }
  CHECK(r.parameters["alphas"] == Json::array({0.3}));
  CHECK(r.parameters["trials"] == 2);

  o.alphas = {1.0};
  CHECK_THROWS_AS(run_suite("characterization", o), std::invalid_argument);
}

TEST_CASE("reports are deterministic and replayable") {
  for (std::string_view name : suite_names()) {
    CAPTURE(name);
    const VerificationReport a = run_suite(name, quick(3, 11));
    const VerificationReport b = run_suite(name, quick(3, 11));
    CHECK(a.to_json(true).dump(2) == b.to_json(true).dump(2));
    CHECK(a.to_csv() == b.to_csv());
    CHECK_FALSE(a.to_json(true).contains("timing"));
    CHECK(a.to_json(false).contains("timing"));

    const VerificationReport other = run_suite(name, quick(3, 12));
    CHECK(a.to_json(true).dump() != other.to_json(true).dump());

    // Each trial replays on its own to the same records.
    std::vector<CaseRecord> replayed;
    for (std::size_t t = 0; t < 3; ++t) {
      auto part = run_trial(name, quick(3, 11), t);
      for (auto& c : part) CHECK(c.trial == t);
      replayed.insert(replayed.end(), part.begin(), part.end());
    }
    REQUIRE(replayed.size() == a.cases.size());
    VerificationReport again = a;
    again.cases = replayed;
    CHECK(again.to_csv() == a.to_csv());
  }
}

TEST_CASE("report JSON layout") {
  const VerificationReport r = run_suite("operators", quick(2));
  const Json j = r.to_json(true);
  CHECK(j["schema"] == "report/v1");
  CHECK(j["suite"] == "operators");
  CHECK(j["verdict"] == "pass");
  CHECK(j["failures"] == 0);
  CHECK(j["cases"].size() == r.cases.size());
  CHECK(j["parameters"].contains("seed_scheme"));
  CHECK(j["summary"].contains("maximal_bmo_ratio"));
  const Json& first = j["cases"][0];
  for (const char* key : {"trial", "seed", "check", "alpha", "depth", "lhs", "rhs", "residual",
                          "tolerance", "verdict"}) {
    CHECK(first.contains(key));
  }
}

TEST_CASE("CSV layout") {
  const VerificationReport r = run_suite("carleson-inequality", quick(2));
  const std::string csv = r.to_csv();
  CHECK(csv.rfind("suite,alpha,p,depth,seed,lhs,rhs,residual,verdict\n", 0) == 0);
  CHECK(count_lines(csv) == r.cases.size() + 1);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') == 8);
    CHECK(line.rfind("carleson-inequality/", 0) == 0);
  }
}

TEST_CASE("CSV rows for hand-made records") {
  CaseRecord c;
  c.check = "demo";
  c.alpha = 0.25;
  c.p = 2.0;
  c.depth = 3;
  c.seed = 42;
  c.lhs = 1.5;
  c.rhs = 1.0;
  c.residual = 0.5;
  CHECK(csv_row("suite", c) == "suite/demo,0.25,2,3,42,1.5,1,0.5,fail\n");
  c.p.reset();
  c.passed = true;
  CHECK(csv_row("suite", c) == "suite/demo,0.25,,3,42,1.5,1,0.5,pass\n");
}

TEST_CASE("campaign emits one row per alpha, depth and trial") {
  CampaignOptions o;
  o.trials = 4;
  const VerificationReport r = run_campaign(o);
  CHECK(r.passed);
  CHECK(r.cases.size() == 3 * 3 * 4);
  CHECK(count_lines(r.to_csv()) == 3 * 3 * 4 + 1);

  o.ps = {1.5, 2.0};
  o.alphas = {0.0, 0.25};
  const VerificationReport with_p = run_campaign(o);
  // Characterization rows for both α, inequality rows for α = 0.25 only.
  CHECK(with_p.cases.size() == 2 * 3 * 4 + 2 * 3 * 4);
  CHECK(with_p.passed);

  CampaignOptions bad;
  bad.ps = {1.0};
  CHECK_THROWS_AS(run_campaign(bad), std::invalid_argument);
}
