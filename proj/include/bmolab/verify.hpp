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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bmolab/json_io.hpp"

namespace bmolab {

// Suite parameters; zero or empty fields fall back to the suite's defaults.
struct SuiteOptions {
  std::size_t trials = 0;
  std::uint64_t seed = 1;
  std::vector<double> alphas;
  std::vector<double> ps;
  int max_depth = 0;
  int max_branch = 0;
  // Upper bound on the stopping-time count of generated trees, for suites
  // that enumerate.
  std::uint64_t max_stopping_times = 0;
};

// One checked identity or inequality. For identities lhs and rhs are the two
// sides and residual is their relative difference; for inequalities
// residual = lhs - rhs (violations are positive).
struct CaseRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;  // the trial seed; replaying it reproduces the record
  std::string check;
  double alpha = 0.0;
  std::optional<double> p;
  int depth = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  Json details = Json::object();
};

struct VerificationReport {
  std::string suite;
  Json parameters = Json::object();
  std::vector<CaseRecord> cases;
  Json summary = Json::object();
  bool passed = false;
  double wall_clock_seconds = 0.0;

  std::size_t failures() const;
  // Comparison mode drops the timing block, so identical runs serialize to
  // identical bytes.
  Json to_json(bool comparison_mode = false) const;
  // Columns: suite, alpha, p, depth, seed, lhs, rhs, residual, verdict. The
  // suite column reads "<suite>/<check>".
  std::string to_csv() const;
};

std::string csv_header();
std::string csv_row(std::string_view suite, const CaseRecord& record);

// √‖|μ_f|‖_α = ‖f‖_{BMO^α} for scalar and dim-3 martingales on random trees,
// plus the ω_n form against the atom form.
VerificationReport check_characterization(const SuiteOptions& options);
// Stopping-time sup against the subset sup, plus the ω_n form.
VerificationReport check_lemma_stopping_form(const SuiteOptions& options);
// atom-fast vs subset-bruteforce and node-fast vs stopping-bruteforce.
VerificationReport check_fast_paths(const SuiteOptions& options);
// The Carleson inequality on random (f, μ), its intermediate chain, the
// layer-cake identity, and the converse at C_p = ‖|μ|‖_α.
VerificationReport check_carleson_inequality(const SuiteOptions& options);
// Converse extraction on every stopping time of small trees.
VerificationReport check_converse(const SuiteOptions& options);
// Transform bound, lift isometry, square-function bound, maximal invariants.
VerificationReport check_operators(const SuiteOptions& options);

std::vector<std::string_view> suite_names();
// Throws std::invalid_argument for an unknown suite.
VerificationReport run_suite(std::string_view name, const SuiteOptions& options);
// The records of a single trial, as they appear in the full report.
std::vector<CaseRecord> run_trial(std::string_view name, const SuiteOptions& options,
                                  std::size_t trial);

struct CampaignOptions {
  std::vector<double> alphas{0.1, 0.25, 0.5};
  std::vector<double> ps;  // empty: characterization rows only
  std::vector<int> depths{2, 3, 4};
  std::size_t trials = 50;
  std::uint64_t seed = 1;
  int max_branch = 3;
};

// Characterization rows per (α, depth, trial) and, when ps is set,
// Carleson-inequality rows per (α, p, depth, trial) for α ∈ (0, 1).
VerificationReport run_campaign(const CampaignOptions& options);

}  // namespace bmolab
