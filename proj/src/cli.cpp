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

#include "bmolab/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bmolab/carleson.hpp"
#include "bmolab/config.hpp"
#include "bmolab/json_io.hpp"
#include "bmolab/norms.hpp"
#include "bmolab/random.hpp"
#include "bmolab/verify.hpp"

namespace bmolab {

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw UsageError("cannot write " + path);
  file << text;
}

std::filesystem::path parent_of(const std::string& path) {
  return std::filesystem::path(path).parent_path();
}

struct TreeArgs {
  std::string family = "random";
  int depth = 3;
  int branch = 2;
  std::uint64_t seed = 1;
};

TreePtr make_tree(const TreeArgs& a) {
  if (a.family == "dyadic") return build_dyadic(a.depth);
  if (a.family == "random") return build_random(a.seed, a.depth, a.branch);
  throw UsageError("unknown tree family \"" + a.family + "\" (dyadic, random)");
}

void check_alpha_arg(double alpha, bool allow_one) {
  if (!(alpha >= 0.0) || (allow_one ? alpha > 1.0 : alpha >= 1.0)) {
    throw UsageError(std::string("--alpha must lie in ") + (allow_one ? "[0, 1]" : "[0, 1)"));
  }
}

template <typename F>
double time_ms(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact BMO^α and fractional Carleson norms on finite filtrations", "bmo_lab"};
  app.require_subcommand(1);

  // gen-tree
  TreeArgs tree_args;
  std::string tree_out = "-";
  auto* gen_tree = app.add_subcommand("gen-tree", "Generate a filtration tree (tree/v1)");
  gen_tree->add_option("--family", tree_args.family, "dyadic or random")->capture_default_str();
  gen_tree->add_option("--depth", tree_args.depth, "Horizon N")->capture_default_str();
  gen_tree->add_option("--branch", tree_args.branch, "Maximum branching (random)")
      ->capture_default_str();
  gen_tree->add_option("--seed", tree_args.seed)->capture_default_str();
  gen_tree->add_option("--out", tree_out, "Output path, - for stdout");

  // gen-martingale
  TreeArgs mart_tree_args;
  std::string mart_tree_file, mart_final_file, mart_out = "-";
  std::uint64_t mart_seed = 1;
  int mart_dim = 1;
  auto* gen_mart = app.add_subcommand("gen-martingale", "Generate a martingale (process/v1)");
  gen_mart->add_option("--tree", mart_tree_file, "tree/v1 file; otherwise a tree is generated");
  gen_mart->add_option("--final", mart_final_file,
                       "rv/v1 file; the martingale is generated by this final value");
  gen_mart->add_option("--family", mart_tree_args.family)->capture_default_str();
  gen_mart->add_option("--depth", mart_tree_args.depth)->capture_default_str();
  gen_mart->add_option("--branch", mart_tree_args.branch)->capture_default_str();
  gen_mart->add_option("--tree-seed", mart_tree_args.seed)->capture_default_str();
  gen_mart->add_option("--seed", mart_seed, "Seed for the normal leaf values")
      ->capture_default_str();
  gen_mart->add_option("--dim", mart_dim)->capture_default_str()->check(CLI::PositiveNumber);
  gen_mart->add_option("--out", mart_out);

  // norm
  std::string norm_in, norm_mode = "atom-fast";
  double norm_alpha = 0.0;
  std::optional<double> norm_p;
  bool norm_adapted = false;
  auto* norm = app.add_subcommand("norm", "BMO^α norm of a process/v1 martingale");
  norm->add_option("--in", norm_in, "process/v1 file")->required();
  norm->add_option("--alpha", norm_alpha)->required();
  norm->add_option("--mode", norm_mode,
                   "subset-bruteforce, atom-fast, stopping-bruteforce or omega-form")
      ->capture_default_str();
  norm->add_option("--p", norm_p, "Exponent of the L^p variant (p >= 1)");
  norm->add_flag("--adapted", norm_adapted,
                 "Treat the input as an adapted process (own previous value)");

  // carleson-norm
  std::string car_in, car_from, car_mode = "node-fast";
  double car_alpha = 0.0;
  auto* car = app.add_subcommand("carleson-norm", "α-Carleson norm of a measure");
  auto* car_in_opt = car->add_option("--in", car_in, "measure/v1 file");
  auto* car_from_opt =
      car->add_option("--from-martingale", car_from, "process/v1 martingale; uses |d_k f|²");
  car_in_opt->excludes(car_from_opt);
  car->add_option("--alpha", car_alpha)->required();
  car->add_option("--mode", car_mode, "node-fast or stopping-bruteforce")->capture_default_str();

  // check
  std::string suite;
  SuiteOptions suite_options;
  std::string check_out = "-", check_csv;
  bool comparison = false;
  const auto names = suite_names();
  auto* check = app.add_subcommand("check", "Run a verification suite");
  check->add_option("suite", suite, "Suite name")
      ->required()
      ->check(CLI::IsMember(std::vector<std::string>(names.begin(), names.end())));
  check->add_option("--trials", suite_options.trials);
  check->add_option("--seed", suite_options.seed)->capture_default_str();
  check->add_option("--alphas", suite_options.alphas)->delimiter(',');
  check->add_option("--ps", suite_options.ps)->delimiter(',');
  check->add_option("--max-depth", suite_options.max_depth);
  check->add_option("--max-branch", suite_options.max_branch);
  check->add_option("--out", check_out, "Report JSON path, - for stdout");
  check->add_option("--csv", check_csv, "CSV summary path");
  check->add_flag("--comparison", comparison, "Omit timing so reruns are byte-identical");

  // campaign
  CampaignOptions campaign_options;
  std::string campaign_out = "-", campaign_report;
  auto* campaign = app.add_subcommand("campaign", "Grid over α, p and depth; CSV output");
  campaign->add_option("--alphas", campaign_options.alphas)->delimiter(',')->capture_default_str();
  campaign->add_option("--ps", campaign_options.ps)->delimiter(',');
  campaign->add_option("--depths", campaign_options.depths)->delimiter(',')->capture_default_str();
  campaign->add_option("--trials", campaign_options.trials)->capture_default_str();
  campaign->add_option("--seed", campaign_options.seed)->capture_default_str();
  campaign->add_option("--max-branch", campaign_options.max_branch)->capture_default_str();
  campaign->add_option("--out", campaign_out, "CSV path, - for stdout");
  campaign->add_option("--report", campaign_report, "Also write the JSON report here");

  // bench
  int bench_depth = 3;
  double bench_alpha = 0.25;
  std::uint64_t bench_seed = 1;
  auto* bench = app.add_subcommand("bench", "Fast-path vs brute-force timings on dyadic trees");
  bench->add_option("--max-depth", bench_depth)->capture_default_str();
  bench->add_option("--alpha", bench_alpha)->capture_default_str();
  bench->add_option("--seed", bench_seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*gen_tree) {
      emit(tree_out, tree_to_json(*make_tree(tree_args)).dump(2) + "\n", out);
      return 0;
    }

    if (*gen_mart) {
      std::optional<Martingale> f;
      if (!mart_final_file.empty()) {
        f = martingale_from_final(
            rv_from_json(read_json_file(mart_final_file), parent_of(mart_final_file)));
      } else {
        TreePtr tree = mart_tree_file.empty() ? make_tree(mart_tree_args)
                                              : tree_from_json(read_json_file(mart_tree_file));
        f = random_martingale(tree, mart_seed, mart_dim);
      }
      emit(mart_out, process_to_json(f->process()).dump(2) + "\n", out);
      return 0;
    }

    if (*norm) {
      const AdaptedProcess process =
          process_from_json(read_json_file(norm_in), parent_of(norm_in));
      check_alpha_arg(norm_alpha, true);
      NormResult result;
      if (norm_adapted) {
        result = process_bmo_alpha_norm(process, norm_alpha);
      } else {
        const auto mode = parse_bmo_mode(norm_mode);
        if (!mode) throw UsageError("unknown mode \"" + norm_mode + "\"");
        const Martingale f(process);
        if (norm_p && *norm_p != 2.0) {
          if (!(*norm_p >= 1.0)) throw UsageError("--p must be at least 1");
          result = bmo_alpha_p_norm(f, norm_alpha, *norm_p, *mode);
        } else {
          result = bmo_alpha_norm(f, norm_alpha, *mode);
        }
      }
      out << norm_result_to_json(result).dump(2) << '\n';
      return 0;
    }

    if (*car) {
      check_alpha_arg(car_alpha, false);
      const auto mode = parse_carleson_mode(car_mode);
      if (!mode) throw UsageError("unknown mode \"" + car_mode + "\"");
      std::optional<CarlesonMeasure> mu;
      if (!car_in.empty()) {
        mu = measure_from_json(read_json_file(car_in), parent_of(car_in));
      } else if (!car_from.empty()) {
        mu = from_martingale(
            Martingale(process_from_json(read_json_file(car_from), parent_of(car_from))));
      } else {
        throw UsageError("carleson-norm needs --in or --from-martingale");
      }
      out << norm_result_to_json(carleson_alpha_norm(*mu, car_alpha, *mode)).dump(2) << '\n';
      return 0;
    }

    if (*check) {
      const VerificationReport report = run_suite(suite, suite_options);
      emit(check_out, report.to_json(comparison).dump(2) + "\n", out);
      if (!check_csv.empty()) emit(check_csv, report.to_csv(), out);
      err << report.suite << ": " << (report.passed ? "pass" : "fail") << " ("
          << report.cases.size() << " cases, " << report.failures() << " failures)\n";
      return report.passed ? 0 : kExitFail;
    }

    if (*campaign) {
      const VerificationReport report = run_campaign(campaign_options);
      emit(campaign_out, report.to_csv(), out);
      if (!campaign_report.empty()) {
        emit(campaign_report, report.to_json(true).dump(2) + "\n", out);
      }
      return report.passed ? 0 : kExitFail;
    }

    if (*bench) {
      check_alpha_arg(bench_alpha, false);
      out << "depth,algorithm,value,milliseconds\n";
      for (int depth = 1; depth <= bench_depth; ++depth) {
        TreePtr tree = build_dyadic(depth);
        const Martingale f = random_martingale(tree, derive_seed(bench_seed, depth), 1);
        const CarlesonMeasure mu = from_martingale(f);
        auto row = [&](std::string_view name, auto&& compute) {
          double value = 0.0;
          const double ms = time_ms([&] { value = compute(); });
          char buf[64];
          std::snprintf(buf, sizeof buf, "%.17g,%.3f", value, ms);
          out << depth << ',' << name << ',' << buf << '\n';
        };
        for (BmoMode mode : {BmoMode::kAtomFast, BmoMode::kOmegaForm,
                             BmoMode::kSubsetBruteforce, BmoMode::kStoppingBruteforce}) {
          row("bmo/" + std::string(mode_name(mode)),
              [&] { return bmo_alpha_norm(f, bench_alpha, mode).value; });
        }
        for (CarlesonMode mode : {CarlesonMode::kNodeFast, CarlesonMode::kStoppingBruteforce}) {
          row("carleson/" + std::string(mode_name(mode)),
              [&] { return carleson_alpha_norm(mu, bench_alpha, mode).value; });
        }
      }
      return 0;
    }
  } catch (const FormatError& e) {
    err << "error: invalid input at " << e.what() << '\n';
    return kExitUsage;
  } catch (const SizeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace bmolab
