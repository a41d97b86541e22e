// Copyright 2026 the rsengine authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end for the rsengine shared library. Everything
// numeric happens behind the C API; this binary only parses flags, shuttles
// JSON/CSV strings, and writes files.

#include <csignal>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rsengine.h"

namespace {

// Owned C string from the library.
struct LibString {
  char* data = nullptr;
  ~LibString() { rs_string_free(data); }
  std::string str() const { return data ? std::string(data) : std::string(); }
};

[[noreturn]] void die(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  std::exit(1);
}

void check(rs_status status, const std::string& context) {
  if (status != RS_OK) die(context + ": " + rs_last_error());
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) die("cannot open " + path + " for writing");
  out << content;
  if (!out) die("failed writing " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string manifest_path_for(const std::string& out_path) {
  const auto slash = out_path.find_last_of('/');
  const auto dot = out_path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return out_path + ".manifest.json";
  }
  return out_path.substr(0, dot) + ".manifest.json";
}

struct RunOptions {
  std::string problem = "mvn";
  int k = 9;
  double rho = 0.5;
  int x7_levels = 10;
  int design_runs = 8;
  std::string data_path;
  std::string rules = "kl,moment,moment-kl";
  int steps = 1000;
  int reps = 500;
  int pilot = 25;
  double q0 = 1.0;
  double b0 = 0.0;  // 0 = engine default K + 4
  double ridge = 1.0e-6;
  std::uint64_t seed = 0;
  std::string out_path = "results.csv";
  std::string raw_path;
  std::string manifest_in;
  int threads = 0;
};

std::vector<std::string> split_rules(const std::string& rules) {
  std::vector<std::string> out;
  std::stringstream stream(rules);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (!token.empty()) out.push_back(token);
  }
  return out;
}

std::string build_config_json(const RunOptions& opt) {
  nlohmann::json problem;
  if (opt.problem == "mvn") {
    problem = {{"type", "mvn"}, {"k", opt.k}, {"rho", opt.rho}};
  } else if (opt.problem == "borehole") {
    problem = {{"type", "borehole"},
               {"x7_levels", opt.x7_levels},
               {"design_runs", opt.design_runs}};
  } else if (opt.problem == "empirical") {
    if (opt.data_path.empty()) {
      std::cerr << "error: --data is required with --problem empirical\n";
      std::exit(2);
    }
    problem = {{"type", "empirical"}, {"data", opt.data_path}};
  } else {
    std::cerr << "error: unknown problem '" << opt.problem << "'\n";
    std::exit(2);
  }
  nlohmann::json config = {
      {"problem", problem},
      {"rules", split_rules(opt.rules)},
      {"steps", opt.steps},
      {"replications", opt.reps},
      {"pilot_count", opt.pilot},
      {"kappa0", opt.q0},
      {"ridge", opt.ridge},
      {"master_seed", opt.seed},
  };
  if (opt.b0 > 0.0) {
    config["dof0"] = opt.b0;
  } else {
    config["dof0"] = nullptr;
  }
  return config.dump();
}

int resolve_threads(int flag_value) {
  if (const char* env = std::getenv("RS_ENGINE_THREADS")) {
    try {
      return std::stoi(env);
    } catch (...) {
      die(std::string("RS_ENGINE_THREADS is not a number: ") + env);
    }
  }
  return flag_value;
}

void handle_interrupt(int) { rs_experiment_cancel(); }

int run_command(const RunOptions& opt) {
  const std::string config_json = opt.manifest_in.empty()
                                      ? build_config_json(opt)
                                      : read_file(opt.manifest_in);
  // Ctrl-C stops the experiment after the replications in flight; whatever
  // finished is still aggregated and written below.
  std::signal(SIGINT, handle_interrupt);
  rs_result* result = nullptr;
  check(rs_experiment_run(config_json.c_str(), resolve_threads(opt.threads),
                          &result),
        "run");
  std::signal(SIGINT, SIG_DFL);
  std::unique_ptr<rs_result, decltype(&rs_result_free)> guard(
      result, rs_result_free);

  LibString aggregate;
  check(rs_result_aggregate_csv(result, &aggregate.data), "aggregate CSV");
  write_file(opt.out_path, aggregate.str());

  LibString manifest;
  check(rs_result_manifest_json(result, &manifest.data), "manifest");
  write_file(manifest_path_for(opt.out_path), manifest.str());

  if (!opt.raw_path.empty()) {
    LibString raw;
    check(rs_result_raw_csv(result, &raw.data), "raw CSV");
    write_file(opt.raw_path, raw.str());
  }

  const int aborted = rs_result_aborted_replications(result);
  std::cout << "wrote " << opt.out_path << " and "
            << manifest_path_for(opt.out_path) << "\n";
  if (aborted > 0) {
    std::cout << "note: " << aborted
              << " replication(s) aborted on a non-PD update and were "
                 "excluded\n";
  }
  if (rs_result_interrupted(result)) {
    std::cout << "interrupted: partial results written (see "
                 "completed_replications in the manifest)\n";
    return 130;
  }
  return 0;
}

int verify_command(std::uint64_t draws, std::uint64_t seed) {
  LibString report;
  int32_t failed = 0;
  check(rs_verify(draws, seed, &report.data, &failed), "verify");
  std::cout << report.str();
  std::cout << (failed == 0 ? "all checks passed\n"
                            : std::to_string(failed) + " check(s) failed\n");
  return failed == 0 ? 0 : 1;
}

int describe_command(const RunOptions& opt) {
  rs_problem* problem = nullptr;
  if (opt.problem == "mvn") {
    check(rs_problem_create_mvn(opt.k, opt.rho, &problem), "describe");
  } else if (opt.problem == "borehole") {
    check(rs_problem_create_borehole(opt.x7_levels, opt.design_runs, opt.seed,
                                     &problem),
          "describe");
  } else if (opt.problem == "empirical") {
    if (opt.data_path.empty()) {
      std::cerr << "error: --data is required with --problem empirical\n";
      return 2;
    }
    check(rs_problem_create_empirical(opt.data_path.c_str(), &problem),
          "describe");
  } else {
    std::cerr << "error: unknown problem '" << opt.problem << "'\n";
    return 2;
  }
  std::unique_ptr<rs_problem, decltype(&rs_problem_free)> guard(
      problem, rs_problem_free);

  const int k_count = rs_problem_num_alternatives(problem);
  std::vector<double> means(k_count);
  check(rs_problem_true_means(problem, means.data()), "describe");

  std::cout << "problem: " << opt.problem << "\n";
  std::cout << "alternatives: " << k_count << "\n";
  std::cout << "true means (alternative: value):\n";
  std::cout.precision(12);
  for (int i = 0; i < k_count; ++i) {
    std::cout << "  " << (i + 1) << ": " << means[i] << "\n";
  }
  if (rs_problem_has_true_covariance(problem)) {
    std::vector<double> cov(static_cast<std::size_t>(k_count) * k_count);
    check(rs_problem_true_covariance(problem, cov.data()), "describe");
    std::cout << "true covariance:\n";
    for (int i = 0; i < k_count; ++i) {
      std::cout << " ";
      for (int j = 0; j < k_count; ++j) {
        std::cout << " " << cov[static_cast<std::size_t>(i) * k_count + j];
      }
      std::cout << "\n";
    }
  } else {
    std::cout << "true covariance: not analytic for this problem\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential Bayesian ranking and selection engine"};
  app.require_subcommand(1);

  RunOptions opt;
  std::uint64_t verify_draws = 100000;
  std::uint64_t verify_seed = 1;

  auto* run = app.add_subcommand("run", "run an experiment and write CSVs");
  run->add_option("--problem", opt.problem, "mvn | borehole | empirical")
      ->check(CLI::IsMember({"mvn", "borehole", "empirical"}));
  run->add_option("--k", opt.k, "alternatives (mvn)");
  run->add_option("--rho", opt.rho, "correlation parameter in [0,1) (mvn)")
      ->check(CLI::Range(0.0, 0.999999999));
  run->add_option("--x7-levels", opt.x7_levels, "x7 level count (borehole)")
      ->check(CLI::IsMember({10, 17}));
  run->add_option("--design-runs", opt.design_runs,
                  "LHS runs per level combination (borehole)");
  run->add_option("--data", opt.data_path, "CSV table (empirical)");
  run->add_option("--rules", opt.rules,
                  "comma list of kl, moment, moment-kl, full");
  run->add_option("--steps", opt.steps, "sequential measurements per run");
  run->add_option("--reps", opt.reps, "replications");
  run->add_option("--pilot", opt.pilot, "pilot samples for the prior");
  run->add_option("--q0", opt.q0, "prior precision count");
  run->add_option("--b0", opt.b0, "prior dof (default K+4)");
  run->add_option("--ridge", opt.ridge, "pilot covariance ridge coefficient");
  run->add_option("--seed", opt.seed, "master seed");
  run->add_option("--out", opt.out_path, "aggregate CSV path");
  run->add_option("--raw", opt.raw_path, "raw per-replication CSV path");
  run->add_option("--manifest", opt.manifest_in,
                  "rerun from a manifest (overrides the flags above)");
  run->add_option("--threads", opt.threads,
                  "worker threads (0 = all cores; RS_ENGINE_THREADS "
                  "overrides)");

  auto* verify =
      app.add_subcommand("verify", "Monte Carlo checks of the update rules");
  verify->add_option("--draws", verify_draws, "draws per estimate");
  verify->add_option("--seed", verify_seed, "verification seed");

  auto* describe =
      app.add_subcommand("describe", "print a problem's true quantities");
  describe->add_option("--problem", opt.problem, "mvn | borehole | empirical")
      ->check(CLI::IsMember({"mvn", "borehole", "empirical"}));
  describe->add_option("--k", opt.k, "alternatives (mvn)");
  describe->add_option("--rho", opt.rho, "correlation parameter (mvn)")
      ->check(CLI::Range(0.0, 0.999999999));
  describe->add_option("--x7-levels", opt.x7_levels,
                       "x7 level count (borehole)")
      ->check(CLI::IsMember({10, 17}));
  describe->add_option("--design-runs", opt.design_runs,
                       "LHS runs per level combination (borehole)");
  describe->add_option("--seed", opt.seed, "design seed (borehole)");
  describe->add_option("--data", opt.data_path, "CSV table (empirical)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (run->parsed()) return run_command(opt);
  if (verify->parsed()) return verify_command(verify_draws, verify_seed);
  if (describe->parsed()) return describe_command(opt);
  return 2;
}
