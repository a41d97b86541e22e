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

#include "harness.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "csv.hpp"
#include "kg.hpp"

namespace rs {

using nlohmann::json;

void ExperimentConfig::validate() const {
  if (rules.empty()) {
    fail(ErrorCode::InvalidArgument, "at least one update rule is required");
  }
  if (steps < 1) fail(ErrorCode::InvalidArgument, "steps must be >= 1");
  if (replications < 1) {
    fail(ErrorCode::InvalidArgument, "replications must be >= 1");
  }
  if (pilot_count < 2) {
    fail(ErrorCode::TooFewPilotSamples,
         "pilot_count must be >= 2, got " + std::to_string(pilot_count));
  }
  if (!(kappa0 > 0.0)) {
    fail(ErrorCode::InvalidHyperparameter, "kappa0 must be positive");
  }
  if (ridge < 0.0) {
    fail(ErrorCode::InvalidHyperparameter, "ridge must be nonnegative");
  }
  if (threads < 0) fail(ErrorCode::InvalidArgument, "threads must be >= 0");
}

double ExperimentConfig::resolved_dof0(int num_alternatives) const {
  // K + 4 is the smallest margin that keeps the inverse-Wishart variance
  // finite while satisfying dof > K + 1.
  return dof0.value_or(static_cast<double>(num_alternatives) + 4.0);
}

double opportunity_cost(const Eigen::VectorXd& true_means,
                        const Eigen::VectorXd& belief_mean) {
  if (true_means.size() != belief_mean.size()) {
    fail(ErrorCode::DimensionMismatch,
         "true means and belief mean must have equal length");
  }
  Eigen::Index pick = 0;
  for (Eigen::Index k = 1; k < belief_mean.size(); ++k) {
    if (belief_mean[k] > belief_mean[pick]) pick = k;
  }
  return true_means.maxCoeff() - true_means[pick];
}

Trajectory run_replication(const Problem& problem, UpdateRule rule,
                           const ExperimentConfig& config, Rng& pilot_rng,
                           Rng& sampling_rng) {
  const int k_count = problem.num_alternatives();
  Trajectory trajectory;
  trajectory.costs.reserve(config.steps);
  try {
    Eigen::MatrixXd pilot(config.pilot_count, k_count);
    for (int i = 0; i < config.pilot_count; ++i) {
      pilot.row(i) = problem.sample_all(pilot_rng);
    }
    BeliefState state =
        estimate_prior(pilot, config.resolved_dof0(k_count), config.kappa0,
                       config.ridge);
    for (int n = 0; n < config.steps; ++n) {
      if (rule == UpdateRule::FullConjugate) {
        state = update_full(state, problem.sample_all(sampling_rng));
      } else {
        const int k = select_alternative(state, rule);
        const double y = problem.sample_one(k, sampling_rng);
        state = apply_update(rule, state, SingleObservation{k, y});
      }
      trajectory.costs.push_back(
          opportunity_cost(problem.true_means(), state.mean()));
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotPositiveDefinite) throw;
    trajectory.aborted = true;
    trajectory.aborted_at_step = static_cast<int>(trajectory.costs.size());
    trajectory.abort_reason = e.what();
    trajectory.costs.clear();
  }
  return trajectory;
}

namespace {

std::atomic<bool> g_cancel_requested{false};

// A replication counts only if it ran to the full horizon; anything else
// was either aborted (counted separately) or never started before an
// interrupt.
bool is_complete(const Trajectory& t, int steps) {
  return !t.aborted && static_cast<int>(t.costs.size()) == steps;
}

void aggregate_rule(RuleResult& result, int steps) {
  result.mean_cost.assign(steps, 0.0);
  result.stderr_cost.assign(steps, 0.0);
  result.completed = 0;
  result.aborted = 0;
  for (const Trajectory& t : result.trajectories) {
    if (t.aborted) {
      ++result.aborted;
    } else if (is_complete(t, steps)) {
      ++result.completed;
    }
  }
  if (result.completed == 0) return;
  for (int n = 0; n < steps; ++n) {
    double sum = 0.0;
    for (const Trajectory& t : result.trajectories) {
      if (is_complete(t, steps)) sum += t.costs[n];
    }
    const double mean = sum / result.completed;
    result.mean_cost[n] = mean;
    if (result.completed >= 2) {
      double sq = 0.0;
      for (const Trajectory& t : result.trajectories) {
        if (is_complete(t, steps)) {
          const double d = t.costs[n] - mean;
          sq += d * d;
        }
      }
      const double sd = std::sqrt(sq / (result.completed - 1));
      result.stderr_cost[n] = sd / std::sqrt(result.completed);
    }
  }
}

}  // namespace

void request_cancellation() noexcept {
  g_cancel_requested.store(true, std::memory_order_relaxed);
}

void reset_cancellation() noexcept {
  g_cancel_requested.store(false, std::memory_order_relaxed);
}

ResultTable run_experiment(const ExperimentConfig& config,
                           const Problem& problem) {
  config.validate();
  ResultTable table;
  table.steps = config.steps;
  table.per_rule.resize(config.rules.size());
  for (std::size_t r = 0; r < config.rules.size(); ++r) {
    table.per_rule[r].rule = config.rules[r];
    table.per_rule[r].trajectories.resize(config.replications);
  }

  const int total = static_cast<int>(config.rules.size()) *
                    config.replications;
  unsigned thread_count =
      config.threads > 0 ? static_cast<unsigned>(config.threads)
                         : std::max(1u, std::thread::hardware_concurrency());
  thread_count = std::min<unsigned>(thread_count, total);

  std::atomic<int> next_task{0};
  std::atomic<bool> failed{false};
  std::string failure_message;
  std::mutex failure_mutex;

  auto worker = [&]() {
    while (!failed.load(std::memory_order_relaxed) &&
           !g_cancel_requested.load(std::memory_order_relaxed)) {
      const int task = next_task.fetch_add(1);
      if (task >= total) break;
      const int rule_index = task / config.replications;
      const int rep = task % config.replications;
      try {
        Rng pilot_rng = make_rng(config.master_seed, "pilot", rep);
        Rng sampling_rng = make_rng(
            config.master_seed, rule_token(config.rules[rule_index]), rep);
        table.per_rule[rule_index].trajectories[rep] = run_replication(
            problem, config.rules[rule_index], config, pilot_rng,
            sampling_rng);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        failure_message = e.what();
        failed.store(true);
      }
    }
  };

  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (unsigned i = 0; i < thread_count; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failed.load()) {
    fail(ErrorCode::InvalidArgument,
         "experiment failed: " + failure_message);
  }
  table.interrupted = g_cancel_requested.load(std::memory_order_relaxed);

  for (RuleResult& result : table.per_rule) {
    aggregate_rule(result, config.steps);
  }
  return table;
}

ResultTable run_experiment(const ExperimentConfig& config) {
  const auto problem = make_problem(config.problem, config.master_seed);
  return run_experiment(config, *problem);
}

std::unique_ptr<Problem> make_problem(const ProblemSpec& spec,
                                      std::uint64_t master_seed) {
  switch (spec.kind) {
    case ProblemSpec::Kind::Mvn:
      return make_mvn_problem(spec.num_alternatives, spec.rho);
    case ProblemSpec::Kind::Borehole: {
      Rng rng = make_rng(master_seed, "problem", 0);
      return make_calibration_problem(
          BoreholeConfig::standard(spec.x7_levels, spec.design_runs, rng));
    }
    case ProblemSpec::Kind::Empirical:
      return make_empirical_problem(load_empirical_csv(spec.data_path));
  }
  fail(ErrorCode::InvalidArgument, "unknown problem kind");
}

std::string aggregate_csv(const ResultTable& table) {
  std::string out = "rule,step,mean_cost,stderr\n";
  for (const RuleResult& result : table.per_rule) {
    const std::string token(rule_token(result.rule));
    for (int n = 0; n < table.steps; ++n) {
      out += token;
      out += ',';
      out += std::to_string(n + 1);
      out += ',';
      out += format_double(result.mean_cost[n]);
      out += ',';
      out += format_double(result.stderr_cost[n]);
      out += '\n';
    }
  }
  return out;
}

std::string raw_csv(const ResultTable& table) {
  std::string out = "rule,replication,step,cost\n";
  for (const RuleResult& result : table.per_rule) {
    const std::string token(rule_token(result.rule));
    for (std::size_t rep = 0; rep < result.trajectories.size(); ++rep) {
      const Trajectory& t = result.trajectories[rep];
      if (t.aborted) continue;
      for (std::size_t n = 0; n < t.costs.size(); ++n) {
        out += token;
        out += ',';
        out += std::to_string(rep);
        out += ',';
        out += std::to_string(n + 1);
        out += ',';
        out += format_double(t.costs[n]);
        out += '\n';
      }
    }
  }
  return out;
}

namespace {

json problem_to_json(const ProblemSpec& spec) {
  switch (spec.kind) {
    case ProblemSpec::Kind::Mvn:
      return {{"type", "mvn"},
              {"k", spec.num_alternatives},
              {"rho", spec.rho}};
    case ProblemSpec::Kind::Borehole:
      return {{"type", "borehole"},
              {"x7_levels", spec.x7_levels},
              {"design_runs", spec.design_runs}};
    case ProblemSpec::Kind::Empirical:
      return {{"type", "empirical"}, {"data", spec.data_path}};
  }
  fail(ErrorCode::InvalidArgument, "unknown problem kind");
}

ProblemSpec problem_from_json(const json& j) {
  ProblemSpec spec;
  const std::string type = j.at("type").get<std::string>();
  if (type == "mvn") {
    spec.kind = ProblemSpec::Kind::Mvn;
    spec.num_alternatives = j.at("k").get<int>();
    spec.rho = j.at("rho").get<double>();
  } else if (type == "borehole") {
    spec.kind = ProblemSpec::Kind::Borehole;
    spec.x7_levels = j.value("x7_levels", 10);
    spec.design_runs = j.value("design_runs", 8);
  } else if (type == "empirical") {
    spec.kind = ProblemSpec::Kind::Empirical;
    spec.data_path = j.at("data").get<std::string>();
  } else {
    fail(ErrorCode::InvalidArgument, "unknown problem type '" + type + "'");
  }
  return spec;
}

json config_to_json_object(const ExperimentConfig& config) {
  json rules = json::array();
  for (UpdateRule rule : config.rules) {
    rules.push_back(std::string(rule_token(rule)));
  }
  json j = {
      {"problem", problem_to_json(config.problem)},
      {"rules", rules},
      {"steps", config.steps},
      {"replications", config.replications},
      {"pilot_count", config.pilot_count},
      {"kappa0", config.kappa0},
      {"ridge", config.ridge},
      {"master_seed", config.master_seed},
  };
  if (config.dof0.has_value()) {
    j["dof0"] = *config.dof0;
  } else {
    j["dof0"] = nullptr;
  }
  return j;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& config) {
  return config_to_json_object(config).dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::IoError, std::string("cannot parse config JSON: ") +
                                 e.what());
  }
  if (j.contains("config")) j = j.at("config");
  ExperimentConfig config;
  try {
    config.problem = problem_from_json(j.at("problem"));
    config.rules.clear();
    for (const auto& token : j.at("rules")) {
      config.rules.push_back(rule_from_token(token.get<std::string>()));
    }
    config.steps = j.at("steps").get<int>();
    config.replications = j.at("replications").get<int>();
    config.pilot_count = j.at("pilot_count").get<int>();
    config.kappa0 = j.value("kappa0", 1.0);
    config.ridge = j.value("ridge", 1.0e-6);
    config.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("dof0") && !j.at("dof0").is_null()) {
      config.dof0 = j.at("dof0").get<double>();
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::IoError, std::string("bad config JSON: ") + e.what());
  }
  config.validate();
  return config;
}

std::string manifest_json(const ExperimentConfig& config,
                          const ResultTable& table) {
  json aborted = json::object();
  json completed = json::object();
  json final_cost = json::object();
  for (const RuleResult& result : table.per_rule) {
    const std::string token(rule_token(result.rule));
    aborted[token] = result.aborted;
    completed[token] = result.completed;
    if (result.completed > 0 && table.steps > 0) {
      final_cost[token] = {{"mean", result.mean_cost[table.steps - 1]},
                           {"stderr", result.stderr_cost[table.steps - 1]}};
    }
  }
  json j = {
      {"version", "0.1.0"},
      {"config", config_to_json_object(config)},
      {"seed_derivation",
       "stream = mt19937_64(splitmix64(splitmix64(master ^ fnv1a64(tag)) ^ "
       "splitmix64(index))); tag = 'pilot' or the rule token, index = "
       "replication"},
      {"interrupted", table.interrupted},
      {"completed_replications", completed},
      {"aborted_replications", aborted},
      {"final_opportunity_cost", final_cost},
  };
  return j.dump(2) + "\n";
}

}  // namespace rs
