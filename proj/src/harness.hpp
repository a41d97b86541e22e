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

#ifndef RSENGINE_HARNESS_HPP
#define RSENGINE_HARNESS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "problems.hpp"
#include "updates.hpp"

namespace rs {

// What to sample from; serializable so a run manifest can reproduce it.
struct ProblemSpec {
  enum class Kind { Mvn, Borehole, Empirical };
  Kind kind = Kind::Mvn;
  int num_alternatives = 9;   // mvn
  double rho = 0.5;           // mvn
  int x7_levels = 10;         // borehole
  int design_runs = 8;        // borehole
  std::string data_path;      // empirical
};

struct ExperimentConfig {
  ProblemSpec problem;
  std::vector<UpdateRule> rules;
  int steps = 1000;
  int replications = 500;
  int pilot_count = 25;
  double kappa0 = 1.0;
  std::optional<double> dof0;  // default: K + 4, resolved per problem
  double ridge = 1.0e-6;
  std::uint64_t master_seed = 0;
  int threads = 0;  // 0 = hardware concurrency; never affects the numbers

  void validate() const;
  double resolved_dof0(int num_alternatives) const;
};

// Per-step opportunity costs of one replication. A replication that hits a
// NotPositiveDefinite update is marked aborted and excluded from averages.
struct Trajectory {
  std::vector<double> costs;
  bool aborted = false;
  int aborted_at_step = -1;
  std::string abort_reason;
};

struct RuleResult {
  UpdateRule rule = UpdateRule::Moment;
  std::vector<double> mean_cost;    // per step, over completed replications
  std::vector<double> stderr_cost;  // sample sd / sqrt(count); 0 if count < 2
  std::vector<Trajectory> trajectories;
  int aborted = 0;
  int completed = 0;
};

struct ResultTable {
  std::vector<RuleResult> per_rule;
  int steps = 0;
  bool interrupted = false;
};

// Cooperative cancellation for long experiment runs: request_cancellation
// is async-signal-safe (it only sets a lock-free flag). Workers stop
// picking up new replications; finished ones are aggregated and the result
// is marked interrupted.
void request_cancellation() noexcept;
void reset_cancellation() noexcept;

// max_k mu_k - mu_{argmax_k belief_mean_k}; belief ties go to the smallest
// index.
double opportunity_cost(const Eigen::VectorXd& true_means,
                        const Eigen::VectorXd& belief_mean);

// One replication: pilot_count joint pilot samples estimate the prior, then
// `steps` rounds of select / measure / update, recording the opportunity
// cost after each update. The pilot stream is separate from the sampling
// stream so every rule can face identical pilot data (common random
// numbers). The full-conjugate rule measures all alternatives jointly each
// round and skips selection.
Trajectory run_replication(const Problem& problem, UpdateRule rule,
                           const ExperimentConfig& config, Rng& pilot_rng,
                           Rng& sampling_rng);

// All rules x replications, parallelized over replications. Streams are
// keyed by (master_seed, "pilot", replication) for pilots and
// (master_seed, rule token, replication) for sampling, which makes results
// independent of the thread count and of rule order.
ResultTable run_experiment(const ExperimentConfig& config,
                           const Problem& problem);

// Convenience: build the problem from the config first. The borehole design
// is drawn once here, keyed by (master_seed, "problem"), and shared by all
// replications.
ResultTable run_experiment(const ExperimentConfig& config);

std::unique_ptr<Problem> make_problem(const ProblemSpec& spec,
                                      std::uint64_t master_seed);

// --- serialization ---------------------------------------------------------

// Aggregate CSV: header "rule,step,mean_cost,stderr", one row per rule and
// step. Raw CSV: "rule,replication,step,cost" over completed replications.
std::string aggregate_csv(const ResultTable& table);
std::string raw_csv(const ResultTable& table);

// Run manifest: engine version, the full configuration, the seed
// derivation rule, and abort diagnostics. The config inside a manifest is
// sufficient to reproduce the aggregate CSV byte for byte on the same
// build.
std::string manifest_json(const ExperimentConfig& config,
                          const ResultTable& table);

// Accepts either a bare config object or a full manifest (uses its
// "config" member).
ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);

}  // namespace rs

#endif  // RSENGINE_HARNESS_HPP
