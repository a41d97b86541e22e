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

#include "rsengine.h"

#include <cstring>
#include <optional>
#include <string>

#include "csv.hpp"
#include "harness.hpp"
#include "kg.hpp"
#include "verify.hpp"

namespace {

thread_local std::string g_last_error;

rs_status status_from(rs::ErrorCode code) {
  using rs::ErrorCode;
  switch (code) {
    case ErrorCode::DimensionMismatch: return RS_ERR_DIMENSION_MISMATCH;
    case ErrorCode::NotPositiveDefinite: return RS_ERR_NOT_POSITIVE_DEFINITE;
    case ErrorCode::InvalidHyperparameter:
      return RS_ERR_INVALID_HYPERPARAMETER;
    case ErrorCode::TooFewPilotSamples: return RS_ERR_TOO_FEW_PILOT_SAMPLES;
    case ErrorCode::IndexOutOfRange: return RS_ERR_INDEX_OUT_OF_RANGE;
    case ErrorCode::RuleInputMismatch: return RS_ERR_RULE_INPUT_MISMATCH;
    case ErrorCode::UnsupportedRule: return RS_ERR_UNSUPPORTED_RULE;
    case ErrorCode::InvalidDof: return RS_ERR_INVALID_DOF;
    case ErrorCode::DegenerateWeights: return RS_ERR_DEGENERATE_WEIGHTS;
    case ErrorCode::InvalidRho: return RS_ERR_INVALID_RHO;
    case ErrorCode::DomainError: return RS_ERR_DOMAIN;
    case ErrorCode::EmptyTable: return RS_ERR_EMPTY_TABLE;
    case ErrorCode::InvalidArgument: return RS_ERR_INVALID_ARGUMENT;
    case ErrorCode::IoError: return RS_ERR_IO;
  }
  return RS_ERR_INTERNAL;
}

// Runs the body, captures exceptions into the thread-local error slot.
template <typename Fn>
rs_status guarded(Fn&& body) {
  try {
    return body();
  } catch (const rs::Error& e) {
    g_last_error = e.what();
    return status_from(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return RS_ERR_INTERNAL;
  }
}

rs_status require(bool condition, const char* message) {
  if (condition) return RS_OK;
  g_last_error = message;
  return RS_ERR_INVALID_ARGUMENT;
}

std::optional<rs::UpdateRule> to_rule(rs_rule rule) {
  switch (rule) {
    case RS_RULE_FULL: return rs::UpdateRule::FullConjugate;
    case RS_RULE_KL: return rs::UpdateRule::KL;
    case RS_RULE_MOMENT: return rs::UpdateRule::Moment;
    case RS_RULE_MOMENT_KL: return rs::UpdateRule::MomentKL;
  }
  return std::nullopt;
}

char* copy_string(const std::string& text) {
  char* out = new char[text.size() + 1];
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                               Eigen::RowMajor>>
map_matrix(const double* data, int rows, int cols) {
  return {data, rows, cols};
}

void export_matrix(const Eigen::MatrixXd& m, double* out) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out[i * m.cols() + j] = m(i, j);
    }
  }
}

}  // namespace

struct rs_belief {
  rs::BeliefState state;
};

struct rs_problem {
  std::unique_ptr<rs::Problem> impl;
};

struct rs_result {
  rs::ExperimentConfig config;
  rs::ResultTable table;
};

extern "C" {

const char* rs_version(void) { return "0.1.0"; }

const char* rs_last_error(void) { return g_last_error.c_str(); }

void rs_string_free(char* text) { delete[] text; }

rs_status rs_belief_create(int32_t k_count, const double* mean,
                           const double* scale, double kappa, double dof,
                           rs_belief** out) {
  if (auto s = require(out && mean && scale && k_count > 0,
                       "rs_belief_create: null argument"); s != RS_OK) {
    return s;
  }
  return guarded([&]() {
    Eigen::VectorXd theta =
        Eigen::Map<const Eigen::VectorXd>(mean, k_count);
    Eigen::MatrixXd b = map_matrix(scale, k_count, k_count);
    *out = new rs_belief{rs::new_belief(theta, b, kappa, dof)};
    return RS_OK;
  });
}

rs_status rs_belief_from_pilot(int32_t n_rows, int32_t k_count,
                               const double* pilot, double kappa0, double dof0,
                               double ridge, rs_belief** out) {
  if (auto s = require(out && pilot && n_rows > 0 && k_count > 0,
                       "rs_belief_from_pilot: null argument"); s != RS_OK) {
    return s;
  }
  return guarded([&]() {
    Eigen::MatrixXd rows = map_matrix(pilot, n_rows, k_count);
    const double resolved = dof0 > 0.0 ? dof0 : k_count + 4.0;
    *out = new rs_belief{rs::estimate_prior(rows, resolved, kappa0, ridge)};
    return RS_OK;
  });
}

rs_status rs_belief_clone(const rs_belief* belief, rs_belief** out) {
  if (auto s = require(belief && out, "rs_belief_clone: null argument");
      s != RS_OK) {
    return s;
  }
  *out = new rs_belief{belief->state};
  return RS_OK;
}

void rs_belief_free(rs_belief* belief) { delete belief; }

int32_t rs_belief_num_alternatives(const rs_belief* belief) {
  return belief ? belief->state.dim() : 0;
}

rs_status rs_belief_params(const rs_belief* belief, double* mean,
                           double* scale, double* kappa, double* dof) {
  if (auto s = require(belief != nullptr, "rs_belief_params: null belief");
      s != RS_OK) {
    return s;
  }
  const auto& state = belief->state;
  if (mean) {
    Eigen::Map<Eigen::VectorXd>(mean, state.dim()) = state.mean();
  }
  if (scale) export_matrix(state.scale(), scale);
  if (kappa) *kappa = state.kappa();
  if (dof) *dof = state.dof();
  return RS_OK;
}

rs_status rs_belief_posterior_covariance(const rs_belief* belief,
                                         double* covariance) {
  if (auto s = require(belief && covariance,
                       "rs_belief_posterior_covariance: null argument");
      s != RS_OK) {
    return s;
  }
  return guarded([&]() {
    export_matrix(rs::posterior_sigma_mean(belief->state), covariance);
    return RS_OK;
  });
}

rs_status rs_belief_observe_all(rs_belief* belief, const double* y) {
  if (auto s = require(belief && y, "rs_belief_observe_all: null argument");
      s != RS_OK) {
    return s;
  }
  return guarded([&]() {
    Eigen::VectorXd joint =
        Eigen::Map<const Eigen::VectorXd>(y, belief->state.dim());
    belief->state = rs::update_full(belief->state, joint);
    return RS_OK;
  });
}

rs_status rs_belief_observe_one(rs_belief* belief, rs_rule rule,
                                int32_t alternative, double y) {
  if (auto s = require(belief != nullptr,
                       "rs_belief_observe_one: null belief"); s != RS_OK) {
    return s;
  }
  const auto mapped = to_rule(rule);
  if (auto s = require(mapped.has_value(),
                       "rs_belief_observe_one: unknown rule"); s != RS_OK) {
    return s;
  }
  return guarded([&]() {
    belief->state = rs::apply_update(
        *mapped, belief->state, rs::SingleObservation{alternative, y});
    return RS_OK;
  });
}

rs_status rs_belief_value_of_information(const rs_belief* belief, rs_rule rule,
                                         double* v) {
  if (auto s = require(belief && v,
                       "rs_belief_value_of_information: null argument");
      s != RS_OK) {
    return s;
  }
  const auto mapped = to_rule(rule);
  if (auto s = require(mapped.has_value(),
                       "rs_belief_value_of_information: unknown rule");
      s != RS_OK) {
    return s;
  }
  return guarded([&]() {
    Eigen::Map<Eigen::VectorXd>(v, belief->state.dim()) =
        rs::value_of_information(belief->state, *mapped);
    return RS_OK;
  });
}

rs_status rs_belief_select(const rs_belief* belief, rs_rule rule,
                           int32_t* alternative) {
  if (auto s = require(belief && alternative,
                       "rs_belief_select: null argument"); s != RS_OK) {
    return s;
  }
  const auto mapped = to_rule(rule);
  if (auto s = require(mapped.has_value(), "rs_belief_select: unknown rule");
      s != RS_OK) {
    return s;
  }
  return guarded([&]() {
    *alternative = rs::select_alternative(belief->state, *mapped);
    return RS_OK;
  });
}

rs_status rs_problem_create_mvn(int32_t k_count, double rho, rs_problem** out) {
  if (auto s = require(out != nullptr, "rs_problem_create_mvn: null output");
      s != RS_OK) {
    return s;
  }
  return guarded([&]() {
    *out = new rs_problem{rs::make_mvn_problem(k_count, rho)};
    return RS_OK;
  });
}

rs_status rs_problem_create_borehole(int32_t x7_levels, int32_t design_runs,
                                     uint64_t design_seed, rs_problem** out) {
  if (auto s = require(out != nullptr,
                       "rs_problem_create_borehole: null output"); s != RS_OK) {
    return s;
  }
  return guarded([&]() {
    rs::Rng rng = rs::make_rng(design_seed, "problem", 0);
    *out = new rs_problem{rs::make_calibration_problem(
        rs::BoreholeConfig::standard(x7_levels, design_runs, rng))};
    return RS_OK;
  });
}

rs_status rs_problem_create_empirical(const char* csv_path, rs_problem** out) {
  if (auto s = require(out && csv_path,
                       "rs_problem_create_empirical: null argument");
      s != RS_OK) {
    return s;
  }
  return guarded([&]() {
    *out = new rs_problem{
        rs::make_empirical_problem(rs::load_empirical_csv(csv_path))};
    return RS_OK;
  });
}

void rs_problem_free(rs_problem* problem) { delete problem; }

int32_t rs_problem_num_alternatives(const rs_problem* problem) {
  return problem ? problem->impl->num_alternatives() : 0;
}

rs_status rs_problem_true_means(const rs_problem* problem, double* means) {
  if (auto s = require(problem && means,
                       "rs_problem_true_means: null argument"); s != RS_OK) {
    return s;
  }
  Eigen::Map<Eigen::VectorXd>(means, problem->impl->num_alternatives()) =
      problem->impl->true_means();
  return RS_OK;
}

int32_t rs_problem_has_true_covariance(const rs_problem* problem) {
  return problem && problem->impl->has_true_covariance() ? 1 : 0;
}

rs_status rs_problem_true_covariance(const rs_problem* problem,
                                     double* covariance) {
  if (auto s = require(problem && covariance,
                       "rs_problem_true_covariance: null argument");
      s != RS_OK) {
    return s;
  }
  return guarded([&]() {
    export_matrix(problem->impl->true_covariance(), covariance);
    return RS_OK;
  });
}

rs_status rs_experiment_run(const char* config_json, int32_t threads,
                            rs_result** out) {
  if (auto s = require(config_json && out,
                       "rs_experiment_run: null argument"); s != RS_OK) {
    return s;
  }
  return guarded([&]() {
    rs::ExperimentConfig config = rs::config_from_json(config_json);
    config.threads = threads;
    rs::reset_cancellation();
    rs::ResultTable table = rs::run_experiment(config);
    *out = new rs_result{std::move(config), std::move(table)};
    return RS_OK;
  });
}

rs_status rs_result_aggregate_csv(const rs_result* result, char** out) {
  if (auto s = require(result && out,
                       "rs_result_aggregate_csv: null argument"); s != RS_OK) {
    return s;
  }
  return guarded([&]() {
    *out = copy_string(rs::aggregate_csv(result->table));
    return RS_OK;
  });
}

rs_status rs_result_raw_csv(const rs_result* result, char** out) {
  if (auto s = require(result && out, "rs_result_raw_csv: null argument");
      s != RS_OK) {
    return s;
  }
  return guarded([&]() {
    *out = copy_string(rs::raw_csv(result->table));
    return RS_OK;
  });
}

rs_status rs_result_manifest_json(const rs_result* result, char** out) {
  if (auto s = require(result && out,
                       "rs_result_manifest_json: null argument"); s != RS_OK) {
    return s;
  }
  return guarded([&]() {
    *out = copy_string(rs::manifest_json(result->config, result->table));
    return RS_OK;
  });
}

int32_t rs_result_aborted_replications(const rs_result* result) {
  if (!result) return 0;
  int32_t total = 0;
  for (const auto& rule : result->table.per_rule) total += rule.aborted;
  return total;
}

int32_t rs_result_interrupted(const rs_result* result) {
  return result && result->table.interrupted ? 1 : 0;
}

void rs_result_free(rs_result* result) { delete result; }

void rs_experiment_cancel(void) { rs::request_cancellation(); }

rs_status rs_verify(uint64_t draws, uint64_t seed, char** report,
                    int32_t* failed_checks) {
  if (auto s = require(report || failed_checks, "rs_verify: null outputs");
      s != RS_OK) {
    return s;
  }
  return guarded([&]() {
    const auto checks = rs::run_verification(draws, seed);
    if (report) *report = copy_string(rs::format_report(checks));
    if (failed_checks) {
      int32_t failed = 0;
      for (const auto& check : checks) {
        if (!check.passed) ++failed;
      }
      *failed_checks = failed;
    }
    return RS_OK;
  });
}

}  // extern "C"
