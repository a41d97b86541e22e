/* Copyright 2026 the rsengine authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the rsengine shared library: sequential Bayesian ranking
 * and selection under a normal-inverse-Wishart belief with unknown
 * correlations.
 *
 * Conventions:
 *   - every fallible call returns rs_status; RS_OK is 0;
 *   - on failure, rs_last_error() returns a thread-local message describing
 *     the most recent failing call on this thread;
 *   - matrices cross the boundary as dense row-major double arrays;
 *   - alternatives are indexed 0..K-1;
 *   - char* outputs are owned by the caller and released with
 *     rs_string_free().
 */

#ifndef RSENGINE_H
#define RSENGINE_H

#include <stdint.h>

#if defined(_WIN32)
#define RSENGINE_API __declspec(dllexport)
#else
#define RSENGINE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rs_status {
  RS_OK = 0,
  RS_ERR_DIMENSION_MISMATCH = 1,
  RS_ERR_NOT_POSITIVE_DEFINITE = 2,
  RS_ERR_INVALID_HYPERPARAMETER = 3,
  RS_ERR_TOO_FEW_PILOT_SAMPLES = 4,
  RS_ERR_INDEX_OUT_OF_RANGE = 5,
  RS_ERR_RULE_INPUT_MISMATCH = 6,
  RS_ERR_UNSUPPORTED_RULE = 7,
  RS_ERR_INVALID_DOF = 8,
  RS_ERR_DEGENERATE_WEIGHTS = 9,
  RS_ERR_INVALID_RHO = 10,
  RS_ERR_DOMAIN = 11,
  RS_ERR_EMPTY_TABLE = 12,
  RS_ERR_INVALID_ARGUMENT = 13,
  RS_ERR_IO = 14,
  RS_ERR_INTERNAL = 15
} rs_status;

/* How a single-alternative measurement is folded into the belief.
 * RS_RULE_FULL is the exact conjugate baseline and consumes joint
 * measurements of all alternatives instead. */
typedef enum rs_rule {
  RS_RULE_FULL = 0,
  RS_RULE_KL = 1,
  RS_RULE_MOMENT = 2,
  RS_RULE_MOMENT_KL = 3
} rs_rule;

typedef struct rs_belief rs_belief;
typedef struct rs_problem rs_problem;
typedef struct rs_result rs_result;

RSENGINE_API const char* rs_version(void);

/* Message for the most recent failing call on the calling thread; empty
 * string if none. The pointer stays valid until the next failing call. */
RSENGINE_API const char* rs_last_error(void);

RSENGINE_API void rs_string_free(char* text);

/* --- belief state -------------------------------------------------------- */

/* mean: K doubles; scale: K*K row-major, symmetric positive definite;
 * kappa > 0; dof > K + 1. */
RSENGINE_API rs_status rs_belief_create(int32_t k_count, const double* mean,
                                        const double* scale, double kappa,
                                        double dof, rs_belief** out);

/* Estimate a prior from pilot joint observations (n_rows x k_count,
 * row-major, one joint sample per row). dof0 <= 0 selects the default
 * K + 4. */
RSENGINE_API rs_status rs_belief_from_pilot(int32_t n_rows, int32_t k_count,
                                            const double* pilot, double kappa0,
                                            double dof0, double ridge,
                                            rs_belief** out);

RSENGINE_API rs_status rs_belief_clone(const rs_belief* belief,
                                       rs_belief** out);
RSENGINE_API void rs_belief_free(rs_belief* belief);

RSENGINE_API int32_t rs_belief_num_alternatives(const rs_belief* belief);

/* Any output pointer may be NULL to skip that field. */
RSENGINE_API rs_status rs_belief_params(const rs_belief* belief, double* mean,
                                        double* scale, double* kappa,
                                        double* dof);

/* Posterior mean of the sampling covariance: scale / (dof - K - 1). */
RSENGINE_API rs_status rs_belief_posterior_covariance(const rs_belief* belief,
                                                      double* covariance);

/* Exact conjugate update with a joint measurement of all K alternatives. */
RSENGINE_API rs_status rs_belief_observe_all(rs_belief* belief,
                                             const double* y);

/* Approximate-conjugacy update with one measurement of one alternative.
 * rule must be RS_RULE_KL, RS_RULE_MOMENT or RS_RULE_MOMENT_KL. */
RSENGINE_API rs_status rs_belief_observe_one(rs_belief* belief, rs_rule rule,
                                             int32_t alternative, double y);

/* Knowledge-gradient value of information per alternative (K doubles). */
RSENGINE_API rs_status rs_belief_value_of_information(const rs_belief* belief,
                                                      rs_rule rule, double* v);

/* Alternative with the largest value of information (ties: smallest index). */
RSENGINE_API rs_status rs_belief_select(const rs_belief* belief, rs_rule rule,
                                        int32_t* alternative);

/* --- sampling problems ---------------------------------------------------- */

RSENGINE_API rs_status rs_problem_create_mvn(int32_t k_count, double rho,
                                             rs_problem** out);

/* Borehole calibration over the x6 x x7 level grid; x7_levels is 10 or 17.
 * The Latin hypercube control design is drawn from design_seed. */
RSENGINE_API rs_status rs_problem_create_borehole(int32_t x7_levels,
                                                  int32_t design_runs,
                                                  uint64_t design_seed,
                                                  rs_problem** out);

/* Bootstrap resampling of a CSV table: header row of labels, then one
 * joint observation per row. */
RSENGINE_API rs_status rs_problem_create_empirical(const char* csv_path,
                                                   rs_problem** out);

RSENGINE_API void rs_problem_free(rs_problem* problem);

RSENGINE_API int32_t rs_problem_num_alternatives(const rs_problem* problem);
RSENGINE_API rs_status rs_problem_true_means(const rs_problem* problem,
                                             double* means);

/* 1 if the sampling covariance is known in closed form (mvn only). */
RSENGINE_API int32_t rs_problem_has_true_covariance(const rs_problem* problem);
RSENGINE_API rs_status rs_problem_true_covariance(const rs_problem* problem,
                                                  double* covariance);

/* --- experiments ----------------------------------------------------------
 *
 * config_json is either a bare configuration object or a full run manifest
 * (its "config" member is used), e.g.:
 *
 *   {
 *     "problem": {"type": "mvn", "k": 9, "rho": 0.5},
 *     "rules": ["kl", "moment", "moment-kl"],
 *     "steps": 1000,
 *     "replications": 100,
 *     "pilot_count": 25,
 *     "kappa0": 1.0,
 *     "dof0": null,
 *     "ridge": 1e-6,
 *     "master_seed": 7
 *   }
 *
 * Replications run in parallel on `threads` threads (0 = all cores); the
 * thread count never changes the numbers.
 */
RSENGINE_API rs_status rs_experiment_run(const char* config_json,
                                         int32_t threads, rs_result** out);

/* Aggregate CSV: "rule,step,mean_cost,stderr". */
RSENGINE_API rs_status rs_result_aggregate_csv(const rs_result* result,
                                               char** out);

/* Raw CSV over completed replications: "rule,replication,step,cost". */
RSENGINE_API rs_status rs_result_raw_csv(const rs_result* result, char** out);

/* Run manifest JSON (version, config, seed derivation, diagnostics). */
RSENGINE_API rs_status rs_result_manifest_json(const rs_result* result,
                                               char** out);

/* Replications aborted on a NotPositiveDefinite update, summed over rules;
 * they are excluded from the aggregate means. */
RSENGINE_API int32_t rs_result_aborted_replications(const rs_result* result);

/* 1 if the run stopped early on a cancellation request; aggregates then
 * cover only the replications that finished. */
RSENGINE_API int32_t rs_result_interrupted(const rs_result* result);

RSENGINE_API void rs_result_free(rs_result* result);

/* Ask running experiments to stop after the replications currently in
 * flight. Async-signal-safe (sets a lock-free flag), so it may be called
 * from a SIGINT handler. The flag is cleared when the next experiment
 * starts. */
RSENGINE_API void rs_experiment_cancel(void);

/* --- verification ----------------------------------------------------------
 *
 * Monte Carlo checks of the closed-form updates against the exact
 * posterior. Writes a human-readable report (one PASS/FAIL line per check)
 * and the number of failed checks. */
RSENGINE_API rs_status rs_verify(uint64_t draws, uint64_t seed, char** report,
                                 int32_t* failed_checks);

#ifdef __cplusplus
}
#endif

#endif /* RSENGINE_H */
