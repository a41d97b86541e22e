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

// Exercises the shared-library surface exactly as an external consumer
// would: through rsengine.h only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "rsengine.h"

namespace {

struct OwnedString {
  char* data = nullptr;
  ~OwnedString() { rs_string_free(data); }
  std::string str() const { return data ? std::string(data) : std::string(); }
};

const char* kSmallConfig = R"({
  "problem": {"type": "mvn", "k": 4, "rho": 0.5},
  "rules": ["moment", "kl"],
  "steps": 15,
  "replications": 4,
  "pilot_count": 8,
  "kappa0": 1.0,
  "dof0": null,
  "ridge": 1e-6,
  "master_seed": 21
})";

}  // namespace

TEST_CASE("version and error reporting") {
  CHECK(std::string(rs_version()) == "0.1.0");
  rs_belief* belief = nullptr;
  CHECK(rs_belief_create(2, nullptr, nullptr, 1.0, 5.0, &belief) ==
        RS_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(rs_last_error()) > 0);
}

TEST_CASE("belief lifecycle over the C boundary") {
  const double mean[2] = {0.0, 0.0};
  const double scale[4] = {1.0, 0.0, 0.0, 1.0};
  rs_belief* belief = nullptr;
  REQUIRE(rs_belief_create(2, mean, scale, 1.0, 5.0, &belief) == RS_OK);
  CHECK(rs_belief_num_alternatives(belief) == 2);

  SUBCASE("single observation via the moment rule") {
    REQUIRE(rs_belief_observe_one(belief, RS_RULE_MOMENT, 0, 1.0) == RS_OK);
    double out_mean[2];
    double out_scale[4];
    double kappa = 0.0, dof = 0.0;
    REQUIRE(rs_belief_params(belief, out_mean, out_scale, &kappa, &dof) ==
            RS_OK);
    CHECK(out_mean[0] == doctest::Approx(0.5));
    CHECK(out_mean[1] == doctest::Approx(0.0));
    CHECK(out_scale[0] == doctest::Approx(0.9375));
    CHECK(out_scale[3] == doctest::Approx(1.5625));
    CHECK(kappa == doctest::Approx(1.5));
    CHECK(dof == doctest::Approx(5.5));
  }

  SUBCASE("joint observation and posterior covariance") {
    const double y[2] = {1.0, 1.0};
    REQUIRE(rs_belief_observe_all(belief, y) == RS_OK);
    double cov[4];
    REQUIRE(rs_belief_posterior_covariance(belief, cov) == RS_OK);
    // scale = [[1.5, .5], [.5, 1.5]], dof 6 -> divide by 3.
    CHECK(cov[0] == doctest::Approx(0.5));
    CHECK(cov[1] == doctest::Approx(0.5 / 3.0));
  }

  SUBCASE("value of information and selection") {
    double v[2];
    REQUIRE(rs_belief_value_of_information(belief, RS_RULE_MOMENT, v) ==
            RS_OK);
    CHECK(v[0] >= -1e-10);
    CHECK(v[1] >= -1e-10);
    int32_t pick = -1;
    REQUIRE(rs_belief_select(belief, RS_RULE_KL, &pick) == RS_OK);
    CHECK(pick >= 0);
    CHECK(pick < 2);
  }

  SUBCASE("clone is independent") {
    rs_belief* copy = nullptr;
    REQUIRE(rs_belief_clone(belief, &copy) == RS_OK);
    REQUIRE(rs_belief_observe_one(copy, RS_RULE_KL, 1, 2.0) == RS_OK);
    double kappa_orig = 0.0, kappa_copy = 0.0;
    rs_belief_params(belief, nullptr, nullptr, &kappa_orig, nullptr);
    rs_belief_params(copy, nullptr, nullptr, &kappa_copy, nullptr);
    CHECK(kappa_orig == doctest::Approx(1.0));
    CHECK(kappa_copy == doctest::Approx(1.5));
    rs_belief_free(copy);
  }

  SUBCASE("contract violations map to status codes") {
    CHECK(rs_belief_observe_one(belief, RS_RULE_FULL, 0, 1.0) ==
          RS_ERR_RULE_INPUT_MISMATCH);
    CHECK(rs_belief_observe_one(belief, RS_RULE_MOMENT, 7, 1.0) ==
          RS_ERR_INDEX_OUT_OF_RANGE);
    int32_t pick = -1;
    CHECK(rs_belief_select(belief, RS_RULE_FULL, &pick) ==
          RS_ERR_UNSUPPORTED_RULE);
  }

  rs_belief_free(belief);
}

TEST_CASE("belief construction failures") {
  const double mean[2] = {0.0, 0.0};
  const double indefinite[4] = {1.0, 2.0, 2.0, 1.0};
  rs_belief* belief = nullptr;
  CHECK(rs_belief_create(2, mean, indefinite, 1.0, 5.0, &belief) ==
        RS_ERR_NOT_POSITIVE_DEFINITE);
  const double eye[4] = {1.0, 0.0, 0.0, 1.0};
  CHECK(rs_belief_create(2, mean, eye, -1.0, 5.0, &belief) ==
        RS_ERR_INVALID_HYPERPARAMETER);

  const double pilot[2] = {1.0, 2.0};  // a single row is not enough
  CHECK(rs_belief_from_pilot(1, 2, pilot, 1.0, 0.0, 1e-6, &belief) ==
        RS_ERR_TOO_FEW_PILOT_SAMPLES);
}

TEST_CASE("pilot estimation through the C API uses the K+4 default dof") {
  const double pilot[8] = {0, 0, 2, 0, 0, 2, 2, 2};
  rs_belief* belief = nullptr;
  REQUIRE(rs_belief_from_pilot(4, 2, pilot, 1.0, 0.0, 0.0, &belief) == RS_OK);
  double dof = 0.0;
  double scale[4];
  REQUIRE(rs_belief_params(belief, nullptr, scale, nullptr, &dof) == RS_OK);
  CHECK(dof == doctest::Approx(6.0));
  CHECK(scale[0] == doctest::Approx(4.0));  // (dof0-K-1) * unbiased variance
  rs_belief_free(belief);
}

TEST_CASE("problems over the C boundary") {
  rs_problem* problem = nullptr;
  REQUIRE(rs_problem_create_mvn(3, 0.5, &problem) == RS_OK);
  CHECK(rs_problem_num_alternatives(problem) == 3);
  double means[3];
  REQUIRE(rs_problem_true_means(problem, means) == RS_OK);
  CHECK(means[2] == doctest::Approx(1.0));
  CHECK(rs_problem_has_true_covariance(problem) == 1);
  double cov[9];
  REQUIRE(rs_problem_true_covariance(problem, cov) == RS_OK);
  CHECK(cov[1] == doctest::Approx(-0.5));
  rs_problem_free(problem);

  CHECK(rs_problem_create_mvn(3, 1.5, &problem) == RS_ERR_INVALID_RHO);

  rs_problem* borehole = nullptr;
  REQUIRE(rs_problem_create_borehole(10, 8, 7, &borehole) == RS_OK);
  CHECK(rs_problem_num_alternatives(borehole) == 30);
  CHECK(rs_problem_has_true_covariance(borehole) == 0);
  rs_problem_free(borehole);

  const std::string path = "capi_empirical.csv";
  {
    std::ofstream out(path);
    out << "a,b\n0,1\n2,3\n";
  }
  rs_problem* empirical = nullptr;
  REQUIRE(rs_problem_create_empirical(path.c_str(), &empirical) == RS_OK);
  double emp_means[2];
  REQUIRE(rs_problem_true_means(empirical, emp_means) == RS_OK);
  CHECK(emp_means[0] == doctest::Approx(1.0));
  rs_problem_free(empirical);
  std::remove(path.c_str());

  CHECK(rs_problem_create_empirical("missing.csv", &empirical) == RS_ERR_IO);
}

TEST_CASE("experiments run end to end and reproduce bytes") {
  rs_result* result = nullptr;
  REQUIRE(rs_experiment_run(kSmallConfig, 2, &result) == RS_OK);
  OwnedString aggregate;
  REQUIRE(rs_result_aggregate_csv(result, &aggregate.data) == RS_OK);
  CHECK(aggregate.str().rfind("rule,step,mean_cost,stderr\n", 0) == 0);
  OwnedString raw;
  REQUIRE(rs_result_raw_csv(result, &raw.data) == RS_OK);
  CHECK(raw.str().rfind("rule,replication,step,cost\n", 0) == 0);
  OwnedString manifest;
  REQUIRE(rs_result_manifest_json(result, &manifest.data) == RS_OK);
  CHECK(manifest.str().find("\"seed_derivation\"") != std::string::npos);
  CHECK(rs_result_aborted_replications(result) == 0);

  // The manifest feeds back as configuration and reproduces the bytes.
  rs_result* rerun = nullptr;
  REQUIRE(rs_experiment_run(manifest.str().c_str(), 1, &rerun) == RS_OK);
  OwnedString again;
  REQUIRE(rs_result_aggregate_csv(rerun, &again.data) == RS_OK);
  CHECK(again.str() == aggregate.str());
  rs_result_free(rerun);
  rs_result_free(result);

  CHECK(rs_experiment_run("{oops", 1, &result) == RS_ERR_IO);
  CHECK(rs_experiment_run(nullptr, 1, &result) == RS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("a concurrent cancel stops a long run and keeps partial results") {
  const char* big_config = R"({
    "problem": {"type": "mvn", "k": 8, "rho": 0.5},
    "rules": ["moment"],
    "steps": 400,
    "replications": 400,
    "pilot_count": 10,
    "master_seed": 5
  })";
  std::thread canceller([] {
    std::this_thread::sleep_for(std::chrono::milliseconds(200));
    rs_experiment_cancel();
  });
  rs_result* result = nullptr;
  REQUIRE(rs_experiment_run(big_config, 1, &result) == RS_OK);
  canceller.join();
  CHECK(rs_result_interrupted(result) == 1);
  OwnedString manifest;
  REQUIRE(rs_result_manifest_json(result, &manifest.data) == RS_OK);
  CHECK(manifest.str().find("\"interrupted\": true") != std::string::npos);
  rs_result_free(result);
}

TEST_CASE("verification suite through the C API") {
  OwnedString report;
  int32_t failed = -1;
  REQUIRE(rs_verify(5000, 1, &report.data, &failed) == RS_OK);
  CHECK(failed == 0);
  CHECK(report.str().find("PASS") != std::string::npos);
  CHECK(rs_verify(10, 1, &report.data, &failed) == RS_ERR_INVALID_ARGUMENT);
}
