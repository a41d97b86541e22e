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

#include <doctest.h>

#include <functional>

#include "belief.hpp"
#include "verify.hpp"

using rs::BeliefState;
using rs::Error;
using rs::ErrorCode;

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

bool fails_with(ErrorCode code, const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace

TEST_CASE("new_belief validates its inputs") {
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(2, 2);
  const BeliefState state = rs::new_belief(vec2(0, 0), eye, 1.0, 5.0);
  CHECK(state.dim() == 2);
  CHECK(state.kappa() == 1.0);
  CHECK(state.dof() == 5.0);

  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1, 2, 2, 1;  // eigenvalues 3 and -1
  CHECK(fails_with(ErrorCode::NotPositiveDefinite, [&] {
    rs::new_belief(vec2(0, 0), indefinite, 1.0, 5.0);
  }));

  // dof at the K+1 boundary is rejected.
  CHECK(fails_with(ErrorCode::InvalidHyperparameter, [&] {
    rs::new_belief(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3),
                   1.0, 4.0);
  }));
  CHECK(fails_with(ErrorCode::InvalidHyperparameter, [&] {
    rs::new_belief(vec2(0, 0), eye, 0.0, 5.0);
  }));
  CHECK(fails_with(ErrorCode::DimensionMismatch, [&] {
    rs::new_belief(Eigen::VectorXd::Zero(3), eye, 1.0, 5.0);
  }));
  // A single alternative is not a selection problem.
  CHECK(fails_with(ErrorCode::DimensionMismatch, [&] {
    rs::new_belief(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1),
                   1.0, 5.0);
  }));

  Eigen::MatrixXd asymmetric(2, 2);
  asymmetric << 1, 0.5, 0.2, 1;
  CHECK(fails_with(ErrorCode::NotPositiveDefinite, [&] {
    rs::new_belief(vec2(0, 0), asymmetric, 1.0, 5.0);
  }));
}

TEST_CASE("estimate_prior reproduces the sample moments") {
  Eigen::MatrixXd pilot(4, 2);
  pilot << 0, 0, 2, 0, 0, 2, 2, 2;
  const BeliefState state = rs::estimate_prior(pilot, 6.0, 1.0, 0.0);
  CHECK(state.mean()[0] == doctest::Approx(1.0));
  CHECK(state.mean()[1] == doctest::Approx(1.0));
  // Unbiased covariance is (4/3) I, scaled by dof0 - K - 1 = 3.
  CHECK(state.scale()(0, 0) == doctest::Approx(4.0));
  CHECK(state.scale()(1, 1) == doctest::Approx(4.0));
  CHECK(state.scale()(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("estimate_prior ridge rescues a degenerate pilot") {
  Eigen::MatrixXd pilot(2, 2);
  pilot << 1, 2, 1, 2;  // identical rows, zero covariance
  const BeliefState state = rs::estimate_prior(pilot, 6.0, 1.0, 1.0e-6);
  CHECK(state.mean()[0] == doctest::Approx(1.0));
  CHECK(state.mean()[1] == doctest::Approx(2.0));
  // lambda bottoms out at ridge * 1e-8.
  CHECK(state.scale()(0, 0) == doctest::Approx(3.0e-14));
}

TEST_CASE("estimate_prior rejects a single pilot row") {
  Eigen::MatrixXd pilot(1, 2);
  pilot << 1, 2;
  CHECK(fails_with(ErrorCode::TooFewPilotSamples,
                   [&] { rs::estimate_prior(pilot, 6.0, 1.0, 1.0e-6); }));
}

TEST_CASE("estimate_prior with positive ridge never fails on constant columns") {
  rs::Rng rng(123);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXd pilot(3, 4);
    for (int i = 0; i < pilot.rows(); ++i) {
      for (int j = 0; j < pilot.cols(); ++j) pilot(i, j) = normal(rng);
    }
    pilot.col(trial % 4).setConstant(2.5);  // one degenerate column
    CHECK_NOTHROW(rs::estimate_prior(pilot, 9.0, 1.0, 1.0e-6));
  }
}

TEST_CASE("update_full matches the hand-worked example") {
  const BeliefState state =
      rs::new_belief(vec2(0, 0), Eigen::MatrixXd::Identity(2, 2), 1.0, 5.0);

  SUBCASE("observing the current mean leaves mean and scale fixed") {
    const BeliefState next = rs::update_full(state, vec2(0, 0));
    CHECK(next.kappa() == doctest::Approx(2.0));
    CHECK(next.dof() == doctest::Approx(6.0));
    CHECK(next.mean().isZero(1e-15));
    CHECK(next.scale().isApprox(Eigen::MatrixXd::Identity(2, 2), 1e-15));
  }

  SUBCASE("a displaced observation adds the rank-one term") {
    const BeliefState next = rs::update_full(state, vec2(1, 1));
    CHECK(next.mean()[0] == doctest::Approx(0.5));
    CHECK(next.mean()[1] == doctest::Approx(0.5));
    CHECK(next.scale()(0, 0) == doctest::Approx(1.5));
    CHECK(next.scale()(0, 1) == doctest::Approx(0.5));
    CHECK(next.scale()(1, 1) == doctest::Approx(1.5));
  }

  SUBCASE("wrong-length observation is rejected") {
    CHECK(fails_with(ErrorCode::DimensionMismatch,
                     [&] { rs::update_full(state, Eigen::VectorXd::Zero(3)); }));
  }
}

TEST_CASE("update_full keeps states valid and increments counts by one") {
  rs::Rng rng(7);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const BeliefState state = rs::random_belief_state(3, rng);
    Eigen::VectorXd y(3);
    for (int i = 0; i < 3; ++i) y[i] = state.mean()[i] + 5.0 * normal(rng);
    const BeliefState next = rs::update_full(state, y);  // validates inside
    CHECK(next.kappa() == doctest::Approx(state.kappa() + 1.0));
    CHECK(next.dof() == doctest::Approx(state.dof() + 1.0));
    const Eigen::MatrixXd increment = next.scale() - state.scale();
    // Rank <= 1 and PSD: the second singular value vanishes.
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(increment);
    CHECK(svd.singularValues()[1] <=
          1e-10 * std::max(1.0, svd.singularValues()[0]));
    const Eigen::VectorXd r = state.mean() - y;
    CHECK(increment.isApprox(
        (state.kappa() / (state.kappa() + 1.0)) * r * r.transpose(), 1e-10));
  }
}

TEST_CASE("update_full satisfies the matrix-determinant identity") {
  rs::Rng rng(11);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const BeliefState state = rs::random_belief_state(3, rng);
    Eigen::VectorXd y(3);
    for (int i = 0; i < 3; ++i) y[i] = state.mean()[i] + 2.0 * normal(rng);
    const BeliefState next = rs::update_full(state, y);
    const Eigen::VectorXd r = state.mean() - y;
    const double q = state.kappa();
    const double predicted =
        state.scale().determinant() *
        (1.0 + (q / (q + 1.0)) *
                   r.dot(state.scale().llt().solve(r)));
    CHECK(next.scale().determinant() ==
          doctest::Approx(predicted).epsilon(1e-8));
  }
}

TEST_CASE("posterior_sigma_mean divides by dof - K - 1") {
  const BeliefState a =
      rs::new_belief(vec2(0, 0), Eigen::MatrixXd::Identity(2, 2), 1.0, 5.0);
  CHECK(rs::posterior_sigma_mean(a).isApprox(
      0.5 * Eigen::MatrixXd::Identity(2, 2), 1e-15));
  const BeliefState b = rs::new_belief(
      vec2(0, 0), 3.0 * Eigen::MatrixXd::Identity(2, 2), 1.0, 6.0);
  CHECK(rs::posterior_sigma_mean(b).isApprox(
      Eigen::MatrixXd::Identity(2, 2), 1e-15));

  rs::Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const BeliefState state = rs::random_belief_state(4, rng);
    const Eigen::MatrixXd sigma = rs::posterior_sigma_mean(state);
    CHECK(sigma.isApprox(sigma.transpose(), 1e-12));
    CHECK(Eigen::LLT<Eigen::MatrixXd>(sigma).info() == Eigen::Success);
  }
}

TEST_CASE("partition splits pivot, cross and Schur blocks") {
  SUBCASE("identity") {
    const rs::BlockPartition p =
        rs::partition(Eigen::MatrixXd::Identity(3, 3), 1);
    CHECK(p.pivot == doctest::Approx(1.0));
    CHECK(p.cross.isZero(0.0));
    CHECK(p.schur.isApprox(Eigen::MatrixXd::Identity(2, 2), 1e-15));
  }
  SUBCASE("worked 2x2") {
    Eigen::MatrixXd m(2, 2);
    m << 2, 1, 1, 2;
    const rs::BlockPartition p = rs::partition(m, 0);
    CHECK(p.pivot == doctest::Approx(2.0));
    CHECK(p.cross[0] == doctest::Approx(1.0));
    CHECK(p.schur(0, 0) == doctest::Approx(1.5));
  }
  SUBCASE("out of range") {
    CHECK(fails_with(ErrorCode::IndexOutOfRange, [&] {
      rs::partition(Eigen::MatrixXd::Identity(3, 3), 3);
    }));
  }
  SUBCASE("Schur block of a PD matrix is PD and reconstruction is exact") {
    rs::Rng rng(19);
    for (int trial = 0; trial < 50; ++trial) {
      const BeliefState state = rs::random_belief_state(4, rng);
      const int k = trial % 4;
      const rs::BlockPartition p = rs::partition(state.scale(), k);
      CHECK(Eigen::LLT<Eigen::MatrixXd>(p.schur).info() == Eigen::Success);
      // rest = schur + cross cross^T / pivot must reproduce the block.
      const Eigen::MatrixXd rebuilt = rs::detail::assemble_blocks(
          p.pivot, p.cross,
          p.schur + p.cross * p.cross.transpose() / p.pivot, k);
      CHECK((rebuilt - state.scale()).cwiseAbs().maxCoeff() <=
            1e-12 * state.scale().cwiseAbs().maxCoeff());
    }
  }
}
