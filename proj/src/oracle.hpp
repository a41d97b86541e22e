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

#ifndef RSENGINE_ORACLE_HPP
#define RSENGINE_ORACLE_HPP

#include <Eigen/Dense>

#include "belief.hpp"
#include "rng.hpp"
#include "updates.hpp"

// Monte Carlo oracles that check the closed-form single-observation updates
// against the exact posterior, independently of the update code paths. They
// are verification tools, not part of the sequential loop.

namespace rs {

// Decomposition of the conditional covariance factor after observing one
// alternative: pivot c, direction a (cross / pivot), cross a_tilde = c * a,
// and the Schur block A. A and c are independent; a is normal given A.
struct OracleDecomposition {
  Eigen::MatrixXd schur_block;     // A, (K-1) x (K-1), PD
  Eigen::VectorXd direction;      // a
  Eigen::VectorXd cross;          // a_tilde = c * a
  double pivot = 0.0;             // c > 0
};

struct MomentEstimate {
  Eigen::VectorXd mean;
  Eigen::VectorXd se_mean;
  Eigen::MatrixXd scale;
  Eigen::MatrixXd se_scale;
  double effective_sample_size = 0.0;  // importance sampling only
};

// Streaming per-entry mean and standard error of matrix-valued draws.
class RunningStats {
 public:
  RunningStats(int rows, int cols)
      : mean_(Eigen::MatrixXd::Zero(rows, cols)),
        m2_(Eigen::MatrixXd::Zero(rows, cols)) {}

  void add(const Eigen::MatrixXd& sample) {
    ++count_;
    const Eigen::MatrixXd delta = sample - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta.cwiseProduct(sample - mean_);
  }

  long count() const { return count_; }
  const Eigen::MatrixXd& mean() const { return mean_; }

  Eigen::MatrixXd standard_error() const {
    const double n = static_cast<double>(count_);
    return (m2_ / (n * (n - 1.0))).cwiseSqrt();
  }

 private:
  Eigen::MatrixXd mean_;
  Eigen::MatrixXd m2_;
  long count_ = 0;
};

// Wishart / inverse-Wishart draws via the Bartlett factorization. dof may be
// fractional; dimension must not exceed what keeps every chi-square dof
// positive.
Eigen::MatrixXd sample_wishart(double dof, const Eigen::MatrixXd& scale,
                               Rng& rng);
Eigen::MatrixXd sample_inverse_wishart(double dof, const Eigen::MatrixXd& scale,
                                       Rng& rng);
Eigen::VectorXd sample_mvn(const Eigen::VectorXd& mean,
                           const Eigen::MatrixXd& cov, Rng& rng);

// One joint draw of (A, a, a_tilde, c) from the exact single-observation
// posterior of the conditional covariance factor.
OracleDecomposition sample_decomposition(const BeliefState& state,
                                         const SingleObservation& obs,
                                         Rng& rng);

// Monte Carlo E[conditional covariance factor | observation] with
// per-entry standard errors; checks scale' / (dof' - K - 1) of the moment
// update. Needs n_draws >= 1000.
MomentEstimate oracle_tilde_sigma_mean(const BeliefState& state,
                                       const SingleObservation& obs,
                                       int n_draws, Rng& rng);

// Self-normalized importance sampling for E[mu | observation] with prior
// proposals weighted by the single-coordinate likelihood. Raises
// DegenerateWeights when the effective sample size drops below 50.
MomentEstimate oracle_posterior_mean(const BeliefState& state,
                                     const SingleObservation& obs,
                                     int n_draws, Rng& rng);

// The decomposed KL divergence (up to its additive constant) between the
// exact conditional-covariance posterior and the inverse-Wishart with the
// candidate scale. Only differences between candidates are meaningful; the
// hybrid update's scale minimizes this.
double dkl_objective(const Eigen::MatrixXd& candidate, const BeliefState& state,
                     const SingleObservation& obs);

}  // namespace rs

#endif  // RSENGINE_ORACLE_HPP
