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

#ifndef RSENGINE_BELIEF_HPP
#define RSENGINE_BELIEF_HPP

#include <Eigen/Dense>

#include "errors.hpp"

namespace rs {

// Normal-inverse-Wishart belief over the mean vector and covariance of K
// alternatives. The conditional belief about the means is
// N(mean, scale_factor) with scale_factor = scale / (kappa * (dof - K - 1))
// in expectation; the covariance itself is inverse-Wishart with the given
// scale matrix and degrees of freedom.
//
// Invariants (validated on every construction):
//   - scale symmetric within 1e-10 relative to its largest entry, then
//     stored exactly symmetrized;
//   - scale positive definite (Cholesky succeeds);
//   - kappa > 0 and dof > K + 1, so the posterior covariance mean exists
//     and every update denominator (dof-K, dof-K-1, dof-K+1) stays positive;
//   - K >= 2.
//
// Immutable after construction; updates return new values. Alternatives are
// indexed 0..K-1 in code (the literature counts 1..K).
class BeliefState {
 public:
  BeliefState(Eigen::VectorXd mean, Eigen::MatrixXd scale, double kappa,
              double dof);

  int dim() const noexcept { return static_cast<int>(mean_.size()); }
  double kappa() const noexcept { return kappa_; }
  double dof() const noexcept { return dof_; }
  const Eigen::VectorXd& mean() const noexcept { return mean_; }
  const Eigen::MatrixXd& scale() const noexcept { return scale_; }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd scale_;
  double kappa_ = 0.0;
  double dof_ = 0.0;
};

// Pivot/cross/Schur split of a symmetric PD matrix at index k:
//   pivot = M(k,k), cross = M(-k,k),
//   schur = M(-k,-k) - cross * cross^T / pivot.
struct BlockPartition {
  double pivot = 0.0;
  Eigen::VectorXd cross;
  Eigen::MatrixXd schur;
};

BeliefState new_belief(const Eigen::VectorXd& mean,
                       const Eigen::MatrixXd& scale, double kappa, double dof);

// Prior estimation from pilot rows (one joint observation per row): mean =
// column means, scale = (dof0 - K - 1) * (S + lambda*I) with S the unbiased
// sample covariance and lambda = ridge * max(trace(S)/K, 1e-8). A positive
// ridge keeps the scale PD even when the pilot matrix is rank deficient.
BeliefState estimate_prior(const Eigen::MatrixXd& pilot, double dof0,
                           double kappa0, double ridge);

// Exact conjugate update on a joint observation of all K alternatives.
BeliefState update_full(const BeliefState& state, const Eigen::VectorXd& y);

// Posterior mean of the sampling covariance: scale / (dof - K - 1).
Eigen::MatrixXd posterior_sigma_mean(const BeliefState& state);

BlockPartition partition(const Eigen::MatrixXd& matrix, int k);

namespace detail {

// (M + M^T) / 2; used after every update to stop round-off drift.
Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m);

// Relative asymmetry check against the largest absolute entry.
bool is_symmetric(const Eigen::MatrixXd& m, double tol);

Eigen::VectorXd drop_index(const Eigen::VectorXd& v, int k);

// Reassemble a K x K symmetric matrix from partition blocks at index k.
Eigen::MatrixXd assemble_blocks(double pivot, const Eigen::VectorXd& cross,
                                const Eigen::MatrixXd& rest, int k);

}  // namespace detail

}  // namespace rs

#endif  // RSENGINE_BELIEF_HPP
