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

#include "oracle.hpp"

#include <cmath>

namespace rs {

namespace {

double sample_chi_square(double dof, Rng& rng) {
  std::gamma_distribution<double> gamma(0.5 * dof, 2.0);
  return gamma(rng);
}

void check_observation(const BeliefState& state, const SingleObservation& obs) {
  if (obs.alternative < 0 || obs.alternative >= state.dim()) {
    fail(ErrorCode::IndexOutOfRange,
         "alternative index " + std::to_string(obs.alternative) +
             " outside [0, " + std::to_string(state.dim()) + ")");
  }
  if (!std::isfinite(obs.value)) {
    fail(ErrorCode::InvalidArgument, "observation value must be finite");
  }
}

void check_draw_count(int n_draws) {
  if (n_draws < 1000) {
    fail(ErrorCode::InvalidArgument,
         "oracle estimates need at least 1000 draws, got " +
             std::to_string(n_draws));
  }
}

}  // namespace

Eigen::MatrixXd sample_wishart(double dof, const Eigen::MatrixXd& scale,
                               Rng& rng) {
  const int p = static_cast<int>(scale.rows());
  if (!(dof > p - 1)) {
    fail(ErrorCode::InvalidDof, "Wishart dof must exceed dimension - 1");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(scale);
  if (llt.info() != Eigen::Success) {
    fail(ErrorCode::NotPositiveDefinite, "Wishart scale must be PD");
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd bartlett = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    bartlett(i, i) = std::sqrt(sample_chi_square(dof - i, rng));
    for (int j = 0; j < i; ++j) bartlett(i, j) = normal(rng);
  }
  const Eigen::MatrixXd root = llt.matrixL() * bartlett;
  return root * root.transpose();
}

Eigen::MatrixXd sample_inverse_wishart(double dof, const Eigen::MatrixXd& scale,
                                       Rng& rng) {
  const int p = static_cast<int>(scale.rows());
  Eigen::LLT<Eigen::MatrixXd> llt(scale);
  if (llt.info() != Eigen::Success) {
    fail(ErrorCode::NotPositiveDefinite, "inverse-Wishart scale must be PD");
  }
  const Eigen::MatrixXd scale_inv =
      llt.solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::MatrixXd w = sample_wishart(dof, detail::symmetrized(scale_inv), rng);
  const Eigen::MatrixXd inv =
      w.llt().solve(Eigen::MatrixXd::Identity(p, p));
  return detail::symmetrized(inv);
}

Eigen::VectorXd sample_mvn(const Eigen::VectorXd& mean,
                           const Eigen::MatrixXd& cov, Rng& rng) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    fail(ErrorCode::NotPositiveDefinite, "MVN covariance must be PD");
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
  return mean + Eigen::MatrixXd(llt.matrixL()) * z;
}

OracleDecomposition sample_decomposition(const BeliefState& state,
                                         const SingleObservation& obs,
                                         Rng& rng) {
  check_observation(state, obs);
  const int dim = state.dim();
  const double q = state.kappa();
  const double b = state.dof();
  const double q_next = q + 1.0 / dim;
  const double residual = obs.value - state.mean()[obs.alternative];
  const BlockPartition part = partition(state.scale(), obs.alternative);

  OracleDecomposition out;
  out.schur_block =
      sample_inverse_wishart(b, (q_next / q) * part.schur, rng);

  const double pivot_scale =
      (q_next / (q + 1.0)) *
      (part.pivot + q * residual * residual / (q + 1.0));
  out.pivot = pivot_scale / sample_chi_square(b - dim + 2.0, rng);

  const Eigen::VectorXd dir_mean = part.cross / part.pivot;
  const Eigen::MatrixXd dir_cov =
      (q / (q_next * part.pivot)) * out.schur_block;
  out.direction = sample_mvn(dir_mean, dir_cov, rng);
  out.cross = out.pivot * out.direction;
  return out;
}

MomentEstimate oracle_tilde_sigma_mean(const BeliefState& state,
                                       const SingleObservation& obs,
                                       int n_draws, Rng& rng) {
  check_observation(state, obs);
  check_draw_count(n_draws);
  const int dim = state.dim();
  const int k = obs.alternative;
  RunningStats moments(dim, dim);
  for (int draw = 0; draw < n_draws; ++draw) {
    const OracleDecomposition d = sample_decomposition(state, obs, rng);
    const Eigen::MatrixXd rest =
        d.schur_block +
        d.pivot * d.direction * d.direction.transpose();
    moments.add(detail::assemble_blocks(d.pivot, d.cross, rest, k));
  }
  MomentEstimate out;
  out.scale = moments.mean();
  out.se_scale = moments.standard_error();
  return out;
}

MomentEstimate oracle_posterior_mean(const BeliefState& state,
                                     const SingleObservation& obs,
                                     int n_draws, Rng& rng) {
  check_observation(state, obs);
  check_draw_count(n_draws);
  const int dim = state.dim();
  const int k = obs.alternative;
  const double q = state.kappa();

  Eigen::VectorXd weighted_sum = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd weighted_sum_sq = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd weighted_sum_sq_val = Eigen::VectorXd::Zero(dim);
  double weight_sum = 0.0;
  double weight_sq_sum = 0.0;

  for (int draw = 0; draw < n_draws; ++draw) {
    const Eigen::MatrixXd sigma =
        sample_inverse_wishart(state.dof(), state.scale(), rng);
    const Eigen::VectorXd mu = sample_mvn(state.mean(), sigma / q, rng);
    const double resid = obs.value - mu[k];
    const double weight =
        std::exp(-0.5 * resid * resid / sigma(k, k)) / std::sqrt(sigma(k, k));
    weight_sum += weight;
    weight_sq_sum += weight * weight;
    weighted_sum += weight * mu;
    weighted_sum_sq += weight * weight * mu;
    weighted_sum_sq_val += weight * weight * mu.cwiseProduct(mu);
  }

  const double ess = weight_sum * weight_sum / weight_sq_sum;
  if (!(ess >= 50.0)) {
    fail(ErrorCode::DegenerateWeights,
         "importance sampling effective sample size " + std::to_string(ess) +
             " below 50; the observation is too far in the tail for this "
             "draw count");
  }

  MomentEstimate out;
  out.effective_sample_size = ess;
  out.mean = weighted_sum / weight_sum;
  // Delta-method variance of the self-normalized estimator:
  // sum of (normalized weight)^2 * (value - estimate)^2.
  Eigen::VectorXd var =
      (weighted_sum_sq_val - 2.0 * out.mean.cwiseProduct(weighted_sum_sq) +
       out.mean.cwiseProduct(out.mean) * weight_sq_sum) /
      (weight_sum * weight_sum);
  out.se_mean = var.cwiseMax(0.0).cwiseSqrt();
  return out;
}

double dkl_objective(const Eigen::MatrixXd& candidate,
                     const BeliefState& state, const SingleObservation& obs) {
  check_observation(state, obs);
  if (candidate.rows() != state.dim() || candidate.cols() != state.dim()) {
    fail(ErrorCode::DimensionMismatch,
         "candidate scale must match the belief dimension");
  }
  if (!detail::is_symmetric(candidate, 1.0e-10)) {
    fail(ErrorCode::NotPositiveDefinite, "candidate scale is not symmetric");
  }
  const int dim = state.dim();
  const int k = obs.alternative;
  const double q = state.kappa();
  const double b = state.dof();
  const double q_next = q + 1.0 / dim;
  const double b_next = b + 1.0 / dim;

  const BlockPartition cand = partition(candidate, k);
  const BlockPartition prior = partition(state.scale(), k);
  if (!(cand.pivot > 0.0)) {
    fail(ErrorCode::NotPositiveDefinite, "candidate pivot must be positive");
  }
  Eigen::LLT<Eigen::MatrixXd> schur_llt(cand.schur);
  if (schur_llt.info() != Eigen::Success) {
    fail(ErrorCode::NotPositiveDefinite,
         "candidate conditional block is not positive definite");
  }
  const double qt = tilde_q(state, obs);

  // Pivot term.
  double value = 0.5 * (b + 1.0) * std::log(cand.pivot) +
                 q_next * (b_next - dim + 1.0) * prior.pivot * qt /
                     (2.0 * (q + 1.0) * cand.pivot);

  // Conditional-block term.
  double log_det = 0.0;
  const Eigen::MatrixXd l = schur_llt.matrixL();
  for (int i = 0; i < dim - 1; ++i) log_det += 2.0 * std::log(l(i, i));
  const double trace_term = schur_llt.solve(prior.schur).trace();
  value += 0.5 * b * log_det + q_next * b_next * trace_term / (2.0 * q);

  // Direction term; zero exactly when the candidate keeps the prior's
  // cross-to-pivot ratio.
  const Eigen::VectorXd diff =
      cand.cross / cand.pivot - prior.cross / prior.pivot;
  value += q_next * prior.pivot *
           diff.dot(schur_llt.solve(diff)) / (2.0 * q);
  return value;
}

}  // namespace rs
