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

#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oracle.hpp"

namespace rs {

namespace {

// Closed-form posterior moments of the decomposition blocks, used as the
// reference for the sampler checks.
struct DecompositionMoments {
  Eigen::MatrixXd schur_mean;   // E[A]
  double pivot_mean = 0.0;      // E[c]
  Eigen::VectorXd cross_mean;   // E[a_tilde]
  Eigen::MatrixXd caa_mean;     // E[c a a^T]
};

DecompositionMoments closed_form_moments(const BeliefState& state,
                                         const SingleObservation& obs) {
  const int dim = state.dim();
  const double q = state.kappa();
  const double b = state.dof();
  const double q_next = q + 1.0 / dim;
  const double residual = obs.value - state.mean()[obs.alternative];
  const BlockPartition part = partition(state.scale(), obs.alternative);
  const double qt = tilde_q(state, obs);

  DecompositionMoments m;
  m.schur_mean = q_next * part.schur / (q * (b - dim));
  m.pivot_mean = q_next / ((q + 1.0) * (b - dim)) *
                 (part.pivot + q * residual * residual / (q + 1.0));
  m.cross_mean = m.pivot_mean * part.cross / part.pivot;
  m.caa_mean = q_next * qt / ((q + 1.0) * (b - dim)) *
               (part.schur / (b - dim) +
                part.cross * part.cross.transpose() / part.pivot);
  return m;
}

double max_abs_z(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& se,
                 const Eigen::MatrixXd& reference) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < estimate.rows(); ++i) {
    for (Eigen::Index j = 0; j < estimate.cols(); ++j) {
      const double gap = std::abs(estimate(i, j) - reference(i, j));
      const double z = gap / std::max(se(i, j), 1.0e-300);
      worst = std::max(worst, z);
    }
  }
  return worst;
}

std::string z_detail(double z) {
  std::ostringstream out;
  out << "max |z| = " << z << " (limit 3)";
  return out.str();
}

}  // namespace

BeliefState random_belief_state(int dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> kappa_range(0.5, 3.0);
  std::uniform_real_distribution<double> dof_margin(1.5, 4.0);

  Eigen::VectorXd mean(dim);
  for (int i = 0; i < dim; ++i) mean[i] = normal(rng);
  Eigen::MatrixXd factor(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) factor(i, j) = normal(rng);
  }
  Eigen::MatrixXd scale = factor * factor.transpose() +
                          0.25 * Eigen::MatrixXd::Identity(dim, dim);
  return new_belief(mean, scale, kappa_range(rng),
                    static_cast<double>(dim) + 1.0 + dof_margin(rng));
}

SingleObservation random_observation(const BeliefState& state, double spread,
                                     Rng& rng) {
  std::uniform_int_distribution<int> pick(0, state.dim() - 1);
  std::uniform_real_distribution<double> offset(-spread, spread);
  SingleObservation obs;
  obs.alternative = pick(rng);
  obs.value = state.mean()[obs.alternative] +
              offset(rng) *
                  std::sqrt(state.scale()(obs.alternative, obs.alternative));
  return obs;
}

std::vector<CheckResult> run_verification(std::uint64_t draws,
                                          std::uint64_t seed) {
  if (draws < 1000) {
    fail(ErrorCode::InvalidArgument, "verification needs at least 1000 draws");
  }
  const int n_draws = static_cast<int>(std::min<std::uint64_t>(
      draws, 50'000'000ULL));
  std::vector<CheckResult> checks;

  // Decomposition-sampler moments against the closed forms, on three
  // random states.
  {
    double worst_schur = 0.0, worst_pivot = 0.0, worst_cross = 0.0,
           worst_caa = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      Rng rng = make_rng(seed, "verify-decomposition", trial);
      const BeliefState state = random_belief_state(3, rng);
      const SingleObservation obs = random_observation(state, 2.0, rng);
      const DecompositionMoments reference = closed_form_moments(state, obs);

      const int dim = state.dim();
      RunningStats schur(dim - 1, dim - 1), pivot(1, 1), cross(dim - 1, 1),
          caa(dim - 1, dim - 1);
      for (int i = 0; i < n_draws; ++i) {
        const OracleDecomposition d = sample_decomposition(state, obs, rng);
        schur.add(d.schur_block);
        pivot.add(Eigen::MatrixXd::Constant(1, 1, d.pivot));
        cross.add(d.cross);
        caa.add(d.pivot * d.direction * d.direction.transpose());
      }
      worst_schur = std::max(
          worst_schur,
          max_abs_z(schur.mean(), schur.standard_error(), reference.schur_mean));
      worst_pivot = std::max(
          worst_pivot,
          max_abs_z(pivot.mean(), pivot.standard_error(),
                    Eigen::MatrixXd::Constant(1, 1, reference.pivot_mean)));
      worst_cross = std::max(
          worst_cross,
          max_abs_z(cross.mean(), cross.standard_error(), reference.cross_mean));
      worst_caa = std::max(
          worst_caa,
          max_abs_z(caa.mean(), caa.standard_error(), reference.caa_mean));
    }
    checks.push_back({"decomposition-schur-mean", worst_schur <= 3.0,
                      z_detail(worst_schur)});
    checks.push_back({"decomposition-pivot-mean", worst_pivot <= 3.0,
                      z_detail(worst_pivot)});
    checks.push_back({"decomposition-cross-mean", worst_cross <= 3.0,
                      z_detail(worst_cross)});
    checks.push_back({"decomposition-caa-mean", worst_caa <= 3.0,
                      z_detail(worst_caa)});
  }

  // Moment rule mean against importance sampling.
  {
    double worst = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      Rng rng = make_rng(seed, "verify-moment-mean", trial);
      const BeliefState state = random_belief_state(3, rng);
      const SingleObservation obs = random_observation(state, 2.0, rng);
      const BeliefState updated = update_moment(state, obs);
      const MomentEstimate is =
          oracle_posterior_mean(state, obs, n_draws, rng);
      worst = std::max(worst, max_abs_z(is.mean, is.se_mean, updated.mean()));
    }
    checks.push_back(
        {"moment-mean-vs-importance-sampling", worst <= 3.0, z_detail(worst)});
  }

  // Moment rule scale against the decomposition sampler.
  {
    double worst = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      Rng rng = make_rng(seed, "verify-moment-scale", trial);
      const BeliefState state = random_belief_state(3, rng);
      const SingleObservation obs = random_observation(state, 2.0, rng);
      const BeliefState updated = update_moment(state, obs);
      const Eigen::MatrixXd posterior_scale =
          updated.scale() / (updated.dof() - updated.dim() - 1.0);
      const MomentEstimate mc =
          oracle_tilde_sigma_mean(state, obs, n_draws, rng);
      worst = std::max(worst, max_abs_z(mc.scale, mc.se_scale, posterior_scale));
    }
    checks.push_back(
        {"moment-scale-vs-sampler", worst <= 3.0, z_detail(worst)});
  }

  // The two oracles agree with each other on the posterior mean: the
  // decomposition route maps E[direction] through the conditional-mean
  // formula.
  {
    double worst = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      Rng rng = make_rng(seed, "verify-cross-agreement", trial);
      const BeliefState state = random_belief_state(3, rng);
      const SingleObservation obs = random_observation(state, 2.0, rng);
      const int dim = state.dim();
      const int k = obs.alternative;
      const double step =
          (obs.value - state.mean()[k]) / (state.kappa() + 1.0);

      RunningStats direction(dim - 1, 1);
      for (int i = 0; i < n_draws; ++i) {
        direction.add(sample_decomposition(state, obs, rng).direction);
      }
      Eigen::VectorXd mean_via_decomposition = state.mean();
      Eigen::VectorXd se_via_decomposition =
          Eigen::VectorXd::Zero(dim);
      mean_via_decomposition[k] += step;
      int row = 0;
      for (int j = 0; j < dim; ++j) {
        if (j == k) continue;
        mean_via_decomposition[j] += step * direction.mean()(row, 0);
        se_via_decomposition[j] =
            std::abs(step) * direction.standard_error()(row, 0);
        ++row;
      }
      const MomentEstimate is =
          oracle_posterior_mean(state, obs, n_draws, rng);
      for (int j = 0; j < dim; ++j) {
        const double combined =
            std::hypot(is.se_mean[j], se_via_decomposition[j]);
        const double gap = std::abs(is.mean[j] - mean_via_decomposition[j]);
        worst = std::max(worst, gap / std::max(combined, 1.0e-300));
      }
    }
    checks.push_back({"oracle-cross-agreement", worst <= 3.0, z_detail(worst)});
  }

  // The hybrid update's scale minimizes the decomposed divergence.
  {
    bool all_below = true;
    double worst_gap = 0.0;
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
      Rng rng = make_rng(seed, "verify-minimizer", trial);
      const BeliefState state = random_belief_state(3, rng);
      const SingleObservation obs = random_observation(state, 2.0, rng);
      const BeliefState updated = update_moment_kl(state, obs);
      const double at_minimum = dkl_objective(updated.scale(), state, obs);
      const Eigen::MatrixXd root =
          Eigen::LLT<Eigen::MatrixXd>(updated.scale()).matrixL();
      const int dim = state.dim();
      for (int p = 0; p < 100; ++p) {
        Eigen::MatrixXd direction(dim, dim);
        for (int i = 0; i < dim; ++i) {
          for (int j = 0; j <= i; ++j) {
            direction(i, j) = normal(rng);
            direction(j, i) = direction(i, j);
          }
        }
        const Eigen::MatrixXd perturbed =
            root *
            (Eigen::MatrixXd::Identity(dim, dim) + 1.0e-3 * direction) *
            root.transpose();
        const double value =
            dkl_objective(detail::symmetrized(perturbed), state, obs);
        if (value < at_minimum) {
          all_below = false;
          worst_gap = std::max(worst_gap, at_minimum - value);
        }
      }
    }
    std::ostringstream detail;
    if (all_below) {
      detail << "minimum held in 1000/1000 perturbations";
    } else {
      detail << "a perturbation undercut the minimum by " << worst_gap;
    }
    checks.push_back(
        {"hybrid-divergence-minimizer", all_below, detail.str()});
  }

  return checks;
}

std::string format_report(const std::vector<CheckResult>& checks) {
  std::string out;
  for (const CheckResult& check : checks) {
    out += check.passed ? "PASS " : "FAIL ";
    out += check.name;
    out += "  [";
    out += check.detail;
    out += "]\n";
  }
  return out;
}

}  // namespace rs
