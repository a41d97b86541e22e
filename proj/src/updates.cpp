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

#include "updates.hpp"

#include <cmath>

namespace rs {

namespace {

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

}  // namespace

std::string_view rule_token(UpdateRule rule) noexcept {
  switch (rule) {
    case UpdateRule::FullConjugate: return "full";
    case UpdateRule::KL: return "kl";
    case UpdateRule::Moment: return "moment";
    case UpdateRule::MomentKL: return "moment-kl";
  }
  return "unknown";
}

std::string_view rule_label(UpdateRule rule) noexcept {
  switch (rule) {
    case UpdateRule::FullConjugate: return "Full";
    case UpdateRule::KL: return "KL";
    case UpdateRule::Moment: return "Moment";
    case UpdateRule::MomentKL: return "Moment-KL";
  }
  return "Unknown";
}

UpdateRule rule_from_token(std::string_view token) {
  if (token == "full") return UpdateRule::FullConjugate;
  if (token == "kl") return UpdateRule::KL;
  if (token == "moment") return UpdateRule::Moment;
  if (token == "moment-kl" || token == "moment_kl") return UpdateRule::MomentKL;
  fail(ErrorCode::InvalidArgument,
       "unknown update rule '" + std::string(token) +
           "' (expected full, kl, moment, moment-kl)");
}

double tilde_q(const BeliefState& state, const SingleObservation& obs) {
  check_observation(state, obs);
  const double q = state.kappa();
  const double residual = obs.value - state.mean()[obs.alternative];
  const double pivot = state.scale()(obs.alternative, obs.alternative);
  return 1.0 + q * residual * residual / ((q + 1.0) * pivot);
}

BeliefState update_moment(const BeliefState& state,
                          const SingleObservation& obs) {
  check_observation(state, obs);
  const int k = obs.alternative;
  const int dim = state.dim();
  const double q = state.kappa();
  const double b = state.dof();
  const double q_next = q + 1.0 / dim;
  const double b_next = b + 1.0 / dim;
  const double residual = obs.value - state.mean()[k];
  const BlockPartition part = partition(state.scale(), k);
  const double qt = tilde_q(state, obs);

  const Eigen::VectorXd mean =
      state.mean() + state.scale().col(k) * (residual / (part.pivot * (q + 1.0)));

  // Scale blocks: pivot and cross share one factor, the off block adds the
  // Schur term twice (prior weight and the tilde-q inflated part).
  const double common = q_next * (b_next - dim - 1.0) / (b - dim);
  const double pivot_factor = common * qt / (q + 1.0);
  const double pivot = pivot_factor * part.pivot;
  const Eigen::VectorXd cross = pivot_factor * part.cross;
  const Eigen::MatrixXd rest =
      common * (part.schur / q +
                (qt / (q + 1.0)) *
                    (part.schur / (b - dim) +
                     part.cross * part.cross.transpose() / part.pivot));
  const Eigen::MatrixXd scale =
      detail::symmetrized(detail::assemble_blocks(pivot, cross, rest, k));
  return BeliefState(mean, scale, q_next, b_next);
}

BeliefState update_kl(const BeliefState& state, const SingleObservation& obs) {
  check_observation(state, obs);
  const int k = obs.alternative;
  const int dim = state.dim();
  const double q = state.kappa();
  const double b = state.dof();
  const double q_next = q + 1.0 / dim;
  const double b_next = b + 1.0 / dim;
  const double residual = obs.value - state.mean()[k];
  const double pivot = state.scale()(k, k);

  const double mean_denom =
      (b_next * (q + 1.0) - dim + 1.0) / (b_next - dim + 1.0) * pivot;
  const Eigen::VectorXd mean =
      state.mean() + (residual / mean_denom) * state.scale().col(k);

  const double rank1_coef =
      (b_next / (b + 1.0)) *
      (q * (b_next - dim + 1.0) * residual * residual /
           (b_next * (q + 1.0) - dim + 1.0) -
       pivot / b);
  const Eigen::MatrixXd scale =
      (b_next / b) * state.scale() +
      (rank1_coef / (pivot * pivot)) * state.scale().col(k) *
          state.scale().row(k);
  return BeliefState(mean, detail::symmetrized(scale), q_next, b_next);
}

BeliefState update_moment_kl(const BeliefState& state,
                             const SingleObservation& obs) {
  check_observation(state, obs);
  const int k = obs.alternative;
  const int dim = state.dim();
  const double q = state.kappa();
  const double b = state.dof();
  const double q_next = q + 1.0 / dim;
  const double b_next = b + 1.0 / dim;
  const double residual = obs.value - state.mean()[k];
  const BlockPartition part = partition(state.scale(), k);

  const Eigen::VectorXd mean =
      state.mean() + state.scale().col(k) * (residual / (part.pivot * (q + 1.0)));

  const double pivot =
      q_next * (b_next - dim + 1.0) *
      (part.pivot + q * residual * residual / (q + 1.0)) /
      ((b + 1.0) * (q + 1.0));
  const Eigen::VectorXd cross = (pivot / part.pivot) * part.cross;
  const Eigen::MatrixXd rest =
      (b_next * q_next / (b * q)) * part.schur +
      cross * cross.transpose() / pivot;
  const Eigen::MatrixXd scale =
      detail::symmetrized(detail::assemble_blocks(pivot, cross, rest, k));
  return BeliefState(mean, scale, q_next, b_next);
}

BeliefState apply_update(UpdateRule rule, const BeliefState& state,
                         const Measurement& measurement) {
  if (rule == UpdateRule::FullConjugate) {
    const auto* y = std::get_if<Eigen::VectorXd>(&measurement);
    if (y == nullptr) {
      fail(ErrorCode::RuleInputMismatch,
           "full conjugate update needs a joint observation vector");
    }
    return update_full(state, *y);
  }
  const auto* obs = std::get_if<SingleObservation>(&measurement);
  if (obs == nullptr) {
    fail(ErrorCode::RuleInputMismatch,
         std::string(rule_label(rule)) +
             " update needs a single-alternative observation");
  }
  switch (rule) {
    case UpdateRule::KL: return update_kl(state, *obs);
    case UpdateRule::Moment: return update_moment(state, *obs);
    case UpdateRule::MomentKL: return update_moment_kl(state, *obs);
    case UpdateRule::FullConjugate: break;  // handled above
  }
  fail(ErrorCode::InvalidArgument, "unhandled update rule");
}

}  // namespace rs
