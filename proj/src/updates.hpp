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

#ifndef RSENGINE_UPDATES_HPP
#define RSENGINE_UPDATES_HPP

#include <string>
#include <string_view>
#include <variant>

#include "belief.hpp"

namespace rs {

// One measurement of a single alternative (0-based index).
struct SingleObservation {
  int alternative = 0;
  double value = 0.0;
};

// Sampling one alternative at a time breaks normal-inverse-Wishart
// conjugacy; the three approximate rules project the posterior back into
// the family in different ways. FullConjugate is the exact baseline for
// joint observations of all K alternatives.
enum class UpdateRule {
  FullConjugate,
  KL,        // Kullback-Leibler divergence minimization
  Moment,    // first-order moment matching
  MomentKL,  // moment matching for the mean, KL for the scale
};

using Measurement = std::variant<SingleObservation, Eigen::VectorXd>;

std::string_view rule_token(UpdateRule rule) noexcept;
std::string_view rule_label(UpdateRule rule) noexcept;
UpdateRule rule_from_token(std::string_view token);

// Residual inflation factor 1 + q*(y - mean_k)^2 / ((q+1)*scale_kk), >= 1.
// Shared by the Moment and Moment-KL scale updates.
double tilde_q(const BeliefState& state, const SingleObservation& obs);

// First-order moment matching. All of kappa, dof grow by 1/K; the mean moves
// along the scale column of the sampled alternative; the scale blocks are
// the closed-form posterior moments of the conditional covariance.
BeliefState update_moment(const BeliefState& state,
                          const SingleObservation& obs);

// KL-divergence projection of the single-observation posterior, with the
// dof increment fixed at 1/K. May reject a numerically extreme observation
// with NotPositiveDefinite instead of repairing the scale matrix.
BeliefState update_kl(const BeliefState& state, const SingleObservation& obs);

// Hybrid: the mean update of update_moment, the scale from KL-projecting
// only the conditional-covariance factor. Closed form, PD by construction.
BeliefState update_moment_kl(const BeliefState& state,
                             const SingleObservation& obs);

// Dispatch. FullConjugate takes a joint vector, the approximations take a
// SingleObservation; anything else is a RuleInputMismatch.
BeliefState apply_update(UpdateRule rule, const BeliefState& state,
                         const Measurement& measurement);

}  // namespace rs

#endif  // RSENGINE_UPDATES_HPP
