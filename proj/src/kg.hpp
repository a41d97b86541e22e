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

#ifndef RSENGINE_KG_HPP
#define RSENGINE_KG_HPP

#include <Eigen/Dense>

#include "belief.hpp"
#include "updates.hpp"

namespace rs {

// Predictive-mean decomposition for sampling alternative k: the belief mean
// moves to mean + slope * T with T standard Student-t with `dof` degrees of
// freedom (dof = belief dof - K + 1, which exceeds 2 for any valid state).
struct KgCoefficients {
  Eigen::VectorXd slope;
  double dof = 0.0;
};

KgCoefficients kg_coefficients(const BeliefState& state, int k,
                               UpdateRule rule);

// E[max_j (intercept_j + slope_j * T)], T ~ t(nu), via the upper envelope
// of the lines: sort by slope, collapse slope ties (1e-12) keeping the
// larger intercept, prune lines that never lead with the breakpoint
// recurrence, then sum slope increments times E[(T - breakpoint)^+].
double expected_max_affine(const Eigen::VectorXd& intercepts,
                           const Eigen::VectorXd& slopes, double nu);

// Value of sampling each alternative once: the expected gain in the best
// predictive mean. Entries are nonnegative up to round-off.
Eigen::VectorXd value_of_information(const BeliefState& state,
                                     UpdateRule rule);

// Argmax of the value of information; ties go to the smallest index.
int select_alternative(const BeliefState& state, UpdateRule rule);

}  // namespace rs

#endif  // RSENGINE_KG_HPP
