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

#ifndef RSENGINE_STUDENT_T_HPP
#define RSENGINE_STUDENT_T_HPP

namespace rs {

// Standard Student-t density and distribution function. The cdf goes
// through the regularized incomplete beta function evaluated by continued
// fraction to 1e-12 relative accuracy.
double t_pdf(double z, double nu);
double t_cdf(double z, double nu);

// E[(T - c)^+] for T ~ t(nu), nu > 1:
//   ((nu + c^2) / (nu - 1)) * pdf(c) - c * (1 - cdf(c)).
double expected_positive_part(double c, double nu);

// Regularized incomplete beta I_x(a, b); exposed for tests.
double regularized_incomplete_beta(double a, double b, double x);

}  // namespace rs

#endif  // RSENGINE_STUDENT_T_HPP
