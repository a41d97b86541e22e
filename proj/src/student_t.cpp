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

#include "student_t.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "errors.hpp"

namespace rs {

namespace {

constexpr double kBetaRelTol = 1.0e-12;
constexpr int kBetaMaxIter = 500;

void check_dof(double nu, double lower) {
  if (!(nu > lower)) {
    fail(ErrorCode::InvalidDof,
         "degrees of freedom must exceed " + std::to_string(lower) +
             ", got " + std::to_string(nu));
  }
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
  const double tiny = 1.0e-300;
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kBetaMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kBetaRelTol) return h;
  }
  return h;  // converged to working precision for all practical (a, b)
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    fail(ErrorCode::InvalidArgument, "incomplete beta needs a, b > 0");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double t_pdf(double z, double nu) {
  check_dof(nu, 0.0);
  if (std::isinf(z)) return 0.0;
  const double log_norm = std::lgamma(0.5 * (nu + 1.0)) -
                          std::lgamma(0.5 * nu) -
                          0.5 * std::log(nu * M_PI);
  return std::exp(log_norm - 0.5 * (nu + 1.0) * std::log1p(z * z / nu));
}

double t_cdf(double z, double nu) {
  check_dof(nu, 0.0);
  if (std::isinf(z)) return z > 0.0 ? 1.0 : 0.0;
  if (z == 0.0) return 0.5;
  // The complementary argument z^2/(nu+z^2) is exact for small |z|, where
  // nu/(nu+z^2) would round to 1 and lose the tail.
  const double z2 = z * z;
  const double xc = std::isinf(z2) ? 1.0 : z2 / (nu + z2);
  const double half = 0.5 * regularized_incomplete_beta(0.5, 0.5 * nu, xc);
  return z > 0.0 ? 0.5 + half : 0.5 - half;
}

double expected_positive_part(double c, double nu) {
  check_dof(nu, 1.0);
  if (std::isinf(c)) {
    return c > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  // (nu + c^2) * pdf(c) in log space so that extreme breakpoints from
  // nearly tied slopes underflow to 0 instead of producing inf * 0.
  const double log_norm = std::lgamma(0.5 * (nu + 1.0)) -
                          std::lgamma(0.5 * nu) - 0.5 * std::log(nu * M_PI);
  const double c2 = c * c;
  double log_c2nu;
  double log_kernel;
  if (c2 > 1.0e300) {
    log_c2nu = 2.0 * std::log(std::abs(c));
    log_kernel = -0.5 * (nu + 1.0) * (2.0 * std::log(std::abs(c)) - std::log(nu));
  } else {
    log_c2nu = std::log(nu + c2);
    log_kernel = -0.5 * (nu + 1.0) * std::log1p(c2 / nu);
  }
  const double pdf_term =
      std::exp(log_c2nu - std::log(nu - 1.0) + log_norm + log_kernel);
  return pdf_term - c * (1.0 - t_cdf(c, nu));
}

}  // namespace rs
