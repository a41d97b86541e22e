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

#include "kg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "student_t.hpp"

namespace rs {

namespace {

constexpr double kSlopeTieTol = 1.0e-12;

struct Line {
  double intercept;
  double slope;
};

}  // namespace

KgCoefficients kg_coefficients(const BeliefState& state, int k,
                               UpdateRule rule) {
  if (k < 0 || k >= state.dim()) {
    fail(ErrorCode::IndexOutOfRange,
         "alternative index " + std::to_string(k) + " outside [0, " +
             std::to_string(state.dim()) + ")");
  }
  const double q = state.kappa();
  const double b = state.dof();
  const int dim = state.dim();
  const double pivot = state.scale()(k, k);
  const double nu = b - dim + 1.0;

  KgCoefficients out;
  out.dof = nu;
  switch (rule) {
    case UpdateRule::Moment:
    case UpdateRule::MomentKL:
      out.slope =
          state.scale().col(k) / std::sqrt(q * (q + 1.0) * nu * pivot);
      return out;
    case UpdateRule::KL: {
      // The dof increment inside the predictive factor is the same 1/K
      // used by the update itself.
      const double b_next = b + 1.0 / dim;
      const double scale_factor =
          std::sqrt((q + 1.0) / (q * nu)) /
          ((q * b_next / (b_next - dim + 1.0) + 1.0) * std::sqrt(pivot));
      out.slope = scale_factor * state.scale().col(k);
      return out;
    }
    case UpdateRule::FullConjugate:
      break;
  }
  fail(ErrorCode::UnsupportedRule,
       "no single-alternative predictive coefficients for the full "
       "conjugate rule");
}

double expected_max_affine(const Eigen::VectorXd& intercepts,
                           const Eigen::VectorXd& slopes, double nu) {
  if (intercepts.size() != slopes.size() || intercepts.size() == 0) {
    fail(ErrorCode::DimensionMismatch,
         "intercepts and slopes must have equal nonzero length");
  }
  if (!(nu > 1.0)) {
    fail(ErrorCode::InvalidDof,
         "expected max of affine lines needs dof > 1 for a finite mean");
  }

  std::vector<Line> lines;
  lines.reserve(static_cast<std::size_t>(intercepts.size()));
  for (Eigen::Index i = 0; i < intercepts.size(); ++i) {
    lines.push_back({intercepts[i], slopes[i]});
  }
  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    if (a.slope != b.slope) return a.slope < b.slope;
    return a.intercept < b.intercept;
  });

  // Collapse slope ties, keeping the largest intercept of each run.
  std::vector<Line> distinct;
  distinct.reserve(lines.size());
  for (const Line& line : lines) {
    if (!distinct.empty() &&
        line.slope - distinct.back().slope <= kSlopeTieTol) {
      distinct.back().intercept =
          std::max(distinct.back().intercept, line.intercept);
      distinct.back().slope = std::max(distinct.back().slope, line.slope);
    } else {
      distinct.push_back(line);
    }
  }

  // Upper envelope: a line joins at the breakpoint where it overtakes the
  // current top; anything it overtakes before that top's own breakpoint
  // never leads and is dropped.
  std::vector<Line> kept;
  std::vector<double> breakpoints;
  kept.reserve(distinct.size());
  for (const Line& line : distinct) {
    double z = 0.0;
    while (!kept.empty()) {
      const Line& top = kept.back();
      z = (top.intercept - line.intercept) / (line.slope - top.slope);
      if (!breakpoints.empty() && z <= breakpoints.back()) {
        kept.pop_back();
        breakpoints.pop_back();
        continue;
      }
      break;
    }
    if (!kept.empty()) breakpoints.push_back(z);
    kept.push_back(line);
  }

  // E[T] = 0, so the line leading at -inf contributes its intercept and
  // each kink adds its slope increment times a positive part.
  double value = kept.front().intercept;
  for (std::size_t i = 0; i + 1 < kept.size(); ++i) {
    value += (kept[i + 1].slope - kept[i].slope) *
             expected_positive_part(breakpoints[i], nu);
  }
  return value;
}

Eigen::VectorXd value_of_information(const BeliefState& state,
                                     UpdateRule rule) {
  const int dim = state.dim();
  const double best = state.mean().maxCoeff();
  Eigen::VectorXd v(dim);
  for (int k = 0; k < dim; ++k) {
    const KgCoefficients coef = kg_coefficients(state, k, rule);
    v[k] = expected_max_affine(state.mean(), coef.slope, coef.dof) - best;
  }
  return v;
}

int select_alternative(const BeliefState& state, UpdateRule rule) {
  const Eigen::VectorXd v = value_of_information(state, rule);
  int best = 0;
  for (int k = 1; k < v.size(); ++k) {
    if (v[k] > v[best]) best = k;
  }
  return best;
}

}  // namespace rs
