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

#ifndef RSENGINE_PROBLEMS_HPP
#define RSENGINE_PROBLEMS_HPP

#include <array>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "rng.hpp"

namespace rs {

// A ranking-and-selection environment: K alternatives with unknown true
// means, sampled one at a time or jointly. sample_one(k) is distributed as
// coordinate k of sample_all. Implementations hold immutable configuration;
// all randomness comes through the caller's RNG, so concurrent callers with
// independent streams are safe.
class Problem {
 public:
  virtual ~Problem() = default;
  virtual int num_alternatives() const = 0;
  virtual double sample_one(int k, Rng& rng) const = 0;
  virtual Eigen::VectorXd sample_all(Rng& rng) const = 0;
  virtual const Eigen::VectorXd& true_means() const = 0;
  virtual bool has_true_covariance() const { return false; }
  virtual Eigen::MatrixXd true_covariance() const {
    fail(ErrorCode::InvalidArgument,
         "this problem has no analytic sampling covariance");
  }

 protected:
  void check_index(int k) const;
};

// Synthetic multivariate-normal environment: true means k/K for k = 1..K
// and covariance A(i,j) = (-rho)^|i-j| (unit variances, alternating-sign
// geometric correlation). rho in [0, 1).
std::unique_ptr<Problem> make_mvn_problem(int num_alternatives, double rho);

// Bootstrap resampling of a table of historical joint observations (rows =
// joint samples, columns = alternatives). True means are the column means.
std::unique_ptr<Problem> make_empirical_problem(Eigen::MatrixXd table);

// --- Borehole calibration -------------------------------------------------

// Input ranges of the borehole flow-rate model, in input order x1..x7.
// x1..x5 are control variables; x6, x7 are the calibration levels.
inline constexpr std::array<std::pair<double, double>, 7> kBoreholeRanges = {{
    {63070.0, 115600.0},
    {0.05, 0.15},
    {1120.0, 1680.0},
    {63.1, 116.0},
    {100.0, 50000.0},
    {170.0, 410.0},
    {9588.0, 12045.0},
}};

// Log flow rate of water through a borehole as a function of all seven
// inputs. Raises DomainError for inputs that hit a log or denominator
// singularity; warns on stderr for inputs outside the table ranges.
double borehole_computer(const std::array<double, 7>& x);

// Deterministic response of the reference physical system: the computer
// model with the calibration inputs fixed at (401, 11000).
double borehole_physical_mean(const std::array<double, 5>& x);

// One noisy measurement of the physical system (unit normal noise).
double borehole_physical(const std::array<double, 5>& x, Rng& rng);

// Latin hypercube design: each column gets exactly one point per
// equal-width stratum, uniform within the stratum, strata independently
// permuted per column, scaled to the given ranges.
Eigen::MatrixXd lhs_design(int dims, int runs,
                           const std::vector<std::pair<double, double>>& ranges,
                           Rng& rng);

// Calibration setup: 3 x6 levels, 10 or 17 x7 levels, one LHS control
// design per level combination (x6-major order), unit physical noise.
// Separate designs per level mean separate physical observations per
// level, so joint measurements are independent across levels.
struct BoreholeConfig {
  std::vector<double> x6_levels;
  std::vector<double> x7_levels;
  std::vector<Eigen::MatrixXd> designs;  // per level: runs x 5 control points
  double noise_sd = 1.0;

  // Levels equally spaced over the table ranges plus a fresh LHS control
  // design of the given size for every level combination.
  static BoreholeConfig standard(int x7_count, int design_runs, Rng& rng);
};

// Calibration as ranking and selection over the x6 x x7 level grid
// (x6-major order). Measurements are negated mean squared discrepancies
// between noisy physical observations and the computer model at the
// level's design points, so that larger is better; the true mean of each
// level includes the -1 noise-variance floor.
std::unique_ptr<Problem> make_calibration_problem(const BoreholeConfig& config);

}  // namespace rs

#endif  // RSENGINE_PROBLEMS_HPP
