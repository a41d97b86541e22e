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

#include "problems.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

namespace rs {

void Problem::check_index(int k) const {
  if (k < 0 || k >= num_alternatives()) {
    fail(ErrorCode::IndexOutOfRange,
         "alternative index " + std::to_string(k) + " outside [0, " +
             std::to_string(num_alternatives()) + ")");
  }
}

namespace {

class MvnProblem final : public Problem {
 public:
  MvnProblem(int k_count, double rho) {
    means_.resize(k_count);
    for (int i = 0; i < k_count; ++i) {
      means_[i] = static_cast<double>(i + 1) / k_count;
    }
    cov_.resize(k_count, k_count);
    for (int i = 0; i < k_count; ++i) {
      for (int j = 0; j < k_count; ++j) {
        cov_(i, j) = std::pow(-rho, std::abs(i - j));
      }
    }
    chol_ = cov_.llt().matrixL();
  }

  int num_alternatives() const override {
    return static_cast<int>(means_.size());
  }

  double sample_one(int k, Rng& rng) const override {
    check_index(k);
    std::normal_distribution<double> normal(means_[k],
                                            std::sqrt(cov_(k, k)));
    return normal(rng);
  }

  Eigen::VectorXd sample_all(Rng& rng) const override {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(means_.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
    return means_ + chol_ * z;
  }

  const Eigen::VectorXd& true_means() const override { return means_; }
  bool has_true_covariance() const override { return true; }
  Eigen::MatrixXd true_covariance() const override { return cov_; }

 private:
  Eigen::VectorXd means_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd chol_;
};

class EmpiricalProblem final : public Problem {
 public:
  explicit EmpiricalProblem(Eigen::MatrixXd table) : table_(std::move(table)) {
    means_ = table_.colwise().mean();
  }

  int num_alternatives() const override {
    return static_cast<int>(table_.cols());
  }

  double sample_one(int k, Rng& rng) const override {
    check_index(k);
    return table_(random_row(rng), k);
  }

  Eigen::VectorXd sample_all(Rng& rng) const override {
    return table_.row(random_row(rng));
  }

  const Eigen::VectorXd& true_means() const override { return means_; }

 private:
  Eigen::Index random_row(Rng& rng) const {
    std::uniform_int_distribution<Eigen::Index> pick(0, table_.rows() - 1);
    return pick(rng);
  }

  Eigen::MatrixXd table_;
  Eigen::VectorXd means_;
};

class CalibrationProblem final : public Problem {
 public:
  explicit CalibrationProblem(const BoreholeConfig& config)
      : noise_sd_(config.noise_sd) {
    const int k_count = static_cast<int>(config.designs.size());
    physical_mean_.resize(k_count);
    model_.resize(k_count);
    means_.resize(k_count);
    int k = 0;
    for (double x6 : config.x6_levels) {
      for (double x7 : config.x7_levels) {
        const Eigen::MatrixXd& design = config.designs[k];
        const int runs = static_cast<int>(design.rows());
        physical_mean_[k].resize(runs);
        model_[k].resize(runs);
        double sq = 0.0;
        for (int i = 0; i < runs; ++i) {
          std::array<double, 7> x;
          for (int d = 0; d < 5; ++d) x[d] = design(i, d);
          x[5] = 401.0;
          x[6] = 11000.0;
          physical_mean_[k][i] = borehole_computer(x);
          x[5] = x6;
          x[6] = x7;
          model_[k][i] = borehole_computer(x);
          const double gap = physical_mean_[k][i] - model_[k][i];
          sq += gap * gap;
        }
        means_[k] = -(sq / runs + noise_sd_ * noise_sd_);
        ++k;
      }
    }
  }

  int num_alternatives() const override {
    return static_cast<int>(means_.size());
  }

  double sample_one(int k, Rng& rng) const override {
    check_index(k);
    std::normal_distribution<double> noise(0.0, noise_sd_);
    const int runs = static_cast<int>(physical_mean_[k].size());
    double sq = 0.0;
    for (int i = 0; i < runs; ++i) {
      const double gap = physical_mean_[k][i] + noise(rng) - model_[k][i];
      sq += gap * gap;
    }
    return -sq / runs;
  }

  Eigen::VectorXd sample_all(Rng& rng) const override {
    // Each level has its own design and its own physical observations, so
    // the coordinates of a joint sample are independent.
    Eigen::VectorXd out(means_.size());
    for (int k = 0; k < means_.size(); ++k) out[k] = sample_one(k, rng);
    return out;
  }

  const Eigen::VectorXd& true_means() const override { return means_; }

 private:
  std::vector<Eigen::VectorXd> physical_mean_;  // per level, per design row
  std::vector<Eigen::VectorXd> model_;
  Eigen::VectorXd means_;
  double noise_sd_ = 1.0;
};

std::vector<double> equally_spaced(double lo, double hi, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
  }
  return out;
}

}  // namespace

std::unique_ptr<Problem> make_mvn_problem(int num_alternatives, double rho) {
  if (num_alternatives < 2) {
    fail(ErrorCode::DimensionMismatch,
         "need at least 2 alternatives, got " +
             std::to_string(num_alternatives));
  }
  if (!(rho >= 0.0 && rho < 1.0)) {
    fail(ErrorCode::InvalidRho,
         "correlation parameter must lie in [0, 1), got " +
             std::to_string(rho));
  }
  return std::make_unique<MvnProblem>(num_alternatives, rho);
}

std::unique_ptr<Problem> make_empirical_problem(Eigen::MatrixXd table) {
  if (table.rows() < 2) {
    fail(ErrorCode::EmptyTable,
         "empirical resampling needs at least 2 rows, got " +
             std::to_string(table.rows()));
  }
  if (!table.allFinite()) {
    fail(ErrorCode::InvalidArgument, "empirical table has non-finite entries");
  }
  return std::make_unique<EmpiricalProblem>(std::move(table));
}

double borehole_computer(const std::array<double, 7>& x) {
  for (int i = 0; i < 7; ++i) {
    if (x[i] < kBoreholeRanges[i].first || x[i] > kBoreholeRanges[i].second) {
      std::cerr << "warning: borehole input x" << (i + 1) << " = " << x[i]
                << " outside [" << kBoreholeRanges[i].first << ", "
                << kBoreholeRanges[i].second << "]\n";
    }
  }
  if (!(x[4] / x[1] > 0.0)) {
    fail(ErrorCode::DomainError, "borehole needs x5/x2 > 0");
  }
  const double log_ratio = std::log(x[4] / x[1]);
  if (log_ratio == 0.0) {
    fail(ErrorCode::DomainError, "borehole is singular at x5 == x2");
  }
  if (x[6] == 0.0 || x[3] == 0.0) {
    fail(ErrorCode::DomainError, "borehole needs nonzero x7 and x4");
  }
  const double inner =
      1.0 + 2.0 * x[2] * x[0] / (log_ratio * x[1] * x[1] * x[6]) +
      x[0] / x[3];
  const double arg = 2.0 * M_PI * x[0] * x[5] / (log_ratio * inner);
  if (!(arg > 0.0)) {
    fail(ErrorCode::DomainError,
         "borehole flow argument is nonpositive for these inputs");
  }
  return std::log(arg);
}

double borehole_physical_mean(const std::array<double, 5>& x) {
  std::array<double, 7> full;
  std::copy(x.begin(), x.end(), full.begin());
  full[5] = 401.0;
  full[6] = 11000.0;
  return borehole_computer(full);
}

double borehole_physical(const std::array<double, 5>& x, Rng& rng) {
  std::normal_distribution<double> noise(0.0, 1.0);
  return borehole_physical_mean(x) + noise(rng);
}

Eigen::MatrixXd lhs_design(int dims, int runs,
                           const std::vector<std::pair<double, double>>& ranges,
                           Rng& rng) {
  if (dims < 1 || runs < 1) {
    fail(ErrorCode::InvalidArgument, "LHS design needs dims, runs >= 1");
  }
  if (static_cast<int>(ranges.size()) != dims) {
    fail(ErrorCode::DimensionMismatch,
         "need one range per design dimension");
  }
  Eigen::MatrixXd design(runs, dims);
  std::vector<int> strata(runs);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int d = 0; d < dims; ++d) {
    std::iota(strata.begin(), strata.end(), 0);
    std::shuffle(strata.begin(), strata.end(), rng);
    const auto [lo, hi] = ranges[d];
    for (int i = 0; i < runs; ++i) {
      const double u = (strata[i] + unit(rng)) / runs;
      design(i, d) = lo + u * (hi - lo);
    }
  }
  return design;
}

BoreholeConfig BoreholeConfig::standard(int x7_count, int design_runs,
                                        Rng& rng) {
  if (x7_count != 10 && x7_count != 17) {
    fail(ErrorCode::InvalidArgument,
         "borehole calibration uses 10 or 17 x7 levels, got " +
             std::to_string(x7_count));
  }
  if (design_runs < 1) {
    fail(ErrorCode::InvalidArgument, "design needs at least one run");
  }
  BoreholeConfig config;
  config.x6_levels =
      equally_spaced(kBoreholeRanges[5].first, kBoreholeRanges[5].second, 3);
  config.x7_levels = equally_spaced(kBoreholeRanges[6].first,
                                    kBoreholeRanges[6].second, x7_count);
  std::vector<std::pair<double, double>> control_ranges(
      kBoreholeRanges.begin(), kBoreholeRanges.begin() + 5);
  config.designs.reserve(config.x6_levels.size() * config.x7_levels.size());
  for (std::size_t k = 0;
       k < config.x6_levels.size() * config.x7_levels.size(); ++k) {
    config.designs.push_back(lhs_design(5, design_runs, control_ranges, rng));
  }
  return config;
}

std::unique_ptr<Problem> make_calibration_problem(
    const BoreholeConfig& config) {
  if (config.x6_levels.size() != 3) {
    fail(ErrorCode::InvalidArgument, "calibration expects 3 x6 levels");
  }
  if (config.x7_levels.size() != 10 && config.x7_levels.size() != 17) {
    fail(ErrorCode::InvalidArgument, "calibration expects 10 or 17 x7 levels");
  }
  if (config.designs.size() !=
      config.x6_levels.size() * config.x7_levels.size()) {
    fail(ErrorCode::InvalidArgument,
         "calibration expects one control design per level combination");
  }
  for (const Eigen::MatrixXd& design : config.designs) {
    if (design.cols() != 5 || design.rows() < 1) {
      fail(ErrorCode::InvalidArgument,
           "every calibration design must be runs x 5 with at least one run");
    }
  }
  if (config.noise_sd != 1.0) {
    fail(ErrorCode::InvalidArgument,
         "the physical system noise is fixed at 1.0");
  }
  return std::make_unique<CalibrationProblem>(config);
}

}  // namespace rs
