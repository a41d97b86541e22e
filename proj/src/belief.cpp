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

#include "belief.hpp"

#include <cmath>
#include <string>

namespace rs {

namespace detail {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

bool is_symmetric(const Eigen::MatrixXd& m, double tol) {
  const double scale = m.cwiseAbs().maxCoeff();
  const double gap = (m - m.transpose()).cwiseAbs().maxCoeff();
  return gap <= tol * std::max(scale, 1.0e-300);
}

Eigen::VectorXd drop_index(const Eigen::VectorXd& v, int k) {
  Eigen::VectorXd out(v.size() - 1);
  int j = 0;
  for (int i = 0; i < v.size(); ++i) {
    if (i != k) out[j++] = v[i];
  }
  return out;
}

Eigen::MatrixXd assemble_blocks(double pivot, const Eigen::VectorXd& cross,
                                const Eigen::MatrixXd& rest, int k) {
  const int n = static_cast<int>(cross.size()) + 1;
  Eigen::MatrixXd out(n, n);
  out(k, k) = pivot;
  int bi = 0;
  for (int i = 0; i < n; ++i) {
    if (i == k) continue;
    out(i, k) = cross[bi];
    out(k, i) = cross[bi];
    int bj = 0;
    for (int j = 0; j < n; ++j) {
      if (j == k) continue;
      out(i, j) = rest(bi, bj);
      ++bj;
    }
    ++bi;
  }
  return out;
}

namespace {

constexpr double kSymmetryTol = 1.0e-10;

void check_positive_definite(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    fail(ErrorCode::NotPositiveDefinite,
         std::string(what) + ": matrix is not positive definite");
  }
}

}  // namespace

}  // namespace detail

BeliefState::BeliefState(Eigen::VectorXd mean, Eigen::MatrixXd scale,
                         double kappa, double dof)
    : mean_(std::move(mean)), scale_(std::move(scale)), kappa_(kappa),
      dof_(dof) {
  const auto k = mean_.size();
  if (k < 2) {
    fail(ErrorCode::DimensionMismatch,
         "belief needs at least 2 alternatives, got " + std::to_string(k));
  }
  if (scale_.rows() != k || scale_.cols() != k) {
    fail(ErrorCode::DimensionMismatch,
         "scale matrix must be " + std::to_string(k) + "x" +
             std::to_string(k));
  }
  if (!mean_.allFinite() || !scale_.allFinite() || !std::isfinite(kappa_) ||
      !std::isfinite(dof_)) {
    fail(ErrorCode::InvalidHyperparameter, "belief parameters must be finite");
  }
  if (kappa_ <= 0.0) {
    fail(ErrorCode::InvalidHyperparameter,
         "kappa must be positive, got " + std::to_string(kappa_));
  }
  if (dof_ <= static_cast<double>(k) + 1.0) {
    fail(ErrorCode::InvalidHyperparameter,
         "dof must exceed K+1 = " + std::to_string(k + 1) + ", got " +
             std::to_string(dof_));
  }
  if (!detail::is_symmetric(scale_, detail::kSymmetryTol)) {
    fail(ErrorCode::NotPositiveDefinite, "scale matrix is not symmetric");
  }
  scale_ = detail::symmetrized(scale_);
  detail::check_positive_definite(scale_, "belief scale");
}

BeliefState new_belief(const Eigen::VectorXd& mean,
                       const Eigen::MatrixXd& scale, double kappa,
                       double dof) {
  return BeliefState(mean, scale, kappa, dof);
}

BeliefState estimate_prior(const Eigen::MatrixXd& pilot, double dof0,
                           double kappa0, double ridge) {
  const auto n = pilot.rows();
  const auto k = pilot.cols();
  if (n < 2) {
    fail(ErrorCode::TooFewPilotSamples,
         "prior estimation needs at least 2 pilot rows, got " +
             std::to_string(n));
  }
  if (ridge < 0.0 || !std::isfinite(ridge)) {
    fail(ErrorCode::InvalidHyperparameter, "ridge must be nonnegative");
  }
  const Eigen::VectorXd mean = pilot.colwise().mean();
  const Eigen::MatrixXd centered = pilot.rowwise() - mean.transpose();
  Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(n - 1);
  if (ridge > 0.0) {
    const double lambda =
        ridge * std::max(cov.trace() / static_cast<double>(k), 1.0e-8);
    cov += lambda * Eigen::MatrixXd::Identity(k, k);
  }
  const double factor = dof0 - static_cast<double>(k) - 1.0;
  return new_belief(mean, factor * cov, kappa0, dof0);
}

BeliefState update_full(const BeliefState& state, const Eigen::VectorXd& y) {
  if (y.size() != state.dim()) {
    fail(ErrorCode::DimensionMismatch,
         "joint observation must have length " + std::to_string(state.dim()));
  }
  if (!y.allFinite()) {
    fail(ErrorCode::InvalidArgument, "joint observation must be finite");
  }
  const double q = state.kappa();
  const Eigen::VectorXd residual = state.mean() - y;
  const Eigen::VectorXd mean = (q * state.mean() + y) / (q + 1.0);
  const Eigen::MatrixXd scale =
      state.scale() + (q / (q + 1.0)) * residual * residual.transpose();
  return BeliefState(mean, detail::symmetrized(scale), q + 1.0,
                     state.dof() + 1.0);
}

Eigen::MatrixXd posterior_sigma_mean(const BeliefState& state) {
  return state.scale() / (state.dof() - state.dim() - 1.0);
}

BlockPartition partition(const Eigen::MatrixXd& matrix, int k) {
  const int n = static_cast<int>(matrix.rows());
  if (k < 0 || k >= n) {
    fail(ErrorCode::IndexOutOfRange,
         "partition index " + std::to_string(k) + " outside [0, " +
             std::to_string(n) + ")");
  }
  BlockPartition out;
  out.pivot = matrix(k, k);
  out.cross.resize(n - 1);
  Eigen::MatrixXd rest(n - 1, n - 1);
  int bi = 0;
  for (int i = 0; i < n; ++i) {
    if (i == k) continue;
    out.cross[bi] = matrix(i, k);
    int bj = 0;
    for (int j = 0; j < n; ++j) {
      if (j == k) continue;
      rest(bi, bj) = matrix(i, j);
      ++bj;
    }
    ++bi;
  }
  out.schur = rest - out.cross * out.cross.transpose() / out.pivot;
  return out;
}

}  // namespace rs
