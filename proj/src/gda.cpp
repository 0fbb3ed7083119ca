// Copyright 2026 The onebit-ada Authors
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

#include "onebit/gda.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "onebit/airlink.hpp"
#include "onebit/errors.hpp"

namespace onebit::gda {

DenseFeatures::DenseFeatures(const RMat& features)
    : features_(features), indices_(static_cast<std::size_t>(features.rows())) {
  std::iota(indices_.begin(), indices_.end(), std::size_t{0});
}

void DenseFeatures::visit_blocks(const BlockVisitor& visit) const { visit(indices_, features_); }

OperatorFeatures::OperatorFeatures(const DetectionOperator& op, std::size_t block_times)
    : op_(op), block_times_(block_times == 0 ? 1 : block_times) {}

std::size_t OperatorFeatures::rows() const { return op_.rows(); }
std::size_t OperatorFeatures::cols() const { return op_.cols(); }
RVec OperatorFeatures::multiply(const RVec& h) const { return op_.apply(h); }

void OperatorFeatures::visit_blocks(const BlockVisitor& visit) const {
  const std::size_t n = op_.subcarriers();
  const std::size_t mn = op_.antennas() * n;
  const std::size_t times = std::min(block_times_, n);
  RMat block(static_cast<Eigen::Index>(2 * times), static_cast<Eigen::Index>(op_.cols()));
  std::vector<std::size_t> indices(2 * times);
  for (std::size_t i = 0; i < op_.antennas(); ++i) {
    for (std::size_t t0 = 0; t0 < n; t0 += times) {
      const std::size_t count = std::min(times, n - t0);
      if (static_cast<std::size_t>(block.rows()) != 2 * count) {
        block.resize(static_cast<Eigen::Index>(2 * count), block.cols());
        indices.resize(2 * count);
      }
      op_.fill_rows(i, t0, count, block);
      for (std::size_t dt = 0; dt < count; ++dt) {
        indices[dt] = i * n + t0 + dt;
        indices[count + dt] = mn + i * n + t0 + dt;
      }
      visit(indices, block);
    }
  }
}

void WeightedTrainingSet::validate() const {
  if (features.rows() != labels.size() || weights.size() != labels.size()) {
    throw DimensionError("training set: features/labels/weights lengths differ");
  }
  bool has_pos = false;
  bool has_neg = false;
  double total = 0.0;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (labels[j] == 1) {
      has_pos = true;
    } else if (labels[j] == -1) {
      has_neg = true;
    } else {
      throw std::invalid_argument("training set: labels must be +1 or -1");
    }
    if (!(weights[j] >= 0.0)) throw std::invalid_argument("training set: negative weight");
    total += weights[j];
  }
  if (!has_pos || !has_neg) throw DegenerateClassError("training set has a single label class");
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("training set: weights do not sum to 1");
}

namespace {

void require_both_classes(const WeightedTrainingSet& ts) {
  bool has_pos = false;
  bool has_neg = false;
  for (Sign y : ts.labels) {
    has_pos = has_pos || y > 0;
    has_neg = has_neg || y < 0;
    if (has_pos && has_neg) return;
  }
  throw DegenerateClassError("training set has a single label class");
}

void require_shapes(const WeightedTrainingSet& ts) {
  if (ts.features.rows() != ts.labels.size() || ts.weights.size() != ts.labels.size()) {
    throw DimensionError("training set: features/labels/weights lengths differ");
  }
}

// Rows of the block minus the label-matched class sum.
RMat centered_block(std::span<const std::size_t> idx, const Eigen::Ref<const RMat>& block,
                    const WeightedTrainingSet& ts, const ClassMeans& means) {
  RMat centered = block;
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const RVec& mu = ts.labels[idx[r]] > 0 ? means.mu_pos : means.mu_neg;
    centered.row(static_cast<Eigen::Index>(r)) -= mu.transpose();
  }
  return centered;
}

RVec gathered_weights(std::span<const std::size_t> idx, const WeightedTrainingSet& ts) {
  RVec w(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r) w[static_cast<Eigen::Index>(r)] = ts.weights[idx[r]];
  return w;
}

}  // namespace

ClassMeans weighted_class_means(const WeightedTrainingSet& ts) {
  require_shapes(ts);
  require_both_classes(ts);
  const auto n = static_cast<Eigen::Index>(ts.dim());
  RMat sums = RMat::Zero(n, 2);  // col 0: y = −1, col 1: y = +1
  ts.features.visit_blocks([&](std::span<const std::size_t> idx, const Eigen::Ref<const RMat>& block) {
    RMat masks = RMat::Zero(static_cast<Eigen::Index>(idx.size()), 2);
    for (std::size_t r = 0; r < idx.size(); ++r) {
      const std::size_t j = idx[r];
      masks(static_cast<Eigen::Index>(r), ts.labels[j] > 0 ? 1 : 0) = ts.weights[j];
    }
    sums.noalias() += block.transpose() * masks;
  });
  return {sums.col(0), sums.col(1)};
}

RMat weighted_covariance_full(const WeightedTrainingSet& ts, const ClassMeans& means) {
  require_shapes(ts);
  const auto n = static_cast<Eigen::Index>(ts.dim());
  RMat cov = RMat::Zero(n, n);
  ts.features.visit_blocks([&](std::span<const std::size_t> idx, const Eigen::Ref<const RMat>& block) {
    const RMat centered = centered_block(idx, block, ts, means);
    const RVec w = gathered_weights(idx, ts);
    cov.noalias() += centered.transpose() * (w.asDiagonal() * centered);
  });
  return (cov + cov.transpose()) * 0.5;
}

RVec weighted_covariance_diag(const WeightedTrainingSet& ts, const ClassMeans& means) {
  require_shapes(ts);
  RVec diag = RVec::Zero(static_cast<Eigen::Index>(ts.dim()));
  ts.features.visit_blocks([&](std::span<const std::size_t> idx, const Eigen::Ref<const RMat>& block) {
    RMat centered = centered_block(idx, block, ts, means);
    centered = centered.array().square().matrix();
    diag.noalias() += centered.transpose() * gathered_weights(idx, ts);
  });
  return diag;
}

RVec ridge_solve(const RMat& cov, const RVec& gap) {
  const Eigen::Index n = cov.rows();
  const double lambda = kRidgeScale * cov.trace() / static_cast<double>(n);
  RMat system = cov;
  system.diagonal().array() += lambda;
  Eigen::LDLT<RMat> ldlt(system);
  if (ldlt.info() != Eigen::Success) throw Error("ridge_solve: factorization failed");
  return ldlt.solve(gap);
}

RVec weak_gda_full(const WeightedTrainingSet& ts) {
  const ClassMeans means = weighted_class_means(ts);
  const RMat cov = weighted_covariance_full(ts, means);
  return ridge_solve(cov, means.mu_pos - means.mu_neg);
}

RVec weak_gda_diag(const WeightedTrainingSet& ts) {
  const ClassMeans means = weighted_class_means(ts);
  const RVec var = weighted_covariance_diag(ts, means);
  return (means.mu_pos - means.mu_neg).array() / var.array().max(kVarianceFloor);
}

RVec weak_mean_diff(const WeightedTrainingSet& ts) {
  const ClassMeans means = weighted_class_means(ts);
  return means.mu_pos - means.mu_neg;
}

RVec gda_unweighted(const RMat& features, std::span<const Sign> labels) {
  const Eigen::Index m = features.rows();
  const Eigen::Index n = features.cols();
  if (static_cast<std::size_t>(m) != labels.size()) {
    throw DimensionError("gda_unweighted: features and labels lengths differ");
  }
  RVec mu_pos = RVec::Zero(n);
  RVec mu_neg = RVec::Zero(n);
  double count_pos = 0.0;
  double count_neg = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    if (labels[static_cast<std::size_t>(j)] > 0) {
      mu_pos += features.row(j).transpose();
      count_pos += 1.0;
    } else {
      mu_neg += features.row(j).transpose();
      count_neg += 1.0;
    }
  }
  if (count_pos == 0.0 || count_neg == 0.0) {
    throw DegenerateClassError("gda_unweighted: single label class");
  }
  mu_pos /= count_pos;
  mu_neg /= count_neg;
  RMat cov = RMat::Zero(n, n);
  for (Eigen::Index j = 0; j < m; ++j) {
    const RVec d = features.row(j).transpose() - (labels[static_cast<std::size_t>(j)] > 0 ? mu_pos : mu_neg);
    cov.noalias() += d * d.transpose();
  }
  cov /= static_cast<double>(m);
  return ridge_solve(cov, mu_pos - mu_neg);
}

RVec fit_weak(WeakRule rule, const WeightedTrainingSet& ts) {
  switch (rule) {
    case WeakRule::kFull:
      return weak_gda_full(ts);
    case WeakRule::kDiag:
      return weak_gda_diag(ts);
    case WeakRule::kMeanDiff:
      return weak_mean_diff(ts);
  }
  throw std::invalid_argument("fit_weak: unknown rule");
}

}  // namespace onebit::gda
