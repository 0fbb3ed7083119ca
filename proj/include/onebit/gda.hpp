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

#pragma once

// Weighted Gaussian-discriminant weak classifiers.
//
// The class "means" here are the weighted sums Σ_j 1{y_j = c} w_j x_j with
// no division by the class weight mass, and the pooled scatter is centered
// on the label-matched sum. Downstream normalization absorbs the scale.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "onebit/signal.hpp"

namespace onebit {

class DetectionOperator;

namespace gda {

inline constexpr double kRidgeScale = 1e-8;
inline constexpr double kVarianceFloor = 1e-12;

/// Visitor over a block of feature rows: the global row index of each block
/// row, and the block itself (block.rows() == indices.size()).
using BlockVisitor =
    std::function<void(std::span<const std::size_t> indices, const Eigen::Ref<const RMat>& block)>;

/// Source of feature rows x^(j). Rows may be materialized or generated on demand.
class FeatureSource {
 public:
  virtual ~FeatureSource() = default;
  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;
  /// Visits every row exactly once.
  virtual void visit_blocks(const BlockVisitor& visit) const = 0;
  /// Row-major product X·h.
  virtual RVec multiply(const RVec& h) const = 0;
};

/// Features held in a dense matrix (row j = x^(j)). Holds a reference.
class DenseFeatures final : public FeatureSource {
 public:
  explicit DenseFeatures(const RMat& features);
  explicit DenseFeatures(RMat&&) = delete;
  std::size_t rows() const override { return static_cast<std::size_t>(features_.rows()); }
  std::size_t cols() const override { return static_cast<std::size_t>(features_.cols()); }
  void visit_blocks(const BlockVisitor& visit) const override;
  RVec multiply(const RVec& h) const override { return features_ * h; }
  const RMat& matrix() const { return features_; }

 private:
  const RMat& features_;
  std::vector<std::size_t> indices_;
};

/// Rows of a DetectionOperator, generated in blocks of `block_times` time
/// samples per antenna (2·block_times rows per block).
class OperatorFeatures final : public FeatureSource {
 public:
  explicit OperatorFeatures(const DetectionOperator& op, std::size_t block_times = 32);
  std::size_t rows() const override;
  std::size_t cols() const override;
  void visit_blocks(const BlockVisitor& visit) const override;
  RVec multiply(const RVec& h) const override;

 private:
  const DetectionOperator& op_;
  std::size_t block_times_;
};

/// Non-owning view of features, ±1 labels and example weights.
struct WeightedTrainingSet {
  const FeatureSource& features;
  std::span<const Sign> labels;
  std::span<const double> weights;

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return features.cols(); }

  /// Checks lengths, label values, both classes present, weights on the simplex.
  /// Throws DimensionError / DegenerateClassError / std::invalid_argument.
  void validate() const;
};

struct ClassStats {
  RVec mu_neg;
  RVec mu_pos;
  std::optional<RMat> cov_full;
  std::optional<RVec> cov_diag;
};

struct ClassMeans {
  RVec mu_neg;
  RVec mu_pos;
};

ClassMeans weighted_class_means(const WeightedTrainingSet& ts);
RMat weighted_covariance_full(const WeightedTrainingSet& ts, const ClassMeans& means);
RVec weighted_covariance_diag(const WeightedTrainingSet& ts, const ClassMeans& means);

/// (Σ̂ + λI)⁻¹(μ̂₁ − μ̂₋₁) with λ = 1e-8·trace(Σ̂)/n.
RVec weak_gda_full(const WeightedTrainingSet& ts);
/// (μ̂₁ − μ̂₋₁) / max(σ̂, 1e-12) element-wise.
RVec weak_gda_diag(const WeightedTrainingSet& ts);
/// μ̂₁ − μ̂₋₁.
RVec weak_mean_diff(const WeightedTrainingSet& ts);

/// Solves (cov + λI)·h = gap with the ridge policy above.
RVec ridge_solve(const RMat& cov, const RVec& gap);

/// Textbook GDA with class-normalized means and 1/m pooled covariance.
RVec gda_unweighted(const RMat& features, std::span<const Sign> labels);

enum class WeakRule { kFull, kDiag, kMeanDiff };

RVec fit_weak(WeakRule rule, const WeightedTrainingSet& ts);

}  // namespace gda
}  // namespace onebit
