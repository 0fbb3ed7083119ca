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

// AdaBoost loop over vector-valued weak objects. The combination is the
// α-weighted sum of the (transformed) weak vectors, not a vote of sign rules.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "onebit/signal.hpp"

namespace onebit::boost {

struct BoostConfig {
  std::size_t T = 10;
  double alpha_coefficient = 0.25;  // ½ gives textbook AdaBoost
  double epsilon_clamp = 1e-10;

  /// Throws ConfigError unless T >= 1 and 0 < epsilon_clamp < 0.5.
  void validate() const;
};

struct IterationRecord {
  double epsilon = 0.0;
  double alpha = 0.0;
};

struct BoostResult {
  RVec combined;                        // Σ_t α^(t)·object_t
  std::vector<IterationRecord> trace;
  std::vector<double> final_weights;
};

/// Σ_j w_j 1{prediction_j ≠ label_j}.
double weighted_error(std::span<const Sign> predictions, std::span<const Sign> labels,
                      std::span<const double> weights);

/// alpha_coefficient · ln((1−ε)/ε) with ε clamped to [clamp, 1−clamp].
/// Negative for ε > ½; the loop keeps such iterations.
double alpha_from_error(double epsilon, const BoostConfig& cfg);

/// w_j ← w_j·e^{α·1{misclassified_j}}, then w ← w / Σw.
std::vector<double> update_weights(std::span<const double> weights,
                                   std::span<const bool> misclassified, double alpha);

using WeakFit = std::function<RVec(std::span<const double> weights)>;
using Transform = std::function<RVec(const RVec& weak)>;
using Predict = std::function<SignVector(const RVec& object)>;
/// Called after the weight update of iteration t (1-based).
using IterationObserver =
    std::function<void(std::size_t t, const IterationRecord& record, std::span<const double> weights)>;

/// Runs T iterations from uniform weights 1/m: fit, transform, predict,
/// ε, α, reweight; accumulates α·transformed object. A failing weak fit is
/// rethrown as BoostError carrying the iteration index.
BoostResult run_boost(std::span<const Sign> labels, const WeakFit& weak_fit,
                      const Transform& transform, const Predict& predict, const BoostConfig& cfg,
                      const IterationObserver& observer = {});

}  // namespace onebit::boost
