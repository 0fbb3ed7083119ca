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

#include "onebit/boost.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "onebit/errors.hpp"

namespace onebit::boost {

void BoostConfig::validate() const {
  if (T < 1) throw ConfigError("BoostConfig: T must be >= 1");
  if (!(epsilon_clamp > 0.0 && epsilon_clamp < 0.5)) {
    throw ConfigError("BoostConfig: epsilon_clamp must lie in (0, 0.5)");
  }
  if (!std::isfinite(alpha_coefficient)) throw ConfigError("BoostConfig: alpha_coefficient must be finite");
}

double weighted_error(std::span<const Sign> predictions, std::span<const Sign> labels,
                      std::span<const double> weights) {
  if (predictions.size() != labels.size() || weights.size() != labels.size()) {
    throw DimensionError("weighted_error: lengths differ (" + std::to_string(predictions.size()) +
                         ", " + std::to_string(labels.size()) + ", " +
                         std::to_string(weights.size()) + ")");
  }
  double eps = 0.0;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (predictions[j] != labels[j]) eps += weights[j];
  }
  return eps;
}

double alpha_from_error(double epsilon, const BoostConfig& cfg) {
  const double eps = std::clamp(epsilon, cfg.epsilon_clamp, 1.0 - cfg.epsilon_clamp);
  return cfg.alpha_coefficient * std::log((1.0 - eps) / eps);
}

std::vector<double> update_weights(std::span<const double> weights,
                                   std::span<const bool> misclassified, double alpha) {
  if (weights.size() != misclassified.size()) throw DimensionError("update_weights: lengths differ");
  const double boost = std::exp(alpha);
  std::vector<double> out(weights.begin(), weights.end());
  double z = 0.0;
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (misclassified[j]) out[j] *= boost;
    z += out[j];
  }
  for (double& w : out) w /= z;
  return out;
}

BoostResult run_boost(std::span<const Sign> labels, const WeakFit& weak_fit,
                      const Transform& transform, const Predict& predict, const BoostConfig& cfg,
                      const IterationObserver& observer) {
  cfg.validate();
  const std::size_t m = labels.size();
  if (m == 0) throw DimensionError("run_boost: empty training set");

  BoostResult result;
  result.trace.reserve(cfg.T);
  std::vector<double> weights(m, 1.0 / static_cast<double>(m));
  // std::vector<bool> is not contiguous, so spans need a plain bool buffer.
  auto misclassified = std::make_unique<bool[]>(m);

  for (std::size_t t = 1; t <= cfg.T; ++t) {
    RVec object;
    try {
      object = transform(weak_fit(weights));
    } catch (const BoostError&) {
      throw;
    } catch (const std::exception& e) {
      throw BoostError(t, e.what());
    }
    const SignVector predictions = predict(object);
    if (predictions.size() != m) throw DimensionError("run_boost: prediction length mismatch");

    IterationRecord record;
    record.epsilon = weighted_error(predictions, labels, weights);
    record.alpha = alpha_from_error(record.epsilon, cfg);
    for (std::size_t j = 0; j < m; ++j) misclassified[j] = predictions[j] != labels[j];
    weights = update_weights(weights, {misclassified.get(), m}, record.alpha);

    if (result.combined.size() == 0) {
      result.combined = record.alpha * object;
    } else {
      result.combined += record.alpha * object;
    }
    result.trace.push_back(record);
    if (observer) observer(t, record, weights);
  }
  result.final_weights = std::move(weights);
  return result;
}

}  // namespace onebit::boost
