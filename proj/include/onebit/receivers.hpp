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

// One-bit GDA-AdaBoost channel estimation and data detection.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "onebit/airlink.hpp"
#include "onebit/boost.hpp"
#include "onebit/gda.hpp"

namespace onebit {

/// GdaAda: full weighted covariance. GdaAda1: diagonal covariance.
/// GdaAda2: mean difference (weighted matched filter).
enum class EstimatorVariant { kGdaAda, kGdaAda1, kGdaAda2 };

std::string_view to_string(EstimatorVariant v);
/// Accepts "gda-ada", "gda-ada-1", "gda-ada-2". Throws ConfigError otherwise.
EstimatorVariant variant_from_string(std::string_view name);
gda::WeakRule weak_rule(EstimatorVariant v);

/// Default boosting configuration for a system config (T from cfg, α coefficient ¼).
boost::BoostConfig boost_config(const SystemConfig& cfg);

struct AntennaEstimate {
  RVec h_real;  // length 2K·L_tap, ‖h‖² = K
  std::vector<boost::IterationRecord> trace;
};

/// Estimates one antenna's stacked channel from the pilot features Φ_R and
/// its 2N_c one-bit labels. Throws DegenerateClassError on single-class labels.
AntennaEstimate estimate_channel_antenna(const RMat& phi_real, std::span<const Sign> labels,
                                         EstimatorVariant variant, std::size_t K,
                                         const boost::BoostConfig& cfg);

struct AntennaFailure {
  std::size_t antenna;
  std::string message;
};

struct ChannelEstimate {
  EstimatorVariant variant = EstimatorVariant::kGdaAda2;
  std::size_t T = 0;
  RMat real_stacks;  // M × 2K·L_tap
  CMat taps;         // M × K·L_tap
  std::vector<std::vector<boost::IterationRecord>> traces;
  std::vector<AntennaFailure> failures;

  bool ok() const { return failures.empty(); }
};

/// Runs estimate_channel_antenna for every antenna, on `threads` workers
/// (0 = sequential). Per-antenna failures are collected, not thrown.
ChannelEstimate estimate_channel_all(const PilotSet& pilots,
                                     const std::vector<SignVector>& pilot_labels,
                                     EstimatorVariant variant, const SystemConfig& cfg,
                                     std::size_t threads = 0);

/// First half real parts, second half imaginary parts. Throws DimensionError on odd length.
CVec real_to_complex_estimate(const RVec& stacked);

struct MappedSymbols {
  std::vector<std::size_t> indices;
  CVec symbols;
};

/// Nearest point to x̄_k + j·x̄_{k+L} for each k, L = length/2; ties to the lowest index.
MappedSymbols map_to_constellation(const RVec& stacked, const Constellation& constellation);

struct DetectionResult {
  EstimatorVariant variant = EstimatorVariant::kGdaAda2;
  std::size_t T = 0;
  CVec x_fd;
  std::vector<std::size_t> symbol_indices;
  std::vector<std::uint8_t> bits;
  std::vector<boost::IterationRecord> trace;
};

struct DetectOptions {
  std::size_t block_times = 32;  // rows streamed per block per antenna (×2)
  /// Optional hook observing each normalized per-iteration vector x̄_d^(t).
  std::function<void(std::size_t t, const RVec& normalized)> on_iteration;
};

/// Detects x^FD from 2M·N_c data labels, streaming feature rows from `op`.
DetectionResult detect_data(const DetectionOperator& op, std::span<const Sign> labels,
                            EstimatorVariant variant, const Constellation& constellation,
                            const boost::BoostConfig& cfg, const DetectOptions& options = {});

}  // namespace onebit
