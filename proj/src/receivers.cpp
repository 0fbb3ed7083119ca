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

#include "onebit/receivers.hpp"

#include <cmath>
#include <exception>

#include "onebit/errors.hpp"
#include "parallel.hpp"

namespace onebit {

std::string_view to_string(EstimatorVariant v) {
  switch (v) {
    case EstimatorVariant::kGdaAda:
      return "gda-ada";
    case EstimatorVariant::kGdaAda1:
      return "gda-ada-1";
    case EstimatorVariant::kGdaAda2:
      return "gda-ada-2";
  }
  return "gda-ada-2";
}

EstimatorVariant variant_from_string(std::string_view name) {
  if (name == "gda-ada") return EstimatorVariant::kGdaAda;
  if (name == "gda-ada-1") return EstimatorVariant::kGdaAda1;
  if (name == "gda-ada-2") return EstimatorVariant::kGdaAda2;
  throw ConfigError("unknown variant '" + std::string(name) +
                    "' (expected gda-ada, gda-ada-1 or gda-ada-2)");
}

gda::WeakRule weak_rule(EstimatorVariant v) {
  switch (v) {
    case EstimatorVariant::kGdaAda:
      return gda::WeakRule::kFull;
    case EstimatorVariant::kGdaAda1:
      return gda::WeakRule::kDiag;
    case EstimatorVariant::kGdaAda2:
      return gda::WeakRule::kMeanDiff;
  }
  return gda::WeakRule::kMeanDiff;
}

boost::BoostConfig boost_config(const SystemConfig& cfg) {
  boost::BoostConfig b;
  b.T = cfg.T;
  return b;
}

namespace {

void require_both_classes(std::span<const Sign> labels, const char* who) {
  bool pos = false;
  bool neg = false;
  for (Sign y : labels) {
    pos = pos || y > 0;
    neg = neg || y < 0;
  }
  if (!pos || !neg) throw DegenerateClassError(std::string(who) + ": labels contain a single class");
}

RVec scaled_to_norm(const RVec& v, double squared_norm, const char* who) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(std::string(who) + ": combined vector has zero or non-finite norm");
  }
  return v * (std::sqrt(squared_norm) / norm);
}

}  // namespace

AntennaEstimate estimate_channel_antenna(const RMat& phi_real, std::span<const Sign> labels,
                                         EstimatorVariant variant, std::size_t K,
                                         const boost::BoostConfig& cfg) {
  if (static_cast<std::size_t>(phi_real.rows()) != labels.size()) {
    throw DimensionError("estimate_channel_antenna: Φ_R has " + std::to_string(phi_real.rows()) +
                         " rows but " + std::to_string(labels.size()) + " labels");
  }
  require_both_classes(labels, "estimate_channel_antenna");

  const gda::DenseFeatures features(phi_real);
  const gda::WeakRule rule = weak_rule(variant);
  auto fit = [&](std::span<const double> weights) {
    const gda::WeightedTrainingSet ts{features, labels, weights};
    return gda::fit_weak(rule, ts);
  };
  auto identity = [](const RVec& h) { return h; };
  auto predict = [&](const RVec& h) { return sign_vector(phi_real * h); };

  boost::BoostResult run = boost::run_boost(labels, fit, identity, predict, cfg);
  AntennaEstimate est;
  est.h_real = scaled_to_norm(run.combined, static_cast<double>(K), "estimate_channel_antenna");
  est.trace = std::move(run.trace);
  return est;
}

ChannelEstimate estimate_channel_all(const PilotSet& pilots,
                                     const std::vector<SignVector>& pilot_labels,
                                     EstimatorVariant variant, const SystemConfig& cfg,
                                     std::size_t threads) {
  const std::size_t m = pilot_labels.size();
  const auto dim = static_cast<Eigen::Index>(2 * cfg.K * cfg.L_tap);
  if (pilots.phi_real.cols() != dim) {
    throw DimensionError("estimate_channel_all: pilot matrix does not match K*L_tap");
  }
  ChannelEstimate out;
  out.variant = variant;
  out.T = cfg.T;
  out.real_stacks = RMat::Zero(static_cast<Eigen::Index>(m), dim);
  out.taps = CMat::Zero(static_cast<Eigen::Index>(m), dim / 2);
  out.traces.resize(m);

  const boost::BoostConfig bcfg = boost_config(cfg);
  std::vector<std::string> errors(m);
  std::vector<RVec> rows(m);
  detail::parallel_for(m, threads, [&](std::size_t i) {
    try {
      AntennaEstimate est = estimate_channel_antenna(pilots.phi_real, pilot_labels[i], variant, cfg.K, bcfg);
      rows[i] = std::move(est.h_real);
      out.traces[i] = std::move(est.trace);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < m; ++i) {
    if (!errors[i].empty()) {
      out.failures.push_back({i, errors[i]});
      continue;
    }
    out.real_stacks.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    out.taps.row(static_cast<Eigen::Index>(i)) = real_to_complex_estimate(rows[i]).transpose();
  }
  return out;
}

CVec real_to_complex_estimate(const RVec& stacked) { return real_unstack_vector(stacked); }

MappedSymbols map_to_constellation(const RVec& stacked, const Constellation& constellation) {
  if (stacked.size() % 2 != 0) throw DimensionError("map_to_constellation: odd length");
  const Eigen::Index half = stacked.size() / 2;
  MappedSymbols out;
  out.indices.resize(static_cast<std::size_t>(half));
  out.symbols.resize(half);
  for (Eigen::Index k = 0; k < half; ++k) {
    const std::size_t idx = constellation.nearest(Complex(stacked[k], stacked[k + half]));
    out.indices[static_cast<std::size_t>(k)] = idx;
    out.symbols[k] = constellation.point(idx);
  }
  return out;
}

DetectionResult detect_data(const DetectionOperator& op, std::span<const Sign> labels,
                            EstimatorVariant variant, const Constellation& constellation,
                            const boost::BoostConfig& cfg, const DetectOptions& options) {
  if (labels.size() != op.rows()) {
    throw DimensionError("detect_data: expected " + std::to_string(op.rows()) + " labels, got " +
                         std::to_string(labels.size()));
  }
  require_both_classes(labels, "detect_data");

  const double power = static_cast<double>(op.users() * op.subcarriers());
  const gda::OperatorFeatures features(op, options.block_times);
  const gda::WeakRule rule = weak_rule(variant);
  std::size_t iteration = 0;

  auto fit = [&](std::span<const double> weights) {
    const gda::WeightedTrainingSet ts{features, labels, weights};
    return gda::fit_weak(rule, ts);
  };
  auto normalize_and_map = [&](const RVec& weak) {
    ++iteration;
    const RVec normalized = scaled_to_norm(weak, power, "detect_data");
    if (options.on_iteration) options.on_iteration(iteration, normalized);
    return real_stack_vector(map_to_constellation(normalized, constellation).symbols);
  };
  auto predict = [&](const RVec& mapped) { return sign_vector(op.apply(mapped)); };

  boost::BoostResult run = boost::run_boost(labels, fit, normalize_and_map, predict, cfg);
  const RVec combined = scaled_to_norm(run.combined, power, "detect_data");
  MappedSymbols mapped = map_to_constellation(combined, constellation);

  DetectionResult out;
  out.variant = variant;
  out.T = cfg.T;
  out.x_fd = std::move(mapped.symbols);
  out.symbol_indices = std::move(mapped.indices);
  out.bits.reserve(out.symbol_indices.size() * constellation.bits_per_symbol());
  for (std::size_t idx : out.symbol_indices) {
    const auto& label = constellation.label(idx);
    out.bits.insert(out.bits.end(), label.begin(), label.end());
  }
  out.trace = std::move(run.trace);
  return out;
}

}  // namespace onebit
