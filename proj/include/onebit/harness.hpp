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

// Monte-Carlo sweeps, runtime benchmarks, metrics and result persistence.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "onebit/airlink.hpp"
#include "onebit/receivers.hpp"

namespace onebit::harness {

inline constexpr std::string_view kVersion = "onebit-ada 0.1.0";
inline constexpr std::string_view kCsvHeader = "mode,variant,axis,axis_value,metric,value,trials,seed,wall_s";

/// ‖H − Ĥ‖_F² / (K·M) for M × K·L_tap tap matrices.
double nmse(const CMat& truth, const CMat& estimate, std::size_t K);

/// Hamming distance / length.
double ber(std::span<const std::uint8_t> truth, std::span<const std::uint8_t> decoded);

double to_db(double linear);

enum class Mode { kChannelEstimation, kDetectionPerfectCsi, kDetectionEstimatedCsi, kBenchRuntime };
enum class Axis { kSnrDb, kT, kK, kNc };

std::string_view to_string(Mode mode);
std::string_view to_string(Axis axis);
Mode mode_from_string(std::string_view name);
Axis axis_from_string(std::string_view name);

enum class BenchTarget { kEstimator, kDetector, kBoth };

struct SweepSpec {
  SystemConfig base;
  Axis axis = Axis::kSnrDb;
  std::vector<double> values;
  std::vector<EstimatorVariant> variants;
  std::size_t trials = 50;
  Mode mode = Mode::kChannelEstimation;
  PilotBase pilot = PilotBase::kRandomPhase;
  std::size_t threads = 0;  // 0 = hardware concurrency

  // bench_runtime only
  std::size_t warmup = 2;
  std::size_t repeats = 5;
  double min_sample_seconds = 0.02;  // each timing sample loops until this much time passes
  BenchTarget bench_target = BenchTarget::kBoth;

  /// Throws ConfigError if trials < 1, values are not strictly increasing,
  /// the variant list is empty, or any derived SystemConfig is invalid.
  void validate() const;
  /// The base config with the swept field set to `value`.
  SystemConfig config_at(double value) const;
};

struct Record {
  Mode mode;
  EstimatorVariant variant;
  Axis axis;
  double axis_value;
  std::string metric;
  double value;
  std::size_t trials;
  std::uint64_t seed;
  double wall_s;
};

/// Per-point detail behind one aggregated record.
struct PointDetail {
  EstimatorVariant variant;
  double axis_value;
  std::string metric;
  std::vector<double> per_trial;   // successful trials, in trial order
  std::size_t discarded = 0;
  std::vector<std::string> messages;
};

struct TimingSample {
  EstimatorVariant variant;
  double axis_value;
  std::string metric;
  std::vector<double> seconds;  // per-call seconds, one per repeat
};

struct ResultsTable {
  std::vector<Record> records;
  std::vector<PointDetail> points;
  std::vector<TimingSample> raw_timings;
  std::vector<std::string> config_errors;  // axis values skipped for invalid configs

  /// Record for (variant, axis value, metric), or nullptr.
  const Record* find(EstimatorVariant variant, double axis_value, std::string_view metric) const;
  const PointDetail* find_point(EstimatorVariant variant, double axis_value, std::string_view metric) const;
};

using ProgressFn = std::function<void(const std::string& line)>;

/// Runs the sweep; metric values are deterministic in (spec, seed). Degenerate
/// trials are excluded from means and counted. bench_runtime mode delegates
/// to bench_runtime().
ResultsTable run_sweep(const SweepSpec& spec, const ProgressFn& progress = {});

/// Median-of-repeats per-call wall-clock time of estimate_channel_antenna
/// ("estimate_s", one antenna) and detect_data ("detect_s", perfect CSI),
/// after warm-up, single-threaded.
ResultsTable bench_runtime(const SweepSpec& spec, const ProgressFn& progress = {});

void write_csv(const ResultsTable& table, std::ostream& out);
/// Sidecar metadata: config, conventions, clamp constants, version, per-point counts.
std::string metadata_json(const SweepSpec& spec, const ResultsTable& table);
/// "<stem>.meta.json" next to the CSV path.
std::string metadata_path_for(const std::string& csv_path);

/// Shortest round-trip decimal representation.
std::string format_number(double v);

}  // namespace onebit::harness
