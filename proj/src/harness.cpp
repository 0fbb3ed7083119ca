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

#include "onebit/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "onebit/errors.hpp"
#include "parallel.hpp"

namespace onebit::harness {

double nmse(const CMat& truth, const CMat& estimate, std::size_t K) {
  if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols()) {
    throw DimensionError("nmse: shape mismatch");
  }
  if (K == 0 || truth.rows() == 0) throw DimensionError("nmse: empty shape");
  return (truth - estimate).squaredNorm() / (static_cast<double>(K) * static_cast<double>(truth.rows()));
}

double ber(std::span<const std::uint8_t> truth, std::span<const std::uint8_t> decoded) {
  if (truth.size() != decoded.size()) throw DimensionError("ber: length mismatch");
  if (truth.empty()) throw DimensionError("ber: empty bit strings");
  std::size_t errors = 0;
  for (std::size_t b = 0; b < truth.size(); ++b) errors += truth[b] != decoded[b] ? 1 : 0;
  return static_cast<double>(errors) / static_cast<double>(truth.size());
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kChannelEstimation:
      return "channel_estimation";
    case Mode::kDetectionPerfectCsi:
      return "detection_perfect_csi";
    case Mode::kDetectionEstimatedCsi:
      return "detection_estimated_csi";
    case Mode::kBenchRuntime:
      return "bench_runtime";
  }
  return "channel_estimation";
}

std::string_view to_string(Axis axis) {
  switch (axis) {
    case Axis::kSnrDb:
      return "snr_db";
    case Axis::kT:
      return "T";
    case Axis::kK:
      return "K";
    case Axis::kNc:
      return "N_c";
  }
  return "snr_db";
}

Mode mode_from_string(std::string_view name) {
  for (Mode m : {Mode::kChannelEstimation, Mode::kDetectionPerfectCsi, Mode::kDetectionEstimatedCsi,
                 Mode::kBenchRuntime}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown mode '" + std::string(name) + "'");
}

Axis axis_from_string(std::string_view name) {
  for (Axis a : {Axis::kSnrDb, Axis::kT, Axis::kK, Axis::kNc}) {
    if (to_string(a) == name) return a;
  }
  throw ConfigError("unknown axis '" + std::string(name) + "' (expected snr_db, T, K or N_c)");
}

SystemConfig SweepSpec::config_at(double value) const {
  SystemConfig cfg = base;
  auto as_count = [&](const char* name) {
    if (!(value >= 1.0) || value != std::floor(value)) {
      throw ConfigError(std::string("axis ") + name + " needs positive integer values, got " +
                        format_number(value));
    }
    return static_cast<std::size_t>(value);
  };
  switch (axis) {
    case Axis::kSnrDb:
      cfg.snr_db = value;
      break;
    case Axis::kT:
      cfg.T = as_count("T");
      break;
    case Axis::kK:
      cfg.K = as_count("K");
      break;
    case Axis::kNc:
      cfg.N_c = as_count("N_c");
      break;
  }
  return cfg;
}

void SweepSpec::validate() const {
  if (trials < 1) throw ConfigError("sweep: trials must be >= 1");
  if (values.empty()) throw ConfigError("sweep: no axis values");
  if (variants.empty()) throw ConfigError("sweep: no variants");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) throw ConfigError("sweep: axis values must be strictly increasing");
  }
  if (mode == Mode::kBenchRuntime && repeats < 1) throw ConfigError("bench: repeats must be >= 1");
  base.validate();
}

const Record* ResultsTable::find(EstimatorVariant variant, double axis_value, std::string_view metric) const {
  for (const Record& r : records) {
    if (r.variant == variant && r.axis_value == axis_value && r.metric == metric) return &r;
  }
  return nullptr;
}

const PointDetail* ResultsTable::find_point(EstimatorVariant variant, double axis_value,
                                            std::string_view metric) const {
  for (const PointDetail& p : points) {
    if (p.variant == variant && p.axis_value == axis_value && p.metric == metric) return &p;
  }
  return nullptr;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct VariantOutcome {
  bool ok = false;
  double value = 0.0;
  double seconds = 0.0;
  std::string message;
};

struct TrialInputs {
  ChannelRealization chan;
  std::vector<SignVector> pilot_labels;
  DataBlock data;
  SignVector data_labels;
};

TrialInputs synthesize_trial(const SystemConfig& cfg, const PilotSet& pilots, std::size_t trial,
                             bool with_data, const Constellation& constellation) {
  TrialInputs in;
  RngStream chan_rng(cfg.seed, StreamTag::kChannel, trial);
  in.chan = generate_channel(cfg, chan_rng);
  const double noise_std = noise_component_std(cfg);
  std::vector<RngStream> pilot_noise;
  pilot_noise.reserve(cfg.M);
  for (std::size_t i = 0; i < cfg.M; ++i) pilot_noise.emplace_back(cfg.seed, StreamTag::kPilotNoise, trial, i);
  in.pilot_labels = synthesize_pilot_rx(cfg, pilots, in.chan, pilot_noise, noise_std);
  if (with_data) {
    RngStream sym_rng(cfg.seed, StreamTag::kDataSymbols, trial);
    in.data = generate_data_symbols(cfg, constellation, sym_rng);
    std::vector<RngStream> data_noise;
    data_noise.reserve(cfg.M);
    for (std::size_t i = 0; i < cfg.M; ++i) data_noise.emplace_back(cfg.seed, StreamTag::kDataNoise, trial, i);
    in.data_labels = synthesize_data_rx(cfg, in.chan, in.data.x_fd, data_noise, noise_std);
  }
  return in;
}

std::string failure_text(const ChannelEstimate& est) {
  std::ostringstream os;
  os << "antenna " << est.failures.front().antenna << ": " << est.failures.front().message;
  if (est.failures.size() > 1) os << " (+" << est.failures.size() - 1 << " more)";
  return os.str();
}

VariantOutcome run_variant(Mode mode, const SystemConfig& cfg, const PilotSet& pilots,
                           const TrialInputs& in, EstimatorVariant variant,
                           const Constellation& constellation) {
  VariantOutcome out;
  const auto start = Clock::now();
  try {
    if (mode == Mode::kChannelEstimation) {
      const ChannelEstimate est = estimate_channel_all(pilots, in.pilot_labels, variant, cfg);
      if (!est.ok()) {
        out.message = failure_text(est);
      } else {
        out.value = nmse(in.chan.taps, est.taps, cfg.K);
        out.ok = true;
      }
    } else {
      CMat taps = in.chan.taps;
      if (mode == Mode::kDetectionEstimatedCsi) {
        const ChannelEstimate est = estimate_channel_all(pilots, in.pilot_labels, variant, cfg);
        if (!est.ok()) {
          out.message = failure_text(est);
          out.seconds = seconds_since(start);
          return out;
        }
        taps = est.taps;
      }
      const DetectionOperator op(taps, cfg.K, cfg.L_tap, cfg.N_c);
      const DetectionResult det = detect_data(op, in.data_labels, variant, constellation, boost_config(cfg));
      out.value = ber(in.data.bits, det.bits);
      out.ok = true;
    }
  } catch (const Error& e) {
    out.message = e.what();
  }
  out.seconds = seconds_since(start);
  return out;
}

std::string metric_for(Mode mode) { return mode == Mode::kChannelEstimation ? "nmse" : "ber"; }

}  // namespace

ResultsTable run_sweep(const SweepSpec& spec, const ProgressFn& progress) {
  if (spec.mode == Mode::kBenchRuntime) return bench_runtime(spec, progress);
  spec.validate();

  ResultsTable table;
  const Constellation constellation = Constellation::qpsk();
  const std::size_t threads = spec.threads == 0 ? detail::default_threads() : spec.threads;
  const std::string metric = metric_for(spec.mode);
  const bool with_data = spec.mode != Mode::kChannelEstimation;
  const std::size_t nv = spec.variants.size();

  for (double value : spec.values) {
    SystemConfig cfg;
    try {
      cfg = spec.config_at(value);
      cfg.validate();
    } catch (const ConfigError& e) {
      table.config_errors.push_back(std::string(to_string(spec.axis)) + "=" + format_number(value) + ": " + e.what());
      if (progress) progress(table.config_errors.back());
      continue;
    }
    const PilotSet pilots = build_pilots(cfg, spec.pilot);

    std::vector<std::vector<VariantOutcome>> outcomes(spec.trials);
    detail::parallel_for(spec.trials, threads, [&](std::size_t trial) {
      const TrialInputs in = synthesize_trial(cfg, pilots, trial, with_data, constellation);
      auto& row = outcomes[trial];
      row.reserve(nv);
      for (EstimatorVariant v : spec.variants) {
        row.push_back(run_variant(spec.mode, cfg, pilots, in, v, constellation));
      }
    });

    std::ostringstream summary;
    summary << to_string(spec.axis) << "=" << format_number(value);
    for (std::size_t vi = 0; vi < nv; ++vi) {
      PointDetail point{spec.variants[vi], value, metric, {}, 0, {}};
      double wall = 0.0;
      for (std::size_t trial = 0; trial < spec.trials; ++trial) {
        const VariantOutcome& o = outcomes[trial][vi];
        wall += o.seconds;
        if (o.ok) {
          point.per_trial.push_back(o.value);
        } else {
          ++point.discarded;
          point.messages.push_back("trial " + std::to_string(trial) + ": " + o.message);
          std::cerr << "[onebit] discarded " << to_string(spec.variants[vi]) << " "
                    << to_string(spec.axis) << "=" << format_number(value) << " trial " << trial
                    << ": " << o.message << "\n";
        }
      }
      summary << "  " << to_string(spec.variants[vi]) << " ";
      if (!point.per_trial.empty()) {
        double sum = 0.0;
        for (double x : point.per_trial) sum += x;
        const double mean = sum / static_cast<double>(point.per_trial.size());
        table.records.push_back({spec.mode, spec.variants[vi], spec.axis, value, metric, mean,
                                 point.per_trial.size(), spec.base.seed, wall});
        summary << metric << "=" << format_number(mean);
        if (spec.mode == Mode::kChannelEstimation) summary << " (" << to_db(mean) << " dB)";
      } else {
        summary << metric << "=n/a";
      }
      if (point.discarded > 0) {
        summary << " discarded=" << point.discarded;
        if (static_cast<double>(point.discarded) > 0.01 * static_cast<double>(spec.trials)) {
          summary << " [ALARM: >1% trials discarded]";
        }
      }
      table.points.push_back(std::move(point));
    }
    if (progress) progress(summary.str());
  }
  return table;
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// One timing sample: loops fn until min_seconds have passed, returns seconds per call.
template <typename Fn>
double time_sample(Fn&& fn, double min_seconds) {
  std::size_t calls = 0;
  const auto start = Clock::now();
  double elapsed = 0.0;
  do {
    fn();
    ++calls;
    elapsed = seconds_since(start);
  } while (elapsed < min_seconds);
  return elapsed / static_cast<double>(calls);
}

struct BenchPoint {
  double value;
  SystemConfig cfg;
  PilotSet pilots;
  TrialInputs in;
  boost::BoostConfig bcfg;
  std::unique_ptr<DetectionOperator> op;
};

struct BenchJob {
  const BenchPoint* point;
  EstimatorVariant variant;
  std::string metric;
  std::function<void()> call;
  std::vector<double> samples;
  double wall = 0.0;
};

}  // namespace

ResultsTable bench_runtime(const SweepSpec& spec, const ProgressFn& progress) {
  spec.validate();
  ResultsTable table;
  const Constellation constellation = Constellation::qpsk();
  const bool do_est = spec.bench_target != BenchTarget::kDetector;
  const bool do_det = spec.bench_target != BenchTarget::kEstimator;

  std::vector<std::unique_ptr<BenchPoint>> points;
  for (double value : spec.values) {
    SystemConfig cfg;
    try {
      cfg = spec.config_at(value);
      cfg.validate();
    } catch (const ConfigError& e) {
      table.config_errors.push_back(std::string(to_string(spec.axis)) + "=" + format_number(value) + ": " + e.what());
      if (progress) progress(table.config_errors.back());
      continue;
    }
    auto pt = std::make_unique<BenchPoint>();
    pt->value = value;
    pt->cfg = cfg;
    pt->pilots = build_pilots(cfg, spec.pilot);
    pt->in = synthesize_trial(cfg, pt->pilots, 0, do_det, constellation);
    pt->bcfg = boost_config(cfg);
    pt->op = std::make_unique<DetectionOperator>(pt->in.chan.taps, cfg.K, cfg.L_tap, cfg.N_c);
    points.push_back(std::move(pt));
  }

  std::vector<BenchJob> jobs;
  for (const auto& pt : points) {
    const BenchPoint* p = pt.get();
    for (EstimatorVariant v : spec.variants) {
      if (do_est) {
        jobs.push_back({p, v, "estimate_s", [p, v] {
                          (void)estimate_channel_antenna(p->pilots.phi_real, p->in.pilot_labels[0], v, p->cfg.K,
                                                         p->bcfg);
                        }, {}, 0.0});
      }
      if (do_det) {
        jobs.push_back({p, v, "detect_s", [p, v, &constellation] {
                          (void)detect_data(*p->op, p->in.data_labels, v, constellation, p->bcfg);
                        }, {}, 0.0});
      }
    }
  }

  // Warm-up, dropping jobs that fail.
  std::vector<BenchJob> live;
  for (BenchJob& job : jobs) {
    const auto start = Clock::now();
    try {
      for (std::size_t w = 0; w < std::max<std::size_t>(spec.warmup, 1); ++w) job.call();
    } catch (const Error& e) {
      table.config_errors.push_back(std::string(to_string(job.variant)) + " " + std::string(to_string(spec.axis)) +
                                    "=" + format_number(job.point->value) + ": " + e.what());
      continue;
    }
    job.wall += seconds_since(start);
    live.push_back(std::move(job));
  }

  // Repeats run round-robin over all jobs so slow periods of the host spread
  // across the points instead of biasing one of them.
  for (std::size_t r = 0; r < spec.repeats; ++r) {
    for (BenchJob& job : live) {
      const auto start = Clock::now();
      job.samples.push_back(time_sample(job.call, spec.min_sample_seconds));
      job.wall += seconds_since(start);
    }
  }

  for (BenchJob& job : live) {
    const double med = median(job.samples);
    table.records.push_back({Mode::kBenchRuntime, job.variant, spec.axis, job.point->value, job.metric, med,
                             job.samples.size(), spec.base.seed, job.wall});
    if (progress) {
      progress(std::string(to_string(spec.axis)) + "=" + format_number(job.point->value) + "  " +
               std::string(to_string(job.variant)) + " " + job.metric + "=" + format_number(med));
    }
    table.raw_timings.push_back({job.variant, job.point->value, job.metric, std::move(job.samples)});
  }
  return table;
}

void write_csv(const ResultsTable& table, std::ostream& out) {
  out << kCsvHeader << "\n";
  for (const Record& r : table.records) {
    out << to_string(r.mode) << ',' << to_string(r.variant) << ',' << to_string(r.axis) << ','
        << format_number(r.axis_value) << ',' << r.metric << ',' << format_number(r.value) << ','
        << r.trials << ',' << r.seed << ',' << format_number(r.wall_s) << "\n";
  }
}

std::string metadata_path_for(const std::string& csv_path) {
  std::string stem = csv_path;
  if (stem.size() >= 4 && stem.compare(stem.size() - 4, 4, ".csv") == 0) stem.resize(stem.size() - 4);
  return stem + ".meta.json";
}

std::string metadata_json(const SweepSpec& spec, const ResultsTable& table) {
  using nlohmann::json;
  json doc;
  doc["version"] = kVersion;
  doc["config"] = json::parse(config_to_json(spec.base));
  doc["mode"] = to_string(spec.mode);
  doc["axis"] = to_string(spec.axis);
  doc["values"] = spec.values;
  json variants = json::array();
  for (EstimatorVariant v : spec.variants) variants.push_back(to_string(v));
  doc["variants"] = variants;
  doc["trials"] = spec.trials;
  doc["pilot_base"] = to_string(spec.pilot);
  doc["snr_convention"] =
      "complex noise variance sigma^2 = K * 10^(-snr_db/10); per-antenna receive signal power is K "
      "under unit-power users and channels";
  doc["alpha_coefficient"] = 0.25;
  doc["epsilon_clamp"] = 1e-10;
  doc["ridge_scale"] = gda::kRidgeScale;
  doc["variance_floor"] = gda::kVarianceFloor;
  doc["constellation"] = "qpsk";
  json points = json::array();
  for (const PointDetail& p : table.points) {
    points.push_back({{"variant", to_string(p.variant)},
                      {"axis_value", p.axis_value},
                      {"metric", p.metric},
                      {"trials_used", p.per_trial.size()},
                      {"discarded", p.discarded},
                      {"messages", p.messages}});
  }
  doc["points"] = points;
  if (!table.raw_timings.empty()) {
    json raw = json::array();
    for (const TimingSample& s : table.raw_timings) {
      raw.push_back({{"variant", to_string(s.variant)},
                     {"axis_value", s.axis_value},
                     {"metric", s.metric},
                     {"seconds", s.seconds}});
    }
    doc["raw_timings"] = raw;
    doc["bench"] = {{"warmup", spec.warmup}, {"repeats", spec.repeats},
                    {"min_sample_seconds", spec.min_sample_seconds}};
  }
  doc["config_errors"] = table.config_errors;
  return doc.dump(2);
}

}  // namespace onebit::harness
