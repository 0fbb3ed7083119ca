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

#include "onebit/onebit.h"

#include <algorithm>
#include <exception>
#include <fstream>
#include <new>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "onebit/errors.hpp"
#include "onebit/harness.hpp"
#include "onebit/receivers.hpp"

struct ob_config {
  onebit::SystemConfig cfg;
};

struct ob_sweep {
  onebit::harness::SweepSpec spec;
};

struct ob_results {
  onebit::harness::SweepSpec spec;
  onebit::harness::ResultsTable table;
};

namespace {

thread_local std::string g_last_error;

ob_status fail(ob_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

ob_status null_arg(const char* what) { return fail(OB_ERR_INVALID_ARGUMENT, std::string(what) + " is NULL"); }

// Maps the core exception hierarchy to status codes.
template <class Fn>
ob_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const onebit::ConfigError& e) {
    return fail(OB_ERR_CONFIG, e.what());
  } catch (const onebit::DegenerateClassError& e) {
    return fail(OB_ERR_DEGENERATE, e.what());
  } catch (const onebit::DimensionError& e) {
    return fail(OB_ERR_DIMENSION, e.what());
  } catch (const onebit::SizingError& e) {
    return fail(OB_ERR_CONFIG, e.what());
  } catch (const onebit::BoostError& e) {
    return fail(OB_ERR_DEGENERATE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(OB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(OB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(OB_ERR_INTERNAL, "unknown error");
  }
}

std::size_t* uint_field(onebit::SystemConfig& c, std::string_view f) {
  if (f == "K") return &c.K;
  if (f == "M") return &c.M;
  if (f == "N_c") return &c.N_c;
  if (f == "N_cp") return &c.N_cp;
  if (f == "L_tap") return &c.L_tap;
  if (f == "T") return &c.T;
  return nullptr;
}

ob_status parse_config(const std::string& text, const std::string& origin, ob_config** out) {
  if (!nlohmann::json::accept(text)) {
    return fail(OB_ERR_PARSE, origin + ": invalid JSON");
  }
  return guarded([&] {
    try {
      auto* h = new ob_config{onebit::config_from_json(text)};
      *out = h;
      return OB_OK;
    } catch (const onebit::ConfigError& e) {
      return fail(OB_ERR_CONFIG, origin + ": " + e.what());
    }
  });
}

}  // namespace

extern "C" {

const char* ob_version(void) { return onebit::harness::kVersion.data(); }

const char* ob_last_error(void) { return g_last_error.c_str(); }

const char* ob_status_name(ob_status status) {
  switch (status) {
    case OB_OK:
      return "ok";
    case OB_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case OB_ERR_CONFIG:
      return "configuration error";
    case OB_ERR_IO:
      return "I/O error";
    case OB_ERR_PARSE:
      return "parse error";
    case OB_ERR_DEGENERATE:
      return "degenerate labels";
    case OB_ERR_DIMENSION:
      return "dimension mismatch";
    case OB_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

ob_status ob_config_create_default(ob_config** out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new ob_config{};
    return OB_OK;
  });
}

ob_status ob_config_from_json(const char* json_text, ob_config** out) {
  if (!json_text) return null_arg("json_text");
  if (!out) return null_arg("out");
  return parse_config(json_text, "config", out);
}

ob_status ob_config_from_file(const char* path, ob_config** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  std::ifstream in(path, std::ios::binary);
  if (!in) return fail(OB_ERR_IO, std::string(path) + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) return fail(OB_ERR_IO, std::string(path) + ": read failed");
  return parse_config(buf.str(), path, out);
}

ob_status ob_config_clone(const ob_config* cfg, ob_config** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new ob_config{*cfg};
    return OB_OK;
  });
}

void ob_config_destroy(ob_config* cfg) { delete cfg; }

ob_status ob_config_set_uint(ob_config* cfg, const char* field, uint64_t value) {
  if (!cfg) return null_arg("cfg");
  if (!field) return null_arg("field");
  if (std::string_view(field) == "seed") {
    cfg->cfg.seed = value;
    return OB_OK;
  }
  std::size_t* slot = uint_field(cfg->cfg, field);
  if (!slot) return fail(OB_ERR_INVALID_ARGUMENT, std::string("unknown integer field '") + field + "'");
  *slot = static_cast<std::size_t>(value);
  return OB_OK;
}

ob_status ob_config_get_uint(const ob_config* cfg, const char* field, uint64_t* out) {
  if (!cfg) return null_arg("cfg");
  if (!field) return null_arg("field");
  if (!out) return null_arg("out");
  if (std::string_view(field) == "seed") {
    *out = cfg->cfg.seed;
    return OB_OK;
  }
  onebit::SystemConfig copy = cfg->cfg;
  const std::size_t* slot = uint_field(copy, field);
  if (!slot) return fail(OB_ERR_INVALID_ARGUMENT, std::string("unknown integer field '") + field + "'");
  *out = *slot;
  return OB_OK;
}

ob_status ob_config_set_double(ob_config* cfg, const char* field, double value) {
  if (!cfg) return null_arg("cfg");
  if (!field) return null_arg("field");
  if (std::string_view(field) != "snr_db") {
    return fail(OB_ERR_INVALID_ARGUMENT, std::string("unknown real field '") + field + "'");
  }
  cfg->cfg.snr_db = value;
  return OB_OK;
}

ob_status ob_config_get_double(const ob_config* cfg, const char* field, double* out) {
  if (!cfg) return null_arg("cfg");
  if (!field) return null_arg("field");
  if (!out) return null_arg("out");
  if (std::string_view(field) != "snr_db") {
    return fail(OB_ERR_INVALID_ARGUMENT, std::string("unknown real field '") + field + "'");
  }
  *out = cfg->cfg.snr_db;
  return OB_OK;
}

ob_status ob_config_validate(const ob_config* cfg) {
  if (!cfg) return null_arg("cfg");
  return guarded([&] {
    cfg->cfg.validate();
    return OB_OK;
  });
}

ob_status ob_config_to_json(const ob_config* cfg, char* buf, size_t capacity, size_t* needed) {
  if (!cfg) return null_arg("cfg");
  return guarded([&] {
    const std::string text = onebit::config_to_json(cfg->cfg);
    if (needed) *needed = text.size() + 1;
    if (buf && capacity >= text.size() + 1) {
      text.copy(buf, text.size());
      buf[text.size()] = '\0';
    } else if (buf) {
      return fail(OB_ERR_INVALID_ARGUMENT, "buffer too small");
    }
    return OB_OK;
  });
}

ob_status ob_sweep_create(const ob_config* base, const char* mode, ob_sweep** out) {
  if (!base) return null_arg("base");
  if (!mode) return null_arg("mode");
  if (!out) return null_arg("out");
  return guarded([&] {
    const auto parsed = onebit::harness::mode_from_string(mode);
    auto* s = new ob_sweep{};
    s->spec.base = base->cfg;
    s->spec.mode = parsed;
    s->spec.values = {base->cfg.snr_db};
    s->spec.variants = {onebit::EstimatorVariant::kGdaAda2};
    *out = s;
    return OB_OK;
  });
}

void ob_sweep_destroy(ob_sweep* sweep) { delete sweep; }

ob_status ob_sweep_set_axis(ob_sweep* sweep, const char* axis, const double* values, size_t count) {
  if (!sweep) return null_arg("sweep");
  if (!axis) return null_arg("axis");
  if (!values && count > 0) return null_arg("values");
  return guarded([&] {
    sweep->spec.axis = onebit::harness::axis_from_string(axis);
    sweep->spec.values.assign(values, values + count);
    return OB_OK;
  });
}

ob_status ob_sweep_set_variants(ob_sweep* sweep, const char* const* names, size_t count) {
  if (!sweep) return null_arg("sweep");
  if (!names && count > 0) return null_arg("names");
  std::vector<onebit::EstimatorVariant> variants;
  for (size_t i = 0; i < count; ++i) {
    if (!names[i]) return null_arg("variant name");
    try {
      variants.push_back(onebit::variant_from_string(names[i]));
    } catch (const onebit::ConfigError& e) {
      return fail(OB_ERR_INVALID_ARGUMENT, e.what());
    }
  }
  sweep->spec.variants = std::move(variants);
  return OB_OK;
}

ob_status ob_sweep_set_trials(ob_sweep* sweep, size_t trials) {
  if (!sweep) return null_arg("sweep");
  if (trials == 0) return fail(OB_ERR_INVALID_ARGUMENT, "trials must be >= 1");
  sweep->spec.trials = trials;
  return OB_OK;
}

ob_status ob_sweep_set_pilot(ob_sweep* sweep, const char* pilot) {
  if (!sweep) return null_arg("sweep");
  if (!pilot) return null_arg("pilot");
  try {
    sweep->spec.pilot = onebit::pilot_base_from_string(pilot);
  } catch (const onebit::ConfigError& e) {
    return fail(OB_ERR_INVALID_ARGUMENT, e.what());
  }
  return OB_OK;
}

ob_status ob_sweep_set_threads(ob_sweep* sweep, size_t threads) {
  if (!sweep) return null_arg("sweep");
  sweep->spec.threads = threads;
  return OB_OK;
}

ob_status ob_sweep_set_bench(ob_sweep* sweep, size_t warmup, size_t repeats, double min_sample_seconds,
                             const char* target) {
  using onebit::harness::BenchTarget;
  if (!sweep) return null_arg("sweep");
  if (!target) return null_arg("target");
  if (repeats == 0) return fail(OB_ERR_INVALID_ARGUMENT, "repeats must be >= 1");
  if (!(min_sample_seconds >= 0.0)) return fail(OB_ERR_INVALID_ARGUMENT, "min_sample_seconds must be >= 0");
  const std::string_view t(target);
  BenchTarget bt;
  if (t == "estimator") {
    bt = BenchTarget::kEstimator;
  } else if (t == "detector") {
    bt = BenchTarget::kDetector;
  } else if (t == "both") {
    bt = BenchTarget::kBoth;
  } else {
    return fail(OB_ERR_INVALID_ARGUMENT, "unknown bench target '" + std::string(t) + "'");
  }
  sweep->spec.warmup = warmup;
  sweep->spec.repeats = repeats;
  sweep->spec.min_sample_seconds = min_sample_seconds;
  sweep->spec.bench_target = bt;
  return OB_OK;
}

ob_status ob_sweep_run(const ob_sweep* sweep, ob_progress_fn progress, void* user, ob_results** out) {
  if (!sweep) return null_arg("sweep");
  if (!out) return null_arg("out");
  return guarded([&] {
    onebit::harness::ProgressFn fn;
    if (progress) fn = [progress, user](const std::string& line) { progress(line.c_str(), user); };
    auto* r = new ob_results{sweep->spec, {}};
    try {
      r->table = onebit::harness::run_sweep(sweep->spec, fn);
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
    return OB_OK;
  });
}

void ob_results_destroy(ob_results* results) { delete results; }

size_t ob_results_count(const ob_results* results) { return results ? results->table.records.size() : 0; }

ob_status ob_results_get(const ob_results* results, size_t index, ob_record* out) {
  if (!results) return null_arg("results");
  if (!out) return null_arg("out");
  if (index >= results->table.records.size()) return fail(OB_ERR_INVALID_ARGUMENT, "record index out of range");
  const auto& r = results->table.records[index];
  out->mode = onebit::harness::to_string(r.mode).data();
  out->variant = onebit::to_string(r.variant).data();
  out->axis = onebit::harness::to_string(r.axis).data();
  out->axis_value = r.axis_value;
  out->metric = r.metric.c_str();
  out->value = r.value;
  out->trials = r.trials;
  out->seed = r.seed;
  out->wall_s = r.wall_s;
  return OB_OK;
}

size_t ob_results_discarded(const ob_results* results) {
  if (!results) return 0;
  size_t total = 0;
  for (const auto& p : results->table.points) total += p.discarded;
  return total;
}

size_t ob_results_config_error_count(const ob_results* results) {
  return results ? results->table.config_errors.size() : 0;
}

const char* ob_results_config_error(const ob_results* results, size_t index) {
  if (!results || index >= results->table.config_errors.size()) return nullptr;
  return results->table.config_errors[index].c_str();
}

ob_status ob_results_write_csv(const ob_results* results, const char* path) {
  if (!results) return null_arg("results");
  if (!path) return null_arg("path");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return fail(OB_ERR_IO, std::string(path) + ": cannot open for writing");
  onebit::harness::write_csv(results->table, out);
  out.flush();
  if (!out) return fail(OB_ERR_IO, std::string(path) + ": write failed");
  return OB_OK;
}

ob_status ob_results_write_metadata(const ob_results* results, const char* path) {
  if (!results) return null_arg("results");
  if (!path) return null_arg("path");
  return guarded([&] {
    const std::string text = onebit::harness::metadata_json(results->spec, results->table);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) return fail(OB_ERR_IO, std::string(path) + ": cannot open for writing");
    out << text << "\n";
    out.flush();
    if (!out) return fail(OB_ERR_IO, std::string(path) + ": write failed");
    return OB_OK;
  });
}

ob_status ob_estimate_channel(const ob_config* cfg, const char* pilot, const char* variant,
                              const int8_t* labels, size_t label_count, double* taps_re, double* taps_im,
                              size_t tap_count) {
  if (!cfg) return null_arg("cfg");
  if (!pilot) return null_arg("pilot");
  if (!variant) return null_arg("variant");
  if (!labels) return null_arg("labels");
  if (!taps_re || !taps_im) return null_arg("taps");
  return guarded([&] {
    const onebit::SystemConfig& c = cfg->cfg;
    c.validate();
    const std::size_t per_antenna = 2 * c.N_c;
    if (label_count != c.M * per_antenna) {
      return fail(OB_ERR_DIMENSION, "expected M*2*N_c = " + std::to_string(c.M * per_antenna) + " labels");
    }
    if (tap_count != c.M * c.K * c.L_tap) {
      return fail(OB_ERR_DIMENSION, "expected M*K*L_tap = " + std::to_string(c.M * c.K * c.L_tap) + " taps");
    }
    const auto v = onebit::variant_from_string(variant);
    const onebit::PilotSet pilots = onebit::build_pilots(c, onebit::pilot_base_from_string(pilot));
    std::vector<onebit::SignVector> rows(c.M);
    for (std::size_t i = 0; i < c.M; ++i) {
      rows[i].assign(labels + i * per_antenna, labels + (i + 1) * per_antenna);
      for (int8_t y : rows[i]) {
        if (y != 1 && y != -1) return fail(OB_ERR_INVALID_ARGUMENT, "labels must be +1 or -1");
      }
    }
    const onebit::ChannelEstimate est = onebit::estimate_channel_all(pilots, rows, v, c);
    if (!est.ok()) {
      const auto& f = est.failures.front();
      return fail(OB_ERR_DEGENERATE, "antenna " + std::to_string(f.antenna) + ": " + f.message);
    }
    const std::size_t kl = c.K * c.L_tap;
    for (std::size_t i = 0; i < c.M; ++i) {
      for (std::size_t q = 0; q < kl; ++q) {
        const auto h = est.taps(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(q));
        taps_re[i * kl + q] = h.real();
        taps_im[i * kl + q] = h.imag();
      }
    }
    return OB_OK;
  });
}

ob_status ob_detect(const ob_config* cfg, const char* variant, const double* taps_re, const double* taps_im,
                    size_t tap_count, const int8_t* labels, size_t label_count, uint8_t* bits,
                    size_t bit_count) {
  if (!cfg) return null_arg("cfg");
  if (!variant) return null_arg("variant");
  if (!taps_re || !taps_im) return null_arg("taps");
  if (!labels) return null_arg("labels");
  if (!bits) return null_arg("bits");
  return guarded([&] {
    const onebit::SystemConfig& c = cfg->cfg;
    c.validate();
    const std::size_t kl = c.K * c.L_tap;
    if (tap_count != c.M * kl) {
      return fail(OB_ERR_DIMENSION, "expected M*K*L_tap = " + std::to_string(c.M * kl) + " taps");
    }
    if (label_count != 2 * c.M * c.N_c) {
      return fail(OB_ERR_DIMENSION, "expected 2*M*N_c = " + std::to_string(2 * c.M * c.N_c) + " labels");
    }
    const auto constellation = onebit::Constellation::qpsk();
    if (bit_count != c.K * c.N_c * constellation.bits_per_symbol()) {
      return fail(OB_ERR_DIMENSION, "expected 2*K*N_c = " + std::to_string(2 * c.K * c.N_c) + " bits");
    }
    const auto v = onebit::variant_from_string(variant);
    onebit::CMat taps(static_cast<Eigen::Index>(c.M), static_cast<Eigen::Index>(kl));
    for (std::size_t i = 0; i < c.M; ++i) {
      for (std::size_t q = 0; q < kl; ++q) {
        taps(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(q)) =
            onebit::Complex(taps_re[i * kl + q], taps_im[i * kl + q]);
      }
    }
    onebit::SignVector y(labels, labels + label_count);
    for (int8_t s : y) {
      if (s != 1 && s != -1) return fail(OB_ERR_INVALID_ARGUMENT, "labels must be +1 or -1");
    }
    const onebit::DetectionOperator op(taps, c.K, c.L_tap, c.N_c);
    const onebit::DetectionResult det = onebit::detect_data(op, y, v, constellation, onebit::boost_config(c));
    std::copy(det.bits.begin(), det.bits.end(), bits);
    return OB_OK;
  });
}

}  // extern "C"
