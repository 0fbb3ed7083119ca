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

#ifndef ONEBIT_ONEBIT_H
#define ONEBIT_ONEBIT_H

/*
 * C interface to the onebit-ada library: one-bit MIMO-OFDM channel
 * estimation and data detection with GDA-weighted AdaBoost.
 *
 * Every fallible call returns an ob_status. On failure, ob_last_error()
 * returns a thread-local message valid until the next failing call on the
 * same thread. Handles are opaque and owned by the caller; destroy
 * functions accept NULL.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(ONEBIT_BUILDING)
#define OB_API __declspec(dllexport)
#else
#define OB_API __declspec(dllimport)
#endif
#else
#define OB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ob_status {
  OB_OK = 0,
  OB_ERR_INVALID_ARGUMENT = 1, /* NULL pointer, unknown name, bad length */
  OB_ERR_CONFIG = 2,           /* configuration violates an invariant */
  OB_ERR_IO = 3,               /* file cannot be read or written */
  OB_ERR_PARSE = 4,            /* malformed JSON */
  OB_ERR_DEGENERATE = 5,       /* labels contain a single class */
  OB_ERR_DIMENSION = 6,        /* inconsistent shapes */
  OB_ERR_INTERNAL = 7
} ob_status;

typedef struct ob_config ob_config;
typedef struct ob_sweep ob_sweep;
typedef struct ob_results ob_results;

OB_API const char* ob_version(void);
OB_API const char* ob_last_error(void);
OB_API const char* ob_status_name(ob_status status);

/* ---- system configuration ---- */

OB_API ob_status ob_config_create_default(ob_config** out);
OB_API ob_status ob_config_from_json(const char* json_text, ob_config** out);
/* OB_ERR_IO if unreadable, OB_ERR_PARSE if not JSON, OB_ERR_CONFIG otherwise. */
OB_API ob_status ob_config_from_file(const char* path, ob_config** out);
OB_API ob_status ob_config_clone(const ob_config* cfg, ob_config** out);
OB_API void ob_config_destroy(ob_config* cfg);

/* Integer fields: "K", "M", "N_c", "N_cp", "L_tap", "T", "seed".
 * Real fields: "snr_db". Setters do not validate; see ob_config_validate. */
OB_API ob_status ob_config_set_uint(ob_config* cfg, const char* field, uint64_t value);
OB_API ob_status ob_config_get_uint(const ob_config* cfg, const char* field, uint64_t* out);
OB_API ob_status ob_config_set_double(ob_config* cfg, const char* field, double value);
OB_API ob_status ob_config_get_double(const ob_config* cfg, const char* field, double* out);
OB_API ob_status ob_config_validate(const ob_config* cfg);

/* Writes NUL-terminated JSON into buf when capacity suffices; *needed gets
 * the required size including the terminator. buf may be NULL. */
OB_API ob_status ob_config_to_json(const ob_config* cfg, char* buf, size_t capacity, size_t* needed);

/* ---- sweeps ---- */

/* mode: "channel_estimation", "detection_perfect_csi",
 * "detection_estimated_csi", "bench_runtime". */
OB_API ob_status ob_sweep_create(const ob_config* base, const char* mode, ob_sweep** out);
OB_API void ob_sweep_destroy(ob_sweep* sweep);

/* axis: "snr_db", "T", "K", "N_c". */
OB_API ob_status ob_sweep_set_axis(ob_sweep* sweep, const char* axis, const double* values, size_t count);
/* names: "gda-ada", "gda-ada-1", "gda-ada-2". */
OB_API ob_status ob_sweep_set_variants(ob_sweep* sweep, const char* const* names, size_t count);
OB_API ob_status ob_sweep_set_trials(ob_sweep* sweep, size_t trials);
/* pilot: "random-phase" (default), "chirp" or "ramp". */
OB_API ob_status ob_sweep_set_pilot(ob_sweep* sweep, const char* pilot);
/* 0 = hardware concurrency. */
OB_API ob_status ob_sweep_set_threads(ob_sweep* sweep, size_t threads);
/* target: "estimator", "detector", "both". */
OB_API ob_status ob_sweep_set_bench(ob_sweep* sweep, size_t warmup, size_t repeats,
                                    double min_sample_seconds, const char* target);

typedef void (*ob_progress_fn)(const char* line, void* user);

/* Runs the sweep; progress (may be NULL) receives one line per axis point. */
OB_API ob_status ob_sweep_run(const ob_sweep* sweep, ob_progress_fn progress, void* user,
                              ob_results** out);

/* ---- results ---- */

typedef struct ob_record {
  const char* mode;    /* strings live as long as the results handle */
  const char* variant;
  const char* axis;
  double axis_value;
  const char* metric;
  double value;
  uint64_t trials;     /* trials (or timing repeats) contributing to value */
  uint64_t seed;
  double wall_s;
} ob_record;

OB_API void ob_results_destroy(ob_results* results);
OB_API size_t ob_results_count(const ob_results* results);
OB_API ob_status ob_results_get(const ob_results* results, size_t index, ob_record* out);
/* Total trials discarded across all points. */
OB_API size_t ob_results_discarded(const ob_results* results);
/* Axis values skipped because their derived configuration was invalid. */
OB_API size_t ob_results_config_error_count(const ob_results* results);
OB_API const char* ob_results_config_error(const ob_results* results, size_t index);
OB_API ob_status ob_results_write_csv(const ob_results* results, const char* path);
OB_API ob_status ob_results_write_metadata(const ob_results* results, const char* path);

/* ---- single-shot receivers ---- */

/* Estimates the taps of all antennas from one-bit pilot observations.
 * labels: M rows of 2*N_c signs (+1/-1), row-major, real parts first.
 * taps_re/taps_im: M x (K*L_tap) row-major outputs. */
OB_API ob_status ob_estimate_channel(const ob_config* cfg, const char* pilot, const char* variant,
                                     const int8_t* labels, size_t label_count, double* taps_re,
                                     double* taps_im, size_t tap_count);

/* Detects QPSK data from 2*M*N_c one-bit labels given M x (K*L_tap) taps.
 * bits: 2*K*N_c outputs, user-major, MSB first per symbol. */
OB_API ob_status ob_detect(const ob_config* cfg, const char* variant, const double* taps_re,
                           const double* taps_im, size_t tap_count, const int8_t* labels,
                           size_t label_count, uint8_t* bits, size_t bit_count);

#ifdef __cplusplus
}
#endif

#endif /* ONEBIT_ONEBIT_H */
