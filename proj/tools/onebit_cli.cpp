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

// Command-line front end for sweeps, benchmarks and single runs. Uses only
// the C interface of libonebit.

#include <charconv>
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "onebit/onebit.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct ConfigDeleter {
  void operator()(ob_config* c) const { ob_config_destroy(c); }
};
struct SweepDeleter {
  void operator()(ob_sweep* s) const { ob_sweep_destroy(s); }
};
struct ResultsDeleter {
  void operator()(ob_results* r) const { ob_results_destroy(r); }
};
using ConfigPtr = std::unique_ptr<ob_config, ConfigDeleter>;
using SweepPtr = std::unique_ptr<ob_sweep, SweepDeleter>;
using ResultsPtr = std::unique_ptr<ob_results, ResultsDeleter>;

struct Options {
  std::string config_path;
  std::string axis = "snr_db";
  std::string values;
  std::string variants;
  std::size_t trials = 0;  // 0 = subcommand default
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
  std::string mode;
  std::string pilot = "random-phase";
  std::size_t threads = 0;
  std::size_t warmup = 2;
  std::size_t repeats = 5;
  double min_sample_seconds = 0.02;
  std::string bench_target = "both";
};

// Status-to-exit mapping: malformed input is a usage error.
int report(ob_status status, std::string_view context) {
  std::cerr << "onebit: " << context << ": " << ob_last_error() << " (" << ob_status_name(status) << ")\n";
  switch (status) {
    case OB_ERR_INVALID_ARGUMENT:
    case OB_ERR_CONFIG:
    case OB_ERR_IO:
    case OB_ERR_PARSE:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string::npos ? text.size() : comma;
    std::string item = text.substr(start, end - start);
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    item = first == std::string::npos ? std::string() : item.substr(first, last - first + 1);
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_values(const std::string& text, std::vector<double>& out, std::string& bad) {
  for (const std::string& item : split_list(text)) {
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      bad = item;
      return false;
    }
    out.push_back(v);
  }
  return true;
}

void print_line(const char* line, void*) { std::cout << line << std::endl; }

std::string default_mode(std::string_view command) {
  if (command == "detect-sweep") return "detection_perfect_csi";
  if (command == "bench") return "bench_runtime";
  return "channel_estimation";
}

std::vector<std::string> default_variants(std::string_view mode, std::string_view command) {
  if (command == "single-run") return {"gda-ada-2"};
  if (mode == "channel_estimation") return {"gda-ada", "gda-ada-1", "gda-ada-2"};
  return {"gda-ada-1", "gda-ada-2"};
}

std::size_t default_trials(std::string_view mode, std::string_view command) {
  if (command == "single-run") return 1;
  if (mode == "channel_estimation") return 50;
  return 500;
}

int run(std::string_view command, const Options& opt) {
  ob_config* raw_cfg = nullptr;
  ob_status st = opt.config_path.empty() ? ob_config_create_default(&raw_cfg)
                                         : ob_config_from_file(opt.config_path.c_str(), &raw_cfg);
  if (st != OB_OK) return report(st, "loading config");
  ConfigPtr cfg(raw_cfg);
  if (opt.seed_given) ob_config_set_uint(cfg.get(), "seed", opt.seed);

  const std::string mode = opt.mode.empty() ? default_mode(command) : opt.mode;
  if (command == "bench" && mode != "bench_runtime") {
    std::cerr << "onebit: bench only supports --mode bench_runtime\n";
    return kExitUsage;
  }
  if (command != "bench" && mode == "bench_runtime") {
    std::cerr << "onebit: use the bench subcommand for bench_runtime\n";
    return kExitUsage;
  }

  ob_sweep* raw_sweep = nullptr;
  st = ob_sweep_create(cfg.get(), mode.c_str(), &raw_sweep);
  if (st != OB_OK) return report(st, "creating sweep");
  SweepPtr sweep(raw_sweep);

  std::vector<double> values;
  std::string axis = opt.axis;
  if (command == "single-run") {
    double snr = 0.0;
    ob_config_get_double(cfg.get(), "snr_db", &snr);
    axis = "snr_db";
    values = {snr};
    if (!opt.values.empty()) {
      std::cerr << "onebit: single-run takes the operating point from the config; --values is not allowed\n";
      return kExitUsage;
    }
  } else if (opt.values.empty()) {
    if (axis != "snr_db") {
      std::cerr << "onebit: --values is required for axis " << axis << "\n";
      return kExitUsage;
    }
    values = {-10, -5, 0, 5, 10, 15, 20};
  } else {
    std::string bad;
    if (!parse_values(opt.values, values, bad)) {
      std::cerr << "onebit: --values: '" << bad << "' is not a number\n";
      return kExitUsage;
    }
  }
  st = ob_sweep_set_axis(sweep.get(), axis.c_str(), values.data(), values.size());
  if (st != OB_OK) return report(st, "--axis");

  std::vector<std::string> names =
      opt.variants.empty() ? default_variants(mode, command) : split_list(opt.variants);
  std::vector<const char*> name_ptrs;
  for (const auto& n : names) name_ptrs.push_back(n.c_str());
  st = ob_sweep_set_variants(sweep.get(), name_ptrs.data(), name_ptrs.size());
  if (st != OB_OK) return report(st, "--variants");

  st = ob_sweep_set_trials(sweep.get(), opt.trials == 0 ? default_trials(mode, command) : opt.trials);
  if (st != OB_OK) return report(st, "--trials");
  st = ob_sweep_set_pilot(sweep.get(), opt.pilot.c_str());
  if (st != OB_OK) return report(st, "--pilot");
  ob_sweep_set_threads(sweep.get(), opt.threads);
  if (command == "bench") {
    st = ob_sweep_set_bench(sweep.get(), opt.warmup, opt.repeats, opt.min_sample_seconds,
                            opt.bench_target.c_str());
    if (st != OB_OK) return report(st, "bench options");
  }

  ob_results* raw_results = nullptr;
  st = ob_sweep_run(sweep.get(), print_line, nullptr, &raw_results);
  if (st != OB_OK) return report(st, "running sweep");
  ResultsPtr results(raw_results);

  const std::size_t config_errors = ob_results_config_error_count(results.get());
  for (std::size_t i = 0; i < config_errors; ++i) {
    std::cerr << "onebit: skipped " << ob_results_config_error(results.get(), i) << "\n";
  }
  if (command == "single-run") {
    ob_record rec{};
    for (std::size_t i = 0; i < ob_results_count(results.get()); ++i) {
      ob_results_get(results.get(), i, &rec);
      std::cout << rec.variant << " " << rec.metric << " " << rec.value << "\n";
    }
  }

  if (!opt.out.empty()) {
    st = ob_results_write_csv(results.get(), opt.out.c_str());
    if (st != OB_OK) return report(st, "writing CSV");
    std::string meta = opt.out;
    if (meta.size() >= 4 && meta.compare(meta.size() - 4, 4, ".csv") == 0) meta.resize(meta.size() - 4);
    meta += ".meta.json";
    st = ob_results_write_metadata(results.get(), meta.c_str());
    if (st != OB_OK) return report(st, "writing metadata");
    std::cout << "wrote " << ob_results_count(results.get()) << " records to " << opt.out << " (+" << meta
              << ")\n";
  }
  if (config_errors > 0 && ob_results_count(results.get()) == 0) return kExitUsage;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-bit MIMO-OFDM channel estimation and detection with GDA-AdaBoost"};
  app.set_version_flag("--version", std::string(ob_version()));
  app.require_subcommand(1, 1);

  Options opt;
  const struct {
    const char* name;
    const char* help;
  } commands[] = {
      {"estimate-sweep", "NMSE of channel estimation over an axis"},
      {"detect-sweep", "BER of data detection over an axis"},
      {"bench", "Median per-call runtimes of estimator and detector"},
      {"single-run", "One trial at the configured operating point"},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", opt.config_path, "SystemConfig JSON file");
    sub->add_option("--axis", opt.axis, "Swept field: snr_db, T, K or N_c");
    sub->add_option("--values", opt.values, "Comma-separated axis values")->allow_extra_args(false);
    sub->add_option("--variants", opt.variants, "Comma-separated: gda-ada, gda-ada-1, gda-ada-2");
    sub->add_option("--trials", opt.trials, "Monte-Carlo trials per point")->check(CLI::PositiveNumber);
    sub->add_option("--seed", opt.seed, "Base RNG seed (overrides the config)")
        ->each([&](const std::string&) { opt.seed_given = true; });
    sub->add_option("--out", opt.out, "CSV output path; metadata goes to <stem>.meta.json");
    sub->add_option("--mode", opt.mode,
                    "channel_estimation, detection_perfect_csi, detection_estimated_csi or bench_runtime");
    sub->add_option("--pilot", opt.pilot, "Pilot base: random-phase, chirp or ramp");
    sub->add_option("--threads", opt.threads, "Worker threads (0 = all cores)");
    sub->add_option("--warmup", opt.warmup, "bench: untimed warm-up calls");
    sub->add_option("--repeats", opt.repeats, "bench: timed repeats")->check(CLI::PositiveNumber);
    sub->add_option("--min-sample-seconds", opt.min_sample_seconds, "bench: minimum duration per sample");
    sub->add_option("--bench-target", opt.bench_target, "bench: estimator, detector or both");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  return run(command, opt);
}
