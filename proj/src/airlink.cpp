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

#include "onebit/airlink.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include <json.hpp>

#include "onebit/errors.hpp"

namespace onebit {

void SystemConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("invalid SystemConfig: " + what); };
  if (K < 1) fail("K must be >= 1");
  if (M < 1) fail("M must be >= 1");
  if (L_tap < 1) fail("L_tap must be >= 1");
  if (T < 1) fail("T must be >= 1");
  if (!is_power_of_two(N_c)) fail("N_c must be a power of two, got " + std::to_string(N_c));
  if (N_cp + 1 < L_tap) fail("N_cp must satisfy L_tap - 1 <= N_cp");
  if (N_cp > N_c) fail("N_cp must satisfy N_cp <= N_c");
  if (K * L_tap > N_c) fail("K*L_tap must not exceed N_c");
  if (!std::isfinite(snr_db)) fail("snr_db must be finite");
}

namespace {

constexpr std::uint64_t kPilotSequenceSeed = 0x9117'5e9d'0b1a'da00ULL;

std::size_t read_count(const nlohmann::json& value, const std::string& key) {
  if (!value.is_number_integer() || value.get<std::int64_t>() < 0) {
    throw ConfigError("field '" + key + "' must be a non-negative integer");
  }
  return value.get<std::size_t>();
}

}  // namespace

SystemConfig config_from_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  SystemConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "K") {
      cfg.K = read_count(value, key);
    } else if (key == "M") {
      cfg.M = read_count(value, key);
    } else if (key == "N_c") {
      cfg.N_c = read_count(value, key);
    } else if (key == "N_cp") {
      cfg.N_cp = read_count(value, key);
    } else if (key == "L_tap") {
      cfg.L_tap = read_count(value, key);
    } else if (key == "T") {
      cfg.T = read_count(value, key);
    } else if (key == "snr_db") {
      if (!value.is_number()) throw ConfigError("field 'snr_db' must be a number");
      cfg.snr_db = value.get<double>();
    } else if (key == "seed") {
      if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<std::int64_t>() >= 0)) {
        throw ConfigError("field 'seed' must be an unsigned integer");
      }
      cfg.seed = value.get<std::uint64_t>();
    } else {
      throw ConfigError("unknown config field '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

std::string config_to_json(const SystemConfig& cfg) {
  nlohmann::json doc = {{"K", cfg.K},         {"M", cfg.M},         {"N_c", cfg.N_c},
                        {"N_cp", cfg.N_cp},   {"L_tap", cfg.L_tap}, {"snr_db", cfg.snr_db},
                        {"T", cfg.T},         {"seed", cfg.seed}};
  return doc.dump();
}

double noise_variance(const SystemConfig& cfg) {
  return static_cast<double>(cfg.K) * std::pow(10.0, -cfg.snr_db / 10.0);
}

double noise_component_std(const SystemConfig& cfg) { return std::sqrt(noise_variance(cfg) / 2.0); }

RVec ChannelRealization::real_row(std::size_t i) const {
  return real_stack_vector(taps.row(static_cast<Eigen::Index>(i)).transpose());
}

ChannelRealization generate_channel(const SystemConfig& cfg, RngStream& rng) {
  ChannelRealization chan;
  chan.K = cfg.K;
  chan.L_tap = cfg.L_tap;
  const auto cols = static_cast<Eigen::Index>(cfg.K * cfg.L_tap);
  chan.taps.resize(static_cast<Eigen::Index>(cfg.M), cols);
  const double component_std = std::sqrt(1.0 / (2.0 * static_cast<double>(cfg.L_tap)));
  for (Eigen::Index i = 0; i < chan.taps.rows(); ++i) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double re = rng.normal();
      const double im = rng.normal();
      chan.taps(i, c) = Complex(re, im) * component_std;
    }
  }
  return chan;
}

std::string_view to_string(PilotBase base) {
  switch (base) {
    case PilotBase::kChirp:
      return "chirp";
    case PilotBase::kRamp:
      return "ramp";
    case PilotBase::kRandomPhase:
      return "random-phase";
  }
  return "chirp";
}

PilotBase pilot_base_from_string(std::string_view name) {
  if (name == "chirp") return PilotBase::kChirp;
  if (name == "ramp") return PilotBase::kRamp;
  if (name == "random-phase") return PilotBase::kRandomPhase;
  throw ConfigError("unknown pilot base '" + std::string(name) + "' (expected chirp, ramp or random-phase)");
}

PilotSet build_pilots(const SystemConfig& cfg, PilotBase base) {
  if (cfg.K * cfg.L_tap > cfg.N_c) {
    throw ConfigError("build_pilots: K*L_tap = " + std::to_string(cfg.K * cfg.L_tap) +
                      " exceeds N_c = " + std::to_string(cfg.N_c));
  }
  if (!is_power_of_two(cfg.N_c)) throw SizingError("build_pilots: N_c must be a power of two");

  const std::size_t n_c = cfg.N_c;
  const double n = static_cast<double>(n_c);
  PilotSet set;
  set.base = base;
  set.phi.resize(static_cast<Eigen::Index>(n_c), static_cast<Eigen::Index>(cfg.K * cfg.L_tap));

  std::vector<double> base_phases(n_c, 0.0);
  if (base == PilotBase::kChirp) {
    // For even N the chirp is N-periodic and its DFT has constant modulus.
    for (std::size_t s = 0; s < n_c; ++s) {
      const double sd = static_cast<double>(s);
      base_phases[s] = -std::numbers::pi * sd * sd / n;
    }
  } else if (base == PilotBase::kRandomPhase) {
    RngStream rng(kPilotSequenceSeed, StreamTag::kPilotSequence, n_c);
    for (double& phase : base_phases) {
      phase = 2.0 * std::numbers::pi * std::ldexp(static_cast<double>(rng.next_u64() >> 11), -53);
    }
  }

  for (std::size_t k = 0; k < cfg.K; ++k) {
    CVec fd(static_cast<Eigen::Index>(n_c));
    for (std::size_t s = 0; s < n_c; ++s) {
      const double base_phase = base_phases[s];
      // Reduce the ramp index modulo N before scaling so the phase stays small.
      const std::size_t ramp = (s * k * cfg.L_tap) % n_c;
      const double ramp_phase = -2.0 * std::numbers::pi * static_cast<double>(ramp) / n;
      fd[static_cast<Eigen::Index>(s)] = std::polar(1.0, base_phase + ramp_phase);
    }
    CVec td = ifft_normalized(fd);
    for (std::size_t l = 0; l < cfg.L_tap; ++l) {
      const auto col = static_cast<Eigen::Index>(k * cfg.L_tap + l);
      for (std::size_t t = 0; t < n_c; ++t) {
        set.phi(static_cast<Eigen::Index>(t), col) = td[static_cast<Eigen::Index>((t + n_c - l) % n_c)];
      }
    }
    set.fd_pilots.push_back(std::move(fd));
    set.td_pilots.push_back(std::move(td));
  }
  set.phi_real = real_stack_matrix(set.phi);
  return set;
}

Constellation::Constellation(std::string name, std::vector<Complex> points,
                             std::vector<std::vector<std::uint8_t>> labels)
    : name_(std::move(name)), points_(std::move(points)), labels_(std::move(labels)) {
  bits_per_symbol_ = labels_.empty() ? 0 : labels_.front().size();
}

Constellation Constellation::qpsk() {
  const double a = 1.0 / std::numbers::sqrt2;
  std::vector<Complex> points;
  std::vector<std::vector<std::uint8_t>> labels;
  for (std::uint8_t b0 = 0; b0 < 2; ++b0) {
    for (std::uint8_t b1 = 0; b1 < 2; ++b1) {
      points.emplace_back(a * (1.0 - 2.0 * b0), a * (1.0 - 2.0 * b1));
      labels.push_back({b0, b1});
    }
  }
  return Constellation("qpsk", std::move(points), std::move(labels));
}

Constellation Constellation::qam16() {
  // Gray order along each axis: 00 → −3, 01 → −1, 11 → +1, 10 → +3.
  auto level = [](std::uint8_t hi, std::uint8_t lo) {
    if (hi == 0) return lo == 0 ? -3.0 : -1.0;
    return lo == 1 ? 1.0 : 3.0;
  };
  const double scale = 1.0 / std::sqrt(10.0);
  std::vector<Complex> points;
  std::vector<std::vector<std::uint8_t>> labels;
  for (unsigned idx = 0; idx < 16; ++idx) {
    const auto b0 = static_cast<std::uint8_t>((idx >> 3) & 1U);
    const auto b1 = static_cast<std::uint8_t>((idx >> 2) & 1U);
    const auto b2 = static_cast<std::uint8_t>((idx >> 1) & 1U);
    const auto b3 = static_cast<std::uint8_t>(idx & 1U);
    points.emplace_back(scale * level(b0, b1), scale * level(b2, b3));
    labels.push_back({b0, b1, b2, b3});
  }
  return Constellation("qam16", std::move(points), std::move(labels));
}

std::size_t Constellation::nearest(Complex value) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double d = std::norm(points_[i] - value);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

DataBlock generate_data_symbols(const SystemConfig& cfg, const Constellation& constellation,
                                RngStream& rng) {
  const std::size_t count = cfg.K * cfg.N_c;
  DataBlock block;
  block.x_fd.resize(static_cast<Eigen::Index>(count));
  block.symbol_indices.resize(count);
  block.bits.reserve(count * constellation.bits_per_symbol());
  for (std::size_t s = 0; s < count; ++s) {
    const std::size_t idx = rng.uniform_index(constellation.size());
    block.symbol_indices[s] = idx;
    block.x_fd[static_cast<Eigen::Index>(s)] = constellation.point(idx);
    const auto& label = constellation.label(idx);
    block.bits.insert(block.bits.end(), label.begin(), label.end());
  }
  return block;
}

CVec draw_noise(RngStream& rng, std::size_t n, double component_std) {
  CVec noise(static_cast<Eigen::Index>(n));
  for (std::size_t t = 0; t < n; ++t) noise[static_cast<Eigen::Index>(t)].real(rng.normal() * component_std);
  for (std::size_t t = 0; t < n; ++t) noise[static_cast<Eigen::Index>(t)].imag(rng.normal() * component_std);
  return noise;
}

namespace {

CVec padded_taps(const ChannelRealization& chan, std::size_t antenna, std::size_t user,
                 std::size_t n_c) {
  CVec g = CVec::Zero(static_cast<Eigen::Index>(n_c));
  const auto i = static_cast<Eigen::Index>(antenna);
  for (std::size_t l = 0; l < chan.L_tap; ++l) {
    g[static_cast<Eigen::Index>(l)] = chan.taps(i, static_cast<Eigen::Index>(user * chan.L_tap + l));
  }
  return g;
}

void check_noise_streams(const std::vector<RngStream>& streams, std::size_t antennas) {
  if (streams.size() != antennas) {
    throw DimensionError("expected " + std::to_string(antennas) + " noise streams, got " +
                         std::to_string(streams.size()));
  }
}

SignVector quantize_stacked(const CVec& r) {
  const CVec q = one_bit_quantize(r);
  SignVector labels(static_cast<std::size_t>(2 * r.size()));
  const auto n = static_cast<std::size_t>(r.size());
  for (std::size_t t = 0; t < n; ++t) {
    labels[t] = static_cast<Sign>(q[static_cast<Eigen::Index>(t)].real());
    labels[n + t] = static_cast<Sign>(q[static_cast<Eigen::Index>(t)].imag());
  }
  return labels;
}

}  // namespace

CVec pilot_rx_clean(const PilotSet& pilots, const ChannelRealization& chan, std::size_t antenna,
                    std::size_t n_c) {
  CVec s = CVec::Zero(static_cast<Eigen::Index>(n_c));
  for (std::size_t k = 0; k < chan.K; ++k) {
    s += circulant_apply(padded_taps(chan, antenna, k, n_c), pilots.td_pilots[k]);
  }
  return s;
}

std::vector<SignVector> synthesize_pilot_rx(const SystemConfig& cfg, const PilotSet& pilots,
                                            const ChannelRealization& chan,
                                            std::vector<RngStream>& noise_streams,
                                            double component_std) {
  if (pilots.td_pilots.size() != cfg.K || chan.K != cfg.K || chan.antennas() != cfg.M) {
    throw DimensionError("synthesize_pilot_rx: pilots/channel do not match the config");
  }
  check_noise_streams(noise_streams, cfg.M);
  std::vector<SignVector> out;
  out.reserve(cfg.M);
  for (std::size_t i = 0; i < cfg.M; ++i) {
    CVec r = pilot_rx_clean(pilots, chan, i, cfg.N_c);
    r += draw_noise(noise_streams[i], cfg.N_c, component_std);
    out.push_back(quantize_stacked(r));
  }
  return out;
}

SignVector synthesize_data_rx(const SystemConfig& cfg, const ChannelRealization& chan,
                              const CVec& x_fd, std::vector<RngStream>& noise_streams,
                              double component_std) {
  const std::size_t n_c = cfg.N_c;
  if (static_cast<std::size_t>(x_fd.size()) != cfg.K * n_c || chan.antennas() != cfg.M ||
      chan.K != cfg.K) {
    throw DimensionError("synthesize_data_rx: symbol vector/channel do not match the config");
  }
  check_noise_streams(noise_streams, cfg.M);

  std::vector<CVec> td(cfg.K);
  for (std::size_t k = 0; k < cfg.K; ++k) {
    td[k] = ifft_normalized(x_fd.segment(static_cast<Eigen::Index>(k * n_c), static_cast<Eigen::Index>(n_c)));
  }
  CVec stacked(static_cast<Eigen::Index>(cfg.M * n_c));
  for (std::size_t i = 0; i < cfg.M; ++i) {
    CVec s = CVec::Zero(static_cast<Eigen::Index>(n_c));
    for (std::size_t k = 0; k < cfg.K; ++k) s += circulant_apply(padded_taps(chan, i, k, n_c), td[k]);
    s += draw_noise(noise_streams[i], n_c, component_std);
    stacked.segment(static_cast<Eigen::Index>(i * n_c), static_cast<Eigen::Index>(n_c)) = s;
  }
  return quantize_stacked(stacked);
}

DetectionOperator::DetectionOperator(const CMat& taps, std::size_t K, std::size_t L_tap,
                                     std::size_t N_c)
    : M_(static_cast<std::size_t>(taps.rows())), K_(K), N_(N_c) {
  if (static_cast<std::size_t>(taps.cols()) != K * L_tap) {
    throw DimensionError("DetectionOperator: taps have " + std::to_string(taps.cols()) +
                         " columns, expected K*L_tap = " + std::to_string(K * L_tap));
  }
  if (!is_power_of_two(N_c)) throw SizingError("DetectionOperator: N_c must be a power of two");
  if (L_tap > N_c) throw DimensionError("DetectionOperator: L_tap exceeds N_c");

  const FftPlan& plan = fft_plan(N_);
  freq_.reserve(M_ * K_);
  for (std::size_t i = 0; i < M_; ++i) {
    for (std::size_t k = 0; k < K_; ++k) {
      CVec g = CVec::Zero(static_cast<Eigen::Index>(N_));
      for (std::size_t l = 0; l < L_tap; ++l) {
        g[static_cast<Eigen::Index>(l)] =
            taps(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k * L_tap + l));
      }
      plan.forward({g.data(), N_});
      freq_.push_back(std::move(g));
    }
  }
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(N_));
  twiddle_.resize(N_);
  for (std::size_t q = 0; q < N_; ++q) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(q) / static_cast<double>(N_);
    twiddle_[q] = std::polar(inv_sqrt_n, phase);
  }
}

RVec DetectionOperator::apply(const RVec& x_real) const {
  if (static_cast<std::size_t>(x_real.size()) != cols()) {
    throw DimensionError("DetectionOperator::apply: expected length " + std::to_string(cols()));
  }
  const CVec x = real_unstack_vector(x_real);
  const FftPlan& plan = fft_plan(N_);
  const auto n = static_cast<Eigen::Index>(N_);
  CVec y(static_cast<Eigen::Index>(M_ * N_));
  CVec acc(n);
  for (std::size_t i = 0; i < M_; ++i) {
    acc.setZero();
    for (std::size_t k = 0; k < K_; ++k) {
      acc.array() += frequency_response(i, k).array() * x.segment(static_cast<Eigen::Index>(k * N_), n).array();
    }
    plan.inverse({acc.data(), N_});
    y.segment(static_cast<Eigen::Index>(i * N_), n) = acc / std::sqrt(static_cast<double>(N_));
  }
  return real_stack_vector(y);
}

RVec DetectionOperator::row(std::size_t j) const {
  if (j >= rows()) throw DimensionError("DetectionOperator::row: index out of range");
  const std::size_t mn = M_ * N_;
  const bool imag_part = j >= mn;
  const std::size_t r = imag_part ? j - mn : j;
  RMat block(2, static_cast<Eigen::Index>(cols()));
  fill_rows(r / N_, r % N_, 1, block);
  return block.row(imag_part ? 1 : 0).transpose();
}

void DetectionOperator::fill_rows(std::size_t antenna, std::size_t t0, std::size_t count,
                                  Eigen::Ref<RMat> out) const {
  if (antenna >= M_ || t0 + count > N_ || static_cast<std::size_t>(out.rows()) != 2 * count ||
      static_cast<std::size_t>(out.cols()) != cols()) {
    throw DimensionError("DetectionOperator::fill_rows: block out of range");
  }
  const std::size_t kn = K_ * N_;
  for (std::size_t k = 0; k < K_; ++k) {
    const CVec& hf = frequency_response(antenna, k);
    for (std::size_t n = 0; n < N_; ++n) {
      const Complex h = hf[static_cast<Eigen::Index>(n)];
      const auto c_re = static_cast<Eigen::Index>(k * N_ + n);
      const auto c_im = static_cast<Eigen::Index>(kn + k * N_ + n);
      std::size_t q = (t0 * n) % N_;
      for (std::size_t dt = 0; dt < count; ++dt) {
        // G[r, c] = e^{j2πtn/N} H[n] / √N
        const Complex z = twiddle_[q] * h;
        const auto r_re = static_cast<Eigen::Index>(dt);
        const auto r_im = static_cast<Eigen::Index>(count + dt);
        out(r_re, c_re) = z.real();
        out(r_re, c_im) = -z.imag();
        out(r_im, c_re) = z.imag();
        out(r_im, c_im) = z.real();
        q += n;
        if (q >= N_) q -= N_;
      }
    }
  }
}

}  // namespace onebit
