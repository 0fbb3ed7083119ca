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

// Scenario configuration and synthesis of one-bit received signals for the
// uplink MIMO-OFDM link: channel draws, orthogonal pilots, data symbols,
// and the implicit real-stacked detection operator.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "onebit/rng.hpp"
#include "onebit/signal.hpp"

namespace onebit {

struct SystemConfig {
  std::size_t K = 2;       // users
  std::size_t M = 16;      // BS antennas
  std::size_t N_c = 256;   // subcarriers
  std::size_t N_cp = 16;   // cyclic prefix (validated, modeled analytically)
  std::size_t L_tap = 8;   // channel taps
  double snr_db = 10.0;
  std::size_t T = 10;      // boosting iterations
  std::uint64_t seed = 1;

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;

  bool operator==(const SystemConfig&) const = default;
};

/// Parses a JSON object with exactly the SystemConfig field names. Absent
/// fields keep their defaults; unknown fields and wrong types throw ConfigError.
SystemConfig config_from_json(std::string_view json_text);
std::string config_to_json(const SystemConfig& cfg);

/// Complex noise variance σ² = K·10^(−snr_db/10); the per-component real
/// variance is σ²/2.
double noise_variance(const SystemConfig& cfg);

/// Per-component standard deviation sqrt(σ²/2).
double noise_component_std(const SystemConfig& cfg);

struct ChannelRealization {
  /// M × (K·L_tap); row i = [h_{i,1}ᵀ, …, h_{i,K}ᵀ].
  CMat taps;
  std::size_t K = 0;
  std::size_t L_tap = 0;

  std::size_t antennas() const { return static_cast<std::size_t>(taps.rows()); }
  /// [Re h_i; Im h_i] for antenna i.
  RVec real_row(std::size_t i) const;
};

ChannelRealization generate_channel(const SystemConfig& cfg, RngStream& rng);

/// Shape of the common pilot sequence that every user phase-ramps.
enum class PilotBase {
  kChirp,  // constant-modulus chirp e^{-jπn²/N}; time-domain pilot has unit modulus
  kRamp,   // all-ones; time-domain pilots are shifted impulses
  kRandomPhase,  // fixed pseudo-random phases, depends only on N_c
};

std::string_view to_string(PilotBase base);
PilotBase pilot_base_from_string(std::string_view name);

struct PilotSet {
  PilotBase base = PilotBase::kRandomPhase;
  std::vector<CVec> fd_pilots;   // K unit-modulus frequency-domain pilots
  std::vector<CVec> td_pilots;   // Fᴴ x_k
  CMat phi;                      // N_c × K·L_tap, [Φ_{1,L}, …, Φ_{K,L}]
  RMat phi_real;                 // 2N_c × 2K·L_tap real stacking of phi
};

/// User k's pilot is base[n]·exp(−j2πn(k−1)L_tap/N_c), so the time-domain
/// pilots are circular shifts of one sequence by multiples of L_tap.
PilotSet build_pilots(const SystemConfig& cfg, PilotBase base = PilotBase::kRandomPhase);

/// Gray-labeled constellation with unit mean energy.
class Constellation {
 public:
  static Constellation qpsk();
  static Constellation qam16();

  std::size_t size() const { return points_.size(); }
  std::size_t bits_per_symbol() const { return bits_per_symbol_; }
  const std::vector<Complex>& points() const { return points_; }
  Complex point(std::size_t index) const { return points_[index]; }
  /// Bit label of a point, MSB first.
  const std::vector<std::uint8_t>& label(std::size_t index) const { return labels_[index]; }
  /// Index of the nearest point; ties go to the lowest index.
  std::size_t nearest(Complex value) const;
  std::string_view name() const { return name_; }

 private:
  Constellation(std::string name, std::vector<Complex> points,
                std::vector<std::vector<std::uint8_t>> labels);

  std::string name_;
  std::vector<Complex> points_;
  std::vector<std::vector<std::uint8_t>> labels_;
  std::size_t bits_per_symbol_ = 0;
};

struct DataBlock {
  CVec x_fd;                            // K·N_c symbols, user-major
  std::vector<std::size_t> symbol_indices;
  std::vector<std::uint8_t> bits;       // bits_per_symbol per symbol
};

DataBlock generate_data_symbols(const SystemConfig& cfg, const Constellation& constellation,
                                RngStream& rng);

/// N_c complex noise samples, real parts drawn before imaginary parts.
CVec draw_noise(RngStream& rng, std::size_t n, double component_std);

/// y_{i,R} = sign(Φ_R h_{i,R} + n_{i,R}) per antenna, computed by circulant
/// application. noise_streams[i] drives the noise of antenna i.
std::vector<SignVector> synthesize_pilot_rx(const SystemConfig& cfg, const PilotSet& pilots,
                                            const ChannelRealization& chan,
                                            std::vector<RngStream>& noise_streams,
                                            double component_std);

/// Unquantized received pilot signal of one antenna (no noise).
CVec pilot_rx_clean(const PilotSet& pilots, const ChannelRealization& chan, std::size_t antenna,
                    std::size_t n_c);

/// y_R = sign(G_R x_R + n_R) over all M antennas, length 2M·N_c.
SignVector synthesize_data_rx(const SystemConfig& cfg, const ChannelRealization& chan,
                              const CVec& x_fd, std::vector<RngStream>& noise_streams,
                              double component_std);

/// Implicit G_R^FD of shape 2M·N_c × 2K·N_c, built from taps (true or estimated).
///
/// Row ordering follows the real stacking: row j < M·N_c is the real part of
/// complex row r = j = i·N_c + t, row j ≥ M·N_c is the imaginary part of
/// complex row r = j − M·N_c. Column c < K·N_c multiplies Re x_{k,n} with
/// c = k·N_c + n; the upper half multiplies Im x.
class DetectionOperator {
 public:
  DetectionOperator(const CMat& taps, std::size_t K, std::size_t L_tap, std::size_t N_c);

  std::size_t antennas() const { return M_; }
  std::size_t users() const { return K_; }
  std::size_t subcarriers() const { return N_; }
  std::size_t rows() const { return 2 * M_ * N_; }
  std::size_t cols() const { return 2 * K_ * N_; }

  /// G_R·v via per-antenna inverse FFTs.
  RVec apply(const RVec& x_real) const;

  /// Row g_{R,j}. O(K·N_c).
  RVec row(std::size_t j) const;

  /// Writes the rows of antenna `antenna` at times t0..t0+count−1: the real
  /// part rows into out.topRows(count), the imaginary part rows into
  /// out.bottomRows(count). out must be 2·count × cols().
  void fill_rows(std::size_t antenna, std::size_t t0, std::size_t count,
                 Eigen::Ref<RMat> out) const;

  /// Frequency response Σ_l h[l] e^{−j2πln/N} of antenna i, user k.
  const CVec& frequency_response(std::size_t antenna, std::size_t user) const {
    return freq_[antenna * K_ + user];
  }

 private:
  std::size_t M_, K_, N_;
  std::vector<CVec> freq_;           // M·K responses of length N
  std::vector<Complex> twiddle_;     // exp(+j2πq/N)/√N
};

}  // namespace onebit
