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

#include <doctest.h>

#include <cmath>

#include "onebit/airlink.hpp"
#include "onebit/errors.hpp"
#include "onebit/receivers.hpp"

using namespace onebit;

namespace {

SystemConfig small_cfg(std::size_t K, std::size_t M, std::size_t N, std::size_t L) {
  SystemConfig c;
  c.K = K;
  c.M = M;
  c.N_c = N;
  c.L_tap = L;
  c.N_cp = L;
  return c;
}

struct PilotCase {
  SystemConfig cfg;
  PilotSet pilots;
  ChannelRealization chan;
  std::vector<SignVector> labels;
};

PilotCase pilot_case(const SystemConfig& c, std::uint64_t trial, double noise_std) {
  PilotCase p{c, build_pilots(c), {}, {}};
  RngStream crng(c.seed, StreamTag::kChannel, trial);
  p.chan = generate_channel(c, crng);
  std::vector<RngStream> ns;
  for (std::size_t i = 0; i < c.M; ++i) ns.emplace_back(c.seed, StreamTag::kPilotNoise, trial, i);
  p.labels = synthesize_pilot_rx(c, p.pilots, p.chan, ns, noise_std);
  return p;
}

constexpr EstimatorVariant kAll[] = {EstimatorVariant::kGdaAda, EstimatorVariant::kGdaAda1,
                                     EstimatorVariant::kGdaAda2};

}  // namespace

TEST_SUITE("receivers") {
  TEST_CASE("variant names") {
    for (EstimatorVariant v : kAll) CHECK(variant_from_string(to_string(v)) == v);
    CHECK(to_string(EstimatorVariant::kGdaAda1) == "gda-ada-1");
    CHECK_THROWS_AS(variant_from_string("svm"), ConfigError);
    CHECK(weak_rule(EstimatorVariant::kGdaAda) == gda::WeakRule::kFull);
    CHECK(weak_rule(EstimatorVariant::kGdaAda2) == gda::WeakRule::kMeanDiff);
  }

  TEST_CASE("zero-noise single tap is recovered in direction") {
    SystemConfig c = small_cfg(1, 1, 256, 1);
    c.N_cp = 0;
    c.T = 1;
    double worst = 1.0;
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
      const PilotCase p = pilot_case(c, trial, 0.0);
      const AntennaEstimate e =
          estimate_channel_antenna(p.pilots.phi_real, p.labels[0], EstimatorVariant::kGdaAda2, 1, boost_config(c));
      const RVec truth = p.chan.real_row(0);
      worst = std::min(worst, e.h_real.dot(truth) / (e.h_real.norm() * truth.norm()));
    }
    CHECK(worst > 0.99);
  }

  TEST_CASE("estimates have squared norm K and flip with the labels") {
    SystemConfig c = small_cfg(2, 2, 64, 4);
    c.snr_db = 5;
    const PilotCase p = pilot_case(c, 3, noise_component_std(c));
    for (EstimatorVariant v : kAll) {
      CAPTURE(to_string(v));
      const AntennaEstimate e = estimate_channel_antenna(p.pilots.phi_real, p.labels[0], v, 2, boost_config(c));
      CHECK(e.h_real.squaredNorm() == doctest::Approx(2.0).epsilon(1e-9));
      CHECK(e.trace.size() == c.T);
      SignVector flipped = p.labels[0];
      for (auto& s : flipped) s = static_cast<Sign>(-s);
      const AntennaEstimate f = estimate_channel_antenna(p.pilots.phi_real, flipped, v, 2, boost_config(c));
      CHECK(f.h_real == -e.h_real);
    }
  }

  TEST_CASE("T = 1 equals the normalized weak hyperplane") {
    SystemConfig c = small_cfg(2, 1, 64, 4);
    c.T = 1;
    c.snr_db = 0;
    const PilotCase p = pilot_case(c, 1, noise_component_std(c));
    const gda::DenseFeatures f(p.pilots.phi_real);
    const std::vector<double> uniform(p.labels[0].size(), 1.0 / static_cast<double>(p.labels[0].size()));
    for (EstimatorVariant v : kAll) {
      const RVec weak = gda::fit_weak(weak_rule(v), {f, p.labels[0], uniform});
      const AntennaEstimate e = estimate_channel_antenna(p.pilots.phi_real, p.labels[0], v, 2, boost_config(c));
      CHECK((e.h_real - std::sqrt(2.0) * weak.normalized()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("single-class labels are rejected") {
    const SystemConfig c = small_cfg(1, 1, 16, 2);
    const PilotSet p = build_pilots(c);
    const SignVector ones(32, 1);
    CHECK_THROWS_AS(estimate_channel_antenna(p.phi_real, ones, EstimatorVariant::kGdaAda2, 1, boost_config(c)),
                    DegenerateClassError);
    CHECK_THROWS_AS(estimate_channel_antenna(p.phi_real, SignVector(10, 1), EstimatorVariant::kGdaAda2, 1,
                                             boost_config(c)),
                    DimensionError);
  }

  TEST_CASE("all-antenna estimation: parallel equals sequential, failures are collected") {
    SystemConfig c = small_cfg(2, 6, 64, 4);
    c.snr_db = 10;
    PilotCase p = pilot_case(c, 2, noise_component_std(c));
    const ChannelEstimate seq = estimate_channel_all(p.pilots, p.labels, EstimatorVariant::kGdaAda1, c, 0);
    const ChannelEstimate par = estimate_channel_all(p.pilots, p.labels, EstimatorVariant::kGdaAda1, c, 3);
    CHECK(seq.ok());
    CHECK(seq.real_stacks == par.real_stacks);
    CHECK(seq.taps == par.taps);
    for (Eigen::Index i = 0; i < seq.real_stacks.rows(); ++i) {
      CHECK(seq.real_stacks.row(i).squaredNorm() == doctest::Approx(2.0).epsilon(1e-9));
      CHECK((real_stack_vector(seq.taps.row(i).transpose()) - seq.real_stacks.row(i).transpose()).norm() < 1e-15);
    }

    std::vector<SignVector> same(4, p.labels[0]);
    c.M = 4;
    const ChannelEstimate dup = estimate_channel_all(p.pilots, same, EstimatorVariant::kGdaAda, c);
    for (Eigen::Index i = 1; i < 4; ++i) CHECK(dup.real_stacks.row(i) == dup.real_stacks.row(0));

    std::vector<SignVector> broken = same;
    broken[2].assign(broken[2].size(), 1);
    const ChannelEstimate e = estimate_channel_all(p.pilots, broken, EstimatorVariant::kGdaAda2, c);
    REQUIRE(e.failures.size() == 1);
    CHECK(e.failures[0].antenna == 2);
    CHECK_FALSE(e.ok());
  }

  TEST_CASE("scale of the true channel is unobservable") {
    SystemConfig c = small_cfg(2, 2, 64, 4);
    PilotCase p = pilot_case(c, 5, 0.0);
    const ChannelEstimate a = estimate_channel_all(p.pilots, p.labels, EstimatorVariant::kGdaAda2, c);
    p.chan.taps *= 4.5;
    std::vector<RngStream> ns;
    for (std::size_t i = 0; i < c.M; ++i) ns.emplace_back(c.seed, StreamTag::kPilotNoise, 5, i);
    const auto scaled = synthesize_pilot_rx(c, p.pilots, p.chan, ns, 0.0);
    const ChannelEstimate b = estimate_channel_all(p.pilots, scaled, EstimatorVariant::kGdaAda2, c);
    CHECK(a.taps == b.taps);
  }

  TEST_CASE("real to complex reassembly") {
    RVec v(4);
    v << 1, 3, 2, -4;
    const CVec z = real_to_complex_estimate(v);
    CHECK(z[0] == Complex(1, 2));
    CHECK(z[1] == Complex(3, -4));
    CHECK(real_stack_vector(z) == v);
    RVec r(4);
    r << 1, 2, 0, 0;
    CHECK(real_to_complex_estimate(r).imag().isZero(0.0));
    CHECK_THROWS_AS(real_to_complex_estimate(RVec::Zero(5)), DimensionError);
  }

  TEST_CASE("constellation mapping") {
    const Constellation q = Constellation::qpsk();
    const double s = 1 / std::sqrt(2.0);
    RVec v(2);
    v << 0.9, 0.2;
    CHECK(std::abs(map_to_constellation(v, q).symbols[0] - Complex(s, s)) < 1e-15);

    RngStream rng(6, StreamTag::kTest, 9);
    RVec many(200);
    for (auto& x : many) x = rng.normal();
    const MappedSymbols m = map_to_constellation(many, q);
    for (Eigen::Index k = 0; k < 100; ++k) {
      const Complex expect(many[k] >= 0 ? s : -s, many[k + 100] >= 0 ? s : -s);
      CHECK(std::abs(m.symbols[k] - expect) < 1e-15);
    }

    RVec tie(2);
    tie << 0.0, 0.5;
    // Points 0 = (+,+) and 2 = (−,+) are equidistant; the lower index wins.
    CHECK(map_to_constellation(tie, q).indices[0] == 0);
  }

  TEST_CASE("zero-noise many-antenna detection is error free") {
    SystemConfig c = small_cfg(1, 16, 16, 4);
    const Constellation q = Constellation::qpsk();
    std::size_t errors = 0;
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
      RngStream crng(c.seed, StreamTag::kChannel, trial);
      const ChannelRealization ch = generate_channel(c, crng);
      RngStream srng(c.seed, StreamTag::kDataSymbols, trial);
      const DataBlock data = generate_data_symbols(c, q, srng);
      std::vector<RngStream> ns;
      for (std::size_t i = 0; i < c.M; ++i) ns.emplace_back(c.seed, StreamTag::kDataNoise, trial, i);
      const SignVector y = synthesize_data_rx(c, ch, data.x_fd, ns, 0.0);
      const DetectionOperator op(ch.taps, c.K, c.L_tap, c.N_c);
      for (EstimatorVariant v : {EstimatorVariant::kGdaAda1, EstimatorVariant::kGdaAda2}) {
        const DetectionResult r = detect_data(op, y, v, q, boost_config(c));
        for (std::size_t b = 0; b < r.bits.size(); ++b) errors += r.bits[b] != data.bits[b];
      }
    }
    CHECK(errors == 0);
  }

  TEST_CASE("detection postconditions and antisymmetry") {
    SystemConfig c = small_cfg(2, 4, 32, 3);
    c.snr_db = 5;
    const Constellation q = Constellation::qpsk();
    RngStream crng(c.seed, StreamTag::kChannel, 0);
    const ChannelRealization ch = generate_channel(c, crng);
    RngStream srng(c.seed, StreamTag::kDataSymbols, 0);
    const DataBlock data = generate_data_symbols(c, q, srng);
    std::vector<RngStream> ns;
    for (std::size_t i = 0; i < c.M; ++i) ns.emplace_back(c.seed, StreamTag::kDataNoise, 0, i);
    const SignVector y = synthesize_data_rx(c, ch, data.x_fd, ns, noise_component_std(c));
    const DetectionOperator op(ch.taps, c.K, c.L_tap, c.N_c);

    for (EstimatorVariant v : kAll) {
      CAPTURE(to_string(v));
      std::vector<double> norms;
      DetectOptions opts;
      opts.on_iteration = [&](std::size_t, const RVec& x) { norms.push_back(x.squaredNorm()); };
      const DetectionResult r = detect_data(op, y, v, q, boost_config(c), opts);
      CHECK(norms.size() == c.T);
      for (double n : norms) CHECK(n == doctest::Approx(64.0).epsilon(1e-9));
      CHECK(r.bits.size() == 2 * 64);
      for (Eigen::Index k = 0; k < r.x_fd.size(); ++k) {
        CHECK(r.x_fd[k] == q.point(r.symbol_indices[static_cast<std::size_t>(k)]));
      }
      SignVector neg = y;
      for (auto& s : neg) s = static_cast<Sign>(-s);
      const DetectionResult rn = detect_data(op, neg, v, q, boost_config(c));
      CHECK((rn.x_fd + r.x_fd).cwiseAbs().maxCoeff() < 1e-15);
      for (std::size_t b = 0; b < r.bits.size(); ++b) CHECK(rn.bits[b] == 1 - r.bits[b]);
    }
    CHECK_THROWS_AS(detect_data(op, SignVector(10, 1), EstimatorVariant::kGdaAda2, q, boost_config(c)),
                    DimensionError);
    CHECK_THROWS_AS(detect_data(op, SignVector(op.rows(), -1), EstimatorVariant::kGdaAda2, q, boost_config(c)),
                    DegenerateClassError);
  }

  TEST_CASE("block size does not change detection") {
    SystemConfig c = small_cfg(2, 2, 32, 2);
    c.snr_db = 8;
    const Constellation q = Constellation::qpsk();
    RngStream crng(c.seed, StreamTag::kChannel, 4);
    const ChannelRealization ch = generate_channel(c, crng);
    RngStream srng(c.seed, StreamTag::kDataSymbols, 4);
    const DataBlock data = generate_data_symbols(c, q, srng);
    std::vector<RngStream> ns;
    for (std::size_t i = 0; i < c.M; ++i) ns.emplace_back(c.seed, StreamTag::kDataNoise, 4, i);
    const SignVector y = synthesize_data_rx(c, ch, data.x_fd, ns, noise_component_std(c));
    const DetectionOperator op(ch.taps, c.K, c.L_tap, c.N_c);
    DetectOptions a, b;
    a.block_times = 1;
    b.block_times = 32;
    CHECK(detect_data(op, y, EstimatorVariant::kGdaAda1, q, boost_config(c), a).symbol_indices ==
          detect_data(op, y, EstimatorVariant::kGdaAda1, q, boost_config(c), b).symbol_indices);
  }
}
