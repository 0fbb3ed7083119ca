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
#include <map>

#include "oracles.hpp"
#include "onebit/airlink.hpp"
#include "onebit/errors.hpp"

using namespace onebit;

namespace {

SystemConfig tiny(std::size_t K, std::size_t M, std::size_t N, std::size_t L) {
  SystemConfig c;
  c.K = K;
  c.M = M;
  c.N_c = N;
  c.L_tap = L;
  c.N_cp = L;
  return c;
}

std::vector<RngStream> streams(const SystemConfig& c, StreamTag tag, std::uint64_t trial) {
  std::vector<RngStream> s;
  for (std::size_t i = 0; i < c.M; ++i) s.emplace_back(c.seed, tag, trial, i);
  return s;
}

SignVector to_signs(const RVec& v) {
  SignVector s;
  for (auto x : oracle::signs(v)) s.push_back(static_cast<Sign>(x));
  return s;
}

}  // namespace

TEST_SUITE("airlink") {
  TEST_CASE("config validation") {
    SystemConfig c;
    CHECK_NOTHROW(c.validate());
    auto bad = [](auto mutate) {
      SystemConfig x;
      mutate(x);
      CHECK_THROWS_AS(x.validate(), ConfigError);
    };
    bad([](SystemConfig& x) { x.K = 0; });
    bad([](SystemConfig& x) { x.M = 0; });
    bad([](SystemConfig& x) { x.T = 0; });
    bad([](SystemConfig& x) { x.L_tap = 0; });
    bad([](SystemConfig& x) { x.N_c = 192; });
    bad([](SystemConfig& x) { x.N_cp = 6; });           // < L_tap − 1
    bad([](SystemConfig& x) { x.N_cp = 512; });         // > N_c
    bad([](SystemConfig& x) { x.K = 40; x.N_cp = 16; });  // K·L > N_c
    bad([](SystemConfig& x) { x.snr_db = std::nan(""); });
  }

  TEST_CASE("config JSON round trip and errors") {
    const SystemConfig c = config_from_json(R"({"K":4,"M":32,"N_c":512,"L_tap":16,"N_cp":16,"snr_db":-5,"T":20,"seed":77})");
    CHECK(c.K == 4);
    CHECK(c.M == 32);
    CHECK(c.N_c == 512);
    CHECK(c.snr_db == -5.0);
    CHECK(c.T == 20);
    CHECK(c.seed == 77);
    CHECK(config_from_json(config_to_json(c)) == c);

    const SystemConfig partial = config_from_json(R"({"M":8})");
    CHECK(partial.M == 8);
    CHECK(partial.K == SystemConfig{}.K);

    CHECK_THROWS_AS(config_from_json("{not json"), ConfigError);
    CHECK_THROWS_AS(config_from_json(R"({"K":2,"bogus":1})"), ConfigError);
    CHECK_THROWS_AS(config_from_json(R"({"K":"two"})"), ConfigError);
    CHECK_THROWS_AS(config_from_json(R"({"K":-1})"), ConfigError);
    CHECK_THROWS_AS(config_from_json(R"([1,2])"), ConfigError);
    CHECK_THROWS_AS(config_from_json(R"({"N_c":100})"), ConfigError);
  }

  TEST_CASE("noise variance convention") {
    SystemConfig c;
    c.K = 1;
    c.snr_db = 0;
    CHECK(noise_variance(c) == doctest::Approx(1.0).epsilon(1e-15));
    c.K = 2;
    c.snr_db = 10;
    CHECK(noise_variance(c) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(noise_component_std(c) == doctest::Approx(std::sqrt(0.1)).epsilon(1e-15));
  }

  TEST_CASE("channel statistics and determinism") {
    SystemConfig c = tiny(1, 1, 8, 1);
    double power = 0.0;
    const int draws = 20000;
    for (int d = 0; d < draws; ++d) {
      RngStream rng(3, StreamTag::kChannel, static_cast<std::uint64_t>(d));
      power += std::norm(generate_channel(c, rng).taps(0, 0));
    }
    CHECK(power / draws == doctest::Approx(1.0).epsilon(0.03));

    c = tiny(1, 1, 64, 8);
    double var = 0.0;
    for (int d = 0; d < 10000; ++d) {
      RngStream rng(3, StreamTag::kChannel, static_cast<std::uint64_t>(d));
      var += generate_channel(c, rng).taps.cwiseAbs2().sum() / 8.0;
    }
    CHECK(var / 10000 == doctest::Approx(0.125).epsilon(0.05));

    SystemConfig d = tiny(2, 4, 64, 8);
    RngStream a(9, StreamTag::kChannel, 1);
    RngStream b(9, StreamTag::kChannel, 1);
    CHECK(generate_channel(d, a).taps == generate_channel(d, b).taps);
  }

  TEST_CASE("ramp pilots with K=1 are an impulse") {
    const SystemConfig c = tiny(1, 1, 16, 4);
    const PilotSet p = build_pilots(c, PilotBase::kRamp);
    CHECK(p.fd_pilots[0] == CVec::Ones(16));
    CHECK(std::abs(p.td_pilots[0][0] - Complex(4.0, 0.0)) < 1e-12);
    CHECK(p.td_pilots[0].tail(15).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("pilot orthogonality and unit modulus for every base") {
    for (PilotBase base : {PilotBase::kRandomPhase, PilotBase::kChirp, PilotBase::kRamp}) {
      CAPTURE(to_string(base));
      const SystemConfig small = tiny(2, 1, 8, 2);
      const PilotSet p = build_pilots(small, base);
      const CMat dense = oracle::dense_pilot_matrix(p.fd_pilots, 2);
      CHECK((p.phi - dense).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((dense.adjoint() * dense - 8.0 * CMat::Identity(4, 4)).norm() < 1e-9 * 8);
      CHECK((p.phi_real - oracle::stack(dense)).cwiseAbs().maxCoeff() < 1e-12);

      for (auto [K, N, L] : {std::tuple{2, 256, 8}, {4, 512, 16}, {8, 128, 16}}) {
        const SystemConfig c = tiny(K, 1, N, L);
        const PilotSet q = build_pilots(c, base);
        for (const auto& fd : q.fd_pilots) CHECK((fd.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
        const auto n = static_cast<double>(N);
        CHECK((q.phi.adjoint() * q.phi - n * CMat::Identity(K * L, K * L)).norm() < 1e-9 * n);
      }
    }
    CHECK_THROWS_AS(build_pilots(tiny(3, 1, 8, 4)), ConfigError);
    CHECK(pilot_base_from_string("random-phase") == PilotBase::kRandomPhase);
    CHECK_THROWS_AS(pilot_base_from_string("zadoff"), ConfigError);
  }

  TEST_CASE("random-phase pilots depend only on N_c") {
    SystemConfig a = tiny(2, 1, 64, 4);
    SystemConfig b = a;
    b.seed = 1234;
    b.snr_db = -3;
    CHECK(build_pilots(a).fd_pilots[0] == build_pilots(b).fd_pilots[0]);
  }

  TEST_CASE("pilot synthesis matches the dense model") {
    for (auto [K, L] : {std::pair{1, 2}, {2, 2}, {2, 4}}) {
      SystemConfig c = tiny(K, 2, 8, L);
      c.snr_db = 3;
      const PilotSet p = build_pilots(c);
      RngStream crng(c.seed, StreamTag::kChannel, 0);
      const ChannelRealization ch = generate_channel(c, crng);
      auto ns = streams(c, StreamTag::kPilotNoise, 0);
      const auto labels = synthesize_pilot_rx(c, p, ch, ns, noise_component_std(c));

      auto oracle_noise = streams(c, StreamTag::kPilotNoise, 0);
      const CMat phi = oracle::dense_pilot_matrix(p.fd_pilots, c.L_tap);
      for (std::size_t i = 0; i < c.M; ++i) {
        const CVec clean = phi * ch.taps.row(static_cast<Eigen::Index>(i)).transpose();
        CHECK((pilot_rx_clean(p, ch, i, c.N_c) - clean).cwiseAbs().maxCoeff() < 1e-9);
        const CVec noisy = clean + draw_noise(oracle_noise[i], c.N_c, noise_component_std(c));
        CHECK(labels[i] == to_signs(oracle::stack(noisy)));
      }
    }
  }

  TEST_CASE("pilot labels: identity channel and scale invariance") {
    const SystemConfig c = tiny(1, 1, 16, 2);
    const PilotSet p = build_pilots(c);
    ChannelRealization ch;
    ch.K = 1;
    ch.L_tap = 2;
    ch.taps = CMat::Zero(1, 2);
    ch.taps(0, 0) = 1.0;
    auto ns = streams(c, StreamTag::kPilotNoise, 0);
    const auto labels = synthesize_pilot_rx(c, p, ch, ns, 0.0);
    CHECK(labels[0] == to_signs(oracle::stack(p.td_pilots[0])));

    const SystemConfig c2 = tiny(2, 3, 32, 4);
    const PilotSet p2 = build_pilots(c2);
    RngStream crng(5, StreamTag::kChannel, 0);
    ChannelRealization h = generate_channel(c2, crng);
    auto n1 = streams(c2, StreamTag::kPilotNoise, 0);
    const auto base = synthesize_pilot_rx(c2, p2, h, n1, 0.0);
    h.taps *= 3.0;
    auto n2 = streams(c2, StreamTag::kPilotNoise, 0);
    CHECK(synthesize_pilot_rx(c2, p2, h, n2, 0.0) == base);
  }

  TEST_CASE("data synthesis matches the dense model") {
    for (auto [M, K, N, L] : {std::tuple{2, 1, 4, 2}, {2, 2, 8, 2}, {1, 2, 8, 3}}) {
      SystemConfig c = tiny(K, M, N, L);
      c.snr_db = 5;
      RngStream crng(c.seed, StreamTag::kChannel, 1);
      const ChannelRealization ch = generate_channel(c, crng);
      RngStream srng(c.seed, StreamTag::kDataSymbols, 1);
      const DataBlock data = generate_data_symbols(c, Constellation::qpsk(), srng);
      auto ns = streams(c, StreamTag::kDataNoise, 1);
      const SignVector y = synthesize_data_rx(c, ch, data.x_fd, ns, noise_component_std(c));

      const CMat g = oracle::dense_data_operator(ch.taps, c.K, c.L_tap, c.N_c);
      CVec r = g * data.x_fd;
      auto on = streams(c, StreamTag::kDataNoise, 1);
      for (std::size_t i = 0; i < c.M; ++i) {
        r.segment(static_cast<Eigen::Index>(i * c.N_c), static_cast<Eigen::Index>(c.N_c)) +=
            draw_noise(on[i], c.N_c, noise_component_std(c));
      }
      CHECK(y == to_signs(oracle::stack(r)));
    }
  }

  TEST_CASE("data labels: identity channel and scale invariance") {
    SystemConfig c = tiny(1, 1, 8, 1);
    c.N_cp = 0;
    ChannelRealization ch;
    ch.K = 1;
    ch.L_tap = 1;
    ch.taps = CMat::Ones(1, 1);
    RngStream srng(2, StreamTag::kDataSymbols, 0);
    const DataBlock data = generate_data_symbols(c, Constellation::qpsk(), srng);
    auto ns = streams(c, StreamTag::kDataNoise, 0);
    const SignVector y = synthesize_data_rx(c, ch, data.x_fd, ns, 0.0);
    CHECK(y == to_signs(oracle::stack(CVec(oracle::naive_idft(data.x_fd)))));
    auto ns2 = streams(c, StreamTag::kDataNoise, 0);
    CHECK(synthesize_data_rx(c, ch, CVec(5.0 * data.x_fd), ns2, 0.0) == y);
  }

  TEST_CASE("detection operator against the dense stacking") {
    for (auto [M, K, N, L] : {std::tuple{1, 1, 4, 2}, {2, 2, 8, 2}, {2, 1, 8, 3}}) {
      SystemConfig c = tiny(K, M, N, L);
      RngStream crng(4, StreamTag::kChannel, 0);
      const ChannelRealization ch = generate_channel(c, crng);
      const DetectionOperator op(ch.taps, c.K, c.L_tap, c.N_c);
      const RMat dense = oracle::stack(oracle::dense_data_operator(ch.taps, c.K, c.L_tap, c.N_c));
      CHECK(op.rows() == static_cast<std::size_t>(dense.rows()));
      CHECK(op.cols() == static_cast<std::size_t>(dense.cols()));

      RngStream vr(4, StreamTag::kTest, 1);
      RVec v(dense.cols());
      for (auto& x : v) x = vr.normal();
      CHECK((op.apply(v) - dense * v).cwiseAbs().maxCoeff() < 1e-9);
      for (std::size_t j = 0; j < op.rows(); ++j) {
        CHECK((op.row(j).transpose() - dense.row(static_cast<Eigen::Index>(j))).cwiseAbs().maxCoeff() < 1e-12);
      }
      for (std::size_t i = 0; i < c.M; ++i) {
        RMat block(2 * 3, dense.cols());
        op.fill_rows(i, 1, 3, block);
        const auto mn = static_cast<Eigen::Index>(c.M * c.N_c);
        for (Eigen::Index q = 0; q < 3; ++q) {
          const Eigen::Index r = static_cast<Eigen::Index>(i * c.N_c) + 1 + q;
          CHECK((block.row(q) - dense.row(r)).cwiseAbs().maxCoeff() < 1e-12);
          CHECK((block.row(3 + q) - dense.row(mn + r)).cwiseAbs().maxCoeff() < 1e-12);
        }
      }
    }
  }

  TEST_CASE("identity channel operator is the stacked inverse DFT") {
    CMat taps = CMat::Zero(1, 2);
    taps(0, 0) = 1.0;
    const DetectionOperator op(taps, 1, 2, 4);
    RMat dense(8, 8);
    for (std::size_t j = 0; j < 8; ++j) dense.row(static_cast<Eigen::Index>(j)) = op.row(j).transpose();
    CHECK((dense - oracle::stack(CMat(oracle::dft_matrix(4).adjoint()))).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("constellations") {
    for (const Constellation& con : {Constellation::qpsk(), Constellation::qam16()}) {
      CAPTURE(con.name());
      double energy = 0.0;
      for (auto p : con.points()) energy += std::norm(p);
      CHECK(energy / static_cast<double>(con.size()) == doctest::Approx(1.0).epsilon(1e-12));
      for (std::size_t a = 0; a < con.size(); ++a) {
        CHECK(con.label(a).size() == con.bits_per_symbol());
        CHECK(con.nearest(con.point(a)) == a);
      }
      // Gray property: nearest neighbours differ in exactly one bit.
      double dmin = 1e9;
      for (std::size_t a = 0; a < con.size(); ++a) {
        for (std::size_t b = a + 1; b < con.size(); ++b) dmin = std::min(dmin, std::abs(con.point(a) - con.point(b)));
      }
      for (std::size_t a = 0; a < con.size(); ++a) {
        for (std::size_t b = 0; b < con.size(); ++b) {
          if (a == b || std::abs(std::abs(con.point(a) - con.point(b)) - dmin) > 1e-9) continue;
          int diff = 0;
          for (std::size_t q = 0; q < con.bits_per_symbol(); ++q) diff += con.label(a)[q] != con.label(b)[q];
          CHECK(diff == 1);
        }
      }
    }
    const Constellation q = Constellation::qpsk();
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(q.point(0) - Complex(s, s)) < 1e-15);
    CHECK(std::abs(q.point(3) - Complex(-s, -s)) < 1e-15);
    CHECK(q.nearest(Complex(0.0, 0.0)) == 0);  // tie goes to the lowest index
  }

  TEST_CASE("QPSK symbol statistics and determinism") {
    SystemConfig c = tiny(2, 1, 8192, 1);
    c.N_cp = 0;
    RngStream a(11, StreamTag::kDataSymbols, 0);
    const DataBlock d = generate_data_symbols(c, Constellation::qpsk(), a);
    std::map<std::size_t, int> counts;
    for (auto idx : d.symbol_indices) ++counts[idx];
    for (auto [idx, n] : counts) CHECK(static_cast<double>(n) / 16384.0 == doctest::Approx(0.25).epsilon(0.08));
    CHECK(d.x_fd.squaredNorm() / 16384.0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.bits.size() == 2 * 16384);
    RngStream b(11, StreamTag::kDataSymbols, 0);
    CHECK(generate_data_symbols(c, Constellation::qpsk(), b).symbol_indices == d.symbol_indices);
  }

  TEST_CASE("receive SNR matches the declared convention") {
    SystemConfig c = tiny(2, 1, 256, 8);
    c.snr_db = 10;
    const PilotSet p = build_pilots(c);
    double ratio = 0.0;
    for (std::uint64_t t = 0; t < 100; ++t) {
      RngStream crng(1, StreamTag::kChannel, t);
      const ChannelRealization ch = generate_channel(c, crng);
      ratio += pilot_rx_clean(p, ch, 0, c.N_c).squaredNorm() / 256.0 / noise_variance(c);
    }
    CHECK(ratio / 100.0 == doctest::Approx(10.0).epsilon(0.1));
  }

  TEST_CASE("noise stream count must match the antennas") {
    const SystemConfig c = tiny(1, 2, 8, 2);
    const PilotSet p = build_pilots(c);
    RngStream crng(1, StreamTag::kChannel, 0);
    const ChannelRealization ch = generate_channel(c, crng);
    std::vector<RngStream> one;
    one.emplace_back(1, StreamTag::kPilotNoise, 0, 0);
    CHECK_THROWS_AS(synthesize_pilot_rx(c, p, ch, one, 0.1), DimensionError);
  }
}
