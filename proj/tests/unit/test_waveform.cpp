// SPDX-License-Identifier: Apache-2.0
//
// spoofsim: wireless spoofing attack simulator
// Copyright (C) 2026 The spoofsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "spoofsim/scenario.hpp"
#include "spoofsim/waveform.hpp"

using namespace spoofsim;
using std::numbers::pi;

namespace {

ChannelRealization flat(std::size_t nt, std::size_t nr, double g) {
    ChannelRealization ch;
    ch.g = g;
    ch.n_tx = nt;
    ch.n_rx = nr;
    ch.pair_phases.assign(nt * nr, 0.0);
    return ch;
}

DevicePhases zeros(std::size_t n) { return DevicePhases{std::vector<double>(n, 0.0)}; }

const std::vector<int> kZeroBits(8, 0);

IQBurst random_burst(std::size_t na, std::size_t np, Rng& rng) {
    IQBurst b(na, np);
    for (auto& v : b.samples) v = Complex(rng.normal(), rng.normal());
    return b;
}

}  // namespace

TEST_CASE("qpsk Gray mapping") {
    CHECK(qpsk_phases({0, 0}) == std::vector<double>{pi / 4});
    CHECK(qpsk_phases({0, 1}) == std::vector<double>{3 * pi / 4});
    CHECK(qpsk_phases({1, 1}) == std::vector<double>{5 * pi / 4});
    CHECK(qpsk_phases({1, 0}) == std::vector<double>{7 * pi / 4});
    CHECK(qpsk_phases(kZeroBits) == std::vector<double>(4, pi / 4));
    CHECK_THROWS_AS(qpsk_phases({0, 1, 1}), InvalidInput);
    CHECK_THROWS_AS(qpsk_phases({0, 2}), InvalidInput);
    Rng rng(1);
    for (int i = 0; i < 100; ++i) {
        for (double p : qpsk_phases(random_bits(rng))) {
            const double q = (p - pi / 4) / (pi / 2);
            CHECK(std::abs(q - std::round(q)) < 1e-12);
            CHECK(p > 0.0);
            CHECK(p < 2 * pi);
        }
    }
}

TEST_CASE("channel gain means follow inverse-square distance") {
    Rng rng(2);
    for (GainModel model : {GainModel::RayleighAmplitude, GainModel::ExponentialPower}) {
        for (auto [rx, mean] : {std::pair<NodePosition, double>{{10, 0}, 0.01}, {{1, 0}, 1.0}}) {
            double s = 0.0;
            const int n = 100000;
            for (int i = 0; i < n; ++i) s += draw_channel({0, 0}, rx, 1, 1, rng, model).g;
            CHECK(std::abs(s / n - mean) < 0.05 * mean);
        }
    }
    CHECK_THROWS_AS(draw_channel({1, 1}, {1, 1}, 1, 1, rng), DegenerateGeometry);
}

TEST_CASE("channel pair phases are uniform (chi-square, 16 bins)") {
    Rng rng(3);
    std::vector<int> bins(16, 0);
    const int n = 20000;
    for (int i = 0; i < n / 4; ++i) {
        const auto ch = draw_channel({0, 0}, {3, 4}, 2, 2, rng);
        REQUIRE(ch.pair_phases.size() == 4);
        for (double p : ch.pair_phases) {
            REQUIRE(p >= 0.0);
            REQUIRE(p < 2 * pi);
            bins[static_cast<std::size_t>(p / (2 * pi) * 16)]++;
        }
    }
    double chi2 = 0.0;
    const double expect = n / 16.0;
    for (int b : bins) chi2 += (b - expect) * (b - expect) / expect;
    CHECK(chi2 < 30.578);  // chi-square, 15 dof, alpha = 0.01
}

TEST_CASE("intended burst sample values") {
    Rng rng(4);
    const auto b = sample_intended_burst(kZeroBits, zeros(1), flat(1, 1, 1.0), 1000.0, 1, 1, 100, false, rng);
    REQUIRE(b.n_points == 400);
    CHECK(b.at(0, 0).real() == doctest::Approx(707.107).epsilon(1e-6));
    CHECK(b.at(0, 0).imag() == doctest::Approx(707.107).epsilon(1e-6));
    CHECK(b.at(0, 50).real() == doctest::Approx(-707.107).epsilon(1e-6));
    CHECK(b.at(0, 50).imag() == doctest::Approx(-707.107).epsilon(1e-6));

    const auto z = sample_intended_burst(kZeroBits, zeros(1), flat(1, 1, 0.0), 1000.0, 1, 1, 100, false, rng);
    for (const auto& v : z.samples) CHECK(v == Complex(0.0, 0.0));

    CHECK_THROWS_AS(sample_intended_burst(kZeroBits, zeros(2), flat(1, 1, 1.0), 1000.0, 2, 1, 100, false, rng),
                    InvalidInput);
    CHECK_THROWS_AS(sample_intended_burst({0, 0}, zeros(1), flat(1, 1, 1.0), 1000.0, 1, 1, 100, false, rng),
                    InvalidInput);
}

TEST_CASE("intended burst has constant magnitude and fixed phase steps within a symbol") {
    Rng rng(5);
    ChannelRealization ch = draw_channel({0, 0}, {10, 0}, 1, 1, rng);
    const auto tp = random_device_phases(1, rng);
    const auto b = sample_intended_burst(random_bits(rng), tp, ch, 1000.0, 1, 1, 100, false, rng);
    for (std::size_t k = 0; k < b.n_points; ++k) CHECK(std::abs(b.at(0, k)) == doctest::Approx(ch.g * 1000.0).epsilon(1e-12));
    for (std::size_t s = 0; s < 4; ++s) {
        for (std::size_t k = 1; k < 100; ++k) {
            const double step = std::arg(b.at(0, s * 100 + k) / b.at(0, s * 100 + k - 1));
            CHECK(step == doctest::Approx(pi / 50).epsilon(1e-9));
        }
    }
}

TEST_CASE("replay burst sample values") {
    Rng rng(6);
    auto b = sample_replay_burst(kZeroBits, zeros(1), zeros(1), flat(1, 1, 0.3), flat(1, 1, 1.0), 1000.0, 1, 1, 1,
                                 100, false, rng);
    CHECK(std::abs(b.at(0, 0) - std::polar(1000.0, pi / 4)) < 1e-9);
    b = sample_replay_burst(kZeroBits, zeros(1), zeros(2), flat(1, 2, 0.3), flat(2, 1, 1.0), 1000.0, 1, 2, 1, 100,
                            false, rng);
    CHECK(std::abs(b.at(0, 0)) == doctest::Approx(1000.0));
    b = sample_replay_burst(kZeroBits, zeros(1), zeros(1), flat(1, 1, 0.3), flat(1, 1, 0.0), 1000.0, 1, 1, 1, 100,
                            false, rng);
    for (const auto& v : b.samples) CHECK(v == Complex(0.0, 0.0));
}

TEST_CASE("apply_channel: identity, linearity and a matrix oracle") {
    Rng rng(7);
    const auto x = random_burst(1, 400, rng);
    const auto y = apply_channel(x, zeros(1), flat(1, 1, 1.0), false, rng);
    for (std::size_t i = 0; i < x.samples.size(); ++i) CHECK(y.samples[i] == x.samples[i]);

    const auto ch = draw_channel({0, 10}, {10, 0}, 2, 2, rng);
    const auto ph = random_device_phases(2, rng);
    const auto a = random_burst(2, 400, rng);
    const auto b = random_burst(2, 400, rng);
    const Complex ca(0.7, -1.3), cb(-2.1, 0.4);
    IQBurst mix(2, 400);
    for (std::size_t i = 0; i < mix.samples.size(); ++i) mix.samples[i] = ca * a.samples[i] + cb * b.samples[i];
    const auto lhs = apply_channel(mix, ph, ch, false, rng);
    const auto ra = apply_channel(a, ph, ch, false, rng);
    const auto rb = apply_channel(b, ph, ch, false, rng);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < lhs.samples.size(); ++i) {
        worst = std::max(worst, std::abs(lhs.samples[i] - (ca * ra.samples[i] + cb * rb.samples[i])));
        scale = std::max(scale, std::abs(lhs.samples[i]));
    }
    CHECK(worst <= 1e-10 * scale);

    // H[j][h] = g exp(j(theta_h + theta_hj)), rx = H tx
    for (std::size_t j = 0; j < 2; ++j) {
        for (std::size_t k = 0; k < 400; ++k) {
            Complex acc = 0.0;
            for (std::size_t h = 0; h < 2; ++h) {
                const Complex H = ch.g * Complex(std::cos(ph.phases[h] + ch.phase(h, j)), std::sin(ph.phases[h] + ch.phase(h, j)));
                acc += H * a.at(h, k);
            }
            CHECK(std::abs(ra.at(j, k) - acc) <= 1e-12);
        }
    }
    CHECK_THROWS_AS(apply_channel(random_burst(3, 400, rng), ph, ch, false, rng), InvalidInput);
}

TEST_CASE("apply_channel_adjoint is the adjoint under the real inner product") {
    Rng rng(8);
    const auto ch = draw_channel({0, 10}, {10, 0}, 3, 2, rng);
    const auto ph = random_device_phases(3, rng);
    const auto x = random_burst(3, 40, rng);
    const auto y = random_burst(2, 40, rng);
    const auto Ax = apply_channel(x, ph, ch, false, rng);
    const auto Aty = apply_channel_adjoint(y, ph, ch);
    auto inner = [](const IQBurst& p, const IQBurst& q) {
        double s = 0.0;
        for (std::size_t i = 0; i < p.samples.size(); ++i) s += (std::conj(p.samples[i]) * q.samples[i]).real();
        return s;
    };
    CHECK(inner(Ax, y) == doctest::Approx(inner(x, Aty)).epsilon(1e-12));
}

TEST_CASE("awgn has unit variance") {
    Rng rng(9);
    IQBurst b(1, 200000);
    add_awgn(b, rng);
    double p = 0.0, re = 0.0;
    for (const auto& v : b.samples) {
        p += std::norm(v);
        re += v.real() * v.real();
    }
    CHECK(p / 200000 == doctest::Approx(1.0).epsilon(0.02));
    CHECK(re / 200000 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("features layout and inverse") {
    Rng rng(10);
    CHECK(features(IQBurst(1, 400)).size() == 800);
    CHECK(features(IQBurst(4, 400)).size() == 3200);
    for (double v : features(IQBurst(2, 400))) CHECK(v == 0.0);
    const auto b = random_burst(3, 400, rng);
    const auto f = features(b);
    CHECK(f[0] == b.at(0, 0).real());
    CHECK(f[1] == b.at(0, 0).imag());
    CHECK(f[800] == b.at(1, 0).real());
    const auto back = burst_from_features(f.data(), 3, 400);
    CHECK(back.samples == b.samples);
}

TEST_CASE("burst files round-trip and use a 16-byte header") {
    Rng rng(11);
    const auto b = random_burst(2, 400, rng);
    std::stringstream ss;
    write_burst(ss, b);
    CHECK(ss.str().size() == 16 + 2 * 400 * 16);
    CHECK(static_cast<unsigned char>(ss.str()[0]) == 0x53);  // little-endian magic
    const auto r = read_burst(ss);
    CHECK(r.n_antennas == 2);
    CHECK(r.samples == b.samples);
    std::stringstream junk("not a burst file at all");
    CHECK_THROWS(read_burst(junk));
}

TEST_CASE("bursts are deterministic under a fixed seed") {
    ScenarioConfig sc;
    sc.N_T = 2;
    sc.N_R = 2;
    const RadioEnvironment env(sc);
    Rng a(42), b(42);
    for (int i = 0; i < 5; ++i) {
        CHECK(env.intended_burst(Receiver::R, a).samples == env.intended_burst(Receiver::R, b).samples);
        CHECK(env.replay_burst(sc.A_T, a).samples == env.replay_burst(sc.A_T, b).samples);
        CHECK(env.random_burst(sc.A_T, a).samples == env.random_burst(sc.A_T, b).samples);
    }
}

TEST_CASE("scenario environment structure") {
    ScenarioConfig sc;
    sc.N_A = 4;
    const RadioEnvironment four(sc);
    sc.N_A = 1;
    const RadioEnvironment one(sc);
    CHECK(four.adv_phases().phases[0] == one.adv_phases().phases[0]);
    CHECK(four.t_phases().phases == one.t_phases().phases);

    Rng rng(12);
    const auto a = one.t_link(Receiver::R, rng);
    const auto b = one.t_link(Receiver::R, rng);
    CHECK(a.pair_phases == b.pair_phases);
    CHECK(a.g != b.g);

    sc.phase_model = PhaseModel::IidUniform;
    const RadioEnvironment iid(sc);
    CHECK(iid.t_link(Receiver::R, rng).pair_phases != iid.t_link(Receiver::R, rng).pair_phases);

    ScenarioConfig badc;
    badc.A_T = badc.R;
    CHECK_THROWS_AS(RadioEnvironment{badc}, InvalidInput);
    badc = ScenarioConfig{};
    badc.N_R = 0;
    CHECK_THROWS_AS(badc.validate(), InvalidInput);
}

TEST_CASE("random burst has power P split over adversary antennas") {
    Rng rng(13);
    const auto ch = flat(1, 1, 1.0);
    const auto b = sample_random_burst(zeros(1), ch, 1000.0, 1, 1, 100, false, rng);
    for (const auto& v : b.samples) CHECK(std::abs(v) == doctest::Approx(1000.0));
}
