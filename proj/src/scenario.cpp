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

#include "spoofsim/scenario.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace spoofsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double a) {
    a = std::fmod(a, kTwoPi);
    return a < 0.0 ? a + kTwoPi : a;
}

bool finite(const NodePosition& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

}  // namespace

void ScenarioConfig::validate() const {
    auto fail = [](const std::string& key, const std::string& msg) {
        throw InvalidInput("scenario." + key + ": " + msg);
    };
    if (!finite(T) || !finite(R) || !finite(A_T) || !finite(A_R)) fail("position", "non-finite coordinate");
    if (N_T < 1) fail("n_t", "must be >= 1");
    if (N_R < 1) fail("n_r", "must be >= 1");
    if (N_A < 1) fail("n_a", "must be >= 1");
    if (!(P > 0.0)) fail("p", "must be > 0");
    if (S < 2) fail("s", "must be >= 2");
    if (!(coherence_distance > 0.0)) fail("coherence_distance", "must be > 0");
    if (!(feature_scale > 0.0)) fail("feature_scale", "must be > 0");
    if (T == R) fail("t", "coincides with R");
    if (A_T == R) fail("a_t", "coincides with R");
    if (T == A_R) fail("a_r", "coincides with T");
    if (A_T == A_R) fail("a_r", "coincides with A_T");
    if (attack_time_AT_position && *attack_time_AT_position == R) fail("attack_at", "coincides with R");
}

std::string describe(const ScenarioConfig& s) {
    std::ostringstream os;
    os << "N_T=" << s.N_T << " N_R=" << s.N_R << " N_A=" << s.N_A << " A_T=(" << s.A_T.x << ","
       << s.A_T.y << ")";
    if (s.attack_time_AT_position) {
        os << " attack_at=(" << s.attack_time_AT_position->x << "," << s.attack_time_AT_position->y << ")";
    }
    os << " seed=" << s.seed;
    return os.str();
}

RadioEnvironment::RadioEnvironment(const ScenarioConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    // One substream per quantity, so e.g. antenna 0 keeps its phases when N_A grows.
    auto stream = [&](std::uint64_t k) { return Rng(derive_seed(cfg.seed, {0x656e76, k})); };
    const auto nt = static_cast<std::size_t>(cfg.N_T);
    const auto nr = static_cast<std::size_t>(cfg.N_R);
    const auto na = static_cast<std::size_t>(cfg.N_A);
    Rng r_t = stream(1), r_a = stream(2);
    t_phases_ = random_device_phases(nt, r_t);
    adv_phases_ = random_device_phases(na, r_a);
    auto uniform = [](std::size_t n, Rng& rng) {
        std::vector<double> v(n);
        for (auto& x : v) x = rng.uniform(0.0, kTwoPi);
        return v;
    };
    Rng r_tr = stream(3), r_ar = stream(4);
    ph_T_R_ = uniform(nt * nr, r_tr);
    ph_A_R_ = uniform(na * nr, r_ar);
    const double sigma = distance(cfg.A_R, cfg.R) / cfg.coherence_distance;
    auto perturb = [&](const std::vector<double>& base, Rng rng) {
        std::vector<double> v(base.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = wrap(base[i] + rng.normal(0.0, sigma));
        return v;
    };
    ph_T_AR_ = perturb(ph_T_R_, stream(5));
    ph_A_AR_ = perturb(ph_A_R_, stream(6));
}

ChannelRealization RadioEnvironment::link(const std::vector<double>& static_phases,
                                          std::size_t n_tx, std::size_t n_rx,
                                          const NodePosition& from, const NodePosition& to,
                                          Rng& rng) const {
    ChannelRealization ch;
    ch.g = draw_gain(from, to, cfg_.gain_model, rng);
    ch.n_tx = n_tx;
    ch.n_rx = n_rx;
    if (cfg_.phase_model == PhaseModel::QuasiStatic) {
        ch.pair_phases = static_phases;
    } else {
        ch.pair_phases.resize(n_tx * n_rx);
        for (auto& p : ch.pair_phases) p = rng.uniform(0.0, kTwoPi);
    }
    return ch;
}

ChannelRealization RadioEnvironment::t_link(Receiver rx, Rng& rng) const {
    return link(rx == Receiver::R ? ph_T_R_ : ph_T_AR_, static_cast<std::size_t>(cfg_.N_T),
                static_cast<std::size_t>(cfg_.N_R), cfg_.T, receiver_position(rx), rng);
}

ChannelRealization RadioEnvironment::adv_link(Receiver rx, const NodePosition& from, Rng& rng) const {
    return link(rx == Receiver::R ? ph_A_R_ : ph_A_AR_, static_cast<std::size_t>(cfg_.N_A),
                static_cast<std::size_t>(cfg_.N_R), from, receiver_position(rx), rng);
}

IQBurst RadioEnvironment::intended_burst(Receiver rx, Rng& rng) const {
    const auto bits = random_bits(rng);
    const auto ch = t_link(rx, rng);
    return sample_intended_burst(bits, t_phases_, ch, cfg_.P, static_cast<std::size_t>(cfg_.N_T),
                                 static_cast<std::size_t>(cfg_.N_R), cfg_.S, true, rng);
}

IQBurst RadioEnvironment::random_burst(const NodePosition& from, Rng& rng) const {
    auto full = adv_link(Receiver::R, from, rng);
    ChannelRealization ch;
    ch.g = full.g;
    ch.n_tx = 1;
    ch.n_rx = full.n_rx;
    ch.pair_phases.assign(full.pair_phases.begin(), full.pair_phases.begin() + static_cast<long>(full.n_rx));
    DevicePhases one{{adv_phases_.phases[0]}};
    return sample_random_burst(one, ch, cfg_.P, 1, ch.n_rx, cfg_.S, true, rng);
}

IQBurst RadioEnvironment::replay_burst(const NodePosition& from, Rng& rng) const {
    const auto bits = random_bits(rng);
    // A_T records without synchronization to T, so the recording hop's phases are fresh.
    const auto rec = draw_channel(cfg_.T, cfg_.A_T, static_cast<std::size_t>(cfg_.N_T),
                                  static_cast<std::size_t>(cfg_.N_A), rng, cfg_.gain_model);
    const auto ch = adv_link(Receiver::R, from, rng);
    return sample_replay_burst(bits, t_phases_, adv_phases_, rec, ch, cfg_.P,
                               static_cast<std::size_t>(cfg_.N_T), static_cast<std::size_t>(cfg_.N_A),
                               static_cast<std::size_t>(cfg_.N_R), cfg_.S, true, rng);
}

IQBurst RadioEnvironment::transmit(const IQBurst& tx, Receiver rx, const NodePosition& from,
                                   Rng& rng) const {
    ChannelRealization used;
    return transmit(tx, rx, from, rng, used);
}

IQBurst RadioEnvironment::transmit(const IQBurst& tx, Receiver rx, const NodePosition& from,
                                   Rng& rng, ChannelRealization& used) const {
    used = adv_link(rx, from, rng);
    return apply_channel(tx, adv_phases_, used, true, rng);
}

}  // namespace spoofsim
