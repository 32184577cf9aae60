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

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "spoofsim/waveform.hpp"

namespace spoofsim {

enum class PhaseModel {
    QuasiStatic,  // pair phases fixed per link for the scenario lifetime
    IidUniform,   // fresh uniform pair phases on every burst
};

struct ScenarioConfig {
    NodePosition T{0.0, 0.0};
    NodePosition R{10.0, 0.0};
    NodePosition A_T{0.0, 10.0};
    NodePosition A_R{10.0, 0.1};
    int N_T = 1;
    int N_R = 1;
    int N_A = 1;
    double P = 1000.0;
    int S = 100;
    std::uint64_t seed = 1;
    std::optional<NodePosition> attack_time_AT_position;

    GainModel gain_model = GainModel::RayleighAmplitude;
    PhaseModel phase_model = PhaseModel::QuasiStatic;
    // Distance over which pair phases decorrelate. A_R sits |A_R - R| from R, so its
    // link phases are R's perturbed by N(0, (|A_R - R| / coherence_distance)^2).
    double coherence_distance = 1.0;
    // Features handed to networks are raw I/Q times this factor.
    double feature_scale = 0.1;

    std::size_t n_points() const { return static_cast<std::size_t>(4 * S); }
    std::size_t feature_length() const { return 2 * n_points() * static_cast<std::size_t>(N_R); }
    std::size_t generator_width() const { return 2 * n_points() * static_cast<std::size_t>(N_A); }
    NodePosition attack_position() const { return attack_time_AT_position.value_or(A_T); }

    // Throws InvalidInput naming the offending field.
    void validate() const;
};

std::string describe(const ScenarioConfig& s);

enum class Receiver { R, A_R };

// Device fingerprints and per-link phase structure of one scenario.
class RadioEnvironment {
public:
    explicit RadioEnvironment(const ScenarioConfig& cfg);

    const ScenarioConfig& config() const { return cfg_; }
    const DevicePhases& t_phases() const { return t_phases_; }
    const DevicePhases& adv_phases() const { return adv_phases_; }

    // Channel from T to a receiver. Fresh gain every call.
    ChannelRealization t_link(Receiver rx, Rng& rng) const;
    // Channel from the adversary transmitter (at `from`) to a receiver.
    ChannelRealization adv_link(Receiver rx, const NodePosition& from, Rng& rng) const;

    NodePosition receiver_position(Receiver rx) const { return rx == Receiver::R ? cfg_.R : cfg_.A_R; }

    // Legitimate burst from T with a fresh payload.
    IQBurst intended_burst(Receiver rx, Rng& rng) const;
    // Random-signal burst from the first adversary antenna at `from`, received at R.
    IQBurst random_burst(const NodePosition& from, Rng& rng) const;
    // Amplify-and-forward of a freshly recorded T burst, transmitted from `from` to R.
    IQBurst replay_burst(const NodePosition& from, Rng& rng) const;
    // Arbitrary adversary waveform through the channel from `from` to a receiver, with AWGN.
    IQBurst transmit(const IQBurst& tx, Receiver rx, const NodePosition& from, Rng& rng) const;
    // Same as transmit, but also returns the realization used (for gradient transport).
    IQBurst transmit(const IQBurst& tx, Receiver rx, const NodePosition& from, Rng& rng,
                     ChannelRealization& used) const;

private:
    ChannelRealization link(const std::vector<double>& static_phases, std::size_t n_tx,
                            std::size_t n_rx, const NodePosition& from, const NodePosition& to,
                            Rng& rng) const;

    ScenarioConfig cfg_;
    DevicePhases t_phases_;
    DevicePhases adv_phases_;
    std::vector<double> ph_T_R_, ph_T_AR_, ph_A_R_, ph_A_AR_;
};

}  // namespace spoofsim
