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

#include <complex>
#include <cstdint>
#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "spoofsim/rng.hpp"

namespace spoofsim {

using Complex = std::complex<double>;

class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DegenerateGeometry : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

inline constexpr int kBitsPerBurst = 8;
inline constexpr int kSymbolsPerBurst = 4;

struct NodePosition {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const NodePosition&) const = default;
};

double distance(const NodePosition& a, const NodePosition& b);

struct DevicePhases {
    std::vector<double> phases;  // radians in [0, 2pi), one per antenna
    std::size_t size() const { return phases.size(); }
};

DevicePhases random_device_phases(std::size_t n_antennas, Rng& rng);

struct ChannelRealization {
    double g = 0.0;  // link gain, multiplies the phasor sum as an amplitude
    std::size_t n_tx = 0;
    std::size_t n_rx = 0;
    std::vector<double> pair_phases;  // [tx][rx], row-major

    double phase(std::size_t tx, std::size_t rx) const { return pair_phases[tx * n_rx + rx]; }
    double& phase(std::size_t tx, std::size_t rx) { return pair_phases[tx * n_rx + rx]; }
};

// Complex baseband samples indexed [antenna][point], stored antenna-major.
struct IQBurst {
    std::size_t n_antennas = 0;
    std::size_t n_points = 0;
    std::vector<Complex> samples;

    IQBurst() = default;
    IQBurst(std::size_t antennas, std::size_t points)
        : n_antennas(antennas), n_points(points), samples(antennas * points) {}

    Complex& at(std::size_t a, std::size_t k) { return samples[a * n_points + k]; }
    const Complex& at(std::size_t a, std::size_t k) const { return samples[a * n_points + k]; }
    Complex* stream(std::size_t a) { return samples.data() + a * n_points; }
    const Complex* stream(std::size_t a) const { return samples.data() + a * n_points; }
};

enum class GainModel {
    RayleighAmplitude,  // g itself Rayleigh distributed with mean d^-2
    ExponentialPower,   // g exponential with mean d^-2
};

std::vector<int> random_bits(Rng& rng, int n = kBitsPerBurst);

// Gray mapping: 00 -> pi/4, 01 -> 3pi/4, 11 -> 5pi/4, 10 -> 7pi/4.
std::vector<double> qpsk_phases(const std::vector<int>& bits);

double draw_gain(const NodePosition& tx, const NodePosition& rx, GainModel model, Rng& rng);

// Fresh gain, i.i.d. uniform pair phases.
ChannelRealization draw_channel(const NodePosition& tx_pos, const NodePosition& rx_pos,
                                std::size_t n_tx, std::size_t n_rx, Rng& rng,
                                GainModel model = GainModel::RayleighAmplitude);

// Adds circularly symmetric complex Gaussian noise of unit variance to every sample.
void add_awgn(IQBurst& burst, Rng& rng);

IQBurst sample_intended_burst(const std::vector<int>& bits, const DevicePhases& tx_phases,
                              const ChannelRealization& ch, double P, std::size_t n_tx,
                              std::size_t n_rx, int S, bool noise, Rng& rng);

// Amplify-and-forward copy of an intended burst. Only the pair phases of ch_T_AT are used.
IQBurst sample_replay_burst(const std::vector<int>& bits, const DevicePhases& tx_phases,
                            const DevicePhases& adv_phases, const ChannelRealization& ch_T_AT,
                            const ChannelRealization& ch_AT_R, double P, std::size_t n_tx,
                            std::size_t n_adv, std::size_t n_rx, int S, bool noise, Rng& rng);

// Random-phase burst: every antenna sends its own i.i.d. uniform symbol phases at P/n_adv.
IQBurst sample_random_burst(const DevicePhases& adv_phases, const ChannelRealization& ch,
                            double P, std::size_t n_adv, std::size_t n_rx, int S, bool noise,
                            Rng& rng);

// rx_j[k] = g * sum_h tx_h[k] * exp(j(theta_h + theta_hj)) (+ noise)
IQBurst apply_channel(const IQBurst& tx, const DevicePhases& adv_phases,
                      const ChannelRealization& ch, bool noise, Rng& rng);

// Adjoint of the noiseless map above. Gradients of a real loss are carried as
// dL/dRe + j dL/dIm.
IQBurst apply_channel_adjoint(const IQBurst& grad_rx, const DevicePhases& adv_phases,
                              const ChannelRealization& ch);

// Interleaved (I, Q), antenna-major. Length 2 * n_points * n_antennas.
std::vector<double> features(const IQBurst& burst);
void features_into(const IQBurst& burst, double scale, double* out);
IQBurst burst_from_features(const double* feats, std::size_t n_antennas, std::size_t n_points,
                            double scale = 1.0);

// Binary burst file: u32 magic, u32 n_antennas, u64 n_points, then f64 I/Q pairs.
inline constexpr std::uint32_t kBurstMagic = 0x51495053;  // "SPIQ"
void write_burst(std::ostream& os, const IQBurst& burst);
IQBurst read_burst(std::istream& is);
void save_burst(const std::string& path, const IQBurst& burst);
IQBurst load_burst(const std::string& path);

}  // namespace spoofsim
