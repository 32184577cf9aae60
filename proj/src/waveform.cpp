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

#include "spoofsim/waveform.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "binio.hpp"

namespace spoofsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require(bool cond, const char* what) {
    if (!cond) throw InvalidInput(what);
}

std::vector<Complex> carrier(int S) {
    std::vector<Complex> c(static_cast<std::size_t>(S));
    const double step = std::numbers::pi / (S / 2.0);
    for (int k = 0; k < S; ++k) c[static_cast<std::size_t>(k)] = std::polar(1.0, step * k);
    return c;
}

// burst[j][s*S + k] = coef[j] * exp(j phi_s) * carrier[k]
void fill_symbols(IQBurst& out, const std::vector<Complex>& coef, const std::vector<double>& phi,
                  int S) {
    const auto car = carrier(S);
    for (std::size_t j = 0; j < out.n_antennas; ++j) {
        Complex* st = out.stream(j);
        for (std::size_t s = 0; s < phi.size(); ++s) {
            const Complex sym = coef[j] * std::polar(1.0, phi[s]);
            for (int k = 0; k < S; ++k) st[s * S + k] = sym * car[static_cast<std::size_t>(k)];
        }
    }
}

void check_channel(const ChannelRealization& ch, std::size_t n_tx, std::size_t n_rx) {
    require(ch.n_tx == n_tx && ch.n_rx == n_rx && ch.pair_phases.size() == n_tx * n_rx,
            "channel realization dimensions do not match antenna counts");
}

}  // namespace

double distance(const NodePosition& a, const NodePosition& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

DevicePhases random_device_phases(std::size_t n_antennas, Rng& rng) {
    DevicePhases d;
    d.phases.resize(n_antennas);
    for (auto& p : d.phases) p = rng.uniform(0.0, kTwoPi);
    return d;
}

std::vector<int> random_bits(Rng& rng, int n) {
    std::vector<int> b(static_cast<std::size_t>(n));
    for (auto& v : b) v = rng.bit();
    return b;
}

std::vector<double> qpsk_phases(const std::vector<int>& bits) {
    if (bits.size() % 2 != 0 || bits.empty()) throw InvalidInput("qpsk_phases: bit count must be even");
    constexpr double pi = std::numbers::pi;
    std::vector<double> out;
    out.reserve(bits.size() / 2);
    for (std::size_t i = 0; i < bits.size(); i += 2) {
        const int b0 = bits[i];
        const int b1 = bits[i + 1];
        require((b0 == 0 || b0 == 1) && (b1 == 0 || b1 == 1), "qpsk_phases: bits must be 0 or 1");
        double phi = 0.0;
        if (b0 == 0 && b1 == 0) phi = pi / 4;
        else if (b0 == 0 && b1 == 1) phi = 3 * pi / 4;
        else if (b0 == 1 && b1 == 1) phi = 5 * pi / 4;
        else phi = 7 * pi / 4;
        out.push_back(phi);
    }
    return out;
}

double draw_gain(const NodePosition& tx, const NodePosition& rx, GainModel model, Rng& rng) {
    const double d = distance(tx, rx);
    if (!(d > 0.0)) throw DegenerateGeometry("draw_channel: transmitter and receiver coincide");
    const double mean = 1.0 / (d * d);
    return model == GainModel::ExponentialPower ? rng.exponential(mean) : rng.rayleigh(mean);
}

ChannelRealization draw_channel(const NodePosition& tx_pos, const NodePosition& rx_pos,
                                std::size_t n_tx, std::size_t n_rx, Rng& rng, GainModel model) {
    require(n_tx >= 1 && n_rx >= 1, "draw_channel: antenna counts must be positive");
    ChannelRealization ch;
    ch.g = draw_gain(tx_pos, rx_pos, model, rng);
    ch.n_tx = n_tx;
    ch.n_rx = n_rx;
    ch.pair_phases.resize(n_tx * n_rx);
    for (auto& p : ch.pair_phases) p = rng.uniform(0.0, kTwoPi);
    return ch;
}

void add_awgn(IQBurst& burst, Rng& rng) {
    const double s = std::sqrt(0.5);
    for (auto& v : burst.samples) {
        const double re = rng.normal();
        const double im = rng.normal();
        v += Complex(s * re, s * im);
    }
}

IQBurst sample_intended_burst(const std::vector<int>& bits, const DevicePhases& tx_phases,
                              const ChannelRealization& ch, double P, std::size_t n_tx,
                              std::size_t n_rx, int S, bool noise, Rng& rng) {
    require(bits.size() == kBitsPerBurst, "sample_intended_burst: expected 8 bits");
    require(P > 0.0 && S >= 1, "sample_intended_burst: P and S must be positive");
    require(tx_phases.size() == n_tx, "sample_intended_burst: device phase count mismatch");
    check_channel(ch, n_tx, n_rx);
    std::vector<Complex> coef(n_rx);
    for (std::size_t j = 0; j < n_rx; ++j) {
        Complex acc = 0.0;
        for (std::size_t i = 0; i < n_tx; ++i) acc += std::polar(1.0, tx_phases.phases[i] + ch.phase(i, j));
        coef[j] = ch.g * (P / static_cast<double>(n_tx)) * acc;
    }
    IQBurst out(n_rx, static_cast<std::size_t>(kSymbolsPerBurst * S));
    fill_symbols(out, coef, qpsk_phases(bits), S);
    if (noise) add_awgn(out, rng);
    return out;
}

IQBurst sample_replay_burst(const std::vector<int>& bits, const DevicePhases& tx_phases,
                            const DevicePhases& adv_phases, const ChannelRealization& ch_T_AT,
                            const ChannelRealization& ch_AT_R, double P, std::size_t n_tx,
                            std::size_t n_adv, std::size_t n_rx, int S, bool noise, Rng& rng) {
    require(bits.size() == kBitsPerBurst, "sample_replay_burst: expected 8 bits");
    require(P > 0.0 && S >= 1, "sample_replay_burst: P and S must be positive");
    require(tx_phases.size() == n_tx && adv_phases.size() == n_adv,
            "sample_replay_burst: device phase count mismatch");
    check_channel(ch_T_AT, n_tx, n_adv);
    check_channel(ch_AT_R, n_adv, n_rx);
    std::vector<Complex> coef(n_rx);
    for (std::size_t j = 0; j < n_rx; ++j) {
        Complex acc = 0.0;
        for (std::size_t i = 0; i < n_tx; ++i) {
            for (std::size_t h = 0; h < n_adv; ++h) {
                acc += std::polar(1.0, tx_phases.phases[i] + ch_T_AT.phase(i, h) +
                                           adv_phases.phases[h] + ch_AT_R.phase(h, j));
            }
        }
        coef[j] = ch_AT_R.g * (P / static_cast<double>(n_adv)) * acc;
    }
    IQBurst out(n_rx, static_cast<std::size_t>(kSymbolsPerBurst * S));
    fill_symbols(out, coef, qpsk_phases(bits), S);
    if (noise) add_awgn(out, rng);
    return out;
}

IQBurst sample_random_burst(const DevicePhases& adv_phases, const ChannelRealization& ch,
                            double P, std::size_t n_adv, std::size_t n_rx, int S, bool noise,
                            Rng& rng) {
    require(P > 0.0 && S >= 1, "sample_random_burst: P and S must be positive");
    require(adv_phases.size() == n_adv, "sample_random_burst: device phase count mismatch");
    check_channel(ch, n_adv, n_rx);
    const std::size_t n_points = static_cast<std::size_t>(kSymbolsPerBurst * S);
    const auto car = carrier(S);
    IQBurst out(n_rx, n_points);
    for (std::size_t h = 0; h < n_adv; ++h) {
        double psi[kSymbolsPerBurst];
        for (double& p : psi) p = rng.uniform(0.0, kTwoPi);
        for (std::size_t j = 0; j < n_rx; ++j) {
            const Complex c = ch.g * (P / static_cast<double>(n_adv)) *
                              std::polar(1.0, adv_phases.phases[h] + ch.phase(h, j));
            Complex* st = out.stream(j);
            for (int s = 0; s < kSymbolsPerBurst; ++s) {
                const Complex sym = c * std::polar(1.0, psi[s]);
                for (int k = 0; k < S; ++k) st[s * S + k] += sym * car[static_cast<std::size_t>(k)];
            }
        }
    }
    if (noise) add_awgn(out, rng);
    return out;
}

IQBurst apply_channel(const IQBurst& tx, const DevicePhases& adv_phases,
                      const ChannelRealization& ch, bool noise, Rng& rng) {
    require(tx.n_antennas == ch.n_tx && adv_phases.size() == ch.n_tx,
            "apply_channel: transmit antenna count mismatch");
    check_channel(ch, ch.n_tx, ch.n_rx);
    IQBurst rx(ch.n_rx, tx.n_points);
    for (std::size_t j = 0; j < ch.n_rx; ++j) {
        Complex* out = rx.stream(j);
        for (std::size_t h = 0; h < ch.n_tx; ++h) {
            const Complex c = ch.g * std::polar(1.0, adv_phases.phases[h] + ch.phase(h, j));
            const Complex* in = tx.stream(h);
            for (std::size_t k = 0; k < tx.n_points; ++k) out[k] += c * in[k];
        }
    }
    if (noise) add_awgn(rx, rng);
    return rx;
}

IQBurst apply_channel_adjoint(const IQBurst& grad_rx, const DevicePhases& adv_phases,
                              const ChannelRealization& ch) {
    require(grad_rx.n_antennas == ch.n_rx && adv_phases.size() == ch.n_tx,
            "apply_channel_adjoint: antenna count mismatch");
    IQBurst gtx(ch.n_tx, grad_rx.n_points);
    for (std::size_t h = 0; h < ch.n_tx; ++h) {
        Complex* out = gtx.stream(h);
        for (std::size_t j = 0; j < ch.n_rx; ++j) {
            const Complex c = std::conj(ch.g * std::polar(1.0, adv_phases.phases[h] + ch.phase(h, j)));
            const Complex* in = grad_rx.stream(j);
            for (std::size_t k = 0; k < grad_rx.n_points; ++k) out[k] += c * in[k];
        }
    }
    return gtx;
}

std::vector<double> features(const IQBurst& burst) {
    std::vector<double> f(2 * burst.samples.size());
    features_into(burst, 1.0, f.data());
    return f;
}

void features_into(const IQBurst& burst, double scale, double* out) {
    for (std::size_t i = 0; i < burst.samples.size(); ++i) {
        out[2 * i] = scale * burst.samples[i].real();
        out[2 * i + 1] = scale * burst.samples[i].imag();
    }
}

IQBurst burst_from_features(const double* feats, std::size_t n_antennas, std::size_t n_points,
                            double scale) {
    IQBurst b(n_antennas, n_points);
    for (std::size_t i = 0; i < b.samples.size(); ++i) {
        b.samples[i] = Complex(feats[2 * i] / scale, feats[2 * i + 1] / scale);
    }
    return b;
}

void write_burst(std::ostream& os, const IQBurst& burst) {
    binio::put_u32(os, kBurstMagic);
    binio::put_u32(os, static_cast<std::uint32_t>(burst.n_antennas));
    binio::put_u64(os, burst.n_points);
    for (const auto& v : burst.samples) {
        binio::put_f64(os, v.real());
        binio::put_f64(os, v.imag());
    }
}

IQBurst read_burst(std::istream& is) {
    if (binio::get_u32(is) != kBurstMagic) throw InvalidInput("read_burst: bad magic");
    const std::size_t na = binio::get_u32(is);
    const std::size_t np = binio::get_u64(is);
    require(na >= 1 && np >= 1 && na * np < (std::size_t{1} << 32), "read_burst: bad dimensions");
    IQBurst b(na, np);
    for (auto& v : b.samples) {
        const double re = binio::get_f64(is);
        const double im = binio::get_f64(is);
        v = Complex(re, im);
    }
    return b;
}

void save_burst(const std::string& path, const IQBurst& burst) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_burst(os, burst);
}

IQBurst load_burst(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_burst(is);
}

}  // namespace spoofsim
