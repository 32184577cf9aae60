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
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "spoofsim/network.hpp"
#include "spoofsim/scenario.hpp"

namespace spoofsim {

enum class BudgetRule {
    SumRms,      // sum_h RMS(stream_h) <= budget
    TotalPower,  // sqrt(sum_h RMS(stream_h)^2) <= budget
};

const char* budget_rule_name(BudgetRule r);

struct GanConfig {
    std::size_t noise_dim = 100;
    std::size_t hidden_width = 128;
    std::size_t hidden_depth = 3;
    std::size_t real_pool = 500;
    std::size_t synth_per_epoch = 500;
    std::size_t batch_size = 100;
    std::size_t max_epochs = 2000;
    std::size_t conv_window = 100;
    double conv_threshold = 0.05;
    double power_budget = 1000.0;
    BudgetRule budget_rule = BudgetRule::TotalPower;
    // Collect a new real pool at A_R every epoch instead of once at the start.
    bool refresh_real_pool = true;
    double d_learning_rate = 1e-3;
    double g_learning_rate = 1e-3;

    void validate() const;
};

struct ProtocolEntry {
    std::uint32_t epoch = 0;
    std::uint8_t flag_bit = 0;      // A_T marks the burst as synthetic
    std::uint8_t feedback_bit = 0;  // A_R reports whether it was classified as T
};

struct TrainingTrace {
    std::vector<double> g_loss;
    std::vector<double> d_loss;
    std::size_t epochs_run = 0;
    bool converged = false;
    std::vector<ProtocolEntry> protocol_log;
};

struct GanResult {
    DenseNetwork G;
    DenseNetwork D;
    TrainingTrace trace;
};

// -E_x[log D(x)] - E_z[log(1 - D(G(z)))], minimized by D. Rows are D inputs.
double discriminator_loss(const DenseNetwork& D, const Matrix& real_batch, const Matrix& synth_batch);
// -E_z[log D(G(z))], minimized by G.
double generator_loss(const DenseNetwork& D, const Matrix& synth_batch);

// Scales y (interleaved I/Q, n_adv streams) down so the budget rule holds with budget 1.
// Returns the scale factor applied (<= 1).
double project_budget(double* y, std::size_t n_adv, std::size_t n_points, BudgetRule rule);
// Given dL/d(projected) in `g`, overwrite it with dL/d(y) for the original y.
void project_budget_backward(const double* y, double* g, std::size_t n_adv, std::size_t n_points,
                             BudgetRule rule);

// Per-stream RMS amplitudes.
std::vector<double> stream_rms(const IQBurst& burst);
double budget_usage(const IQBurst& burst, BudgetRule rule);

// G output times power_budget, reshaped to n_adv streams and projected onto the budget.
IQBurst generate_spoof_burst(const DenseNetwork& G, const std::vector<double>& z, std::size_t n_adv,
                             double power_budget, BudgetRule rule = BudgetRule::TotalPower);

bool check_convergence(const std::vector<double>& loss_series, std::size_t window, double threshold);

using EpochCallback = std::function<void(std::size_t epoch, const GanResult& state)>;

GanResult train_gan(const RadioEnvironment& env, const GanConfig& cfg, Rng& rng,
                    const EpochCallback& on_epoch = {});

// Loss of the generator path z -> G -> budget -> channel -> features -> D for one noise
// vector and one fixed channel realization, without noise.
double generator_path_loss(const DenseNetwork& G, const DenseNetwork& D, const std::vector<double>& z,
                           const DevicePhases& adv_phases, const ChannelRealization& ch,
                           double power_budget, BudgetRule rule, double feature_scale);

// Max relative error between the analytic generator gradient through the channel and
// central differences, over every G parameter.
double generator_gradient_check(const DenseNetwork& G, const DenseNetwork& D, const std::vector<double>& z,
                                const DevicePhases& adv_phases, const ChannelRealization& ch,
                                double power_budget, BudgetRule rule, double feature_scale,
                                double h = 1e-5);

void write_trace_csv(std::ostream& os, const TrainingTrace& trace);
std::string trace_summary_json(const TrainingTrace& trace);

}  // namespace spoofsim
