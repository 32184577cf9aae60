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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spoofsim/authenticator.hpp"
#include "spoofsim/gan.hpp"

namespace spoofsim {

enum class AttackKind { Random, Replay, Gan };

const char* attack_kind_name(AttackKind k);

struct GanTraceSummary {
    std::size_t epochs_run = 0;
    bool converged = false;
    std::size_t retries = 0;
};

struct AttackReport {
    AttackKind attack_kind = AttackKind::Random;
    std::size_t n_trials = 0;
    std::size_t n_success = 0;
    double success_prob = 0.0;
    ScenarioConfig scenario;
    ClassifierMetrics classifier_metrics;
    std::optional<GanTraceSummary> gan_trace_summary;
};

inline constexpr std::size_t kDefaultTrials = 500;

double success_probability(const std::vector<Label>& decisions);

AttackReport run_random_attack(const DenseNetwork& classifier, const RadioEnvironment& env,
                               std::size_t n_trials, Rng& rng);
AttackReport run_replay_attack(const DenseNetwork& classifier, const RadioEnvironment& env,
                               std::size_t n_trials, Rng& rng);
// Transmits from the scenario's attack-time position when set, else from A_T.
AttackReport run_gan_attack(const DenseNetwork& classifier, const DenseNetwork& generator,
                            const RadioEnvironment& env, std::size_t n_trials, Rng& rng,
                            double power_budget, BudgetRule rule = BudgetRule::TotalPower);

// Trains a GAN and, while the run ends unconverged, retrains with a fresh seed up to
// `max_retries` times. Returns the last attempt.
struct GanTraining {
    GanResult result;
    std::size_t retries = 0;
};
GanTraining train_gan_with_retries(const RadioEnvironment& env, const GanConfig& cfg, std::uint64_t seed,
                                   std::size_t max_retries);

std::string report_json(const AttackReport& r);
void write_report_csv_header(std::ostream& os);
void append_report_csv(std::ostream& os, const AttackReport& r);

}  // namespace spoofsim
