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

#include "spoofsim/attacks.hpp"

#include <ostream>

#include <json.hpp>

namespace spoofsim {

const char* attack_kind_name(AttackKind k) {
    switch (k) {
        case AttackKind::Random: return "random";
        case AttackKind::Replay: return "replay";
        case AttackKind::Gan: return "gan";
    }
    return "?";
}

double success_probability(const std::vector<Label>& decisions) {
    if (decisions.empty()) throw InvalidInput("success_probability: no decisions");
    std::size_t hits = 0;
    for (Label l : decisions) hits += l == Label::FromT ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(decisions.size());
}

namespace {

template <typename MakeBurst>
AttackReport run_attack(AttackKind kind, const DenseNetwork& classifier, const RadioEnvironment& env,
                        std::size_t n_trials, MakeBurst&& make) {
    const auto& cfg = env.config();
    if (classifier.input_size() != cfg.feature_length()) {
        throw InvalidInput("attack: classifier input width does not match the scenario");
    }
    if (n_trials == 0) throw InvalidInput("attack: n_trials must be positive");
    Matrix X(n_trials, cfg.feature_length());
    for (std::size_t t = 0; t < n_trials; ++t) features_into(make(t), cfg.feature_scale, X.row(t));
    const auto decisions = classify_batch(classifier, X);
    AttackReport r;
    r.attack_kind = kind;
    r.n_trials = n_trials;
    for (Label l : decisions) r.n_success += l == Label::FromT ? 1 : 0;
    r.success_prob = success_probability(decisions);
    r.scenario = cfg;
    return r;
}

}  // namespace

AttackReport run_random_attack(const DenseNetwork& classifier, const RadioEnvironment& env,
                               std::size_t n_trials, Rng& rng) {
    const auto from = env.config().attack_position();
    return run_attack(AttackKind::Random, classifier, env, n_trials,
                      [&](std::size_t) { return env.random_burst(from, rng); });
}

AttackReport run_replay_attack(const DenseNetwork& classifier, const RadioEnvironment& env,
                               std::size_t n_trials, Rng& rng) {
    const auto from = env.config().attack_position();
    return run_attack(AttackKind::Replay, classifier, env, n_trials,
                      [&](std::size_t) { return env.replay_burst(from, rng); });
}

AttackReport run_gan_attack(const DenseNetwork& classifier, const DenseNetwork& generator,
                            const RadioEnvironment& env, std::size_t n_trials, Rng& rng,
                            double power_budget, BudgetRule rule) {
    const auto& cfg = env.config();
    const auto n_adv = static_cast<std::size_t>(cfg.N_A);
    if (generator.output_size() != cfg.generator_width()) {
        throw InvalidInput("gan attack: generator output does not match N_A of the scenario");
    }
    const auto from = cfg.attack_position();
    std::vector<double> z(generator.input_size());
    return run_attack(AttackKind::Gan, classifier, env, n_trials, [&](std::size_t) {
        for (auto& v : z) v = rng.normal();
        const IQBurst tx = generate_spoof_burst(generator, z, n_adv, power_budget, rule);
        return env.transmit(tx, Receiver::R, from, rng);
    });
}

GanTraining train_gan_with_retries(const RadioEnvironment& env, const GanConfig& cfg, std::uint64_t seed,
                                   std::size_t max_retries) {
    GanTraining out;
    for (std::size_t attempt = 0;; ++attempt) {
        Rng rng(derive_seed(seed, {0x67616e, attempt}));
        out.result = train_gan(env, cfg, rng);
        out.retries = attempt;
        if (out.result.trace.converged || attempt >= max_retries) break;
    }
    return out;
}

namespace {

nlohmann::json pos_json(const NodePosition& p) { return nlohmann::json::array({p.x, p.y}); }

}  // namespace

std::string report_json(const AttackReport& r) {
    nlohmann::json j;
    j["attack_kind"] = attack_kind_name(r.attack_kind);
    j["n_trials"] = r.n_trials;
    j["n_success"] = r.n_success;
    j["success_prob"] = r.success_prob;
    const auto& s = r.scenario;
    j["scenario"] = {{"T", pos_json(s.T)},     {"R", pos_json(s.R)},   {"A_T", pos_json(s.A_T)},
                     {"A_R", pos_json(s.A_R)}, {"N_T", s.N_T},         {"N_R", s.N_R},
                     {"N_A", s.N_A},           {"P", s.P},             {"S", s.S},
                     {"seed", s.seed}};
    if (s.attack_time_AT_position) j["scenario"]["attack_at"] = pos_json(*s.attack_time_AT_position);
    const auto& m = r.classifier_metrics;
    j["classifier_metrics"] = {{"n", m.n},         {"n_from_T", m.n_from_T}, {"n_MD", m.n_MD},
                               {"n_FA", m.n_FA},   {"e_MD", m.e_MD},         {"e_FA", m.e_FA}};
    if (r.gan_trace_summary) {
        j["gan_trace_summary"] = {{"epochs_run", r.gan_trace_summary->epochs_run},
                                  {"converged", r.gan_trace_summary->converged},
                                  {"retries", r.gan_trace_summary->retries}};
    }
    return j.dump(2);
}

void write_report_csv_header(std::ostream& os) {
    os << "seed,N_T,N_R,N_A,AT_x,AT_y,attack_x,attack_y,attack_kind,n_trials,n_success,success_prob\n";
}

void append_report_csv(std::ostream& os, const AttackReport& r) {
    const auto& s = r.scenario;
    const auto at = s.attack_position();
    os << s.seed << ',' << s.N_T << ',' << s.N_R << ',' << s.N_A << ',' << s.A_T.x << ',' << s.A_T.y << ','
       << at.x << ',' << at.y << ',' << attack_kind_name(r.attack_kind) << ',' << r.n_trials << ','
       << r.n_success << ',' << r.success_prob << '\n';
}

}  // namespace spoofsim
