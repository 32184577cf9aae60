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

#include "spoofsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#ifndef SPOOFSIM_VERSION
#define SPOOFSIM_VERSION "unknown"
#endif

namespace spoofsim {

const char* build_version() { return SPOOFSIM_VERSION; }

ExperimentSpec default_spec(int table_id) {
    ExperimentSpec s;
    s.table_id = table_id;
    const std::vector<int> all{1, 2, 3, 4};
    switch (table_id) {
        case 1:
            s.n_t = all;
            s.n_r = all;
            break;
        case 2:
        case 3:
            s.n_t = all;
            s.n_r = all;
            s.n_a = all;
            break;
        case 4:
            s.positions = {{0, 5}, {0, 10}, {0, 15}, {0, 20}};
            break;
        case 5:
            s.positions = {{0, 10}, {0, 11}, {0, 15}, {0, 20}};
            break;
        default:
            break;
    }
    return s;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

[[noreturn]] void bad(const std::string& key, const std::string& msg) { throw ConfigError(key + ": " + msg); }

double to_double(const std::string& key, const std::string& v) {
    double x = 0.0;
    auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size() || !std::isfinite(x)) bad(key, "expected a number, got '" + v + "'");
    return x;
}

long long to_int(const std::string& key, const std::string& v) {
    long long x = 0;
    auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size()) bad(key, "expected an integer, got '" + v + "'");
    return x;
}

std::size_t to_count(const std::string& key, const std::string& v, long long min = 1) {
    const long long x = to_int(key, v);
    if (x < min) bad(key, "must be >= " + std::to_string(min));
    return static_cast<std::size_t>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    bad(key, "expected a boolean, got '" + v + "'");
}

NodePosition to_pos(const std::string& key, const std::string& v) {
    std::string s = v;
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == '(' || c == ')'; }), s.end());
    const auto parts = split(s, ',');
    if (parts.size() != 2) bad(key, "expected a position 'x,y', got '" + v + "'");
    return {to_double(key, parts[0]), to_double(key, parts[1])};
}

std::vector<int> to_antennas(const std::string& key, const std::string& v) {
    std::vector<int> out;
    for (const auto& p : split(v, ',')) {
        const long long n = to_int(key, p);
        if (n < 1 || n > 64) bad(key, "antenna counts must be in [1, 64]");
        out.push_back(static_cast<int>(n));
    }
    if (out.empty()) bad(key, "empty list");
    return out;
}

}  // namespace

void apply_key(ExperimentSpec& s, const std::string& key, const std::string& raw) {
    const std::string v = trim(raw);
    auto& sc = s.scenario;
    auto& g = s.gan;
    auto& t = s.train;
    if (key == "table") {
        if (v == "custom") {
            s.table_id = 0;
            return;
        }
        const long long id = to_int(key, v);
        if (id < 1 || id > 5) bad(key, "must be 1..5 or custom");
        s.table_id = static_cast<int>(id);
    } else if (key == "seeds") {
        s.seeds.clear();
        for (const auto& p : split(v, ',')) s.seeds.push_back(static_cast<std::uint64_t>(to_count(key, p, 0)));
        if (s.seeds.empty()) bad(key, "empty list");
    } else if (key == "trials") {
        s.n_trials = to_count(key, v);
    } else if (key == "out") {
        s.out_dir = v;
    } else if (key == "jobs") {
        s.jobs = to_count(key, v);
    } else if (key == "grid.n_t") {
        s.n_t = to_antennas(key, v);
    } else if (key == "grid.n_r") {
        s.n_r = to_antennas(key, v);
    } else if (key == "grid.n_a") {
        s.n_a = to_antennas(key, v);
    } else if (key == "grid.positions") {
        s.positions.clear();
        for (const auto& p : split(v, ';')) s.positions.push_back(to_pos(key, p));
        if (s.positions.empty()) bad(key, "empty list");
    } else if (key == "scenario.t") {
        sc.T = to_pos(key, v);
    } else if (key == "scenario.r") {
        sc.R = to_pos(key, v);
    } else if (key == "scenario.a_t") {
        sc.A_T = to_pos(key, v);
    } else if (key == "scenario.a_r") {
        sc.A_R = to_pos(key, v);
    } else if (key == "scenario.attack_at") {
        sc.attack_time_AT_position = to_pos(key, v);
    } else if (key == "scenario.n_t") {
        sc.N_T = to_antennas(key, v).front();
    } else if (key == "scenario.n_r") {
        sc.N_R = to_antennas(key, v).front();
    } else if (key == "scenario.n_a") {
        sc.N_A = to_antennas(key, v).front();
    } else if (key == "scenario.p") {
        sc.P = to_double(key, v);
        if (!(sc.P > 0.0)) bad(key, "must be > 0");
        g.power_budget = sc.P;
    } else if (key == "scenario.s") {
        sc.S = static_cast<int>(to_count(key, v, 2));
    } else if (key == "scenario.gain_model") {
        if (v == "rayleigh") sc.gain_model = GainModel::RayleighAmplitude;
        else if (v == "exponential") sc.gain_model = GainModel::ExponentialPower;
        else bad(key, "expected rayleigh or exponential");
    } else if (key == "scenario.phase_model") {
        if (v == "quasi_static") sc.phase_model = PhaseModel::QuasiStatic;
        else if (v == "iid") sc.phase_model = PhaseModel::IidUniform;
        else bad(key, "expected quasi_static or iid");
    } else if (key == "scenario.coherence_distance") {
        sc.coherence_distance = to_double(key, v);
        if (!(sc.coherence_distance > 0.0)) bad(key, "must be > 0");
    } else if (key == "scenario.feature_scale") {
        sc.feature_scale = to_double(key, v);
        if (!(sc.feature_scale > 0.0)) bad(key, "must be > 0");
    } else if (key == "train.learning_rate") {
        t.learning_rate = to_double(key, v);
        if (!(t.learning_rate > 0.0)) bad(key, "must be > 0");
    } else if (key == "train.batch_size") {
        t.batch_size = to_count(key, v);
    } else if (key == "train.steps") {
        t.train_steps = to_count(key, v);
    } else if (key == "train.n_train") {
        s.n_train = to_count(key, v, 2);
    } else if (key == "train.n_test") {
        s.n_test = to_count(key, v, 2);
    } else if (key == "train.tune") {
        s.tune = to_bool(key, v);
    } else if (key == "train.tune_batches") {
        s.tune_batches.clear();
        for (const auto& p : split(v, ',')) s.tune_batches.push_back(to_count(key, p));
        if (s.tune_batches.empty()) bad(key, "empty list");
    } else if (key == "gan.noise_dim") {
        g.noise_dim = to_count(key, v);
    } else if (key == "gan.hidden_width") {
        g.hidden_width = to_count(key, v);
    } else if (key == "gan.hidden_depth") {
        g.hidden_depth = to_count(key, v, 0);
    } else if (key == "gan.real_pool") {
        g.real_pool = to_count(key, v);
    } else if (key == "gan.synth_per_epoch") {
        g.synth_per_epoch = to_count(key, v);
    } else if (key == "gan.batch_size") {
        g.batch_size = to_count(key, v);
    } else if (key == "gan.max_epochs") {
        g.max_epochs = to_count(key, v);
    } else if (key == "gan.conv_window") {
        g.conv_window = to_count(key, v, 2);
    } else if (key == "gan.conv_threshold") {
        g.conv_threshold = to_double(key, v);
        if (!(g.conv_threshold > 0.0 && g.conv_threshold < 1.0)) bad(key, "must be in (0,1)");
    } else if (key == "gan.power_budget") {
        g.power_budget = to_double(key, v);
        if (!(g.power_budget > 0.0)) bad(key, "must be > 0");
    } else if (key == "gan.budget_rule") {
        if (v == "total_power") g.budget_rule = BudgetRule::TotalPower;
        else if (v == "sum_rms") g.budget_rule = BudgetRule::SumRms;
        else bad(key, "expected total_power or sum_rms");
    } else if (key == "gan.refresh_real_pool") {
        g.refresh_real_pool = to_bool(key, v);
    } else if (key == "gan.d_learning_rate") {
        g.d_learning_rate = to_double(key, v);
        if (!(g.d_learning_rate > 0.0)) bad(key, "must be > 0");
    } else if (key == "gan.g_learning_rate") {
        g.g_learning_rate = to_double(key, v);
        if (!(g.g_learning_rate > 0.0)) bad(key, "must be > 0");
    } else if (key == "gan.retries") {
        s.gan_retries = to_count(key, v, 0);
    } else {
        bad(key, "unknown key");
    }
}

namespace {

std::vector<std::pair<std::string, std::string>> parse_pairs(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        out.emplace_back(key, trim(line.substr(eq + 1)));
    }
    return out;
}

}  // namespace

ExperimentSpec parse_config(const std::string& text,
                            const std::vector<std::pair<std::string, std::string>>& overrides) {
    auto pairs = parse_pairs(text);
    pairs.insert(pairs.end(), overrides.begin(), overrides.end());
    int table = 0;
    for (const auto& [k, v] : pairs) {
        if (k == "table") {
            ExperimentSpec probe;
            apply_key(probe, k, v);
            table = probe.table_id;
        }
    }
    ExperimentSpec spec = default_spec(table);
    for (const auto& [k, v] : pairs) apply_key(spec, k, v);
    validate(spec);
    return spec;
}

ExperimentSpec load_config(const std::string& path,
                           const std::vector<std::pair<std::string, std::string>>& overrides) {
    std::string text;
    if (!path.empty()) {
        std::ifstream is(path);
        if (!is) throw ConfigError(path + ": cannot read config file");
        std::ostringstream ss;
        ss << is.rdbuf();
        text = ss.str();
    }
    return parse_config(text, overrides);
}

void validate(const ExperimentSpec& s) {
    try {
        s.scenario.validate();
        s.train.validate();
        s.gan.validate();
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }
    if (s.seeds.empty()) throw ConfigError("seeds: empty list");
    if (s.n_t.empty() || s.n_r.empty() || s.n_a.empty()) throw ConfigError("grid: empty antenna list");
    if ((s.table_id == 4 || s.table_id == 5) && s.positions.empty()) throw ConfigError("grid.positions: empty list");
    for (const auto& p : s.positions) {
        if (p == s.scenario.R) throw ConfigError("grid.positions: position coincides with R");
    }
    if (s.n_trials < 1) throw ConfigError("trials: must be >= 1");
}

std::vector<std::string> value_columns(int table_id) {
    switch (table_id) {
        case 1: return {"e_MD", "e_FA", "n_MD", "n_FA", "n_from_T", "n_test"};
        case 2: return {"replay_success", "random_success", "e_MD", "e_FA"};
        case 3: return {"gan_success", "replay_success", "e_MD", "e_FA", "epochs_run", "converged", "retries"};
        case 4: return {"gan_success", "replay_success", "epochs_run", "converged", "retries"};
        case 5: return {"gan_success", "replay_success", "epochs_run", "converged", "retries"};
        default:
            return {"e_MD", "e_FA", "random_success", "replay_success", "gan_success", "epochs_run", "converged",
                    "retries"};
    }
}

namespace {

struct Cell {
    std::uint64_t seed = 0;
    ScenarioConfig scenario;
    std::size_t index = 0;
};

struct Trained {
    DenseNetwork classifier;
    ClassifierMetrics metrics;
};

Trained train_defender(const ExperimentSpec& spec, const RadioEnvironment& env, std::uint64_t seed) {
    const auto& sc = env.config();
    const auto key = {std::uint64_t{0x636c66}, static_cast<std::uint64_t>(sc.N_T), static_cast<std::uint64_t>(sc.N_R)};
    Rng data(derive_seed(seed, key));
    TrainConfig tc = spec.train;
    tc.seed = derive_seed(seed, {0x636c66, static_cast<std::uint64_t>(sc.N_T), static_cast<std::uint64_t>(sc.N_R), 1});
    if (spec.tune) {
        std::vector<TrainConfig> grid;
        for (std::size_t b : spec.tune_batches) {
            grid.push_back(tc);
            grid.back().batch_size = b;
        }
        Rng tr(data.split());
        tc = tune_hyperparameters(env, grid, tr, spec.n_train, spec.n_test).best;
    }
    const Dataset train = build_dataset(env, spec.n_train, 0.5, data);
    const Dataset test = build_dataset(env, spec.n_test, 0.5, data);
    Trained t;
    t.classifier = train_classifier(train, tc);
    t.metrics = evaluate(t.classifier, test);
    return t;
}

std::uint64_t attack_seed(std::uint64_t seed, const ScenarioConfig& sc, std::uint64_t kind) {
    const auto at = sc.attack_position();
    return derive_seed(seed, {kind, static_cast<std::uint64_t>(sc.N_T), static_cast<std::uint64_t>(sc.N_R),
                              static_cast<std::uint64_t>(sc.N_A), std::bit_cast<std::uint64_t>(sc.A_T.y),
                              std::bit_cast<std::uint64_t>(at.y)});
}

AttackReport with_metrics(AttackReport r, const ClassifierMetrics& m) {
    r.classifier_metrics = m;
    return r;
}

void add_gan_values(ResultRow& row, const GanTraining& g) {
    row.values["epochs_run"] = static_cast<double>(g.result.trace.epochs_run);
    row.values["converged"] = g.result.trace.converged ? 1.0 : 0.0;
    row.values["retries"] = static_cast<double>(g.retries);
}

struct CellOutput {
    std::vector<ResultRow> rows;
    std::vector<AttackReport> reports;
};

CellOutput run_cell(const ExperimentSpec& spec, const Cell& cell) {
    CellOutput out;
    ScenarioConfig sc = cell.scenario;
    sc.seed = cell.seed;
    // Defender world: the classifier never depends on where the adversary trains.
    ScenarioConfig defender = sc;
    if (spec.table_id == 4) defender.A_T = spec.scenario.A_T;
    defender.attack_time_AT_position.reset();
    const RadioEnvironment denv(defender);
    const Trained def = train_defender(spec, denv, cell.seed);

    const RadioEnvironment env(sc);
    auto replay = [&](const RadioEnvironment& e) {
        Rng rng(attack_seed(cell.seed, e.config(), 0x72706c));
        return with_metrics(run_replay_attack(def.classifier, e, spec.n_trials, rng), def.metrics);
    };
    auto random = [&](const RadioEnvironment& e) {
        Rng rng(attack_seed(cell.seed, e.config(), 0x726e64));
        return with_metrics(run_random_attack(def.classifier, e, spec.n_trials, rng), def.metrics);
    };
    auto train = [&](const RadioEnvironment& e) {
        return train_gan_with_retries(e, spec.gan, attack_seed(cell.seed, e.config(), 0x74726e), spec.gan_retries);
    };
    auto gan = [&](const RadioEnvironment& e, const GanTraining& g) {
        Rng rng(attack_seed(cell.seed, e.config(), 0x67616e));
        auto r = with_metrics(run_gan_attack(def.classifier, g.result.G, e, spec.n_trials, rng,
                                             spec.gan.power_budget, spec.gan.budget_rule),
                              def.metrics);
        r.gan_trace_summary = GanTraceSummary{g.result.trace.epochs_run, g.result.trace.converged, g.retries};
        return r;
    };

    ResultRow row;
    row.seed = cell.seed;
    row.scenario = sc;
    switch (spec.table_id) {
        case 1:
            row.values["e_MD"] = def.metrics.e_MD;
            row.values["e_FA"] = def.metrics.e_FA;
            row.values["n_MD"] = static_cast<double>(def.metrics.n_MD);
            row.values["n_FA"] = static_cast<double>(def.metrics.n_FA);
            row.values["n_from_T"] = static_cast<double>(def.metrics.n_from_T);
            row.values["n_test"] = static_cast<double>(def.metrics.n);
            out.rows.push_back(row);
            break;
        case 2: {
            const auto rp = replay(env);
            const auto rn = random(env);
            row.values["replay_success"] = rp.success_prob;
            row.values["random_success"] = rn.success_prob;
            row.values["e_MD"] = def.metrics.e_MD;
            row.values["e_FA"] = def.metrics.e_FA;
            out.reports = {rp, rn};
            out.rows.push_back(row);
            break;
        }
        case 3:
        case 4: {
            const auto g = train(env);
            const auto ga = gan(env, g);
            const auto rp = replay(env);
            row.values["gan_success"] = ga.success_prob;
            row.values["replay_success"] = rp.success_prob;
            if (spec.table_id == 3) {
                row.values["e_MD"] = def.metrics.e_MD;
                row.values["e_FA"] = def.metrics.e_FA;
            }
            add_gan_values(row, g);
            out.reports = {ga, rp};
            out.rows.push_back(row);
            break;
        }
        case 5: {
            ScenarioConfig trained_at = sc;
            trained_at.attack_time_AT_position.reset();
            const RadioEnvironment tenv(trained_at);
            const auto g = train(tenv);
            const auto rp = replay(tenv);
            for (const auto& pos : spec.positions) {
                ScenarioConfig moved = trained_at;
                moved.attack_time_AT_position = pos;
                const RadioEnvironment menv(moved);
                const auto ga = gan(menv, g);
                ResultRow r = row;
                r.scenario = moved;
                r.values["gan_success"] = ga.success_prob;
                r.values["replay_success"] = rp.success_prob;
                add_gan_values(r, g);
                out.reports.push_back(ga);
                out.rows.push_back(r);
            }
            out.reports.push_back(rp);
            break;
        }
        default: {
            const auto rn = random(env);
            const auto rp = replay(env);
            const auto g = train(env);
            const auto ga = gan(env, g);
            row.values["e_MD"] = def.metrics.e_MD;
            row.values["e_FA"] = def.metrics.e_FA;
            row.values["random_success"] = rn.success_prob;
            row.values["replay_success"] = rp.success_prob;
            row.values["gan_success"] = ga.success_prob;
            add_gan_values(row, g);
            out.reports = {rn, rp, ga};
            out.rows.push_back(row);
            break;
        }
    }
    return out;
}

std::vector<Cell> enumerate_cells(const ExperimentSpec& spec) {
    std::vector<ScenarioConfig> points;
    const ScenarioConfig& base = spec.scenario;
    switch (spec.table_id) {
        case 1:
            for (int nt : spec.n_t) {
                for (int nr : spec.n_r) {
                    ScenarioConfig s = base;
                    s.N_T = nt;
                    s.N_R = nr;
                    points.push_back(s);
                }
            }
            break;
        case 2:
        case 3:
            for (int nt : spec.n_t) {
                for (int nr : spec.n_r) {
                    for (int na : spec.n_a) {
                        ScenarioConfig s = base;
                        s.N_T = nt;
                        s.N_R = nr;
                        s.N_A = na;
                        points.push_back(s);
                    }
                }
            }
            break;
        case 4:
            for (const auto& p : spec.positions) {
                ScenarioConfig s = base;
                s.A_T = p;
                s.attack_time_AT_position.reset();
                points.push_back(s);
            }
            break;
        default:
            points.push_back(base);
            break;
    }
    std::vector<Cell> cells;
    for (const auto& p : points) {
        for (std::uint64_t seed : spec.seeds) cells.push_back({seed, p, cells.size()});
    }
    return cells;
}

bool same_point(const ScenarioConfig& a, const ScenarioConfig& b) {
    return a.N_T == b.N_T && a.N_R == b.N_R && a.N_A == b.N_A && a.A_T == b.A_T &&
           a.attack_position() == b.attack_position();
}

}  // namespace

ResultTable run_experiment(const ExperimentSpec& spec) {
    validate(spec);
    const auto cells = enumerate_cells(spec);
    std::vector<CellOutput> outputs(cells.size());
    std::vector<std::string> errors(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            try {
                outputs[i] = run_cell(spec, cells[i]);
            } catch (const std::exception& e) {
                std::ostringstream os;
                os << describe(cells[i].scenario) << " seed=" << cells[i].seed << ": " << e.what();
                errors[i] = os.str();
            }
        }
    };
    const std::size_t n_workers = std::max<std::size_t>(1, std::min(spec.jobs, cells.size()));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    ResultTable table;
    table.table_id = spec.table_id;
    table.value_columns = value_columns(spec.table_id);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!errors[i].empty()) {
            ResultRow r;
            r.seed = cells[i].seed;
            r.scenario = cells[i].scenario;
            r.error = errors[i];
            table.rows.push_back(r);
            ++table.failed_cells;
            continue;
        }
        for (auto& r : outputs[i].rows) table.rows.push_back(std::move(r));
        for (auto& r : outputs[i].reports) table.reports.push_back(std::move(r));
    }
    // Seed-averaged rows in first-appearance order of each grid point.
    for (const auto& r : table.rows) {
        if (!r.error.empty()) continue;
        auto it = std::find_if(table.mean_rows.begin(), table.mean_rows.end(),
                               [&](const ResultRow& m) { return same_point(m.scenario, r.scenario); });
        if (it == table.mean_rows.end()) {
            ResultRow m;
            m.is_mean = true;
            m.scenario = r.scenario;
            m.values["count"] = 0.0;
            table.mean_rows.push_back(m);
            it = table.mean_rows.end() - 1;
        }
        it->values["count"] += 1.0;
        for (const auto& [k, v] : r.values) it->values[k] += v;
    }
    for (auto& m : table.mean_rows) {
        const double n = m.values["count"];
        for (auto& [k, v] : m.values) {
            if (k != "count") v /= n;
        }
    }
    return table;
}

namespace {

void write_row(std::ostream& os, const ResultTable& t, const ResultRow& r) {
    const auto& s = r.scenario;
    const auto at = s.attack_position();
    os << t.table_id << ',' << build_version() << ',' << (r.is_mean ? std::string("mean") : std::to_string(r.seed))
       << ',' << s.N_T << ',' << s.N_R << ',' << s.N_A << ',' << s.T.x << ',' << s.T.y << ',' << s.R.x << ','
       << s.R.y << ',' << s.A_T.x << ',' << s.A_T.y << ',' << s.A_R.x << ',' << s.A_R.y << ',' << at.x << ','
       << at.y << ',' << s.P << ',' << s.S;
    for (const auto& c : t.value_columns) {
        os << ',';
        auto it = r.values.find(c);
        if (r.error.empty() && it != r.values.end()) os << it->second;
    }
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    os << ',' << err << '\n';
}

}  // namespace

void write_table_csv(std::ostream& os, const ResultTable& t) {
    os << "table,version,seed,N_T,N_R,N_A,T_x,T_y,R_x,R_y,AT_x,AT_y,AR_x,AR_y,attack_x,attack_y,P,S";
    for (const auto& c : t.value_columns) os << ',' << c;
    os << ",error\n";
    os.precision(10);
    for (const auto& r : t.rows) write_row(os, t, r);
    for (const auto& r : t.mean_rows) write_row(os, t, r);
}

std::string table_summary_json(const ResultTable& t, const ExperimentSpec& spec) {
    nlohmann::json j;
    j["table"] = t.table_id;
    j["version"] = build_version();
    j["seeds"] = spec.seeds;
    j["n_trials"] = spec.n_trials;
    j["failed_cells"] = t.failed_cells;
    j["rows"] = nlohmann::json::array();
    for (const auto& m : t.mean_rows) {
        nlohmann::json r;
        r["N_T"] = m.scenario.N_T;
        r["N_R"] = m.scenario.N_R;
        r["N_A"] = m.scenario.N_A;
        r["A_T"] = {m.scenario.A_T.x, m.scenario.A_T.y};
        const auto at = m.scenario.attack_position();
        r["attack_at"] = {at.x, at.y};
        for (const auto& [k, v] : m.values) r[k] = v;
        j["rows"].push_back(r);
    }
    j["errors"] = nlohmann::json::array();
    for (const auto& r : t.rows) {
        if (!r.error.empty()) j["errors"].push_back(r.error);
    }
    return j.dump(2);
}

LatencyResult benchmark_latency(const DenseNetwork& model, std::size_t n_repeats) {
    if (n_repeats < 100) throw InvalidInput("benchmark_latency: n_repeats must be >= 100");
    model.validate();
    Rng rng(0x6c6174);
    std::vector<double> x(model.input_size());
    for (auto& v : x) v = rng.normal();
    LatencyResult res;
    res.discarded = n_repeats / 10;
    double sum = 0.0;
    res.min_us = std::numeric_limits<double>::infinity();
    volatile double sink = 0.0;
    for (std::size_t i = 0; i < n_repeats; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto y = predict(model, x);
        const auto t1 = std::chrono::steady_clock::now();
        sink = sink + y[0];
        if (i < res.discarded) continue;
        const double us = std::chrono::duration<double, std::micro>(t1 - t0).count();
        sum += us;
        res.min_us = std::min(res.min_us, us);
        res.max_us = std::max(res.max_us, us);
        ++res.measured;
    }
    res.mean_us = sum / static_cast<double>(res.measured);
    return res;
}

}  // namespace spoofsim
