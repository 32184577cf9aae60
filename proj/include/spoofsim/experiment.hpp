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
#include <map>
#include <string>
#include <vector>

#include "spoofsim/attacks.hpp"

namespace spoofsim {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentSpec {
    int table_id = 0;  // 1..5, 0 = custom single cell
    ScenarioConfig scenario;
    std::vector<int> n_t{1};
    std::vector<int> n_r{1};
    std::vector<int> n_a{1};
    // Table 4: A_T positions used for both training and attack.
    // Table 5: attack-time positions for a generator trained at scenario.A_T.
    std::vector<NodePosition> positions;
    std::vector<std::uint64_t> seeds{1};
    std::size_t n_trials = kDefaultTrials;
    std::string out_dir = "results";
    std::size_t jobs = 1;

    TrainConfig train;
    std::size_t n_train = 1000;
    std::size_t n_test = 1000;
    bool tune = false;
    std::vector<std::size_t> tune_batches{100, 150};

    GanConfig gan;
    std::size_t gan_retries = 3;
};

// Defaults for a table, before any user keys are applied.
ExperimentSpec default_spec(int table_id);

// Flat key=value text with dotted keys; '#' starts a comment. `table` may appear anywhere
// and selects the defaults the remaining keys override.
ExperimentSpec parse_config(const std::string& text,
                            const std::vector<std::pair<std::string, std::string>>& overrides = {});
ExperimentSpec load_config(const std::string& path,
                           const std::vector<std::pair<std::string, std::string>>& overrides = {});
void apply_key(ExperimentSpec& spec, const std::string& key, const std::string& value);
void validate(const ExperimentSpec& spec);

struct ResultRow {
    std::uint64_t seed = 0;  // ignored for mean rows
    bool is_mean = false;
    ScenarioConfig scenario;
    std::map<std::string, double> values;
    std::string error;  // non-empty if the cell failed
};

struct ResultTable {
    int table_id = 0;
    std::vector<std::string> value_columns;
    std::vector<ResultRow> rows;       // per seed, grid order
    std::vector<ResultRow> mean_rows;  // seed-averaged, grid order
    std::vector<AttackReport> reports; // every attack run, grid order
    std::size_t failed_cells = 0;
};

std::vector<std::string> value_columns(int table_id);

ResultTable run_experiment(const ExperimentSpec& spec);

// CSV with a fixed column set per table. Latency never appears here.
void write_table_csv(std::ostream& os, const ResultTable& t);
std::string table_summary_json(const ResultTable& t, const ExperimentSpec& spec);

const char* build_version();

struct LatencyResult {
    double mean_us = 0.0;
    double min_us = 0.0;
    double max_us = 0.0;
    std::size_t measured = 0;
    std::size_t discarded = 0;
};

// Single-sample forward passes on random inputs; the first 10% are warm-up and dropped.
LatencyResult benchmark_latency(const DenseNetwork& model, std::size_t n_repeats);

}  // namespace spoofsim
