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
#include <string>
#include <vector>

#include "spoofsim/network.hpp"
#include "spoofsim/scenario.hpp"

namespace spoofsim {

enum class Label : int { NotT = 0, FromT = 1 };

struct LabeledSample {
    std::vector<double> features;
    Label label = Label::NotT;
};

struct Dataset {
    std::vector<LabeledSample> samples;

    std::size_t size() const { return samples.size(); }
    std::size_t feature_length() const { return samples.empty() ? 0 : samples.front().features.size(); }
    std::size_t count(Label l) const;
    Matrix matrix() const;
    std::vector<int> labels() const;
};

struct ClassifierMetrics {
    std::size_t n = 0;
    std::size_t n_from_T = 0;
    std::size_t n_MD = 0;
    std::size_t n_FA = 0;
    double e_MD = 0.0;
    double e_FA = 0.0;

    double max_error() const { return e_MD > e_FA ? e_MD : e_FA; }
};

// e_MD = n_MD / n_from_T, e_FA = n_FA / (n - n_from_T). Throws when either class is empty.
ClassifierMetrics make_metrics(std::size_t n, std::size_t n_from_T, std::size_t n_MD, std::size_t n_FA);

// Features of one received burst as the networks see them.
std::vector<double> scaled_features(const IQBurst& burst, const ScenarioConfig& cfg);

// Positives: T bursts at R. Negatives: random-phase bursts from A_T's position.
// Class sizes are Bernoulli(positive_fraction) draws, adjusted to at least one per class.
Dataset build_dataset(const RadioEnvironment& env, std::size_t n_samples, double positive_fraction,
                      Rng& rng);

// Classifier of shape [2*4S*N_R, 50, 50, 50, 2].
DenseNetwork train_classifier(const Dataset& train_set, const TrainConfig& config,
                              std::size_t hidden_width = 50, std::size_t hidden_depth = 3);

Label classify(const DenseNetwork& net, const std::vector<double>& features);
std::vector<Label> classify_batch(const DenseNetwork& net, const Matrix& X);

ClassifierMetrics evaluate(const DenseNetwork& net, const Dataset& test_set);

struct TuningResult {
    TrainConfig best;
    std::size_t best_index = 0;
    std::vector<ClassifierMetrics> scores;  // one per grid entry
};

// Trains each config on a fresh training set and scores it on a fresh validation set.
// Selects min max{e_MD, e_FA}; ties go to the smaller batch, then the lower index.
TuningResult tune_hyperparameters(const RadioEnvironment& env, const std::vector<TrainConfig>& grid,
                                  Rng& rng, std::size_t n_train = 1000, std::size_t n_val = 1000);

void write_dataset_csv(std::ostream& os, const Dataset& ds);
Dataset read_dataset_csv(std::istream& is);

}  // namespace spoofsim
