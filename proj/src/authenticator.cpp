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

#include "spoofsim/authenticator.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace spoofsim {

std::size_t Dataset::count(Label l) const {
    std::size_t c = 0;
    for (const auto& s : samples) c += s.label == l ? 1 : 0;
    return c;
}

Matrix Dataset::matrix() const {
    Matrix X(samples.size(), feature_length());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].features.size() != X.cols) throw InvalidInput("dataset: ragged feature rows");
        std::copy(samples[i].features.begin(), samples[i].features.end(), X.row(i));
    }
    return X;
}

std::vector<int> Dataset::labels() const {
    std::vector<int> y;
    y.reserve(samples.size());
    for (const auto& s : samples) y.push_back(static_cast<int>(s.label));
    return y;
}

ClassifierMetrics make_metrics(std::size_t n, std::size_t n_from_T, std::size_t n_MD, std::size_t n_FA) {
    if (n_from_T == 0 || n_from_T >= n) throw InvalidInput("metrics undefined: test set must contain both classes");
    if (n_MD > n_from_T || n_FA > n - n_from_T) throw InvalidInput("metrics: error counts exceed class sizes");
    ClassifierMetrics m;
    m.n = n;
    m.n_from_T = n_from_T;
    m.n_MD = n_MD;
    m.n_FA = n_FA;
    m.e_MD = static_cast<double>(n_MD) / static_cast<double>(n_from_T);
    m.e_FA = static_cast<double>(n_FA) / static_cast<double>(n - n_from_T);
    return m;
}

std::vector<double> scaled_features(const IQBurst& burst, const ScenarioConfig& cfg) {
    std::vector<double> f(2 * burst.samples.size());
    features_into(burst, cfg.feature_scale, f.data());
    return f;
}

Dataset build_dataset(const RadioEnvironment& env, std::size_t n_samples, double positive_fraction,
                      Rng& rng) {
    if (n_samples < 2) throw InvalidInput("build_dataset: need at least 2 samples");
    if (!(positive_fraction > 0.0 && positive_fraction < 1.0)) {
        throw InvalidInput("build_dataset: positive_fraction must be in (0,1)");
    }
    std::vector<Label> labels(n_samples);
    std::size_t npos = 0;
    for (auto& l : labels) {
        l = rng.bernoulli(positive_fraction) ? Label::FromT : Label::NotT;
        npos += l == Label::FromT ? 1 : 0;
    }
    if (npos == 0) labels.front() = Label::FromT;
    if (npos == n_samples) labels.back() = Label::NotT;

    const auto& cfg = env.config();
    Dataset ds;
    ds.samples.resize(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const IQBurst b = labels[i] == Label::FromT ? env.intended_burst(Receiver::R, rng)
                                                    : env.random_burst(cfg.A_T, rng);
        ds.samples[i].features = scaled_features(b, cfg);
        ds.samples[i].label = labels[i];
    }
    return ds;
}

DenseNetwork train_classifier(const Dataset& train_set, const TrainConfig& config,
                              std::size_t hidden_width, std::size_t hidden_depth) {
    if (train_set.size() == 0) throw InvalidInput("train_classifier: empty training set");
    std::vector<std::size_t> sizes{train_set.feature_length()};
    for (std::size_t i = 0; i < hidden_depth; ++i) sizes.push_back(hidden_width);
    sizes.push_back(2);
    Rng init_rng(derive_seed(config.seed, {0x696e6974}));
    DenseNetwork net = make_mlp(sizes, Activation::Softmax, init_rng);
    train_supervised(net, train_set.matrix(), train_set.labels(), config);
    return net;
}

Label classify(const DenseNetwork& net, const std::vector<double>& features) {
    const auto p = predict(net, features);
    return p[1] > p[0] ? Label::FromT : Label::NotT;
}

std::vector<Label> classify_batch(const DenseNetwork& net, const Matrix& X) {
    const Matrix P = predict_batch(net, X);
    std::vector<Label> out(P.rows);
    for (std::size_t r = 0; r < P.rows; ++r) out[r] = P(r, 1) > P(r, 0) ? Label::FromT : Label::NotT;
    return out;
}

ClassifierMetrics evaluate(const DenseNetwork& net, const Dataset& test_set) {
    if (test_set.feature_length() != net.input_size()) throw InvalidInput("evaluate: feature length mismatch");
    const auto pred = classify_batch(net, test_set.matrix());
    std::size_t n_from_T = 0, n_MD = 0, n_FA = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const Label truth = test_set.samples[i].label;
        if (truth == Label::FromT) {
            ++n_from_T;
            n_MD += pred[i] == Label::NotT ? 1 : 0;
        } else {
            n_FA += pred[i] == Label::FromT ? 1 : 0;
        }
    }
    return make_metrics(test_set.size(), n_from_T, n_MD, n_FA);
}

TuningResult tune_hyperparameters(const RadioEnvironment& env, const std::vector<TrainConfig>& grid,
                                  Rng& rng, std::size_t n_train, std::size_t n_val) {
    if (grid.empty()) throw InvalidInput("tune_hyperparameters: empty grid");
    const Dataset train = build_dataset(env, n_train, 0.5, rng);
    const Dataset val = build_dataset(env, n_val, 0.5, rng);
    TuningResult res;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto net = train_classifier(train, grid[i]);
        const auto m = evaluate(net, val);
        res.scores.push_back(m);
        const double score = m.max_error();
        const bool better = score < best ||
                            (score == best && grid[i].batch_size < grid[res.best_index].batch_size);
        if (better) {
            best = score;
            res.best_index = i;
        }
    }
    res.best = grid[res.best_index];
    return res;
}

void write_dataset_csv(std::ostream& os, const Dataset& ds) {
    char buf[32];
    for (const auto& s : ds.samples) {
        os << static_cast<int>(s.label);
        for (double v : s.features) {
            auto r = std::to_chars(buf, buf + sizeof(buf), v);
            os << ',';
            os.write(buf, r.ptr - buf);
        }
        os << '\n';
    }
}

Dataset read_dataset_csv(std::istream& is) {
    Dataset ds;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        LabeledSample s;
        std::size_t pos = 0;
        bool first = true;
        while (pos <= line.size()) {
            std::size_t end = line.find(',', pos);
            if (end == std::string::npos) end = line.size();
            double v = 0.0;
            auto r = std::from_chars(line.data() + pos, line.data() + end, v);
            if (r.ec != std::errc() || r.ptr != line.data() + end) {
                throw InvalidInput("dataset csv line " + std::to_string(lineno) + ": bad number");
            }
            if (first) {
                if (v != 0.0 && v != 1.0) throw InvalidInput("dataset csv line " + std::to_string(lineno) + ": bad label");
                s.label = v == 1.0 ? Label::FromT : Label::NotT;
                first = false;
            } else {
                s.features.push_back(v);
            }
            pos = end + 1;
        }
        if (!ds.samples.empty() && s.features.size() != ds.feature_length()) {
            throw InvalidInput("dataset csv line " + std::to_string(lineno) + ": ragged row");
        }
        ds.samples.push_back(std::move(s));
    }
    return ds;
}

}  // namespace spoofsim
