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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "spoofsim/network.hpp"
#include "spoofsim/waveform.hpp"

using namespace spoofsim;

namespace {

// Independent forward pass written against the layer definitions directly.
std::vector<double> reference_forward(const DenseNetwork& net, std::vector<double> x) {
    for (const auto& L : net.layers) {
        std::vector<double> y(L.out);
        for (std::size_t o = 0; o < L.out; ++o) {
            long double s = L.b[o];
            for (std::size_t i = 0; i < L.in; ++i) s += static_cast<long double>(L.W[o * L.in + i]) * x[i];
            y[o] = static_cast<double>(s);
        }
        if (L.act == Activation::Relu) {
            for (auto& v : y) v = v > 0.0 ? v : 0.0;
        } else if (L.act == Activation::Softmax) {
            double m = *std::max_element(y.begin(), y.end()), z = 0.0;
            for (auto& v : y) z += (v = std::exp(v - m));
            for (auto& v : y) v /= z;
        }
        x = std::move(y);
    }
    return x;
}

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
    Matrix m(r, c);
    for (auto& v : m.data) v = rng.normal();
    return m;
}

}  // namespace

TEST_CASE("softmax examples") {
    auto p = softmax({0.0, 0.0});
    CHECK(p[0] == doctest::Approx(0.5));
    CHECK(p[1] == doctest::Approx(0.5));
    p = softmax({1000.0, -1000.0, 3.0});
    CHECK(std::isfinite(p[0]));
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    Rng rng(1);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> z(7);
        for (auto& v : z) v = rng.normal(0.0, 10.0);
        p = softmax(z);
        CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
        for (double v : p) CHECK(v >= 0.0);
    }
}

TEST_CASE("cross-entropy examples") {
    CHECK(cross_entropy({0.5, 0.5}, {1.0, 0.0}) == doctest::Approx(0.693147).epsilon(1e-6));
    CHECK(cross_entropy({0.1, 0.9}, {1.0, 0.0}) == doctest::Approx(2.302585).epsilon(1e-6));
    CHECK(cross_entropy({1.0, 0.0}, {1.0, 0.0}) == doctest::Approx(0.0));
    CHECK(std::isfinite(cross_entropy({0.0, 1.0}, {1.0, 0.0})));
}

TEST_CASE("identity linear layer passes input through") {
    DenseNetwork net;
    DenseLayer L;
    L.in = L.out = 3;
    L.W = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    L.b = {0, 0, 0};
    net.layers.push_back(L);
    CHECK(predict(net, {1.5, -2.0, 3.25}) == std::vector<double>{1.5, -2.0, 3.25});
}

TEST_CASE("batched forward matches an independent reference") {
    Rng rng(2);
    for (Activation out : {Activation::Linear, Activation::Softmax}) {
        const auto net = make_mlp({20, 13, 9, 4}, out, rng);
        const auto X = random_matrix(37, 20, rng);
        const auto Y = predict_batch(net, X);
        for (std::size_t i = 0; i < X.rows; ++i) {
            const auto ref = reference_forward(net, std::vector<double>(X.row(i), X.row(i) + X.cols));
            for (std::size_t j = 0; j < ref.size(); ++j) CHECK(std::abs(Y(i, j) - ref[j]) <= 1e-12 * (1.0 + std::abs(ref[j])));
        }
    }
}

TEST_CASE("zero loss gradient gives zero parameter gradients") {
    Rng rng(3);
    const auto net = make_mlp({6, 5, 2}, Activation::Softmax, rng);
    auto [out, cache] = forward(net, {1, 2, 3, 4, 5, 6});
    const auto g = backward(net, cache, std::vector<double>{0.0, 0.0});
    CHECK(g.max_abs() == 0.0);
}

TEST_CASE("softmax cross-entropy logit gradient is p minus the one-hot label") {
    Rng rng(4);
    const auto net = make_mlp({5, 4, 3}, Activation::Softmax, rng);
    const auto X = random_matrix(8, 5, rng);
    ForwardCache cache;
    forward_batch(net, X, cache);
    std::vector<int> labels{0, 1, 2, 0, 1, 2, 2, 1};
    Matrix d;
    const double loss = softmax_cross_entropy(cache.output, labels, d);
    double ref = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
        ref -= std::log(cache.output(i, static_cast<std::size_t>(labels[i])));
        for (std::size_t j = 0; j < 3; ++j) {
            const double onehot = static_cast<int>(j) == labels[i] ? 1.0 : 0.0;
            CHECK(d(i, j) == doctest::Approx((cache.output(i, j) - onehot) / 8.0).epsilon(1e-14));
        }
    }
    CHECK(loss == doctest::Approx(ref / 8.0).epsilon(1e-12));
}

TEST_CASE("analytic gradients match central differences") {
    Rng rng(5);
    for (Activation out : {Activation::Softmax, Activation::Linear}) {
        const auto net = make_mlp({12, 10, 8, 3}, out, rng);
        std::vector<double> x(12);
        for (auto& v : x) v = rng.normal();
        std::vector<double> target = out == Activation::Softmax ? std::vector<double>{0, 1, 0}
                                                                : std::vector<double>{0.3, -1.2, 2.0};
        CHECK(finite_diff_check(net, x, target) < 1e-4);
    }
}

TEST_CASE("gradient check agrees with brute-force differences of the full loss") {
    Rng rng(15);
    for (Activation out : {Activation::Softmax, Activation::Linear}) {
        const auto net = make_mlp({6, 5, 3}, out, rng);
        std::vector<double> x(6);
        for (auto& v : x) v = rng.normal();
        const std::vector<double> target =
            out == Activation::Softmax ? std::vector<double>{1, 0, 0} : std::vector<double>{0.5, 0.1, -0.7};
        auto [y, cache] = forward(net, x);
        std::vector<double> g(y.size());
        for (std::size_t j = 0; j < y.size(); ++j) g[j] = y[j] - target[j];
        Matrix d(1, y.size());
        d.data = g;  // for softmax + CE with a one-hot target this is also the logit gradient
        Gradients grads(net);
        backward_from_logits(net, cache, d, grads);
        const double h = 1e-6;
        for (std::size_t l = 0; l < net.layers.size(); ++l) {
            for (std::size_t i = 0; i < net.layers[l].W.size(); ++i) {
                auto up = net, dn = net;
                up.layers[l].W[i] += h;
                dn.layers[l].W[i] -= h;
                const double numeric = (check_loss(up, x, target) - check_loss(dn, x, target)) / (2 * h);
                CHECK(numeric == doctest::Approx(grads.dW[l][i]).epsilon(1e-5).scale(1e-3));
            }
        }
        std::size_t kinks = 99;
        CHECK(finite_diff_check(net, x, target, 1e-5, &kinks) < 1e-6);
        CHECK(kinks == 0);
    }
}

TEST_CASE("gradient check skips probes that straddle a ReLU kink") {
    Rng rng(16);
    auto net = make_mlp({4, 3, 2}, Activation::Softmax, rng);
    std::fill(net.layers[0].W.begin(), net.layers[0].W.end(), 0.0);  // every hidden input sits at 0
    std::size_t kinks = 0;
    const double err = finite_diff_check(net, {1, 2, 3, 4}, {0, 1}, 1e-5, &kinks);
    CHECK(kinks > 0);
    CHECK(err < 1e-6);
}

TEST_CASE("adam: zero gradient leaves weights, first step moves by learning rate") {
    Rng rng(6);
    auto net = make_mlp({4, 3, 2}, Activation::Softmax, rng);
    const auto before = net;
    TrainConfig cfg;
    AdamState st(net);
    Gradients g(net);
    adam_step(net, g, st, cfg);
    CHECK(net == before);

    auto net2 = before;
    AdamState st2(net2);
    for (auto& w : g.dW[0]) w = 0.25;
    adam_step(net2, g, st2, cfg);
    for (std::size_t i = 0; i < net2.layers[0].W.size(); ++i) {
        CHECK(before.layers[0].W[i] - net2.layers[0].W[i] == doctest::Approx(cfg.learning_rate).epsilon(1e-6));
    }
    CHECK(net2.layers[1].W == before.layers[1].W);
}

TEST_CASE("separable toy set is learned") {
    Rng rng(7);
    Matrix X(200, 2);
    std::vector<int> y(200);
    for (std::size_t i = 0; i < 200; ++i) {
        y[i] = static_cast<int>(i % 2);
        X(i, 0) = (y[i] ? 2.0 : -2.0) + rng.normal(0.0, 0.3);
        X(i, 1) = rng.normal();
    }
    auto net = make_mlp({2, 8, 2}, Activation::Softmax, rng);
    TrainConfig cfg;
    cfg.learning_rate = 1e-2;
    cfg.batch_size = 20;
    cfg.train_steps = 500;
    cfg.seed = 3;
    const auto curve = train_supervised(net, X, y, cfg);
    CHECK(curve.size() == 500);
    CHECK(curve.back() < curve.front());
    const auto P = predict_batch(net, X);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < 200; ++i) correct += ((P(i, 1) > P(i, 0)) == (y[i] == 1));
    CHECK(correct == 200);
}

TEST_CASE("model files round-trip bit-exactly") {
    Rng rng(8);
    const auto net = make_mlp({10, 7, 7, 2}, Activation::Softmax, rng);
    std::stringstream ss;
    write_model(ss, net);
    const auto back = read_model(ss);
    CHECK(back == net);
    CHECK(back.layer_sizes() == std::vector<std::size_t>{10, 7, 7, 2});

    std::stringstream bad("SPNN but not really");
    CHECK_THROWS(read_model(bad));
    std::string truncated;
    {
        std::stringstream full;
        write_model(full, net);
        truncated = full.str().substr(0, 40);
    }
    std::stringstream tr(truncated);
    CHECK_THROWS(read_model(tr));
}

TEST_CASE("initialisation and training are deterministic under a seed") {
    Rng a(9), b(9);
    const auto n1 = make_mlp({30, 20, 2}, Activation::Softmax, a);
    const auto n2 = make_mlp({30, 20, 2}, Activation::Softmax, b);
    CHECK(n1 == n2);
    for (const auto& L : n1.layers)
        for (double v : L.b) CHECK(v == 0.0);
    CHECK(n1.parameter_count() == 30 * 20 + 20 + 20 * 2 + 2);
}

TEST_CASE("network validation rejects broken shapes") {
    Rng rng(10);
    auto net = make_mlp({4, 3, 2}, Activation::Softmax, rng);
    CHECK_NOTHROW(net.validate());
    net.layers[1].in = 5;
    CHECK_THROWS_AS(net.validate(), InvalidInput);
    net = make_mlp({4, 3, 2}, Activation::Softmax, rng);
    net.layers[0].act = Activation::Softmax;
    CHECK_THROWS_AS(net.validate(), InvalidInput);
}
