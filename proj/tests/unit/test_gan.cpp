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

#include <cmath>
#include <sstream>

#include "spoofsim/gan.hpp"

using namespace spoofsim;

namespace {

// Softmax layer with zero weights: D(x) = 0.5 everywhere.
DenseNetwork coin_discriminator(std::size_t n_in) {
    DenseNetwork net;
    DenseLayer L;
    L.in = n_in;
    L.out = 2;
    L.W.assign(2 * n_in, 0.0);
    L.b = {0.0, 0.0};
    L.act = Activation::Softmax;
    net.layers.push_back(L);
    return net;
}

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
    Matrix m(r, c);
    for (auto& v : m.data) v = rng.normal();
    return m;
}

ScenarioConfig small_scenario() {
    ScenarioConfig sc;
    sc.S = 10;
    return sc;
}

GanConfig small_gan() {
    GanConfig g;
    g.noise_dim = 8;
    g.hidden_width = 16;
    g.hidden_depth = 1;
    g.real_pool = 20;
    g.synth_per_epoch = 20;
    g.batch_size = 10;
    g.max_epochs = 3;
    g.conv_window = 2;
    return g;
}

}  // namespace

TEST_CASE("adversarial losses at D = 0.5") {
    Rng rng(1);
    const auto D = coin_discriminator(6);
    const auto real = random_matrix(10, 6, rng);
    const auto fake = random_matrix(7, 6, rng);
    CHECK(discriminator_loss(D, real, fake) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(generator_loss(D, fake) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(generator_loss(D, Matrix(0, 6)), InvalidInput);
    CHECK_THROWS_AS(discriminator_loss(D, real, random_matrix(3, 5, rng)), InvalidInput);
}

TEST_CASE("discriminator loss falls as D separates the classes") {
    auto D = coin_discriminator(1);
    Matrix real(1, 1), fake(1, 1);
    real(0, 0) = 1.0;
    fake(0, 0) = -1.0;
    D.layers[0].W = {-3.0, 3.0};
    const double good = discriminator_loss(D, real, fake);
    CHECK(good < 2.0 * std::log(2.0));
    CHECK(generator_loss(D, fake) > std::log(2.0));
}

TEST_CASE("convergence rule") {
    CHECK(check_convergence(std::vector<double>(100, 1.0), 100, 0.05));
    CHECK_FALSE(check_convergence(std::vector<double>(99, 1.0), 100, 0.05));
    std::vector<double> s(150, 1.0);
    s[60] = 1.2;
    CHECK_FALSE(check_convergence(s, 100, 0.05));
    CHECK(check_convergence(s, 80, 0.05));
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = i % 2 ? 1.01 : 0.99;
    CHECK(check_convergence(s, 100, 0.05));
    CHECK(check_convergence(std::vector<double>(10, 0.0), 10, 0.05));
    CHECK_FALSE(check_convergence({}, 0, 0.05));
}

TEST_CASE("budget projection") {
    Rng rng(2);
    for (BudgetRule rule : {BudgetRule::TotalPower, BudgetRule::SumRms}) {
        for (std::size_t n_adv : {1u, 2u, 4u}) {
            const std::size_t np = 40;
            IQBurst b(n_adv, np);
            for (auto& v : b.samples) v = Complex(rng.normal(0.0, 3.0), rng.normal(0.0, 3.0));
            std::vector<double> y = features(b);
            const double s = project_budget(y.data(), n_adv, np, rule);
            CHECK(s < 1.0);
            CHECK(budget_usage(burst_from_features(y.data(), n_adv, np), rule) == doctest::Approx(1.0).epsilon(1e-12));
            // already feasible: untouched
            auto y2 = y;
            for (auto& v : y2) v *= 0.5;
            const auto keep = y2;
            CHECK(project_budget(y2.data(), n_adv, np, rule) == 1.0);
            CHECK(y2 == keep);
        }
    }
    IQBurst two(2, 4);
    for (std::size_t k = 0; k < 4; ++k) {
        two.at(0, k) = Complex(3.0, 0.0);
        two.at(1, k) = Complex(0.0, 4.0);
    }
    CHECK(stream_rms(two) == std::vector<double>{3.0, 4.0});
    CHECK(budget_usage(two, BudgetRule::TotalPower) == doctest::Approx(5.0));
    CHECK(budget_usage(two, BudgetRule::SumRms) == doctest::Approx(7.0));
}

TEST_CASE("budget projection backward matches central differences") {
    Rng rng(3);
    for (BudgetRule rule : {BudgetRule::TotalPower, BudgetRule::SumRms}) {
        const std::size_t n_adv = 2, np = 6, n = 2 * n_adv * np;
        std::vector<double> y(n), w(n);
        for (auto& v : y) v = rng.normal(0.0, 2.0);
        for (auto& v : w) v = rng.normal();
        auto L = [&](std::vector<double> v) {
            project_budget(v.data(), n_adv, np, rule);
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += w[i] * v[i];
            return s;
        };
        auto g = w;
        project_budget_backward(y.data(), g.data(), n_adv, np, rule);
        for (std::size_t i = 0; i < n; ++i) {
            auto yp = y, ym = y;
            yp[i] += 1e-6;
            ym[i] -= 1e-6;
            CHECK(g[i] == doctest::Approx((L(yp) - L(ym)) / 2e-6).epsilon(1e-6));
        }
    }
}

TEST_CASE("generated bursts respect the budget") {
    Rng rng(4);
    const auto G = make_mlp({8, 16, 2 * 2 * 40}, Activation::Linear, rng);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> z(8);
        for (auto& v : z) v = rng.uniform(-10.0, 10.0);
        for (BudgetRule rule : {BudgetRule::TotalPower, BudgetRule::SumRms}) {
            const auto b = generate_spoof_burst(G, z, 2, 1000.0, rule);
            CHECK(b.n_antennas == 2);
            CHECK(b.n_points == 40);
            CHECK(budget_usage(b, rule) <= 1000.0 * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("generator gradient through the channel matches central differences") {
    Rng rng(5);
    for (auto [n_adv, n_rx] : {std::pair<std::size_t, std::size_t>{1, 1}, {2, 3}}) {
        for (BudgetRule rule : {BudgetRule::TotalPower, BudgetRule::SumRms}) {
            const std::size_t np = 8;
            const auto G = make_mlp({4, 6, 2 * n_adv * np}, Activation::Linear, rng);
            const auto D = make_mlp({2 * n_rx * np, 5, 2}, Activation::Softmax, rng);
            std::vector<double> z(4);
            for (auto& v : z) v = rng.normal();
            const auto ch = draw_channel({0, 10}, {1, 0}, n_adv, n_rx, rng);
            const auto ph = random_device_phases(n_adv, rng);
            // budget and scale chosen so D sees O(1) inputs
            CHECK(generator_gradient_check(G, D, z, ph, ch, 10.0, rule, 0.5) < 1e-4);
        }
    }
}

TEST_CASE("one-epoch training trace and protocol log") {
    const RadioEnvironment env(small_scenario());
    auto cfg = small_gan();
    cfg.max_epochs = 1;
    Rng rng(6);
    std::size_t calls = 0;
    const auto res = train_gan(env, cfg, rng, [&](std::size_t, const GanResult&) { ++calls; });
    CHECK(calls == 1);
    CHECK(res.trace.epochs_run == 1);
    CHECK(res.trace.g_loss.size() == 1);
    CHECK(res.trace.d_loss.size() == 1);
    CHECK_FALSE(res.trace.converged);
    CHECK(res.trace.protocol_log.size() == cfg.synth_per_epoch);
    for (const auto& e : res.trace.protocol_log) {
        CHECK(e.epoch == 0);
        CHECK(e.flag_bit == 1);
        CHECK(e.feedback_bit <= 1);
    }
    CHECK(res.G.input_size() == 8);
    CHECK(res.G.output_size() == 80);
    CHECK(res.D.input_size() == 80);
    CHECK(res.D.output_size() == 2);

    std::ostringstream csv;
    write_trace_csv(csv, res.trace);
    CHECK(csv.str().rfind("epoch,g_loss,d_loss\n0,", 0) == 0);
    CHECK(trace_summary_json(res.trace).find("\"protocol_bits\": 20") != std::string::npos);
}

TEST_CASE("gan training is deterministic under a seed") {
    const RadioEnvironment env(small_scenario());
    const auto cfg = small_gan();
    Rng a(7), b(7);
    const auto r1 = train_gan(env, cfg, a);
    const auto r2 = train_gan(env, cfg, b);
    CHECK(r1.G == r2.G);
    CHECK(r1.D == r2.D);
    CHECK(r1.trace.g_loss == r2.trace.g_loss);
    CHECK(r1.trace.epochs_run == 3);
}

TEST_CASE("gan config validation") {
    auto cfg = small_gan();
    CHECK_NOTHROW(cfg.validate());
    cfg.power_budget = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
    cfg = small_gan();
    cfg.conv_window = 1;
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
}
