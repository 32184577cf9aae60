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

#include <json.hpp>
#include <algorithm>
#include <sstream>

#include "spoofsim/experiment.hpp"

using namespace spoofsim;

namespace {

// Tiny settings so a full cell runs in well under a second.
const char* kSmall = R"(
scenario.s = 10
train.steps = 30
train.n_train = 40
train.n_test = 40
gan.noise_dim = 8
gan.hidden_width = 16
gan.hidden_depth = 1
gan.real_pool = 20
gan.synth_per_epoch = 20
gan.batch_size = 10
gan.max_epochs = 2
gan.conv_window = 2
gan.retries = 0
trials = 10
)";

}  // namespace

TEST_CASE("empty config gives the defaults") {
    const auto s = parse_config("");
    CHECK(s.table_id == 0);
    CHECK(s.n_trials == 500);
    CHECK(s.seeds == std::vector<std::uint64_t>{1});
    CHECK(s.scenario.P == 1000.0);
    CHECK(s.scenario.S == 100);
    CHECK(s.scenario.A_T == NodePosition{0, 10});
    CHECK(s.scenario.A_R == NodePosition{10, 0.1});
    CHECK(s.gan.power_budget == 1000.0);
}

TEST_CASE("table defaults and overrides") {
    auto s = parse_config("table = 3\n");
    CHECK(s.n_t.size() * s.n_r.size() * s.n_a.size() == 64);
    s = parse_config("# comment\ngrid.n_a = 1, 2  # trailing\ntable = 3\n");
    CHECK(s.table_id == 3);
    CHECK(s.n_a == std::vector<int>{1, 2});
    s = parse_config("table = 5", {{"grid.positions", "0,10; (0,30)"}});
    CHECK(s.positions == std::vector<NodePosition>{{0, 10}, {0, 30}});
    s = parse_config("scenario.p = 250");
    CHECK(s.gan.power_budget == 250.0);
    s = parse_config("table = 4");
    CHECK(s.positions.size() == 4);
}

TEST_CASE("bad configs are rejected with the key name") {
    CHECK_THROWS_AS(parse_config("trials = -5"), ConfigError);
    CHECK_THROWS_AS(parse_config("trials = 0"), ConfigError);
    CHECK_THROWS_AS(parse_config("gan.wibble = 3"), ConfigError);
    CHECK_THROWS_AS(parse_config("table = 9"), ConfigError);
    CHECK_THROWS_AS(parse_config("just some words"), ConfigError);
    CHECK_THROWS_AS(parse_config("grid.n_t = 0"), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario.a_t = 10,0"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ConfigError);
    try {
        parse_config("train.batch_size = lots");
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("train.batch_size") != std::string::npos);
    }
}

TEST_CASE("custom single cell produces one complete row") {
    const auto spec = parse_config(kSmall);
    const auto t = run_experiment(spec);
    CHECK(t.failed_cells == 0);
    REQUIRE(t.rows.size() == 1);
    REQUIRE(t.mean_rows.size() == 1);
    CHECK(t.reports.size() == 3);
    for (const auto& c : t.value_columns) CHECK(t.rows[0].values.count(c) == 1);
    const double g = t.rows[0].values.at("gan_success");
    CHECK(g >= 0.0);
    CHECK(g <= 1.0);
    CHECK(t.rows[0].values.at("epochs_run") == 2.0);

    std::ostringstream csv;
    write_table_csv(csv, t);
    std::istringstream in(csv.str());
    std::string header, line;
    std::getline(in, header);
    CHECK(header.rfind("table,version,seed,N_T,N_R,N_A,", 0) == 0);
    CHECK(header.find("latency") == std::string::npos);
    std::size_t lines = 0;
    while (std::getline(in, line)) {
        ++lines;
        CHECK(std::count(line.begin(), line.end(), ',') == std::count(header.begin(), header.end(), ','));
    }
    CHECK(lines == 2);  // seed row + mean row

    const auto j = nlohmann::json::parse(table_summary_json(t, spec));
    CHECK(j.is_object());
}

TEST_CASE("grid runs merge in grid order and do not depend on the worker count") {
    auto spec = parse_config(std::string(kSmall) + "table = 1\ngrid.n_t = 1,2\ngrid.n_r = 1\nseeds = 1,2\n");
    spec.jobs = 1;
    const auto a = run_experiment(spec);
    spec.jobs = 3;
    const auto b = run_experiment(spec);
    REQUIRE(a.rows.size() == 4);
    REQUIRE(b.rows.size() == 4);
    CHECK(a.mean_rows.size() == 2);
    CHECK(a.rows[0].scenario.N_T == 1);
    CHECK(a.rows[0].seed == 1);
    CHECK(a.rows[1].seed == 2);
    CHECK(a.rows[2].scenario.N_T == 2);
    for (std::size_t i = 0; i < 4; ++i) CHECK(a.rows[i].values == b.rows[i].values);
    const double mean = (a.rows[0].values.at("e_MD") + a.rows[1].values.at("e_MD")) / 2.0;
    CHECK(a.mean_rows[0].values.at("e_MD") == doctest::Approx(mean));
}

TEST_CASE("latency benchmark drops warm-up repeats") {
    Rng rng(1);
    const auto net = make_mlp({800, 50, 50, 50, 2}, Activation::Softmax, rng);
    const auto r = benchmark_latency(net, 200);
    CHECK(r.discarded == 20);
    CHECK(r.measured == 180);
    CHECK(r.min_us <= r.mean_us);
    CHECK(r.mean_us <= r.max_us);
    CHECK(r.min_us > 0.0);
    CHECK_THROWS(benchmark_latency(net, 10));
}
