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

// spoofsim command-line front end.
//
//   spoofsim run --table 3 --config cfg.txt --seeds 1,2,3 --trials 500 --out results/
//   spoofsim train-classifier --config cfg.txt --out clf.spnn
//   spoofsim train-gan --config cfg.txt --out gan/
//   spoofsim bench --model clf.spnn --repeats 1000
//
// Exit status: 0 on success, 2 if some grid cells failed, 1 on configuration or I/O errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "spoofsim/experiment.hpp"
#include "spoofsim/kernels.hpp"

using namespace spoofsim;
namespace fs = std::filesystem;

namespace {

using Overrides = std::vector<std::pair<std::string, std::string>>;

// No --config means table defaults plus flags.
ExperimentSpec load_spec(const std::string& path, const Overrides& ov) {
    return path.empty() ? parse_config("", ov) : load_config(path, ov);
}

Overrides parse_sets(const std::vector<std::string>& sets) {
    Overrides out;
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
        out.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    return out;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    return os;
}

int cmd_run(const std::string& config, const Overrides& ov) {
    const auto spec = load_spec(config, ov);
    fs::create_directories(spec.out_dir);
    std::fprintf(stderr, "spoofsim %s: table %d, %zu seed(s), %zu trials, %zu job(s)\n", build_version(),
                 spec.table_id, spec.seeds.size(), spec.n_trials, spec.jobs);
    const auto t = run_experiment(spec);
    const std::string stem = spec.table_id == 0 ? "custom" : "table" + std::to_string(spec.table_id);
    {
        auto os = open_out(fs::path(spec.out_dir) / (stem + ".csv"));
        write_table_csv(os, t);
    }
    {
        auto os = open_out(fs::path(spec.out_dir) / (stem + ".json"));
        os << table_summary_json(t, spec) << '\n';
    }
    if (!t.reports.empty()) {
        auto os = open_out(fs::path(spec.out_dir) / (stem + "_attacks.csv"));
        write_report_csv_header(os);
        for (const auto& r : t.reports) append_report_csv(os, r);
    }
    ResultTable means = t;  // stdout gets the seed-averaged rows only
    means.rows.clear();
    means.reports.clear();
    write_table_csv(std::cout, means);
    for (const auto& r : t.rows) {
        if (!r.error.empty()) std::fprintf(stderr, "cell failed: %s\n", r.error.c_str());
    }
    return t.failed_cells ? 2 : 0;
}

int cmd_train_classifier(const std::string& config, const Overrides& ov, const std::string& out) {
    const auto spec = load_spec(config, ov);
    ScenarioConfig sc = spec.scenario;
    sc.seed = spec.seeds.front();
    const RadioEnvironment env(sc);
    Rng rng(derive_seed(sc.seed, {0x636c69}));
    const auto train = build_dataset(env, spec.n_train, 0.5, rng);
    const auto test = build_dataset(env, spec.n_test, 0.5, rng);
    TrainConfig tc = spec.train;
    tc.seed = derive_seed(sc.seed, {0x636c69, 1});
    const auto net = train_classifier(train, tc);
    const auto m = evaluate(net, test);
    save_model(out, net);
    nlohmann::json j{{"model", out}, {"e_MD", m.e_MD}, {"e_FA", m.e_FA}, {"n_test", m.n}};
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_train_gan(const std::string& config, const Overrides& ov, const std::string& out) {
    const auto spec = load_spec(config, ov);
    ScenarioConfig sc = spec.scenario;
    sc.seed = spec.seeds.front();
    const RadioEnvironment env(sc);
    fs::create_directories(out);
    const auto g = train_gan_with_retries(env, spec.gan, derive_seed(sc.seed, {0x74726e}), spec.gan_retries);
    save_model((fs::path(out) / "generator.spnn").string(), g.result.G);
    save_model((fs::path(out) / "discriminator.spnn").string(), g.result.D);
    {
        auto os = open_out(fs::path(out) / "trace.csv");
        write_trace_csv(os, g.result.trace);
    }
    auto summary = nlohmann::json::parse(trace_summary_json(g.result.trace));
    summary["retries"] = g.retries;
    summary["version"] = build_version();
    {
        auto os = open_out(fs::path(out) / "summary.json");
        os << summary.dump(2) << '\n';
    }
    std::cout << summary.dump(2) << '\n';
    return 0;
}

int cmd_bench(const std::string& model, std::size_t repeats) {
    const auto net = load_model(model);
    const auto r = benchmark_latency(net, repeats);
    nlohmann::json j{{"model", model},           {"layers", net.layer_sizes()}, {"mean_us", r.mean_us},
                     {"min_us", r.min_us},       {"max_us", r.max_us},          {"measured", r.measured},
                     {"discarded", r.discarded}, {"kernels", kernels::isa_name(kernels::active().isa)}};
    std::cout << j.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spoofsim: wireless spoofing attack simulator"};
    app.set_version_flag("--version", std::string(build_version()));
    app.require_subcommand(1);

    std::string config;
    std::vector<std::string> sets;
    auto add_config = [&](CLI::App* c) {
        c->add_option("--config", config, "key = value config file")->check(CLI::ExistingFile);
        c->add_option("--set", sets, "Override a config key (key=value), repeatable");
    };

    auto* run = app.add_subcommand("run", "Run a table experiment");
    add_config(run);
    std::string table, seeds, out_dir;
    std::size_t trials = 0, jobs = 0;
    run->add_option("--table", table, "1..5 or custom");
    run->add_option("--seeds", seeds, "Comma-separated seed list");
    run->add_option("--trials", trials, "Attack trials per cell");
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--jobs", jobs, "Worker threads for grid cells");

    auto* tc = app.add_subcommand("train-classifier", "Train the authenticator at R and save it");
    add_config(tc);
    std::string tc_out;
    tc->add_option("--out", tc_out, "Model file")->required();

    auto* tg = app.add_subcommand("train-gan", "Train the adversary GAN and save G, D and the trace");
    add_config(tg);
    std::string tg_out;
    tg->add_option("--out", tg_out, "Output directory")->required();

    auto* bench = app.add_subcommand("bench", "Single-sample inference latency of a saved model");
    std::string model;
    std::size_t repeats = 1000;
    bench->add_option("--model", model, "Model file")->required()->check(CLI::ExistingFile);
    bench->add_option("--repeats", repeats, "Forward passes, first 10% discarded")->check(CLI::Range(100, 100000000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        Overrides ov = parse_sets(sets);
        if (run->parsed()) {
            // flags win over both the file and --set
            if (!table.empty()) ov.emplace_back("table", table);
            if (!seeds.empty()) ov.emplace_back("seeds", seeds);
            if (trials) ov.emplace_back("trials", std::to_string(trials));
            if (!out_dir.empty()) ov.emplace_back("out", out_dir);
            if (jobs) ov.emplace_back("jobs", std::to_string(jobs));
            return cmd_run(config, ov);
        }
        if (tc->parsed()) return cmd_train_classifier(config, ov, tc_out);
        if (tg->parsed()) return cmd_train_gan(config, ov, tg_out);
        if (bench->parsed()) return cmd_bench(model, repeats);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
