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

#include "spoofsim/gan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "spoofsim/authenticator.hpp"

namespace spoofsim {

const char* budget_rule_name(BudgetRule r) { return r == BudgetRule::SumRms ? "sum_rms" : "total_power"; }

void GanConfig::validate() const {
    if (noise_dim < 1) throw InvalidInput("gan.noise_dim: must be >= 1");
    if (hidden_width < 1) throw InvalidInput("gan.hidden_width: must be >= 1");
    if (real_pool < 1) throw InvalidInput("gan.real_pool: must be >= 1");
    if (synth_per_epoch < 1) throw InvalidInput("gan.synth_per_epoch: must be >= 1");
    if (batch_size < 1) throw InvalidInput("gan.batch_size: must be >= 1");
    if (max_epochs < 1) throw InvalidInput("gan.max_epochs: must be >= 1");
    if (conv_window < 2) throw InvalidInput("gan.conv_window: must be >= 2");
    if (!(conv_threshold > 0.0 && conv_threshold < 1.0)) throw InvalidInput("gan.conv_threshold: must be in (0,1)");
    if (!(power_budget > 0.0)) throw InvalidInput("gan.power_budget: must be > 0");
    if (!(d_learning_rate > 0.0) || !(g_learning_rate > 0.0)) throw InvalidInput("gan learning rates must be > 0");
}

namespace {

// Rows of a softmax output: column 1 is the FROM_T probability.
double mean_neg_log(const Matrix& probs, std::size_t col) {
    double s = 0.0;
    for (std::size_t r = 0; r < probs.rows; ++r) s -= std::log(std::max(probs(r, col), kLogClamp));
    return s / static_cast<double>(probs.rows);
}

}  // namespace

double discriminator_loss(const DenseNetwork& D, const Matrix& real_batch, const Matrix& synth_batch) {
    if (real_batch.rows == 0 || synth_batch.rows == 0) throw InvalidInput("discriminator_loss: empty batch");
    if (real_batch.cols != D.input_size() || synth_batch.cols != D.input_size()) {
        throw InvalidInput("discriminator_loss: feature length mismatch");
    }
    return mean_neg_log(predict_batch(D, real_batch), 1) + mean_neg_log(predict_batch(D, synth_batch), 0);
}

double generator_loss(const DenseNetwork& D, const Matrix& synth_batch) {
    if (synth_batch.rows == 0) throw InvalidInput("generator_loss: empty batch");
    if (synth_batch.cols != D.input_size()) throw InvalidInput("generator_loss: feature length mismatch");
    return mean_neg_log(predict_batch(D, synth_batch), 1);
}

namespace {

// Budget usage of y in units of the budget; also fills per-stream mean power.
double usage(const double* y, std::size_t n_adv, std::size_t n_points, BudgetRule rule,
             std::vector<double>& ms) {
    ms.assign(n_adv, 0.0);
    for (std::size_t h = 0; h < n_adv; ++h) {
        const double* s = y + 2 * h * n_points;
        double acc = 0.0;
        for (std::size_t i = 0; i < 2 * n_points; ++i) acc += s[i] * s[i];
        ms[h] = acc / static_cast<double>(n_points);
    }
    if (rule == BudgetRule::TotalPower) return std::sqrt(std::accumulate(ms.begin(), ms.end(), 0.0));
    double r = 0.0;
    for (double m : ms) r += std::sqrt(m);
    return r;
}

}  // namespace

double project_budget(double* y, std::size_t n_adv, std::size_t n_points, BudgetRule rule) {
    std::vector<double> ms;
    const double r = usage(y, n_adv, n_points, rule, ms);
    if (!(r > 1.0)) return 1.0;
    const double s = 1.0 / r;
    for (std::size_t i = 0; i < 2 * n_points * n_adv; ++i) y[i] *= s;
    return s;
}

void project_budget_backward(const double* y, double* g, std::size_t n_adv, std::size_t n_points,
                             BudgetRule rule) {
    std::vector<double> ms;
    const double r = usage(y, n_adv, n_points, rule, ms);
    if (!(r > 1.0)) return;
    const std::size_t n = 2 * n_points * n_adv;
    const double gy = std::inner_product(g, g + n, y, 0.0);
    const double np = static_cast<double>(n_points);
    if (rule == BudgetRule::TotalPower) {
        const double k = gy / (np * r * r * r);
        for (std::size_t i = 0; i < n; ++i) g[i] = g[i] / r - k * y[i];
        return;
    }
    for (std::size_t h = 0; h < n_adv; ++h) {
        const double rms = std::sqrt(ms[h]);
        const double k = rms > 0.0 ? gy / (np * rms * r * r) : 0.0;
        for (std::size_t i = 2 * h * n_points; i < 2 * (h + 1) * n_points; ++i) g[i] = g[i] / r - k * y[i];
    }
}

std::vector<double> stream_rms(const IQBurst& burst) {
    std::vector<double> out(burst.n_antennas);
    for (std::size_t h = 0; h < burst.n_antennas; ++h) {
        double acc = 0.0;
        const Complex* s = burst.stream(h);
        for (std::size_t k = 0; k < burst.n_points; ++k) acc += std::norm(s[k]);
        out[h] = std::sqrt(acc / static_cast<double>(burst.n_points));
    }
    return out;
}

double budget_usage(const IQBurst& burst, BudgetRule rule) {
    const auto rms = stream_rms(burst);
    if (rule == BudgetRule::SumRms) return std::accumulate(rms.begin(), rms.end(), 0.0);
    double s = 0.0;
    for (double r : rms) s += r * r;
    return std::sqrt(s);
}

IQBurst generate_spoof_burst(const DenseNetwork& G, const std::vector<double>& z, std::size_t n_adv,
                             double power_budget, BudgetRule rule) {
    if (z.size() != G.input_size()) throw InvalidInput("generate_spoof_burst: noise length mismatch");
    if (n_adv == 0 || G.output_size() % (2 * n_adv) != 0) {
        throw InvalidInput("generate_spoof_burst: generator output does not split into streams");
    }
    auto y = predict(G, z);
    const std::size_t n_points = y.size() / (2 * n_adv);
    project_budget(y.data(), n_adv, n_points, rule);
    return burst_from_features(y.data(), n_adv, n_points, 1.0 / power_budget);
}

bool check_convergence(const std::vector<double>& loss_series, std::size_t window, double threshold) {
    if (window == 0 || loss_series.size() < window) return false;
    const double now = loss_series.back();
    const auto begin = loss_series.end() - static_cast<long>(window);
    if (std::abs(now) < 1e-9) {
        return std::all_of(begin, loss_series.end(), [](double v) { return std::abs(v) < 1e-9; });
    }
    const double tol = threshold * std::abs(now);
    return std::all_of(begin, loss_series.end(), [&](double v) { return std::abs(v - now) < tol; });
}

namespace {

// Everything needed to push a batch of generator outputs through the channel and back.
struct SynthBatch {
    Matrix y;                                 // projected G outputs (budget units)
    Matrix y_raw;                             // G outputs before projection
    Matrix x;                                 // D inputs
    std::vector<ChannelRealization> channels;
};

void pass_through_channel(const RadioEnvironment& env, const Matrix& y, std::size_t n_adv,
                          double budget, Rng& rng, Matrix& x, std::vector<ChannelRealization>* used) {
    const auto& cfg = env.config();
    const std::size_t np = cfg.n_points();
    x.resize(y.rows, cfg.feature_length());
    if (used) used->resize(y.rows);
    for (std::size_t r = 0; r < y.rows; ++r) {
        const IQBurst tx = burst_from_features(y.row(r), n_adv, np, 1.0 / budget);
        ChannelRealization ch;
        const IQBurst rx = env.transmit(tx, Receiver::A_R, cfg.A_T, rng, ch);
        features_into(rx, cfg.feature_scale, x.row(r));
        if (used) (*used)[r] = std::move(ch);
    }
}

// dL/dx (D input) -> dL/dy (projected generator output, budget units).
void features_grad_to_output(const RadioEnvironment& env, const Matrix& dx, const Matrix& y_raw,
                             const std::vector<ChannelRealization>& channels, std::size_t n_adv,
                             double budget, BudgetRule rule, Matrix& dy) {
    const auto& cfg = env.config();
    const std::size_t np = cfg.n_points();
    dy.resize(dx.rows, 2 * np * n_adv);
    for (std::size_t r = 0; r < dx.rows; ++r) {
        const IQBurst g_rx = burst_from_features(dx.row(r), static_cast<std::size_t>(cfg.N_R), np,
                                                 1.0 / cfg.feature_scale);
        const IQBurst g_tx = apply_channel_adjoint(g_rx, env.adv_phases(), channels[r]);
        features_into(g_tx, budget, dy.row(r));
        project_budget_backward(y_raw.row(r), dy.row(r), n_adv, np, rule);
    }
}

void fill_normal(Matrix& m, Rng& rng) {
    for (auto& v : m.data) v = rng.normal();
}

void copy_rows(const Matrix& src, const std::vector<std::size_t>& idx, std::size_t begin, std::size_t end,
               Matrix& dst) {
    dst.resize(end - begin, src.cols);
    for (std::size_t i = begin; i < end; ++i) std::copy(src.row(idx[i]), src.row(idx[i]) + src.cols, dst.row(i - begin));
}

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

}  // namespace

GanResult train_gan(const RadioEnvironment& env, const GanConfig& cfg, Rng& rng, const EpochCallback& on_epoch) {
    cfg.validate();
    const auto& sc = env.config();
    const std::size_t n_adv = static_cast<std::size_t>(sc.N_A);
    const std::size_t feat = sc.feature_length();

    GanResult res;
    {
        std::vector<std::size_t> gs{cfg.noise_dim}, ds{feat};
        for (std::size_t i = 0; i < cfg.hidden_depth; ++i) {
            gs.push_back(cfg.hidden_width);
            ds.push_back(cfg.hidden_width);
        }
        gs.push_back(sc.generator_width());
        ds.push_back(2);
        Rng init = rng.split();
        res.G = make_mlp(gs, Activation::Linear, init);
        res.D = make_mlp(ds, Activation::Softmax, init);
    }
    TrainConfig d_opt, g_opt;
    d_opt.learning_rate = cfg.d_learning_rate;
    g_opt.learning_rate = cfg.g_learning_rate;
    AdamState d_state(res.D), g_state(res.G);
    Gradients d_grads(res.D), g_grads(res.G);

    auto collect_real = [&](Matrix& X) {
        X.resize(cfg.real_pool, feat);
        for (std::size_t i = 0; i < cfg.real_pool; ++i) {
            features_into(env.intended_burst(Receiver::A_R, rng), sc.feature_scale, X.row(i));
        }
    };
    Matrix real;
    collect_real(real);

    const std::size_t n_synth = cfg.synth_per_epoch;
    Matrix Z(n_synth, cfg.noise_dim);
    Matrix y_all, x_synth, zb, xb, d_logits, dx, dy, yb_raw;
    std::vector<ChannelRealization> synth_channels, batch_channels;
    ForwardCache g_cache, d_cache;
    std::vector<int> labels;
    std::vector<std::size_t> order;

    auto& trace = res.trace;
    trace.protocol_log.reserve(n_synth * std::min<std::size_t>(cfg.max_epochs, 4000));

    for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        if (epoch > 0 && cfg.refresh_real_pool) collect_real(real);

        // (a) synthetic pool through fresh A_T -> A_R realizations
        fill_normal(Z, rng);
        y_all = predict_batch(res.G, Z);
        for (std::size_t r = 0; r < n_synth; ++r) project_budget(y_all.row(r), n_adv, sc.n_points(), cfg.budget_rule);
        pass_through_channel(env, y_all, n_adv, cfg.power_budget, rng, x_synth, &synth_channels);

        // (b) one discriminator epoch over the shuffled real + synthetic pools
        const std::size_t n_total = real.rows + n_synth;
        order.resize(n_total);
        std::iota(order.begin(), order.end(), 0);
        shuffle(order, rng);
        double d_sum = 0.0;
        std::size_t d_batches = 0;
        for (std::size_t b = 0; b < n_total; b += cfg.batch_size) {
            const std::size_t e = std::min(n_total, b + cfg.batch_size);
            xb.resize(e - b, feat);
            labels.resize(e - b);
            std::size_t n_real = 0;
            for (std::size_t i = b; i < e; ++i) {
                const std::size_t k = order[i];
                const bool is_real = k < real.rows;
                const double* src = is_real ? real.row(k) : x_synth.row(k - real.rows);
                std::copy(src, src + feat, xb.row(i - b));
                labels[i - b] = is_real ? 1 : 0;
                n_real += is_real ? 1 : 0;
            }
            const std::size_t n_fake = (e - b) - n_real;
            forward_batch(res.D, xb, d_cache);
            d_logits = d_cache.output;
            double loss_real = 0.0, loss_fake = 0.0;
            for (std::size_t r = 0; r < xb.rows; ++r) {
                const int y = labels[r];
                const double w = 1.0 / static_cast<double>(y == 1 ? n_real : n_fake);
                const double p = d_cache.output(r, static_cast<std::size_t>(y));
                (y == 1 ? loss_real : loss_fake) -= w * std::log(std::max(p, kLogClamp));
                d_logits(r, static_cast<std::size_t>(y)) -= 1.0;
                d_logits(r, 0) *= w;
                d_logits(r, 1) *= w;
            }
            backward_from_logits(res.D, d_cache, d_logits, d_grads);
            adam_step(res.D, d_grads, d_state, d_opt);
            d_sum += loss_real + loss_fake;
            ++d_batches;
        }

        // (c) one generator epoch over the same noise vectors and realizations
        order.resize(n_synth);
        std::iota(order.begin(), order.end(), 0);
        shuffle(order, rng);
        double g_sum = 0.0;
        std::size_t g_batches = 0;
        for (std::size_t b = 0; b < n_synth; b += cfg.batch_size) {
            const std::size_t e = std::min(n_synth, b + cfg.batch_size);
            const std::size_t nb = e - b;
            copy_rows(Z, order, b, e, zb);
            forward_batch(res.G, zb, g_cache);
            yb_raw = g_cache.output;
            Matrix yb = yb_raw;
            for (std::size_t r = 0; r < nb; ++r) project_budget(yb.row(r), n_adv, sc.n_points(), cfg.budget_rule);
            batch_channels.resize(nb);
            xb.resize(nb, feat);
            for (std::size_t r = 0; r < nb; ++r) {
                batch_channels[r] = synth_channels[order[b + r]];
                const IQBurst tx = burst_from_features(yb.row(r), n_adv, sc.n_points(), 1.0 / cfg.power_budget);
                const IQBurst rx = apply_channel(tx, env.adv_phases(), batch_channels[r], true, rng);
                features_into(rx, sc.feature_scale, xb.row(r));
            }
            forward_batch(res.D, xb, d_cache);
            d_logits = d_cache.output;
            double loss = 0.0;
            const double w = 1.0 / static_cast<double>(nb);
            for (std::size_t r = 0; r < nb; ++r) {
                const double p1 = d_cache.output(r, 1);
                loss -= w * std::log(std::max(p1, kLogClamp));
                d_logits(r, 1) -= 1.0;
                d_logits(r, 0) *= w;
                d_logits(r, 1) *= w;
                // (d) one flag bit per synthetic burst, one feedback bit per decision
                trace.protocol_log.push_back(
                    {static_cast<std::uint32_t>(epoch), 1, static_cast<std::uint8_t>(p1 > 0.5 ? 1 : 0)});
            }
            Gradients d_unused(res.D);
            backward_from_logits(res.D, d_cache, d_logits, d_unused, &dx);
            features_grad_to_output(env, dx, yb_raw, batch_channels, n_adv, cfg.power_budget, cfg.budget_rule, dy);
            backward_from_logits(res.G, g_cache, dy, g_grads);
            adam_step(res.G, g_grads, g_state, g_opt);
            g_sum += loss;
            ++g_batches;
        }

        trace.d_loss.push_back(d_sum / static_cast<double>(d_batches));
        trace.g_loss.push_back(g_sum / static_cast<double>(g_batches));
        trace.epochs_run = epoch + 1;
        if (on_epoch) on_epoch(epoch, res);
        // (e) stop once both loss series have settled
        if (check_convergence(trace.g_loss, cfg.conv_window, cfg.conv_threshold) &&
            check_convergence(trace.d_loss, cfg.conv_window, cfg.conv_threshold)) {
            trace.converged = true;
            break;
        }
    }
    return res;
}

double generator_path_loss(const DenseNetwork& G, const DenseNetwork& D, const std::vector<double>& z,
                           const DevicePhases& adv_phases, const ChannelRealization& ch,
                           double power_budget, BudgetRule rule, double feature_scale) {
    const std::size_t n_adv = ch.n_tx;
    const IQBurst tx = generate_spoof_burst(G, z, n_adv, power_budget, rule);
    Rng unused(0);
    const IQBurst rx = apply_channel(tx, adv_phases, ch, false, unused);
    std::vector<double> f(2 * rx.samples.size());
    features_into(rx, feature_scale, f.data());
    const auto p = predict(D, f);
    return -std::log(std::max(p[1], kLogClamp));
}

double generator_gradient_check(const DenseNetwork& G, const DenseNetwork& D, const std::vector<double>& z,
                                const DevicePhases& adv_phases, const ChannelRealization& ch,
                                double power_budget, BudgetRule rule, double feature_scale, double h) {
    const std::size_t n_adv = ch.n_tx;
    const std::size_t np = G.output_size() / (2 * n_adv);
    if (D.input_size() != 2 * np * ch.n_rx) throw InvalidInput("generator_gradient_check: D width mismatch");

    // analytic
    auto [y_raw, g_cache] = forward(G, z);
    std::vector<double> y = y_raw;
    project_budget(y.data(), n_adv, np, rule);
    const IQBurst tx = burst_from_features(y.data(), n_adv, np, 1.0 / power_budget);
    Rng unused(0);
    const IQBurst rx = apply_channel(tx, adv_phases, ch, false, unused);
    std::vector<double> f(2 * rx.samples.size());
    features_into(rx, feature_scale, f.data());
    auto [p, d_cache] = forward(D, f);
    Matrix d_logits(1, 2);
    d_logits(0, 0) = p[0];
    d_logits(0, 1) = p[1] - 1.0;
    Gradients d_unused(D);
    Matrix dx;
    backward_from_logits(D, d_cache, d_logits, d_unused, &dx);
    const IQBurst g_rx = burst_from_features(dx.row(0), ch.n_rx, np, 1.0 / feature_scale);
    const IQBurst g_tx = apply_channel_adjoint(g_rx, adv_phases, ch);
    Matrix dy(1, y.size());
    features_into(g_tx, power_budget, dy.row(0));
    project_budget_backward(y_raw.data(), dy.row(0), n_adv, np, rule);
    Gradients grads(G);
    backward_from_logits(G, g_cache, dy, grads);

    // numeric
    DenseNetwork Gp = G;
    double worst = 0.0;
    auto loss = [&]() { return generator_path_loss(Gp, D, z, adv_phases, ch, power_budget, rule, feature_scale); };
    auto probe = [&](double& param, double analytic) {
        const double orig = param;
        param = orig + h;
        const double lp = loss();
        param = orig - h;
        const double lm = loss();
        param = orig;
        const double numeric = (lp - lm) / (2.0 * h);
        const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
        worst = std::max(worst, std::abs(analytic - numeric) / denom);
    };
    for (std::size_t l = 0; l < Gp.layers.size(); ++l) {
        for (std::size_t i = 0; i < Gp.layers[l].W.size(); ++i) probe(Gp.layers[l].W[i], grads.dW[l][i]);
        for (std::size_t i = 0; i < Gp.layers[l].b.size(); ++i) probe(Gp.layers[l].b[i], grads.db[l][i]);
    }
    return worst;
}

void write_trace_csv(std::ostream& os, const TrainingTrace& trace) {
    os << "epoch,g_loss,d_loss\n";
    os.precision(17);
    for (std::size_t i = 0; i < trace.epochs_run; ++i) {
        os << i << ',' << trace.g_loss[i] << ',' << trace.d_loss[i] << '\n';
    }
}

std::string trace_summary_json(const TrainingTrace& trace) {
    nlohmann::json j;
    j["epochs_run"] = trace.epochs_run;
    j["converged"] = trace.converged;
    if (trace.epochs_run > 0) {
        j["final_g_loss"] = trace.g_loss.back();
        j["final_d_loss"] = trace.d_loss.back();
    }
    std::size_t fooled = 0;
    for (const auto& e : trace.protocol_log) fooled += e.feedback_bit;
    j["protocol_bits"] = trace.protocol_log.size();
    j["feedback_ones"] = fooled;
    return j.dump(2);
}

}  // namespace spoofsim
