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

#include "spoofsim/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "binio.hpp"
#include "spoofsim/kernels.hpp"
#include "spoofsim/waveform.hpp"

namespace spoofsim {

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::Linear: return "linear";
        case Activation::Relu: return "relu";
        case Activation::Softmax: return "softmax";
    }
    return "?";
}

std::size_t DenseNetwork::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.W.size() + l.b.size();
    return n;
}

std::vector<std::size_t> DenseNetwork::layer_sizes() const {
    std::vector<std::size_t> s;
    if (layers.empty()) return s;
    s.push_back(layers.front().in);
    for (const auto& l : layers) s.push_back(l.out);
    return s;
}

void DenseNetwork::validate() const {
    if (layers.empty()) throw InvalidInput("network has no layers");
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& L = layers[l];
        if (L.in == 0 || L.out == 0) throw InvalidInput("network layer with zero width");
        if (L.W.size() != L.in * L.out || L.b.size() != L.out) throw InvalidInput("network layer storage mismatch");
        if (l > 0 && layers[l - 1].out != L.in) throw InvalidInput("network layer dimensions do not chain");
        if (L.act == Activation::Softmax && l + 1 != layers.size()) {
            throw InvalidInput("softmax is only allowed on the output layer");
        }
        for (double v : L.W) {
            if (!std::isfinite(v)) throw InvalidInput("network has non-finite weights");
        }
        for (double v : L.b) {
            if (!std::isfinite(v)) throw InvalidInput("network has non-finite biases");
        }
    }
}

bool operator==(const DenseNetwork& a, const DenseNetwork& b) {
    if (a.layers.size() != b.layers.size()) return false;
    for (std::size_t l = 0; l < a.layers.size(); ++l) {
        const auto& x = a.layers[l];
        const auto& y = b.layers[l];
        if (x.in != y.in || x.out != y.out || x.act != y.act || x.W != y.W || x.b != y.b) return false;
    }
    return true;
}

DenseNetwork init_network(const std::vector<std::size_t>& sizes,
                          const std::vector<Activation>& activations, Rng& rng) {
    if (sizes.size() < 2) throw InvalidInput("init_network: need at least two layer sizes");
    if (activations.size() != sizes.size() - 1) throw InvalidInput("init_network: one activation per layer");
    for (std::size_t s : sizes) {
        if (s == 0) throw InvalidInput("init_network: layer sizes must be positive");
    }
    DenseNetwork net;
    net.layers.resize(sizes.size() - 1);
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        auto& L = net.layers[l];
        L.in = sizes[l];
        L.out = sizes[l + 1];
        L.act = activations[l];
        const bool last = l + 1 == net.layers.size();
        const double bound = last ? std::sqrt(6.0 / static_cast<double>(L.in + L.out))
                                  : std::sqrt(6.0 / static_cast<double>(L.in));
        L.W.resize(L.in * L.out);
        for (auto& w : L.W) w = rng.uniform(-bound, bound);
        L.b.assign(L.out, 0.0);
    }
    net.validate();
    return net;
}

DenseNetwork make_mlp(const std::vector<std::size_t>& sizes, Activation output, Rng& rng) {
    if (sizes.size() < 2) throw InvalidInput("make_mlp: need at least two layer sizes");
    std::vector<Activation> acts(sizes.size() - 1, Activation::Relu);
    acts.back() = output;
    return init_network(sizes, acts, rng);
}

void softmax_inplace(double* v, std::size_t n) {
    const double m = *std::max_element(v, v + n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = std::exp(v[i] - m);
        s += v[i];
    }
    for (std::size_t i = 0; i < n; ++i) v[i] /= s;
}

std::vector<double> softmax(const std::vector<double>& z) {
    std::vector<double> p = z;
    if (!p.empty()) softmax_inplace(p.data(), p.size());
    return p;
}

namespace {

void activate(Activation act, const Matrix& pre, Matrix& out) {
    out.resize(pre.rows, pre.cols);
    switch (act) {
        case Activation::Linear:
            out.data = pre.data;
            break;
        case Activation::Relu:
            for (std::size_t i = 0; i < pre.data.size(); ++i) out.data[i] = pre.data[i] > 0.0 ? pre.data[i] : 0.0;
            break;
        case Activation::Softmax:
            out.data = pre.data;
            for (std::size_t r = 0; r < out.rows; ++r) softmax_inplace(out.row(r), out.cols);
            break;
    }
}

void affine(const DenseLayer& L, const Matrix& in, Matrix& pre) {
    pre.resize(in.rows, L.out);
    kernels::gemm_nt(in.rows, L.out, L.in, in.data.data(), L.W.data(), pre.data.data(), 0.0);
    for (std::size_t r = 0; r < pre.rows; ++r) {
        double* z = pre.row(r);
        for (std::size_t j = 0; j < L.out; ++j) z[j] += L.b[j];
    }
}

}  // namespace

void forward_batch(const DenseNetwork& net, const Matrix& X, ForwardCache& cache) {
    if (X.cols != net.input_size()) throw InvalidInput("forward: input width does not match network");
    const std::size_t nl = net.layers.size();
    cache.batch = X.rows;
    cache.inputs.resize(nl);
    cache.pre.resize(nl);
    cache.inputs[0] = X;
    for (std::size_t l = 0; l < nl; ++l) {
        affine(net.layers[l], cache.inputs[l], cache.pre[l]);
        Matrix& dst = l + 1 < nl ? cache.inputs[l + 1] : cache.output;
        activate(net.layers[l].act, cache.pre[l], dst);
    }
}

Matrix predict_batch(const DenseNetwork& net, const Matrix& X) {
    if (X.cols != net.input_size()) throw InvalidInput("forward: input width does not match network");
    Matrix a = X;
    Matrix z;
    for (const auto& L : net.layers) {
        affine(L, a, z);
        activate(L.act, z, a);
    }
    return a;
}

std::pair<std::vector<double>, ForwardCache> forward(const DenseNetwork& net,
                                                     const std::vector<double>& input) {
    Matrix X(1, input.size());
    X.data = input;
    ForwardCache cache;
    forward_batch(net, X, cache);
    return {cache.output.data, std::move(cache)};
}

std::vector<double> predict(const DenseNetwork& net, const std::vector<double>& input) {
    Matrix X(1, input.size());
    X.data = input;
    return predict_batch(net, X).data;
}

Gradients::Gradients(const DenseNetwork& net) {
    for (const auto& L : net.layers) {
        dW.emplace_back(L.W.size(), 0.0);
        db.emplace_back(L.b.size(), 0.0);
    }
}

void Gradients::zero() {
    for (auto& v : dW) std::fill(v.begin(), v.end(), 0.0);
    for (auto& v : db) std::fill(v.begin(), v.end(), 0.0);
}

double Gradients::max_abs() const {
    double m = 0.0;
    for (const auto& v : dW) {
        for (double x : v) m = std::max(m, std::abs(x));
    }
    for (const auto& v : db) {
        for (double x : v) m = std::max(m, std::abs(x));
    }
    return m;
}

void backward_from_logits(const DenseNetwork& net, const ForwardCache& cache,
                          const Matrix& d_logits, Gradients& grads, Matrix* d_input) {
    const std::size_t nl = net.layers.size();
    if (cache.pre.size() != nl || cache.inputs.size() != nl) throw InvalidInput("backward: stale cache");
    if (d_logits.rows != cache.batch || d_logits.cols != net.output_size()) {
        throw InvalidInput("backward: gradient shape does not match cache");
    }
    if (grads.dW.size() != nl) grads = Gradients(net);
    Matrix dz = d_logits;
    Matrix da;
    for (std::size_t l = nl; l-- > 0;) {
        const auto& L = net.layers[l];
        const Matrix& in = cache.inputs[l];
        if (in.cols != L.in || cache.pre[l].cols != L.out) throw InvalidInput("backward: stale cache");
        kernels::gemm_tn(L.out, L.in, cache.batch, dz.data.data(), in.data.data(), grads.dW[l].data(), 0.0);
        auto& db = grads.db[l];
        std::fill(db.begin(), db.end(), 0.0);
        for (std::size_t r = 0; r < dz.rows; ++r) {
            const double* d = dz.row(r);
            for (std::size_t j = 0; j < L.out; ++j) db[j] += d[j];
        }
        if (l == 0 && d_input == nullptr) break;
        da.resize(cache.batch, L.in);
        kernels::gemm_nn(cache.batch, L.in, L.out, dz.data.data(), L.W.data(), da.data.data(), 0.0);
        if (l == 0) {
            *d_input = std::move(da);
            break;
        }
        const auto& prev = net.layers[l - 1];
        const Matrix& z = cache.pre[l - 1];
        if (prev.act == Activation::Relu) {
            for (std::size_t i = 0; i < da.data.size(); ++i) {
                if (!(z.data[i] > 0.0)) da.data[i] = 0.0;
            }
        } else if (prev.act == Activation::Softmax) {
            throw InvalidInput("backward: softmax in a hidden layer");
        }
        std::swap(dz, da);
    }
}

void backward(const DenseNetwork& net, const ForwardCache& cache, const Matrix& d_output,
              Gradients& grads, Matrix* d_input) {
    if (d_output.rows != cache.batch || d_output.cols != net.output_size()) {
        throw InvalidInput("backward: gradient shape does not match cache");
    }
    const auto& last = net.layers.back();
    Matrix dz = d_output;
    if (last.act == Activation::Relu) {
        const Matrix& z = cache.pre.back();
        for (std::size_t i = 0; i < dz.data.size(); ++i) {
            if (!(z.data[i] > 0.0)) dz.data[i] = 0.0;
        }
    } else if (last.act == Activation::Softmax) {
        for (std::size_t r = 0; r < dz.rows; ++r) {
            const double* p = cache.output.row(r);
            double* g = dz.row(r);
            double s = 0.0;
            for (std::size_t j = 0; j < dz.cols; ++j) s += p[j] * g[j];
            for (std::size_t j = 0; j < dz.cols; ++j) g[j] = p[j] * (g[j] - s);
        }
    }
    backward_from_logits(net, cache, dz, grads, d_input);
}

Gradients backward(const DenseNetwork& net, const ForwardCache& cache,
                   const std::vector<double>& loss_gradient) {
    Matrix d(1, loss_gradient.size());
    d.data = loss_gradient;
    Gradients g(net);
    backward(net, cache, d, g);
    return g;
}

double cross_entropy(const std::vector<double>& pred, const std::vector<double>& label) {
    if (pred.size() != label.size()) throw InvalidInput("cross_entropy: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (label[i] != 0.0) s -= label[i] * std::log(std::max(pred[i], kLogClamp));
    }
    return s;
}

double softmax_cross_entropy(const Matrix& probs, const std::vector<int>& labels, Matrix& d_logits) {
    if (labels.size() != probs.rows) throw InvalidInput("softmax_cross_entropy: label count mismatch");
    d_logits = probs;
    const double inv = 1.0 / static_cast<double>(probs.rows);
    double loss = 0.0;
    for (std::size_t r = 0; r < probs.rows; ++r) {
        const auto y = static_cast<std::size_t>(labels[r]);
        if (y >= probs.cols) throw InvalidInput("softmax_cross_entropy: label out of range");
        loss -= std::log(std::max(probs(r, y), kLogClamp));
        double* d = d_logits.row(r);
        d[y] -= 1.0;
        for (std::size_t j = 0; j < probs.cols; ++j) d[j] *= inv;
    }
    return loss * inv;
}

void TrainConfig::validate() const {
    if (batch_size < 1) throw InvalidInput("train.batch_size: must be >= 1");
    if (train_steps < 1) throw InvalidInput("train.steps: must be >= 1");
    if (!(adam_beta1 > 0.0 && adam_beta1 < 1.0)) throw InvalidInput("train.beta1: must be in (0,1)");
    if (!(adam_beta2 > 0.0 && adam_beta2 < 1.0)) throw InvalidInput("train.beta2: must be in (0,1)");
    if (!(learning_rate > 0.0)) throw InvalidInput("train.learning_rate: must be > 0");
    if (!(adam_epsilon > 0.0)) throw InvalidInput("train.epsilon: must be > 0");
}

AdamState::AdamState(const DenseNetwork& net) {
    for (const auto& L : net.layers) {
        mW.emplace_back(L.W.size(), 0.0);
        vW.emplace_back(L.W.size(), 0.0);
        mb.emplace_back(L.b.size(), 0.0);
        vb.emplace_back(L.b.size(), 0.0);
    }
}

namespace {

void adam_update(std::vector<double>& p, const std::vector<double>& g, std::vector<double>& m,
                 std::vector<double>& v, double lr_t, const TrainConfig& cfg, double c2) {
    const double b1 = cfg.adam_beta1;
    const double b2 = cfg.adam_beta2;
    for (std::size_t i = 0; i < p.size(); ++i) {
        m[i] = b1 * m[i] + (1.0 - b1) * g[i];
        v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
        p[i] -= lr_t * m[i] / (std::sqrt(v[i] / c2) + cfg.adam_epsilon);
    }
}

}  // namespace

void adam_step(DenseNetwork& net, const Gradients& grads, AdamState& state, const TrainConfig& cfg) {
    if (state.mW.size() != net.layers.size()) state = AdamState(net);
    if (grads.dW.size() != net.layers.size()) throw InvalidInput("adam_step: gradient shape mismatch");
    state.t += 1;
    const double t = static_cast<double>(state.t);
    const double c1 = 1.0 - std::pow(cfg.adam_beta1, t);
    const double c2 = 1.0 - std::pow(cfg.adam_beta2, t);
    const double lr_t = cfg.learning_rate / c1;
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        adam_update(net.layers[l].W, grads.dW[l], state.mW[l], state.vW[l], lr_t, cfg, c2);
        adam_update(net.layers[l].b, grads.db[l], state.mb[l], state.vb[l], lr_t, cfg, c2);
    }
}

std::vector<double> train_supervised(DenseNetwork& net, const Matrix& X, const std::vector<int>& labels,
                                     const TrainConfig& cfg) {
    cfg.validate();
    if (X.rows == 0 || X.rows != labels.size()) throw InvalidInput("train: empty or mismatched training set");
    if (X.cols != net.input_size()) throw InvalidInput("train: feature length does not match network input");
    if (net.layers.back().act != Activation::Softmax) throw InvalidInput("train: output layer must be softmax");
    Rng rng(cfg.seed);
    AdamState state(net);
    Gradients grads(net);
    ForwardCache cache;
    Matrix batch(cfg.batch_size, X.cols);
    Matrix d_logits;
    std::vector<int> y(cfg.batch_size);
    std::vector<double> curve;
    curve.reserve(cfg.train_steps);
    for (std::size_t step = 0; step < cfg.train_steps; ++step) {
        for (std::size_t r = 0; r < cfg.batch_size; ++r) {
            const std::size_t idx = rng.below(X.rows);
            std::copy(X.row(idx), X.row(idx) + X.cols, batch.row(r));
            y[r] = labels[idx];
        }
        forward_batch(net, batch, cache);
        curve.push_back(softmax_cross_entropy(cache.output, y, d_logits));
        backward_from_logits(net, cache, d_logits, grads);
        adam_step(net, grads, state, cfg);
    }
    return curve;
}

double check_loss(const DenseNetwork& net, const std::vector<double>& input,
                  const std::vector<double>& target) {
    const auto out = predict(net, input);
    if (out.size() != target.size()) throw InvalidInput("check_loss: target length mismatch");
    if (net.layers.back().act == Activation::Softmax) return cross_entropy(out, target);
    double s = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) s += 0.5 * (out[i] - target[i]) * (out[i] - target[i]);
    return s;
}

namespace {

struct TailWork {
    Matrix dz, da;
};

double relu(double z) { return z > 0.0 ? z : 0.0; }

// relu(z0 + dz) - relu(z0), exact when both sides sit on the same linear piece.
double relu_delta(double z0, double dz, bool& kink) {
    const bool before = z0 > 0.0, after = z0 + dz > 0.0;
    if (before != after) {
        kink = true;
        return relu(z0 + dz) - relu(z0);
    }
    return before ? dz : 0.0;
}

// L(theta') - L(theta) for every row of DZ, where DZ holds the change of layer `from`'s
// affine output caused by one perturbed parameter. The change is carried through the
// remaining layers as a difference (affine maps act linearly on it, activations are
// evaluated at the perturbed point), so it never cancels against the full loss. Rows whose
// perturbation moves a ReLU input across zero are flagged in `kinked`.
void tail_loss_deltas(const DenseNetwork& net, const ForwardCache& base, std::size_t from, const Matrix& DZ,
                      const std::vector<double>& target, TailWork& w, std::vector<double>& out,
                      std::vector<char>& kinked) {
    const std::size_t rows = DZ.rows;
    kinked.assign(rows, 0);
    out.assign(rows, 0.0);
    const Matrix* dz = &DZ;
    const std::size_t last = net.layers.size() - 1;
    for (std::size_t l = from;; ++l) {
        const auto& L = net.layers[l];
        if (l > from) {
            w.dz.resize(rows, L.out);
            kernels::gemm_nt(rows, L.out, L.in, w.da.data.data(), L.W.data(), w.dz.data.data(), 0.0);
            dz = &w.dz;
        }
        const double* z0 = base.pre[l].row(0);
        if (l == last) {
            const double* y0 = base.output.row(0);
            for (std::size_t r = 0; r < rows; ++r) {
                const double* d = dz->row(r);
                double s = 0.0;
                if (L.act == Activation::Softmax) {
                    // log y_j' - log y_j = d_j - log(sum_k y_k exp(d_k))
                    double acc = 0.0;
                    for (std::size_t j = 0; j < L.out; ++j) acc += y0[j] * std::expm1(d[j]);
                    const double lse = std::log1p(acc);
                    for (std::size_t j = 0; j < L.out; ++j) {
                        if (target[j] != 0.0) s -= target[j] * (d[j] - lse);
                    }
                } else {
                    bool k = false;
                    for (std::size_t j = 0; j < L.out; ++j) {
                        const double dy = L.act == Activation::Relu ? relu_delta(z0[j], d[j], k) : d[j];
                        s += 0.5 * dy * (2.0 * (y0[j] - target[j]) + dy);
                    }
                    kinked[r] = kinked[r] || k;
                }
                out[r] = s;
            }
            return;
        }
        w.da.resize(rows, L.out);
        for (std::size_t r = 0; r < rows; ++r) {
            const double* d = dz->row(r);
            double* a = w.da.row(r);
            bool k = false;
            for (std::size_t j = 0; j < L.out; ++j) a[j] = L.act == Activation::Relu ? relu_delta(z0[j], d[j], k) : d[j];
            kinked[r] = kinked[r] || k;
        }
    }
}

}  // namespace

double finite_diff_check(const DenseNetwork& net, const std::vector<double>& input,
                         const std::vector<double>& target, double h, std::size_t* kinks) {
    if (!(h > 0.0)) throw InvalidInput("finite_diff_check: h must be positive");
    if (target.size() != net.output_size()) throw InvalidInput("finite_diff_check: target length mismatch");
    auto [out, cache] = forward(net, input);
    const bool ce = net.layers.back().act == Activation::Softmax;
    Matrix d(1, out.size());
    if (ce) {
        double tsum = 0.0;
        for (double t : target) tsum += t;
        for (std::size_t j = 0; j < out.size(); ++j) d.data[j] = out[j] * tsum - target[j];
    } else {
        const auto& last = net.layers.back();
        for (std::size_t j = 0; j < out.size(); ++j) {
            const bool dead = last.act == Activation::Relu && !(cache.pre.back().data[j] > 0.0);
            d.data[j] = dead ? 0.0 : out[j] - target[j];
        }
    }
    Gradients grads(net);
    backward_from_logits(net, cache, d, grads);

    double worst = 0.0;
    std::size_t n_kinks = 0;
    auto record = [&](double analytic, double dplus, double dminus) {
        const double numeric = (dplus - dminus) / (2.0 * h);
        const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
        worst = std::max(worst, std::abs(analytic - numeric) / denom);
    };

    constexpr std::size_t kTile = 64;  // perturbations evaluated per batched tail pass
    TailWork work;
    Matrix Z;
    std::vector<double> deltas;
    std::vector<char> kinked;
    const double* y0 = out.data();
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const auto& L = net.layers[l];
        const double* a = cache.inputs[l].row(0);
        const double* z0 = cache.pre[l].row(0);
        const std::size_t n_params = L.out * L.in + L.out;
        auto unit = [&](std::size_t p, std::size_t& i, double& delta) {
            const bool bias = p >= L.out * L.in;
            i = bias ? p - L.out * L.in : p / L.in;
            delta = bias ? h : h * a[p % L.in];
        };
        auto analytic = [&](std::size_t p) {
            return p >= L.out * L.in ? grads.db[l][p - L.out * L.in] : grads.dW[l][p];
        };
        if (l + 1 == net.layers.size() && !ce) {
            // elementwise output: a perturbation touches one output only
            for (std::size_t p = 0; p < n_params; ++p) {
                std::size_t i;
                double delta;
                unit(p, i, delta);
                bool kink = false;
                const double up = L.act == Activation::Relu ? relu_delta(z0[i], delta, kink) : delta;
                const double dn = L.act == Activation::Relu ? relu_delta(z0[i], -delta, kink) : -delta;
                if (kink) {
                    ++n_kinks;
                    continue;
                }
                const double r = y0[i] - target[i];
                record(analytic(p), 0.5 * up * (2.0 * r + up), 0.5 * dn * (2.0 * r + dn));
            }
            continue;
        }
        for (std::size_t start = 0; start < n_params; start += kTile) {
            const std::size_t cnt = std::min(kTile, n_params - start);
            Z.rows = 2 * cnt;
            Z.cols = L.out;
            Z.data.resize(Z.rows * Z.cols);
            for (std::size_t t = 0; t < cnt; ++t) {
                std::size_t i;
                double delta;
                unit(start + t, i, delta);
                std::fill(Z.row(2 * t), Z.row(2 * t) + 2 * L.out, 0.0);
                Z(2 * t, i) = delta;
                Z(2 * t + 1, i) = -delta;
            }
            tail_loss_deltas(net, cache, l, Z, target, work, deltas, kinked);
            for (std::size_t t = 0; t < cnt; ++t) {
                if (kinked[2 * t] || kinked[2 * t + 1]) {
                    ++n_kinks;
                    continue;
                }
                record(analytic(start + t), deltas[2 * t], deltas[2 * t + 1]);
            }
        }
    }
    if (kinks) *kinks = n_kinks;
    return worst;
}

void write_model(std::ostream& os, const DenseNetwork& net) {
    net.validate();
    binio::put_u32(os, kModelMagic);
    binio::put_u32(os, kModelVersion);
    binio::put_u32(os, static_cast<std::uint32_t>(net.layers.size()));
    for (std::size_t s : net.layer_sizes()) binio::put_u64(os, s);
    for (const auto& L : net.layers) binio::put_u32(os, static_cast<std::uint32_t>(L.act));
    for (const auto& L : net.layers) {
        for (double w : L.W) binio::put_f64(os, w);
        for (double b : L.b) binio::put_f64(os, b);
    }
}

DenseNetwork read_model(std::istream& is) {
    if (binio::get_u32(is) != kModelMagic) throw InvalidInput("read_model: bad magic");
    if (binio::get_u32(is) != kModelVersion) throw InvalidInput("read_model: unsupported version");
    const std::uint32_t nl = binio::get_u32(is);
    if (nl == 0 || nl > 1024) throw InvalidInput("read_model: bad layer count");
    std::vector<std::size_t> sizes(nl + 1);
    for (auto& s : sizes) {
        s = binio::get_u64(is);
        if (s == 0 || s > (std::size_t{1} << 24)) throw InvalidInput("read_model: bad layer size");
    }
    DenseNetwork net;
    net.layers.resize(nl);
    for (auto& L : net.layers) {
        const std::uint32_t code = binio::get_u32(is);
        if (code > 2) throw InvalidInput("read_model: unknown activation code");
        L.act = static_cast<Activation>(code);
    }
    for (std::size_t l = 0; l < nl; ++l) {
        auto& L = net.layers[l];
        L.in = sizes[l];
        L.out = sizes[l + 1];
        L.W.resize(L.in * L.out);
        L.b.resize(L.out);
        for (auto& w : L.W) w = binio::get_f64(is);
        for (auto& b : L.b) b = binio::get_f64(is);
    }
    net.validate();
    return net;
}

void save_model(const std::string& path, const DenseNetwork& net) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_model(os, net);
}

DenseNetwork load_model(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_model(is);
}

}  // namespace spoofsim
