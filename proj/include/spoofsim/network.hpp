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
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "spoofsim/rng.hpp"

namespace spoofsim {

// Row-major dense matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    void resize(std::size_t r, std::size_t c) {
        rows = r;
        cols = c;
        data.assign(r * c, 0.0);
    }
    double* row(std::size_t i) { return data.data() + i * cols; }
    const double* row(std::size_t i) const { return data.data() + i * cols; }
    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

enum class Activation : std::uint32_t { Linear = 0, Relu = 1, Softmax = 2 };

const char* activation_name(Activation a);

struct DenseLayer {
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<double> W;  // out x in, row-major
    std::vector<double> b;  // out
    Activation act = Activation::Linear;
};

struct DenseNetwork {
    std::vector<DenseLayer> layers;

    std::size_t input_size() const { return layers.empty() ? 0 : layers.front().in; }
    std::size_t output_size() const { return layers.empty() ? 0 : layers.back().out; }
    std::size_t parameter_count() const;
    std::vector<std::size_t> layer_sizes() const;
    // Throws InvalidInput on broken chaining, misplaced softmax or non-finite parameters.
    void validate() const;
};

bool operator==(const DenseNetwork& a, const DenseNetwork& b);

// He-uniform weights for ReLU/linear hidden layers, Xavier-uniform for the output layer,
// zero biases. `activations` has one entry per layer (sizes.size() - 1).
DenseNetwork init_network(const std::vector<std::size_t>& sizes,
                          const std::vector<Activation>& activations, Rng& rng);

// ReLU hidden layers and the given output activation.
DenseNetwork make_mlp(const std::vector<std::size_t>& sizes, Activation output, Rng& rng);

struct ForwardCache {
    std::size_t batch = 0;
    std::vector<Matrix> inputs;  // inputs[l]: activations entering layer l (batch x in)
    std::vector<Matrix> pre;     // pre[l]: affine outputs of layer l (batch x out)
    Matrix output;               // activations of the last layer
};

// X is batch x input_size.
void forward_batch(const DenseNetwork& net, const Matrix& X, ForwardCache& cache);
Matrix predict_batch(const DenseNetwork& net, const Matrix& X);

std::pair<std::vector<double>, ForwardCache> forward(const DenseNetwork& net,
                                                     const std::vector<double>& input);
std::vector<double> predict(const DenseNetwork& net, const std::vector<double>& input);

struct Gradients {
    std::vector<std::vector<double>> dW;
    std::vector<std::vector<double>> db;

    explicit Gradients(const DenseNetwork& net);
    Gradients() = default;
    void zero();
    double max_abs() const;
};

// Gradient with respect to the last layer's affine outputs (logits), batch x out.
// Parameter gradients are summed over the batch and written into `grads`; if d_input is
// given it receives the gradient with respect to X.
void backward_from_logits(const DenseNetwork& net, const ForwardCache& cache,
                          const Matrix& d_logits, Gradients& grads, Matrix* d_input = nullptr);

// Gradient with respect to the network output (after the output activation).
void backward(const DenseNetwork& net, const ForwardCache& cache, const Matrix& d_output,
              Gradients& grads, Matrix* d_input = nullptr);
Gradients backward(const DenseNetwork& net, const ForwardCache& cache,
                   const std::vector<double>& loss_gradient);

void softmax_inplace(double* v, std::size_t n);
std::vector<double> softmax(const std::vector<double>& z);

inline constexpr double kLogClamp = 1e-12;

// -sum label_i log(max(pred_i, eps))
double cross_entropy(const std::vector<double>& pred, const std::vector<double>& label);

// Mean cross-entropy of softmax outputs against class indices, and the exact logit
// gradient (p - onehot) / batch. The reported loss uses the clamped log; the gradient does not.
double softmax_cross_entropy(const Matrix& probs, const std::vector<int>& labels, Matrix& d_logits);

struct TrainConfig {
    double learning_rate = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::size_t batch_size = 100;
    std::size_t train_steps = 1000;
    std::uint64_t seed = 0;

    void validate() const;
};

struct AdamState {
    std::vector<std::vector<double>> mW, vW, mb, vb;
    std::uint64_t t = 0;

    AdamState() = default;
    explicit AdamState(const DenseNetwork& net);
};

void adam_step(DenseNetwork& net, const Gradients& grads, AdamState& state, const TrainConfig& cfg);

// Minibatch training on class-index labels with softmax cross-entropy.
// Returns the per-step loss curve.
std::vector<double> train_supervised(DenseNetwork& net, const Matrix& X, const std::vector<int>& labels,
                                     const TrainConfig& cfg);

// Loss used by the gradient check: cross-entropy against `target` for softmax outputs,
// half squared error otherwise.
double check_loss(const DenseNetwork& net, const std::vector<double>& input,
                  const std::vector<double>& target);

// Max relative error between analytic and central-difference gradients over every weight
// and bias. Relative error is |a - n| / max(|a|, |n|, 1e-6). Parameters whose +-h probe
// moves a ReLU input across zero have no valid central difference; they are skipped and
// counted in `kinks`.
double finite_diff_check(const DenseNetwork& net, const std::vector<double>& input,
                         const std::vector<double>& target, double h = 1e-5,
                         std::size_t* kinks = nullptr);

inline constexpr std::uint32_t kModelMagic = 0x4e4e5053;  // "SPNN"
inline constexpr std::uint32_t kModelVersion = 1;

void write_model(std::ostream& os, const DenseNetwork& net);
DenseNetwork read_model(std::istream& is);
void save_model(const std::string& path, const DenseNetwork& net);
DenseNetwork load_model(const std::string& path);

}  // namespace spoofsim
