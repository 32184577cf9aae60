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
#include <initializer_list>
#include <random>

namespace spoofsim {

// splitmix64 finalizer; used to derive independent substream seeds.
std::uint64_t mix64(std::uint64_t x);

// Counter-based split: the seed for substream `keys` of `master` does not depend on
// the order in which other substreams are created.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys);

class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(mix64(seed)) {}

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }
    double normal() { return normal_(engine_); }
    double normal(double mean, double sd) { return mean + sd * normal_(engine_); }
    double exponential(double mean) {
        return mean * std::exponential_distribution<double>(1.0)(engine_);
    }
    // Rayleigh variate with the given mean.
    double rayleigh(double mean);
    bool bernoulli(double p) { return uniform() < p; }
    int bit() { return static_cast<int>(engine_() >> 63); }
    std::uint64_t next_u64() { return engine_(); }
    std::uint64_t below(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
    }
    // A child stream seeded from this stream's output.
    Rng split() { return Rng(engine_()); }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace spoofsim
