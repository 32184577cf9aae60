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
#include <string>
#include <tuple>
#include <vector>

#include "spoofsim/kernels.hpp"
#include "spoofsim/rng.hpp"

using namespace spoofsim;
namespace k = spoofsim::kernels;

namespace {

std::vector<double> randv(std::size_t n, Rng& rng, double zero_frac = 0.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform() < zero_frac ? 0.0 : rng.normal();
    return v;
}

// C = beta*C + op(A) op(B) by triple loop
std::vector<double> naive(std::size_t m, std::size_t n, std::size_t kk, const std::vector<double>& a,
                          const std::vector<double>& b, std::vector<double> c, double beta, char mode) {
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            long double s = 0.0;
            for (std::size_t p = 0; p < kk; ++p) {
                double av = mode == 't' ? a[p * m + i] : a[i * kk + p];
                double bv = mode == 'n' ? b[j * kk + p] : b[p * n + j];
                s += static_cast<long double>(av) * bv;
            }
            c[i * n + j] = beta * c[i * n + j] + static_cast<double>(s);
        }
    }
    return c;
}

void check_close(const std::vector<double>& x, const std::vector<double>& y, double tol) {
    REQUIRE(x.size() == y.size());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(x[i] - y[i]) <= tol * (1.0 + std::abs(y[i])));
}

}  // namespace

TEST_CASE("scalar gemm variants match a triple-loop oracle") {
    Rng rng(11);
    for (auto [m, n, kk] : {std::tuple<std::size_t, std::size_t, std::size_t>{1, 1, 1}, {3, 5, 7}, {17, 9, 33}, {8, 64, 100}}) {
        for (double beta : {0.0, 1.0, 0.5}) {
            const auto a = randv(m * kk, rng, 0.3);
            const auto b = randv(n * kk, rng);
            const auto c0 = randv(m * n, rng);
            auto c = c0;
            k::scalar::gemm_nt(m, n, kk, a.data(), b.data(), c.data(), beta);
            check_close(c, naive(m, n, kk, a, b, c0, beta, 'n'), 1e-12);

            const auto at = randv(kk * m, rng, 0.3);
            const auto bt = randv(kk * n, rng);
            c = c0;
            k::scalar::gemm_tn(m, n, kk, at.data(), bt.data(), c.data(), beta);
            check_close(c, naive(m, n, kk, at, bt, c0, beta, 't'), 1e-12);

            c = c0;
            k::scalar::gemm_nn(m, n, kk, a.data(), bt.data(), c.data(), beta);
            check_close(c, naive(m, n, kk, a, bt, c0, beta, 'x'), 1e-12);
        }
    }
}

TEST_CASE("simd kernels agree with the scalar reference") {
    if (!k::avx2_available()) {
        MESSAGE("AVX2 not available; skipping equivalence");
        return;
    }
    const auto& s = k::table_for(k::Isa::Scalar);
    const auto& v = k::table_for(k::Isa::Avx2);
    REQUIRE(v.isa == k::Isa::Avx2);
    Rng rng(12);
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 15u, 16u, 801u}) {
        const auto a = randv(n, rng);
        const auto b = randv(n, rng);
        CHECK(std::abs(s.dot(a.data(), b.data(), n) - v.dot(a.data(), b.data(), n)) <= 1e-12 * (1.0 + n));
        auto y1 = randv(n, rng);
        auto y2 = y1;
        s.axpy(0.37, a.data(), y1.data(), n);
        v.axpy(0.37, a.data(), y2.data(), n);
        check_close(y2, y1, 1e-14);
    }
    for (auto [m, n, kk] : {std::tuple<std::size_t, std::size_t, std::size_t>{1, 1, 1}, {5, 6, 7}, {100, 50, 800}, {13, 128, 129}}) {
        for (double beta : {0.0, 1.0, -2.0}) {
            const auto a = randv(m * kk, rng, 0.4);
            const auto b = randv(n * kk, rng);
            const auto c0 = randv(m * n, rng);
            auto c1 = c0, c2 = c0;
            s.gemm_nt(m, n, kk, a.data(), b.data(), c1.data(), beta);
            v.gemm_nt(m, n, kk, a.data(), b.data(), c2.data(), beta);
            check_close(c2, c1, 1e-12);
            const auto bt = randv(kk * n, rng);
            c1 = c0;
            c2 = c0;
            s.gemm_tn(m, n, kk, a.data(), bt.data(), c1.data(), beta);
            v.gemm_tn(m, n, kk, a.data(), bt.data(), c2.data(), beta);
            check_close(c2, c1, 1e-12);
            c1 = c0;
            c2 = c0;
            s.gemm_nn(m, n, kk, a.data(), bt.data(), c1.data(), beta);
            v.gemm_nn(m, n, kk, a.data(), bt.data(), c2.data(), beta);
            check_close(c2, c1, 1e-12);
        }
    }
}

TEST_CASE("dispatch can be forced to scalar and back") {
    const auto before = k::active().isa;
    k::set_active(k::Isa::Scalar);
    CHECK(k::active().isa == k::Isa::Scalar);
    CHECK(std::string(k::isa_name(k::active().isa)) == "scalar");
    k::set_active(before);
    CHECK(k::active().isa == before);
}

TEST_CASE("substream seeds depend only on their key path") {
    CHECK(derive_seed(5, {1, 2}) == derive_seed(5, {1, 2}));
    CHECK(derive_seed(5, {1, 2}) != derive_seed(5, {2, 1}));
    CHECK(derive_seed(5, {1}) != derive_seed(6, {1}));
    Rng a(3), b(3);
    for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == b.next_u64());
}
