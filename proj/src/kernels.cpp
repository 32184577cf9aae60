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

#include "spoofsim/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace spoofsim::kernels {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

static void scale_c(std::size_t count, double* c, double beta) {
    if (beta == 0.0) {
        std::memset(c, 0, count * sizeof(double));
    } else if (beta != 1.0) {
        for (std::size_t i = 0; i < count; ++i) c[i] *= beta;
    }
}

void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
             double* c, double beta) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* ai = a + i * k;
        double* ci = c + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const double s = dot(ai, b + j * k, k);
            ci[j] = (beta == 0.0 ? 0.0 : beta * ci[j]) + s;
        }
    }
}

void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
             double* c, double beta) {
    scale_c(m * n, c, beta);
    for (std::size_t p = 0; p < k; ++p) {
        const double* ap = a + p * m;
        const double* bp = b + p * n;
        for (std::size_t i = 0; i < m; ++i) {
            if (ap[i] != 0.0) axpy(ap[i], bp, c + i * n, n);
        }
    }
}

void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
             double* c, double beta) {
    scale_c(m * n, c, beta);
    for (std::size_t i = 0; i < m; ++i) {
        const double* ai = a + i * k;
        double* ci = c + i * n;
        for (std::size_t p = 0; p < k; ++p) {
            if (ai[p] != 0.0) axpy(ai[p], b + p * n, ci, n);
        }
    }
}

}  // namespace scalar

namespace {

const KernelTable kScalar{Isa::Scalar, scalar::dot, scalar::axpy, scalar::gemm_nt,
                          scalar::gemm_tn, scalar::gemm_nn};
#ifdef SPOOFSIM_HAVE_AVX2
const KernelTable kAvx2{Isa::Avx2, avx2::dot, avx2::axpy, avx2::gemm_nt, avx2::gemm_tn,
                        avx2::gemm_nn};
#endif

const KernelTable* select_default() {
    const char* env = std::getenv("SPOOFSIM_ISA");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return &kScalar;
    return &table_for(Isa::Avx2);
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

bool avx2_available() {
#if defined(SPOOFSIM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok;
#else
    return false;
#endif
}

const KernelTable& table_for(Isa isa) {
#ifdef SPOOFSIM_HAVE_AVX2
    if (isa == Isa::Avx2 && avx2_available()) return kAvx2;
#endif
    (void)isa;
    return kScalar;
}

const KernelTable& active() {
    const KernelTable* t = g_active.load(std::memory_order_acquire);
    if (t == nullptr) {
        t = select_default();
        g_active.store(t, std::memory_order_release);
    }
    return *t;
}

void set_active(Isa isa) { g_active.store(&table_for(isa), std::memory_order_release); }

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

}  // namespace spoofsim::kernels
