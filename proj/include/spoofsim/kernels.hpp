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

#include <cstddef>

// Dense linear-algebra primitives used by the network code.
// All matrices are row-major and contiguous.

namespace spoofsim::kernels {

enum class Isa { Scalar, Avx2 };

// out = sum_i a[i] * b[i]
using DotFn = double (*)(const double* a, const double* b, std::size_t n);
// y += alpha * x
using AxpyFn = void (*)(double alpha, const double* x, double* y, std::size_t n);
// C[MxN] = beta*C + A[MxK] * B[NxK]^T
using GemmNtFn = void (*)(std::size_t m, std::size_t n, std::size_t k, const double* a,
                          const double* b, double* c, double beta);
// C[MxN] = beta*C + A[KxM]^T * B[KxN]
using GemmTnFn = void (*)(std::size_t m, std::size_t n, std::size_t k, const double* a,
                          const double* b, double* c, double beta);
// C[MxN] = beta*C + A[MxK] * B[KxN]
using GemmNnFn = void (*)(std::size_t m, std::size_t n, std::size_t k, const double* a,
                          const double* b, double* c, double beta);

struct KernelTable {
    Isa isa;
    DotFn dot;
    AxpyFn axpy;
    GemmNtFn gemm_nt;
    GemmTnFn gemm_tn;
    GemmNnFn gemm_nn;
};

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
             double* c, double beta);
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
             double* c, double beta);
void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
             double* c, double beta);
}  // namespace scalar

#ifdef SPOOFSIM_HAVE_AVX2
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
             double* c, double beta);
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
             double* c, double beta);
void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
             double* c, double beta);
}  // namespace avx2
#endif

// True when the AVX2 variants are compiled in and the CPU reports AVX2 and FMA.
bool avx2_available();

// Table for an explicit ISA. Requesting Avx2 on a machine without it returns the scalar table.
const KernelTable& table_for(Isa isa);

// The process-wide table. Selected once on first use: AVX2 when available unless
// the environment variable SPOOFSIM_ISA=scalar is set.
const KernelTable& active();

// Override the process-wide choice (tests and benchmarks).
void set_active(Isa isa);

const char* isa_name(Isa isa);

inline double dot(const double* a, const double* b, std::size_t n) {
    return active().dot(a, b, n);
}
inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
    active().axpy(alpha, x, y, n);
}
inline void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a,
                    const double* b, double* c, double beta) {
    active().gemm_nt(m, n, k, a, b, c, beta);
}
inline void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a,
                    const double* b, double* c, double beta) {
    active().gemm_tn(m, n, k, a, b, c, beta);
}
inline void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a,
                    const double* b, double* c, double beta) {
    active().gemm_nn(m, n, k, a, b, c, beta);
}

}  // namespace spoofsim::kernels
