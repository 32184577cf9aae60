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

#include <immintrin.h>

#include <cstring>
#include <vector>

#include "spoofsim/kernels.hpp"

namespace spoofsim::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

void scale_c(std::size_t count, double* c, double beta) {
    if (beta == 0.0) {
        std::memset(c, 0, count * sizeof(double));
    } else if (beta != 1.0) {
        const __m256d vb = _mm256_set1_pd(beta);
        std::size_t i = 0;
        for (; i + 4 <= count; i += 4) _mm256_storeu_pd(c + i, _mm256_mul_pd(vb, _mm256_loadu_pd(c + i)));
        for (; i < count; ++i) c[i] *= beta;
    }
}

// c[0..n) += sum_t coef[t] * rows[t][0..n)
void accumulate_rows(double* c, std::size_t n, const double* coef, const double* const* rows,
                     std::size_t count) {
    std::size_t t = 0;
    for (; t + 4 <= count; t += 4) {
        const __m256d a0 = _mm256_set1_pd(coef[t]);
        const __m256d a1 = _mm256_set1_pd(coef[t + 1]);
        const __m256d a2 = _mm256_set1_pd(coef[t + 2]);
        const __m256d a3 = _mm256_set1_pd(coef[t + 3]);
        const double* r0 = rows[t];
        const double* r1 = rows[t + 1];
        const double* r2 = rows[t + 2];
        const double* r3 = rows[t + 3];
        std::size_t j = 0;
        for (; j + 4 <= n; j += 4) {
            __m256d acc = _mm256_loadu_pd(c + j);
            acc = _mm256_fmadd_pd(a0, _mm256_loadu_pd(r0 + j), acc);
            acc = _mm256_fmadd_pd(a1, _mm256_loadu_pd(r1 + j), acc);
            acc = _mm256_fmadd_pd(a2, _mm256_loadu_pd(r2 + j), acc);
            acc = _mm256_fmadd_pd(a3, _mm256_loadu_pd(r3 + j), acc);
            _mm256_storeu_pd(c + j, acc);
        }
        for (; j < n; ++j) {
            c[j] += coef[t] * r0[j] + coef[t + 1] * r1[j] + coef[t + 2] * r2[j] + coef[t + 3] * r3[j];
        }
    }
    for (; t < count; ++t) axpy(coef[t], rows[t], c, n);
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
    __m256d s0 = _mm256_setzero_pd();
    __m256d s1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
        s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), s1);
    }
    for (; i + 4 <= n; i += 4) s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    double s = hsum(_mm256_add_pd(s0, s1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
             double* c, double beta) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* ai = a + i * k;
        double* ci = c + i * n;
        std::size_t j = 0;
        for (; j + 4 <= n; j += 4) {
            const double* b0 = b + j * k;
            const double* b1 = b0 + k;
            const double* b2 = b1 + k;
            const double* b3 = b2 + k;
            __m256d s0 = _mm256_setzero_pd();
            __m256d s1 = _mm256_setzero_pd();
            __m256d s2 = _mm256_setzero_pd();
            __m256d s3 = _mm256_setzero_pd();
            std::size_t p = 0;
            for (; p + 4 <= k; p += 4) {
                const __m256d va = _mm256_loadu_pd(ai + p);
                s0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(b0 + p), s0);
                s1 = _mm256_fmadd_pd(va, _mm256_loadu_pd(b1 + p), s1);
                s2 = _mm256_fmadd_pd(va, _mm256_loadu_pd(b2 + p), s2);
                s3 = _mm256_fmadd_pd(va, _mm256_loadu_pd(b3 + p), s3);
            }
            double r[4] = {hsum(s0), hsum(s1), hsum(s2), hsum(s3)};
            for (; p < k; ++p) {
                r[0] += ai[p] * b0[p];
                r[1] += ai[p] * b1[p];
                r[2] += ai[p] * b2[p];
                r[3] += ai[p] * b3[p];
            }
            for (int q = 0; q < 4; ++q) ci[j + q] = (beta == 0.0 ? 0.0 : beta * ci[j + q]) + r[q];
        }
        for (; j < n; ++j) {
            const double s = dot(ai, b + j * k, k);
            ci[j] = (beta == 0.0 ? 0.0 : beta * ci[j]) + s;
        }
    }
}

void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
             double* c, double beta) {
    scale_c(m * n, c, beta);
    std::vector<double> coef(k);
    std::vector<const double*> rows(k);
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t cnt = 0;
        for (std::size_t p = 0; p < k; ++p) {
            const double v = a[p * m + i];
            if (v != 0.0) {
                coef[cnt] = v;
                rows[cnt++] = b + p * n;
            }
        }
        accumulate_rows(c + i * n, n, coef.data(), rows.data(), cnt);
    }
}

void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a, const double* b,
             double* c, double beta) {
    scale_c(m * n, c, beta);
    std::vector<double> coef(k);
    std::vector<const double*> rows(k);
    for (std::size_t i = 0; i < m; ++i) {
        const double* ai = a + i * k;
        std::size_t cnt = 0;
        for (std::size_t p = 0; p < k; ++p) {
            if (ai[p] != 0.0) {
                coef[cnt] = ai[p];
                rows[cnt++] = b + p * n;
            }
        }
        accumulate_rows(c + i * n, n, coef.data(), rows.data(), cnt);
    }
}

}  // namespace spoofsim::kernels::avx2
