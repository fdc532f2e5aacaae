// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//
// Compiled with -mavx2 -mfma. Nothing in this file may run before the
// dispatcher has confirmed CPU support.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "kernels_internal.hpp"

namespace ppgclean::kernels {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

void conv1d_relu_avx2(const double* in, std::size_t length, std::size_t channels,
                      const double* packed, const double* bias, std::size_t filters,
                      std::size_t width, double* out) {
    const std::size_t out_len = length - width + 1;
    const std::size_t taps = width * channels;
    const __m256d zero = _mm256_setzero_pd();

    for (std::size_t t = 0; t < out_len; ++t) {
        const double* field = in + t * channels;
        double* row = out + t * filters;
        std::size_t k = 0;

        // 16 filters per pass: each broadcast input tap feeds four accumulators
        for (; k + 16 <= filters; k += 16) {
            __m256d a0 = _mm256_loadu_pd(bias + k);
            __m256d a1 = _mm256_loadu_pd(bias + k + 4);
            __m256d a2 = _mm256_loadu_pd(bias + k + 8);
            __m256d a3 = _mm256_loadu_pd(bias + k + 12);
            for (std::size_t j = 0; j < taps; ++j) {
                const __m256d x = _mm256_broadcast_sd(field + j);
                const double* w = packed + j * filters + k;
                a0 = _mm256_fmadd_pd(x, _mm256_loadu_pd(w), a0);
                a1 = _mm256_fmadd_pd(x, _mm256_loadu_pd(w + 4), a1);
                a2 = _mm256_fmadd_pd(x, _mm256_loadu_pd(w + 8), a2);
                a3 = _mm256_fmadd_pd(x, _mm256_loadu_pd(w + 12), a3);
            }
            _mm256_storeu_pd(row + k, _mm256_max_pd(a0, zero));
            _mm256_storeu_pd(row + k + 4, _mm256_max_pd(a1, zero));
            _mm256_storeu_pd(row + k + 8, _mm256_max_pd(a2, zero));
            _mm256_storeu_pd(row + k + 12, _mm256_max_pd(a3, zero));
        }
        for (; k + 4 <= filters; k += 4) {
            __m256d a = _mm256_loadu_pd(bias + k);
            for (std::size_t j = 0; j < taps; ++j) {
                a = _mm256_fmadd_pd(_mm256_broadcast_sd(field + j),
                                    _mm256_loadu_pd(packed + j * filters + k), a);
            }
            _mm256_storeu_pd(row + k, _mm256_max_pd(a, zero));
        }
        for (; k < filters; ++k) {
            double acc = bias[k];
            for (std::size_t j = 0; j < taps; ++j) {
                acc = std::fma(field[j], packed[j * filters + k], acc);
            }
            row[k] = acc > 0.0 ? acc : 0.0;
        }
    }
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        acc = std::fma(a[i], b[i], acc);
    }
    return acc;
}

void encode_row_avx2(double pivot, const double* samples, std::size_t n, std::uint8_t* out) {
    const __m256d p = _mm256_set1_pd(pivot);
    const __m256d scale = _mm256_set1_pd(128.0);
    const __m256d ceiling = _mm256_set1_pd(255.0);
    std::size_t j = 0;
    for (; j + 8 <= n; j += 8) {
        __m256d lo = _mm256_mul_pd(_mm256_add_pd(p, _mm256_loadu_pd(samples + j)), scale);
        __m256d hi = _mm256_mul_pd(_mm256_add_pd(p, _mm256_loadu_pd(samples + j + 4)), scale);
        lo = _mm256_min_pd(_mm256_floor_pd(lo), ceiling);
        hi = _mm256_min_pd(_mm256_floor_pd(hi), ceiling);
        const __m128i words = _mm_packs_epi32(_mm256_cvttpd_epi32(lo), _mm256_cvttpd_epi32(hi));
        _mm_storel_epi64(reinterpret_cast<__m128i*>(out + j), _mm_packus_epi16(words, words));
    }
    for (; j < n; ++j) {
        const double raw = std::floor((pivot + samples[j]) * 128.0);
        out[j] = static_cast<std::uint8_t>(std::min(raw, 255.0));
    }
}

}  // namespace

const KernelTable& avx2_table() noexcept {
    static const KernelTable table{"avx2", conv1d_relu_avx2, dot_avx2, encode_row_avx2};
    return table;
}

}  // namespace ppgclean::kernels
