// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>

#include "ppgclean/kernels/kernels.hpp"

namespace ppgclean::kernels {
namespace {

void conv1d_relu_scalar(const double* in, std::size_t length, std::size_t channels,
                        const double* packed, const double* bias, std::size_t filters,
                        std::size_t width, double* out) {
    const std::size_t out_len = length - width + 1;
    const std::size_t taps = width * channels;
    for (std::size_t t = 0; t < out_len; ++t) {
        // the receptive field of output t is the contiguous slice in[t*C, (t+W)*C)
        const double* field = in + t * channels;
        double* row = out + t * filters;
        for (std::size_t k = 0; k < filters; ++k) {
            double acc = bias[k];
            for (std::size_t j = 0; j < taps; ++j) {
                acc += field[j] * packed[j * filters + k];
            }
            row[k] = acc > 0.0 ? acc : 0.0;
        }
    }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

void encode_row_scalar(double pivot, const double* samples, std::size_t n, std::uint8_t* out) {
    for (std::size_t j = 0; j < n; ++j) {
        const double raw = std::floor((pivot + samples[j]) * 128.0);
        out[j] = static_cast<std::uint8_t>(std::min(raw, 255.0));
    }
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
    static const KernelTable table{"scalar", conv1d_relu_scalar, dot_scalar, encode_row_scalar};
    return table;
}

}  // namespace ppgclean::kernels
