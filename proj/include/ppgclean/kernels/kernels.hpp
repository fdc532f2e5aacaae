// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <cstdint>

namespace ppgclean::kernels {

// Inner loops of the detector and the image codec. Each ISA provides one
// table; the scalar table is the reference every other variant is tested
// against.
//
// conv1d_relu layout:
//   in     : length x channels, row-major
//   packed : width x channels x filters (filter index fastest)
//   bias   : filters
//   out    : (length - width + 1) x filters, row-major, ReLU applied
//
// encode_row writes out[j] = min(255, floor((pivot + samples[j]) * 128)) for
// samples in [0, 1]; all variants must agree bit for bit.
struct KernelTable {
    const char* name;

    void (*conv1d_relu)(const double* in, std::size_t length, std::size_t channels,
                        const double* packed, const double* bias, std::size_t filters,
                        std::size_t width, double* out);

    double (*dot)(const double* a, const double* b, std::size_t n);

    void (*encode_row)(double pivot, const double* samples, std::size_t n, std::uint8_t* out);
};

const KernelTable& scalar_kernels() noexcept;

/// nullptr when the variant was not compiled in or the CPU lacks AVX2+FMA.
const KernelTable* avx2_kernels() noexcept;

/// Best table for this CPU. Setting PPGCLEAN_KERNELS=scalar in the
/// environment forces the reference path.
const KernelTable& active_kernels() noexcept;

}  // namespace ppgclean::kernels
