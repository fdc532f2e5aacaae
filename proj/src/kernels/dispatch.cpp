// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace ppgclean::kernels {
namespace {

bool cpu_has_avx2_fma() noexcept {
#if defined(PPGCLEAN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

}  // namespace

const KernelTable* avx2_kernels() noexcept {
#if defined(PPGCLEAN_HAVE_AVX2)
    static const bool supported = cpu_has_avx2_fma();
    return supported ? &avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active_kernels() noexcept {
    static const KernelTable* chosen = [] {
        const char* forced = std::getenv("PPGCLEAN_KERNELS");
        if (forced != nullptr && std::string_view(forced) == "scalar") {
            return &scalar_kernels();
        }
        const KernelTable* simd = avx2_kernels();
        return simd != nullptr ? simd : &scalar_kernels();
    }();
    return *chosen;
}

}  // namespace ppgclean::kernels
