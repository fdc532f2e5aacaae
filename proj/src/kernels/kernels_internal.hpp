// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "ppgclean/kernels/kernels.hpp"

namespace ppgclean::kernels {

#if defined(PPGCLEAN_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif

}  // namespace ppgclean::kernels
