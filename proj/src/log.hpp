// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <iostream>
#include <string_view>

namespace ppgclean {

inline void log_warning(std::string_view message) {
    std::cerr << "warning: " << message << '\n';
}

}  // namespace ppgclean
