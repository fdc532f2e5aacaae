// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ppgclean {

enum class ErrorKind {
    InvalidInput,
    DegenerateWindow,
    Shape,
    Format,
    BadMagic,
    VersionMismatch,
    Truncated,
    Topology,
    Ingestion,
    Rate,
    Range,
    Config,
    Path,
    MissingTranslation,
    InsufficientPeaks,
    UndefinedSignalPower,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (and the CLI
/// exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace ppgclean
