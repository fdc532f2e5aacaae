// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "ppgclean/error.hpp"

namespace ppgclean {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::DegenerateWindow: return "degenerate-window";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Format: return "format";
    case ErrorKind::BadMagic: return "bad-magic";
    case ErrorKind::VersionMismatch: return "version-mismatch";
    case ErrorKind::Truncated: return "truncated";
    case ErrorKind::Topology: return "topology";
    case ErrorKind::Ingestion: return "ingestion";
    case ErrorKind::Rate: return "rate";
    case ErrorKind::Range: return "range";
    case ErrorKind::Config: return "config";
    case ErrorKind::Path: return "path";
    case ErrorKind::MissingTranslation: return "missing-translation";
    case ErrorKind::InsufficientPeaks: return "insufficient-peaks";
    case ErrorKind::UndefinedSignalPower: return "undefined-signal-power";
    }
    return "unknown";
}

}  // namespace ppgclean
