// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "ppgclean/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ppgclean/error.hpp"

namespace ppgclean {

RawSignal::RawSignal(std::vector<double> samples, double rate_hz, std::string label)
    : samples_(std::move(samples)), rate_hz_(rate_hz), label_(std::move(label)) {
    if (samples_.empty()) {
        throw Error(ErrorKind::InvalidInput, "signal '" + label_ + "' has no samples");
    }
    if (!(rate_hz_ > 0.0) || !std::isfinite(rate_hz_)) {
        throw Error(ErrorKind::InvalidInput, "signal '" + label_ + "' has non-positive rate");
    }
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (!std::isfinite(samples_[i])) {
            throw Error(ErrorKind::InvalidInput,
                        "signal '" + label_ + "' has a non-finite sample at " + std::to_string(i));
        }
    }
}

SignalWindow SignalWindow::from_unit_samples(std::span<const double> samples,
                                             std::size_t origin_index, double rate_hz) {
    if (samples.size() != kWindowSize) {
        throw Error(ErrorKind::InvalidInput,
                    "window needs 256 samples, got " + std::to_string(samples.size()));
    }
    SignalWindow w;
    for (std::size_t i = 0; i < kWindowSize; ++i) {
        // NaN fails both comparisons
        if (!(samples[i] >= 0.0 && samples[i] <= 1.0)) {
            throw Error(ErrorKind::InvalidInput,
                        "window sample " + std::to_string(i) + " outside [0, 1]");
        }
        w.samples_[i] = samples[i];
    }
    w.origin_index_ = origin_index;
    w.rate_hz_ = rate_hz;
    return w;
}

RawSignal resample(const RawSignal& signal, double dst_rate_hz) {
    if (!(dst_rate_hz > 0.0) || !std::isfinite(dst_rate_hz)) {
        throw Error(ErrorKind::InvalidInput, "destination rate must be positive");
    }
    const auto src = signal.samples();
    const std::size_t n = src.size();
    if (n < 2) {
        throw Error(ErrorKind::InvalidInput, "resample needs at least 2 samples");
    }
    if (dst_rate_hz == signal.rate_hz()) {
        return RawSignal(std::vector<double>(src.begin(), src.end()), dst_rate_hz, signal.label());
    }

    const double ratio = signal.rate_hz() / dst_rate_hz;
    const auto out_len = static_cast<std::size_t>(
        std::floor(static_cast<long double>(n) * dst_rate_hz / signal.rate_hz()));
    if (out_len == 0) {
        throw Error(ErrorKind::InvalidInput, "resample output would be empty");
    }

    std::vector<double> out(out_len);
    for (std::size_t k = 0; k < out_len; ++k) {
        const double pos = static_cast<double>(k) * ratio;
        const auto i = static_cast<std::size_t>(pos);
        if (i >= n - 1) {
            out[k] = src[n - 1];
            continue;
        }
        const double frac = pos - static_cast<double>(i);
        const double a = src[i];
        const double b = src[i + 1];
        // rounding must not push the value outside the bracketing samples
        out[k] = std::clamp(a + frac * (b - a), std::min(a, b), std::max(a, b));
    }
    return RawSignal(std::move(out), dst_rate_hz, signal.label());
}

SignalWindow normalize(std::span<const double> window, std::size_t origin_index, double rate_hz) {
    if (window.size() != kWindowSize) {
        throw Error(ErrorKind::InvalidInput,
                    "normalize needs 256 samples, got " + std::to_string(window.size()));
    }
    if (!std::all_of(window.begin(), window.end(), [](double v) { return std::isfinite(v); })) {
        throw Error(ErrorKind::InvalidInput, "normalize input has non-finite samples");
    }
    const auto [lo_it, hi_it] = std::minmax_element(window.begin(), window.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (!(hi > lo)) {
        throw Error(ErrorKind::DegenerateWindow,
                    "window at offset " + std::to_string(origin_index) + " is constant");
    }
    const double span = hi - lo;
    std::array<double, kWindowSize> scaled{};
    for (std::size_t i = 0; i < kWindowSize; ++i) {
        scaled[i] = (window[i] - lo) / span;
    }
    return SignalWindow::from_unit_samples(scaled, origin_index, rate_hz);
}

std::vector<RawSegment> window_split(const RawSignal& signal, std::size_t size, std::size_t stride) {
    if (size == 0 || stride == 0) {
        throw Error(ErrorKind::InvalidInput, "window size and stride must be positive");
    }
    const auto src = signal.samples();
    std::vector<RawSegment> out;
    if (src.size() < size) {
        return out;
    }
    const std::size_t count = (src.size() - size) / stride + 1;
    out.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        const std::size_t offset = w * stride;
        out.push_back({std::vector<double>(src.begin() + offset, src.begin() + offset + size), offset});
    }
    return out;
}

}  // namespace ppgclean
