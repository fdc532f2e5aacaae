// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//
// Signal containers shared by every stage: raw sampled series, fixed-size
// normalized windows, resampling and window extraction.

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ppgclean {

inline constexpr std::size_t kWindowSize = 256;
inline constexpr double kPipelineRateHz = 32.0;

/// A sampled series in arbitrary units. Non-empty, finite, positive rate.
class RawSignal {
public:
    RawSignal(std::vector<double> samples, double rate_hz, std::string label = {});

    std::span<const double> samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    double rate_hz() const noexcept { return rate_hz_; }
    const std::string& label() const noexcept { return label_; }

private:
    std::vector<double> samples_;
    double rate_hz_;
    std::string label_;
};

/// 256 samples in [0, 1]. Windows produced by normalize() also span the
/// full range; windows decoded from images only satisfy the bounds.
class SignalWindow {
public:
    using Samples = std::array<double, kWindowSize>;

    /// Validates the [0, 1] bound; throws InvalidInput otherwise.
    static SignalWindow from_unit_samples(std::span<const double> samples,
                                          std::size_t origin_index = 0,
                                          double rate_hz = kPipelineRateHz);

    const Samples& samples() const noexcept { return samples_; }
    double operator[](std::size_t i) const noexcept { return samples_[i]; }
    double rate_hz() const noexcept { return rate_hz_; }
    std::size_t origin_index() const noexcept { return origin_index_; }

private:
    SignalWindow() = default;

    Samples samples_{};
    double rate_hz_ = kPipelineRateHz;
    std::size_t origin_index_ = 0;
};

/// Un-normalized slice of a RawSignal.
struct RawSegment {
    std::vector<double> samples;
    std::size_t origin_index = 0;
};

/// Linear interpolation onto a uniform grid at dst_rate_hz. Output length is
/// floor(n * dst / src); positions past the last source sample hold it.
RawSignal resample(const RawSignal& signal, double dst_rate_hz);

/// out[i] = (in[i] - min) / (max - min). Throws DegenerateWindow when the
/// input is constant and InvalidInput on wrong length or non-finite data.
SignalWindow normalize(std::span<const double> window, std::size_t origin_index = 0,
                       double rate_hz = kPipelineRateHz);

/// Consecutive windows of `size` samples starting every `stride` samples;
/// the trailing remainder is dropped.
std::vector<RawSegment> window_split(const RawSignal& signal, std::size_t size = kWindowSize,
                                     std::size_t stride = kWindowSize);

}  // namespace ppgclean
