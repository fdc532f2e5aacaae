// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//
// Test-only fixtures and independent reference implementations. Nothing
// here calls into the code paths it is used to check.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ppgclean/dataset.hpp"
#include "ppgclean/detector.hpp"
#include "ppgclean/error.hpp"
#include "ppgclean/noise.hpp"

namespace ppgclean::testing {

/// Kind of the Error thrown by fn, or nullopt when it returns normally.
template <typename Fn>
std::optional<ErrorKind> error_kind(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return std::nullopt;
}

/// Message of the Error thrown by fn, or empty.
template <typename Fn>
std::string error_message(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

class TempDir {
public:
    explicit TempDir(const std::string& tag = "ppgclean");
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

std::string read_bytes(const std::filesystem::path& path);
void write_bytes(const std::filesystem::path& path, const std::string& bytes);

/// Nested-loop valid cross-correlation + ReLU over [filter][tap][channel]
/// kernels, accumulated in long double.
std::vector<double> naive_conv1d(const std::vector<double>& input, std::size_t length, std::size_t channels,
                                 const std::vector<double>& kernels, const std::vector<double>& bias,
                                 std::size_t filters, std::size_t width);

/// Block-at-a-time evaluation of the accelerometer noise envelope.
std::vector<double> reference_motion_noise(const std::vector<AccelSample>& samples);

std::vector<AccelSample> random_trace(std::mt19937_64& gen, std::size_t n);

/// Pulse-like PPG at `bpm`: a systolic Gaussian per beat plus a smaller
/// dicrotic wave and slow baseline wander.
std::vector<double> synthetic_ppg(std::size_t n, double rate_hz, double bpm, double phase_s = 0.1);

/// Narrow Gaussian pulses exactly `period` samples apart, first at `first`.
std::vector<double> pulse_train(std::size_t n, std::size_t period, std::size_t first);

/// Record of `seconds` at 125 Hz with reference HR at 1 Hz.
BidmcRecord synthetic_bidmc(const std::string& id, double bpm, double seconds = 480.0);

/// E4-style accelerometer CSV of `n` samples with motion amplitude `counts`.
void write_e4_file(const std::filesystem::path& path, std::size_t n, int counts, std::uint64_t seed,
                   int declared_rate = 32);

/// Samples of `values` with random in-range jitter; every window spans
/// [0, 1] after normalization.
std::vector<double> random_unit_window(std::mt19937_64& gen);

}  // namespace ppgclean::testing
