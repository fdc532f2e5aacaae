// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//
// Motion-artifact noise synthesized from wrist accelerometer traces.
//
// The envelope is built from one-second (32 sample) blocks. Within a block,
// the largest per-axis change between consecutive samples is accumulated;
// at the block boundary the accumulator feeds an exponential moving average
//
//     avg <- 0.9 * avg + 0.1 * sum / 32
//
// and is reset. Every sample of block k emits the average computed at the
// end of block k - 1 (block 0 emits the initial average, 0).

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ppgclean/signal.hpp"

namespace ppgclean {

inline constexpr std::size_t kNoiseBlock = 32;
inline constexpr double kAccelRangeG = 2.0;
/// Two minutes at 32 Hz.
inline constexpr std::size_t kSegmentSamples = 3840;

struct AccelSample {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    /// Clips each axis to the sensor range [-2 g, +2 g].
    static AccelSample clipped(double x, double y, double z) noexcept;
};

enum class Activity {
    FingerTapping,
    Waving,
    ShakingHands,
    RunningArmSwing,
    FistOpenClose,
    Arm3d,
};

enum class Intensity { Low, High };

std::string_view to_string(Activity activity) noexcept;
std::string_view to_string(Intensity intensity) noexcept;
std::optional<Activity> parse_activity(std::string_view text) noexcept;
std::optional<Intensity> parse_intensity(std::string_view text) noexcept;

inline constexpr Activity kAllActivities[] = {
    Activity::FingerTapping, Activity::Waving,        Activity::ShakingHands,
    Activity::RunningArmSwing, Activity::FistOpenClose, Activity::Arm3d,
};

struct AccelTrace {
    std::vector<AccelSample> samples;
    double rate_hz = kPipelineRateHz;
    Activity activity = Activity::FingerTapping;
    Intensity intensity = Intensity::Low;
};

struct NoiseModelState {
    double avg = 0.0;
    double sum = 0.0;
};

struct NoisyRecord {
    RawSignal clean;
    RawSignal noisy;
    std::vector<double> noise;
    double gain = 1.0;
    double snr_db = 0.0;
    Activity activity = Activity::FingerTapping;
    Intensity intensity = Intensity::Low;
};

/// max(|dx|, |dy|, |dz|) between consecutive samples.
double max_diff_step(const AccelSample& curr, const AccelSample& prev) noexcept;

constexpr double ema_update(double avg, double sum) noexcept {
    return 0.9 * avg + 0.1 * (sum / static_cast<double>(kNoiseBlock));
}

/// Per-sample noise envelope, same length as the trace. Requires a 32 Hz
/// trace of at least one block.
std::vector<double> motion_noise(const AccelTrace& trace);

/// 10 log10(P_signal / P_noise) with P the variance about each sequence's own
/// mean. Returns +infinity when the noise has no power; throws
/// UndefinedSignalPower when the signal is constant.
double snr_db(std::span<const double> signal, std::span<const double> noise);

/// noisy = clean + gain * noise. The clean signal must be at 32 Hz.
NoisyRecord mix(const RawSignal& clean, std::span<const double> noise, double gain,
                Activity activity = Activity::FingerTapping, Intensity intensity = Intensity::Low);

}  // namespace ppgclean
