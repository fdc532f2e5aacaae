// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "ppgclean/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ppgclean/error.hpp"

namespace ppgclean {

AccelSample AccelSample::clipped(double x, double y, double z) noexcept {
    auto clip = [](double v) { return std::clamp(v, -kAccelRangeG, kAccelRangeG); };
    return {clip(x), clip(y), clip(z)};
}

std::string_view to_string(Activity activity) noexcept {
    switch (activity) {
    case Activity::FingerTapping: return "finger_tapping";
    case Activity::Waving: return "waving";
    case Activity::ShakingHands: return "shaking_hands";
    case Activity::RunningArmSwing: return "running_arm_swing";
    case Activity::FistOpenClose: return "fist_open_close";
    case Activity::Arm3d: return "arm_3d";
    }
    return "unknown";
}

std::string_view to_string(Intensity intensity) noexcept {
    return intensity == Intensity::Low ? "low" : "high";
}

std::optional<Activity> parse_activity(std::string_view text) noexcept {
    for (Activity a : kAllActivities) {
        if (to_string(a) == text) {
            return a;
        }
    }
    return std::nullopt;
}

std::optional<Intensity> parse_intensity(std::string_view text) noexcept {
    if (text == "low") return Intensity::Low;
    if (text == "high") return Intensity::High;
    return std::nullopt;
}

double max_diff_step(const AccelSample& curr, const AccelSample& prev) noexcept {
    return std::max({std::abs(curr.x - prev.x), std::abs(curr.y - prev.y), std::abs(curr.z - prev.z)});
}

std::vector<double> motion_noise(const AccelTrace& trace) {
    if (trace.rate_hz != kPipelineRateHz) {
        throw Error(ErrorKind::Rate, "motion_noise expects a 32 Hz trace");
    }
    const auto& s = trace.samples;
    if (s.size() < kNoiseBlock) {
        throw Error(ErrorKind::InvalidInput,
                    "trace has " + std::to_string(s.size()) + " samples, need at least 32");
    }

    std::vector<double> out(s.size());
    NoiseModelState state;
    for (std::size_t i = 0; i < s.size(); ++i) {
        // the first sample has no predecessor and contributes nothing
        if (i > 0) {
            state.sum += max_diff_step(s[i], s[i - 1]);
        }
        out[i] = state.avg;
        if ((i + 1) % kNoiseBlock == 0) {
            state.avg = ema_update(state.avg, state.sum);
            state.sum = 0.0;
        }
    }
    return out;
}

namespace {

double ac_power(std::span<const double> x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double power = 0.0;
    for (double v : x) power += (v - mean) * (v - mean);
    return power / static_cast<double>(x.size());
}

}  // namespace

double snr_db(std::span<const double> signal, std::span<const double> noise) {
    if (signal.size() != noise.size() || signal.empty()) {
        throw Error(ErrorKind::InvalidInput, "snr_db needs equal, non-empty sequences");
    }
    const double pn = ac_power(noise);
    if (pn == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double ps = ac_power(signal);
    if (ps == 0.0) {
        throw Error(ErrorKind::UndefinedSignalPower, "signal is constant; S/N undefined");
    }
    return 10.0 * std::log10(ps / pn);
}

NoisyRecord mix(const RawSignal& clean, std::span<const double> noise, double gain,
                Activity activity, Intensity intensity) {
    if (clean.size() != noise.size()) {
        throw Error(ErrorKind::InvalidInput, "mix: clean has " + std::to_string(clean.size()) +
                                                 " samples, noise has " + std::to_string(noise.size()));
    }
    if (!(gain >= 0.0) || !std::isfinite(gain)) {
        throw Error(ErrorKind::InvalidInput, "mix: gain must be finite and non-negative");
    }
    if (clean.rate_hz() != kPipelineRateHz) {
        throw Error(ErrorKind::Rate, "mix: clean signal must be at 32 Hz");
    }

    const auto c = clean.samples();
    std::vector<double> scaled(noise.size());
    std::vector<double> noisy(c.begin(), c.end());
    if (gain != 0.0) {
        for (std::size_t i = 0; i < noisy.size(); ++i) {
            scaled[i] = gain * noise[i];
            noisy[i] = c[i] + scaled[i];
        }
    }
    const double snr = snr_db(c, scaled);
    return NoisyRecord{
        clean,
        RawSignal(std::move(noisy), clean.rate_hz(), clean.label()),
        std::vector<double>(noise.begin(), noise.end()),
        gain,
        snr,
        activity,
        intensity,
    };
}

}  // namespace ppgclean
