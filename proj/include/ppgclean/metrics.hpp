// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//
// Heart-rate domain evaluation: beat detection, per-beat HR, RMSE and
// peak-to-peak error (PPE) in BPM, improvement ratios and tabular reports.

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ppgclean {

struct PeakSeries {
    std::vector<std::size_t> indices;
    double rate_hz = 0.0;
};

/// Minimum spacing between accepted peaks (180 BPM ceiling).
inline constexpr double kRefractorySeconds = 0.33;
/// Largest time offset at which an estimated beat can pair with a reference beat.
inline constexpr double kMatchToleranceSeconds = 0.5;

/// Local maxima (first sample of a plateau) strictly above the signal mean.
/// A candidate closer than the refractory gap to the last accepted peak
/// replaces it only when strictly higher. Needs at least two seconds.
PeakSeries detect_peaks(std::span<const double> signal, double rate_hz);

/// 60 * rate / (idx[k+1] - idx[k]) per consecutive pair.
std::vector<double> hr_bpm(const PeakSeries& peaks);

double rmse_bpm(std::span<const double> estimate, std::span<const double> reference);

/// One reference beat (the interval ending at reference peak k, k >= 1) and
/// the estimated beat greedily paired with it, if any.
struct BeatPair {
    std::size_t reference_index = 0;
    double reference_hr = 0.0;
    std::optional<double> estimate_hr;
};

/// Reference beats are visited in order; each takes the nearest unused
/// estimated beat within the tolerance (earliest on ties).
std::vector<BeatPair> match_beats(const PeakSeries& estimate, const PeakSeries& reference);

/// Mean |HR_est - HR_ref| over reference beats; an unmatched beat costs its
/// reference HR.
double ppe_bpm(const PeakSeries& estimate, const PeakSeries& reference);

/// RMSE over the same beat pairing as ppe_bpm, with the same miss penalty.
double rmse_matched_bpm(const PeakSeries& estimate, const PeakSeries& reference);

/// HR sampled once per second by linear interpolation between beat times
/// (held constant outside the first/last beat).
std::vector<double> hr_per_second(const PeakSeries& peaks, std::size_t seconds);

/// noisy / gen; +infinity when gen is zero.
double improvement_ratio(double noisy_err, double gen_err);

struct EvalRow {
    std::string noise_type;
    std::string intensity;
    double snr_db = 0.0;
    double rmse_gen_bpm = 0.0;
    double rmse_noisy_bpm = 0.0;
    double rmse_improvement = 0.0;
    double ppe_gen_bpm = 0.0;
    double ppe_noisy_bpm = 0.0;
    double ppe_improvement = 0.0;
};

/// Fills both improvement columns from the error columns.
EvalRow make_row(std::string noise_type, std::string intensity, double snr_db, double rmse_gen,
                 double rmse_noisy, double ppe_gen, double ppe_noisy);

struct EvalReport {
    std::vector<EvalRow> rows;
    /// Column means; improvement entries are means of per-row ratios.
    EvalRow averages;
};

EvalReport aggregate(std::span<const EvalRow> rows);

/// Rows whose intensity matches, in order.
std::vector<EvalRow> select_intensity(std::span<const EvalRow> rows, const std::string& intensity);

/// Header: Noise Type,Intensity,S/N (dB),RMSE Gen. (BPM),RMSE Nsy. (BPM),
/// RMSE Imprv.,PPE Gen. (BPM),PPE Nsy. (BPM),PPE Imprv.  The last line is the
/// "Average" row. Infinite values are written as "inf".
void write_report_csv(const EvalReport& report, const std::filesystem::path& path);

/// Reads rows in the same layout; an "Average" row, if present, is skipped.
std::vector<EvalRow> read_rows_csv(const std::filesystem::path& path);

}  // namespace ppgclean
