// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "ppgclean/metrics.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "csv.hpp"
#include "ppgclean/error.hpp"

namespace ppgclean {

PeakSeries detect_peaks(std::span<const double> x, double rate_hz) {
    if (!(rate_hz > 0.0)) {
        throw Error(ErrorKind::InvalidInput, "detect_peaks: rate must be positive");
    }
    const std::size_t n = x.size();
    if (static_cast<double>(n) < 2.0 * rate_hz) {
        throw Error(ErrorKind::InvalidInput, "detect_peaks: need at least two seconds of samples, got " +
                                                 std::to_string(n));
    }
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double gap = kRefractorySeconds * rate_hz;

    PeakSeries peaks;
    peaks.rate_hz = rate_hz;
    std::size_t i = 1;
    while (i + 1 < n) {
        if (!(x[i] > x[i - 1])) {
            ++i;
            continue;
        }
        std::size_t end = i;
        while (end + 1 < n && x[end + 1] == x[i]) ++end;
        const bool falls_after = end + 1 < n && x[end + 1] < x[i];
        if (falls_after && x[i] > mean) {
            if (peaks.indices.empty() || static_cast<double>(i - peaks.indices.back()) >= gap) {
                peaks.indices.push_back(i);
            } else if (x[i] > x[peaks.indices.back()]) {
                peaks.indices.back() = i;
            }
        }
        i = end + 1;
    }
    return peaks;
}

std::vector<double> hr_bpm(const PeakSeries& peaks) {
    if (peaks.indices.size() < 2) {
        throw Error(ErrorKind::InsufficientPeaks, "need at least 2 peaks, got " + std::to_string(peaks.indices.size()));
    }
    std::vector<double> hr;
    hr.reserve(peaks.indices.size() - 1);
    for (std::size_t k = 1; k < peaks.indices.size(); ++k) {
        hr.push_back(60.0 * peaks.rate_hz / static_cast<double>(peaks.indices[k] - peaks.indices[k - 1]));
    }
    return hr;
}

double rmse_bpm(std::span<const double> estimate, std::span<const double> reference) {
    if (estimate.size() != reference.size() || estimate.empty()) {
        throw Error(ErrorKind::InvalidInput, "rmse_bpm: sequences must be equal-length and non-empty (" +
                                                 std::to_string(estimate.size()) + " vs " +
                                                 std::to_string(reference.size()) + ")");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < estimate.size(); ++i) {
        const double d = estimate[i] - reference[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(estimate.size()));
}

std::vector<BeatPair> match_beats(const PeakSeries& estimate, const PeakSeries& reference) {
    const auto ref_hr = hr_bpm(reference);
    const auto est_hr = hr_bpm(estimate);
    const double tolerance = kMatchToleranceSeconds * reference.rate_hz;
    // estimated beat times expressed in reference samples
    const double scale = reference.rate_hz / estimate.rate_hz;

    std::vector<bool> used(est_hr.size(), false);
    std::vector<BeatPair> pairs;
    pairs.reserve(ref_hr.size());
    for (std::size_t k = 0; k < ref_hr.size(); ++k) {
        const double t_ref = static_cast<double>(reference.indices[k + 1]);
        std::optional<std::size_t> best;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < est_hr.size(); ++j) {
            if (used[j]) continue;
            const double dist = std::abs(static_cast<double>(estimate.indices[j + 1]) * scale - t_ref);
            if (dist <= tolerance && dist < best_dist) {
                best = j;
                best_dist = dist;
            }
        }
        BeatPair pair{reference.indices[k + 1], ref_hr[k], std::nullopt};
        if (best) {
            used[*best] = true;
            pair.estimate_hr = est_hr[*best];
        }
        pairs.push_back(pair);
    }
    return pairs;
}

double ppe_bpm(const PeakSeries& estimate, const PeakSeries& reference) {
    const auto pairs = match_beats(estimate, reference);
    double acc = 0.0;
    for (const BeatPair& p : pairs) {
        acc += p.estimate_hr ? std::abs(*p.estimate_hr - p.reference_hr) : std::abs(p.reference_hr);
    }
    return acc / static_cast<double>(pairs.size());
}

double rmse_matched_bpm(const PeakSeries& estimate, const PeakSeries& reference) {
    const auto pairs = match_beats(estimate, reference);
    std::vector<double> est;
    std::vector<double> ref;
    for (const BeatPair& p : pairs) {
        est.push_back(p.estimate_hr.value_or(0.0));
        ref.push_back(p.reference_hr);
    }
    return rmse_bpm(est, ref);
}

std::vector<double> hr_per_second(const PeakSeries& peaks, std::size_t seconds) {
    const auto hr = hr_bpm(peaks);
    std::vector<double> times(hr.size());
    for (std::size_t k = 0; k < hr.size(); ++k) {
        times[k] = static_cast<double>(peaks.indices[k + 1]) / peaks.rate_hz;
    }
    std::vector<double> out(seconds);
    std::size_t k = 0;
    for (std::size_t s = 0; s < seconds; ++s) {
        const double t = static_cast<double>(s);
        if (t <= times.front()) {
            out[s] = hr.front();
        } else if (t >= times.back()) {
            out[s] = hr.back();
        } else {
            while (times[k + 1] < t) ++k;
            const double f = (t - times[k]) / (times[k + 1] - times[k]);
            out[s] = hr[k] + f * (hr[k + 1] - hr[k]);
        }
    }
    return out;
}

double improvement_ratio(double noisy_err, double gen_err) {
    if (gen_err == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return noisy_err / gen_err;
}

EvalRow make_row(std::string noise_type, std::string intensity, double snr_db, double rmse_gen,
                 double rmse_noisy, double ppe_gen, double ppe_noisy) {
    return EvalRow{std::move(noise_type),
                   std::move(intensity),
                   snr_db,
                   rmse_gen,
                   rmse_noisy,
                   improvement_ratio(rmse_noisy, rmse_gen),
                   ppe_gen,
                   ppe_noisy,
                   improvement_ratio(ppe_noisy, ppe_gen)};
}

EvalReport aggregate(std::span<const EvalRow> rows) {
    if (rows.empty()) {
        throw Error(ErrorKind::InvalidInput, "aggregate: no rows");
    }
    EvalReport report;
    report.rows.assign(rows.begin(), rows.end());
    EvalRow& avg = report.averages;
    avg.noise_type = "Average";
    for (const EvalRow& r : rows) {
        avg.snr_db += r.snr_db;
        avg.rmse_gen_bpm += r.rmse_gen_bpm;
        avg.rmse_noisy_bpm += r.rmse_noisy_bpm;
        avg.rmse_improvement += r.rmse_improvement;
        avg.ppe_gen_bpm += r.ppe_gen_bpm;
        avg.ppe_noisy_bpm += r.ppe_noisy_bpm;
        avg.ppe_improvement += r.ppe_improvement;
    }
    const double n = static_cast<double>(rows.size());
    avg.snr_db /= n;
    avg.rmse_gen_bpm /= n;
    avg.rmse_noisy_bpm /= n;
    avg.rmse_improvement /= n;
    avg.ppe_gen_bpm /= n;
    avg.ppe_noisy_bpm /= n;
    avg.ppe_improvement /= n;
    return report;
}

std::vector<EvalRow> select_intensity(std::span<const EvalRow> rows, const std::string& intensity) {
    std::vector<EvalRow> out;
    for (const EvalRow& r : rows) {
        if (r.intensity == intensity) out.push_back(r);
    }
    return out;
}

namespace {

const char* const kReportHeader =
    "Noise Type,S/N (dB),RMSE Gen. (BPM),RMSE Nsy. (BPM),RMSE Imprv.,PPE Gen. (BPM),PPE Nsy. (BPM),PPE Imprv.";

std::string row_label(const EvalRow& r) {
    return r.intensity.empty() ? r.noise_type : r.noise_type + " (" + r.intensity + ")";
}

void write_row(std::ostream& out, const EvalRow& r) {
    out << row_label(r) << ',' << csv::format_number(r.snr_db) << ',' << csv::format_number(r.rmse_gen_bpm)
        << ',' << csv::format_number(r.rmse_noisy_bpm) << ',' << csv::format_number(r.rmse_improvement) << ','
        << csv::format_number(r.ppe_gen_bpm) << ',' << csv::format_number(r.ppe_noisy_bpm) << ','
        << csv::format_number(r.ppe_improvement) << '\n';
}

}  // namespace

void write_report_csv(const EvalReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::Path, "cannot open " + path.string() + " for writing");
    }
    out << kReportHeader << '\n';
    for (const EvalRow& r : report.rows) write_row(out, r);
    write_row(out, report.averages);
}

std::vector<EvalRow> read_rows_csv(const std::filesystem::path& path) {
    const csv::Table table = csv::read_file(path);
    const std::string file = path.string();
    const char* const columns[] = {"Noise Type",    "S/N (dB)",       "RMSE Gen. (BPM)", "RMSE Nsy. (BPM)",
                                   "RMSE Imprv.",   "PPE Gen. (BPM)", "PPE Nsy. (BPM)",  "PPE Imprv."};
    std::size_t idx[8];
    for (std::size_t c = 0; c < 8; ++c) {
        idx[c] = table.column(columns[c], file);
    }
    std::vector<EvalRow> rows;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& cells = table.rows[r];
        std::string label = cells[idx[0]];
        if (label == "Average") continue;
        EvalRow row;
        // "Waving (low)" -> noise type "Waving", intensity "low"
        const auto open = label.rfind(" (");
        if (open != std::string::npos && label.back() == ')') {
            row.intensity = label.substr(open + 2, label.size() - open - 3);
            label.resize(open);
        }
        row.noise_type = label;
        row.snr_db = table.number(r, idx[1], file);
        row.rmse_gen_bpm = table.number(r, idx[2], file);
        row.rmse_noisy_bpm = table.number(r, idx[3], file);
        row.rmse_improvement = table.number(r, idx[4], file);
        row.ppe_gen_bpm = table.number(r, idx[5], file);
        row.ppe_noisy_bpm = table.number(r, idx[6], file);
        row.ppe_improvement = table.number(r, idx[7], file);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace ppgclean
