// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//
// Ingestion of clean BIDMC-style records and Empatica-E4-style accelerometer
// files, train/test split planning and synthetic noisy corpus generation.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ppgclean/noise.hpp"
#include "ppgclean/signal.hpp"

namespace ppgclean {

inline constexpr double kBidmcRateHz = 125.0;
inline constexpr double kE4CountsPerG = 64.0;

struct BidmcRecord {
    std::string id;
    RawSignal ppg;
    /// Reference heart rate, one value per second (may contain NaN gaps).
    std::vector<double> hr_ref;
    double duration_s = 0.0;
};

/// Reads every "<id>_Signals.csv" (PPG column "PPG" or "PLETH") and its
/// "<id>_Numerics.csv" (column "HR") in `dir`, sorted by id.
std::vector<BidmcRecord> load_bidmc(const std::filesystem::path& dir);

/// Inverse of load_bidmc for one record.
void write_bidmc(const BidmcRecord& record, const std::filesystem::path& dir);

/// Row 1 per-axis start timestamps, row 2 per-axis sample rate (must be 32),
/// then one "x,y,z" row of signed counts (|count| <= 128) per sample.
AccelTrace load_e4_acc(const std::filesystem::path& file, Activity activity, Intensity intensity,
                       double counts_per_g = kE4CountsPerG);

/// Loads "<activity>_<intensity>.csv" files (an optional "<prefix>_" is
/// allowed) sorted by activity, intensity, then file name. Other files are
/// skipped with a warning.
std::vector<AccelTrace> load_trace_dir(const std::filesystem::path& dir, double counts_per_g = kE4CountsPerG);

struct SplitPlan {
    std::vector<std::string> train_clean_ids;
    std::vector<std::string> train_noisy_source_ids;
    std::vector<std::string> test_ids;
    std::uint64_t seed = 0;

    bool operator==(const SplitPlan&) const = default;
};

enum class SplitPolicy {
    Strict,   ///< exactly 53 records -> 40 / 20 / 13
    Lenient,  ///< any count >= 3, proportions 40:20:13
};

/// Seeded Fisher-Yates over the sorted ids: the first 40 train, the first 20
/// of those also seed the noisy training set, the rest test.
SplitPlan build_splits(std::vector<std::string> ids, std::uint64_t seed, SplitPolicy policy = SplitPolicy::Strict);

struct CorpusSegment {
    std::string record_id;
    std::string split;  ///< "train" or "test"
    std::size_t offset = 0;
    NoisyRecord record;

    /// "<record>_<offset>"
    std::string stem() const;
};

/// Each noisy-train source and each test record is resampled to 32 Hz, cut
/// into two-minute segments, and mixed with motion noise. Traces are cycled
/// over segments in order; noise shorter than a segment is tiled.
std::vector<CorpusSegment> build_noisy_corpus(const SplitPlan& plan, std::span<const BidmcRecord> records,
                                              std::span<const AccelTrace> traces, double gain);

/// Columns: record_id,split,segment_offset,activity,intensity,gain,snr_db
void write_manifest(std::span<const CorpusSegment> corpus, const std::filesystem::path& path);

struct ManifestRow {
    std::string record_id;
    std::string split;
    std::size_t segment_offset = 0;
    std::string activity;
    std::string intensity;
    double gain = 0.0;
    double snr_db = 0.0;

    std::string stem() const;
};

std::vector<ManifestRow> read_manifest(const std::filesystem::path& path);

/// Single-column CSV with header "value".
void write_signal_csv(std::span<const double> samples, const std::filesystem::path& path);
RawSignal read_signal_csv(const std::filesystem::path& path, double rate_hz = kPipelineRateHz);

}  // namespace ppgclean
