// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end orchestration: corpus synthesis, window classification,
// routing of noisy windows through the image translator, and evaluation.
//
// Translation itself happens out of process. In external_images mode every
// noisy window is written as "<stem>_<offset>_noisy.pgm" to the images
// directory and its translated counterpart is read back from
// "<stem>_<offset>_translated.pgm" (or "<stem>_<offset>_noisy_translated.pgm").

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ppgclean/error.hpp"
#include "ppgclean/image.hpp"
#include "ppgclean/metrics.hpp"

namespace ppgclean {

enum class TranslatorMode { ExternalImages, Identity };
enum class RmseMode { BeatMatched, PerSecond };

struct PipelineConfig {
    std::filesystem::path bidmc_dir;
    std::filesystem::path trace_dir;
    std::filesystem::path out_dir = ".";
    std::filesystem::path weights;
    std::filesystem::path labels;  ///< detections CSV used instead of weights when set
    std::filesystem::path images_dir;
    std::filesystem::path manifest;
    std::filesystem::path reference_dir;
    std::filesystem::path reconstructed_dir;
    std::size_t window_size = kWindowSize;
    double gain = 1.0;
    std::uint64_t seed = 0;
    TranslatorMode translator = TranslatorMode::Identity;
    RmseMode rmse_mode = RmseMode::BeatMatched;
    bool strict_splits = true;
    double e4_counts_per_g = 64.0;
    std::size_t workers = 1;  ///< 0 = one per hardware thread
    std::size_t plot_windows = 1;
};

/// Keys accepted in config files, as PPGCLEAN_<KEY> environment variables
/// and as CLI overrides.
const std::vector<std::string>& config_keys();

/// Layering: defaults < file ("key = value", '#' comments) < environment
/// (PPGCLEAN_<KEY>) < overrides. Unknown keys and bad values throw Config.
PipelineConfig load_config(const std::optional<std::filesystem::path>& file,
                           const std::map<std::string, std::string>& overrides = {},
                           const std::function<std::optional<std::string>(const std::string&)>& env = {});

/// 0 success; 2 config, 3 ingestion, 4 format, 5 missing translation,
/// 6 path, 1 anything else.
int exit_code_for(ErrorKind kind) noexcept;

struct SynthSummary {
    std::size_t segments = 0;
    std::filesystem::path manifest;
};

/// Writes <out>/manifest.csv, <out>/splits.csv and
/// <out>/signals/<record>_<offset>_{clean,noisy}.csv.
SynthSummary cmd_synth(const PipelineConfig& config);

struct DetectionRow {
    std::string file;  ///< signal file stem
    std::size_t offset = 0;
    double p_clean = 0.5;
    double p_noisy = 0.5;
    bool noisy = false;
};

/// Writes <out>/detections.csv: file,window_offset,p_clean,p_noisy,label.
/// Constant windows are skipped with a warning.
std::vector<DetectionRow> cmd_detect(const PipelineConfig& config, std::span<const std::filesystem::path> files);

std::vector<DetectionRow> read_detections(const std::filesystem::path& path);

enum class Route { PassThrough, Translated, Degenerate, MissingTranslation };

std::string_view to_string(Route route) noexcept;

struct ProvenanceRow {
    std::string file;
    std::size_t offset = 0;
    Route route = Route::PassThrough;
    double p_clean = 0.5;
    double p_noisy = 0.5;
    std::string image;
};

struct DenoiseSummary {
    std::vector<ProvenanceRow> provenance;
    std::size_t missing = 0;
};

/// Output is in the normalized window domain: pass-through windows are the
/// normalized input, translated windows are decoded images, constant windows
/// are zero-filled. Writes <out>/<stem>_denoised.csv and
/// <out>/provenance.csv. Missing translations are listed, not thrown.
DenoiseSummary cmd_denoise(const PipelineConfig& config, std::span<const std::filesystem::path> files);

/// Writes every window of each file as "<stem>_<offset>_<role>.pgm" into the
/// images directory (training corpora for the translator). Returns the count.
std::size_t cmd_images(const PipelineConfig& config, std::span<const std::filesystem::path> files, ImageRole role);

/// Per (activity, intensity) group of the manifest: HR errors of the
/// reconstructed and the noisy signal against the clean reference. Writes
/// <out>/report.csv and <out>/overlay.csv.
EvalReport cmd_eval(const PipelineConfig& config);

/// Aggregates an existing row table (same layout as report.csv) into
/// <out>/report.csv.
EvalReport cmd_eval_rows(const PipelineConfig& config, const std::filesystem::path& rows_csv);

/// Windows of a raw signal, each normalized independently and concatenated;
/// constant windows become zeros.
std::vector<double> normalized_windows(std::span<const double> samples, std::size_t* degenerate = nullptr);

}  // namespace ppgclean
