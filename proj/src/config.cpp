// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include "csv.hpp"
#include "ppgclean/pipeline.hpp"

namespace ppgclean {
namespace {

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& expected) {
    throw Error(ErrorKind::Config, "config key '" + key + "': '" + value + "' is not " + expected);
}

std::uint64_t to_unsigned(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
        bad_value(key, value, "a non-negative integer");
    }
    return v;
}

double to_real(const std::string& key, const std::string& value) {
    if (auto v = csv::parse_number(value); v && std::isfinite(*v)) return *v;
    bad_value(key, value, "a finite number");
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    bad_value(key, value, "a boolean");
}

void apply(PipelineConfig& c, const std::string& key, const std::string& value) {
    if (key == "bidmc_dir") c.bidmc_dir = value;
    else if (key == "trace_dir") c.trace_dir = value;
    else if (key == "out_dir") c.out_dir = value;
    else if (key == "weights") c.weights = value;
    else if (key == "labels") c.labels = value;
    else if (key == "images_dir") c.images_dir = value;
    else if (key == "manifest") c.manifest = value;
    else if (key == "reference_dir") c.reference_dir = value;
    else if (key == "reconstructed_dir") c.reconstructed_dir = value;
    else if (key == "window_size") {
        c.window_size = static_cast<std::size_t>(to_unsigned(key, value));
        if (c.window_size != kWindowSize) {
            throw Error(ErrorKind::Config, "window_size must be 256, got " + value);
        }
    } else if (key == "gain") {
        c.gain = to_real(key, value);
        if (c.gain < 0.0) bad_value(key, value, "non-negative");
    } else if (key == "seed") c.seed = to_unsigned(key, value);
    else if (key == "translator") {
        if (value == "identity") c.translator = TranslatorMode::Identity;
        else if (value == "external_images") c.translator = TranslatorMode::ExternalImages;
        else bad_value(key, value, "identity or external_images");
    } else if (key == "rmse_mode") {
        if (value == "beat") c.rmse_mode = RmseMode::BeatMatched;
        else if (value == "per_second") c.rmse_mode = RmseMode::PerSecond;
        else bad_value(key, value, "beat or per_second");
    } else if (key == "strict_splits") c.strict_splits = to_bool(key, value);
    else if (key == "e4_counts_per_g") {
        c.e4_counts_per_g = to_real(key, value);
        if (!(c.e4_counts_per_g > 0.0)) bad_value(key, value, "positive");
    } else if (key == "workers") c.workers = static_cast<std::size_t>(to_unsigned(key, value));
    else if (key == "plot_windows") c.plot_windows = static_cast<std::size_t>(to_unsigned(key, value));
    else throw Error(ErrorKind::Config, "unknown config key '" + key + "'");
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{
        "bidmc_dir",  "trace_dir",   "out_dir",      "weights",       "labels",          "images_dir",
        "manifest",   "reference_dir", "reconstructed_dir", "window_size", "gain",         "seed",
        "translator", "rmse_mode",   "strict_splits", "e4_counts_per_g", "workers",       "plot_windows",
    };
    return keys;
}

PipelineConfig load_config(const std::optional<std::filesystem::path>& file,
                           const std::map<std::string, std::string>& overrides,
                           const std::function<std::optional<std::string>(const std::string&)>& env) {
    PipelineConfig config;
    if (file) {
        std::ifstream in(*file);
        if (!in) {
            throw Error(ErrorKind::Config, "cannot read config file " + file->string());
        }
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
            const auto text = csv::trim(line);
            if (text.empty()) continue;
            const auto eq = text.find('=');
            if (eq == std::string_view::npos) {
                throw Error(ErrorKind::Config, file->string() + ":" + std::to_string(line_no) + ": expected key = value");
            }
            apply(config, std::string(csv::trim(text.substr(0, eq))), std::string(csv::trim(text.substr(eq + 1))));
        }
    }

    auto lookup = env ? env : [](const std::string& name) -> std::optional<std::string> {
        if (const char* v = std::getenv(name.c_str())) return std::string(v);
        return std::nullopt;
    };
    for (const std::string& key : config_keys()) {
        if (auto v = lookup("PPGCLEAN_" + upper(key))) apply(config, key, *v);
    }
    for (const auto& [key, value] : overrides) apply(config, key, value);
    return config;
}

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::Config: return 2;
    case ErrorKind::Ingestion:
    case ErrorKind::Rate:
    case ErrorKind::Range: return 3;
    case ErrorKind::Format:
    case ErrorKind::BadMagic:
    case ErrorKind::VersionMismatch:
    case ErrorKind::Truncated:
    case ErrorKind::Topology: return 4;
    case ErrorKind::MissingTranslation: return 5;
    case ErrorKind::Path: return 6;
    default: return 1;
    }
}

}  // namespace ppgclean
