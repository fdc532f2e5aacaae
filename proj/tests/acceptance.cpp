// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion, with pinned tolerances
// and runtime budgets. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ppgclean/dataset.hpp"
#include "ppgclean/detector.hpp"
#include "ppgclean/image.hpp"
#include "ppgclean/metrics.hpp"
#include "ppgclean/noise.hpp"
#include "ppgclean/pipeline.hpp"
#include "support.hpp"

using namespace ppgclean;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr double kCodecBound = 1.0 / 256.0;
constexpr double kTableRelTol = 0.005;
constexpr double kNoiseTol = 1e-12;
constexpr double kConvTol = 1e-9;
constexpr double kSoftmaxTol = 1e-6;

// Runtime budgets in seconds.
constexpr double kCodecBudget = 5.0;
constexpr double kTableBudget = 1.0;
constexpr double kNoiseBudget = 5.0;
constexpr double kDetectorBudget = 5.0;
constexpr double kMetricsBudget = 1.0;
constexpr double kEndToEndBudget = 30.0;
constexpr double kFormatBudget = 1.0;

// A check returns an empty string on success, otherwise the first failure.
using Check = std::function<std::string()>;

struct Criterion {
    const char* name;
    double budget_s;
    Check check;
};

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(10);
    out << v;
    return out.str();
}

// Set by a passing check to annotate its PASS line.
std::string g_note;

std::string codec_round_trip() {
    // Samples equal to 1.0 hit the 255 clamp and come back as 255/256, an error of exactly
    // the bound. The strict bound is checked on [0, 1); the clamp case is checked separately.
    std::size_t clamped = 0;
    auto check_window = [&](const std::vector<double>& v, const std::string& what) -> std::string {
        const auto w = SignalWindow::from_unit_samples(v);
        const auto img = encode(w);
        for (std::size_t i = 0; i < kImageSide; ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (img.at(i, j) != img.at(j, i)) return what + ": image not symmetric";
        const auto back = decode(img);
        for (std::size_t i = 0; i < kWindowSize; ++i) {
            const double err = std::abs(back[i] - w[i]);
            if (w[i] == 1.0) {
                if (err != kCodecBound) return what + ": sample at 1.0 decoded to " + fmt(back[i]);
                ++clamped;
            } else if (!(err < kCodecBound)) {
                return what + ": error " + fmt(err) + " at sample " + std::to_string(i);
            }
        }
        return {};
    };
    for (int level = 0; level < 256; ++level) {
        if (auto e = check_window(std::vector<double>(kWindowSize, level / 256.0), "level " + std::to_string(level));
            !e.empty())
            return e;
    }
    std::mt19937_64 gen(20260501);
    std::vector<double> levels(kWindowSize);
    for (std::size_t i = 0; i < kWindowSize; ++i) levels[i] = static_cast<double>(i) / 256.0;
    std::shuffle(levels.begin(), levels.end(), gen);
    if (auto e = check_window(levels, "all levels"); !e.empty()) return e;

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> v(kWindowSize);
        for (double& s : v) s = unit(gen);
        if (auto e = check_window(v, "random window " + std::to_string(trial)); !e.empty()) return e;
    }
    if (clamped != 0) return "uniform windows unexpectedly contained 1.0";

    // Normalized windows always hold one sample at exactly 1.0.
    for (int trial = 0; trial < 1000; ++trial) {
        const auto raw = testing::random_unit_window(gen);
        const auto w = normalize(raw);
        std::vector<double> v(w.samples().begin(), w.samples().end());
        if (auto e = check_window(v, "normalized window " + std::to_string(trial)); !e.empty()) return e;
    }
    g_note = "strict bound on [0,1); " + std::to_string(clamped) + " samples at 1.0 clamp to error exactly 1/256";
    return {};
}

std::string table_aggregate() {
    const auto rows = read_rows_csv(fs::path(PPGCLEAN_TEST_DATA) / "published_rows.csv");
    if (rows.size() != 12) return "expected 12 fixture rows, got " + std::to_string(rows.size());
    const auto avg = aggregate(rows).averages;
    const auto slow = aggregate(select_intensity(rows, "low")).averages;
    const auto fast = aggregate(select_intensity(rows, "high")).averages;
    const std::pair<const char*, std::pair<double, double>> expect[] = {
        {"S/N", {avg.snr_db, 17.85}},
        {"RMSE gen", {avg.rmse_gen_bpm, 2.18}},
        {"RMSE noisy", {avg.rmse_noisy_bpm, 56.19}},
        {"RMSE improvement", {avg.rmse_improvement, 41.18}},
        {"PPE gen", {avg.ppe_gen_bpm, 0.958}},
        {"PPE noisy", {avg.ppe_noisy_bpm, 37.465}},
        {"PPE improvement", {avg.ppe_improvement, 58.68}},
        {"slow S/N", {slow.snr_db, 21.7}},
        {"fast S/N", {fast.snr_db, 14.0}},
    };
    for (const auto& [name, v] : expect) {
        if (std::abs(v.first - v.second) > kTableRelTol * std::abs(v.second)) {
            return std::string(name) + " = " + fmt(v.first) + ", expected " + fmt(v.second);
        }
    }
    return {};
}

std::string noise_oracle() {
    std::mt19937_64 gen(7);
    std::uniform_int_distribution<std::size_t> len(32, 3840);
    for (int trial = 0; trial < 100; ++trial) {
        AccelTrace trace;
        trace.samples = testing::random_trace(gen, len(gen));
        const auto got = motion_noise(trace);
        const auto want = testing::reference_motion_noise(trace.samples);
        for (std::size_t i = 0; i < got.size(); ++i) {
            if (std::abs(got[i] - want[i]) > kNoiseTol) {
                return "trace " + std::to_string(trial) + " sample " + std::to_string(i) + ": " + fmt(got[i]) +
                       " vs oracle " + fmt(want[i]);
            }
            if (!(got[i] >= 0.0 && got[i] <= 2.0 * kAccelRangeG)) return "noise " + fmt(got[i]) + " outside [0, 4]";
        }
        const RawSignal clean(testing::synthetic_ppg(got.size(), 32.0, 70.0), 32.0);
        const auto mixed = mix(clean, got, 0.0);
        if (!std::equal(clean.samples().begin(), clean.samples().end(), mixed.noisy.samples().begin())) {
            return "gain-0 mix differs from clean on trace " + std::to_string(trial);
        }
    }
    return {};
}

std::string detector_contract() {
    std::mt19937_64 gen(99);
    std::vector<DetectorWeights> candidates{zero_weights()};
    for (std::uint64_t seed = 1; seed <= 8; ++seed) candidates.push_back(random_weights(seed));
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const Detector det(candidates[c]);
        for (int trial = 0; trial < 4; ++trial) {
            const auto window = SignalWindow::from_unit_samples(testing::random_unit_window(gen));
            std::vector<TensorShape> trace;
            const auto s = det.infer(window, &trace);
            if (!std::equal(trace.begin(), trace.end(), reference_shape_chain().begin(), reference_shape_chain().end()))
                return "shape chain differs for weights " + std::to_string(c);
            if (std::abs(s.p_clean + s.p_noisy - 1.0) > kSoftmaxTol)
                return "softmax sums to " + fmt(s.p_clean + s.p_noisy);
        }
    }
    // First two conv layers at full size against the nested-loop oracle.
    const auto w = random_weights(3);
    std::vector<double> x(kWindowSize);
    for (double& v : x) v = std::uniform_real_distribution<double>(0.0, 1.0)(gen);
    Activations act{kWindowSize, 1, x};
    for (std::size_t layer : {0, 1}) {
        const auto& lw = w.layers[layer];
        const std::vector<double> k(lw.weights.begin(), lw.weights.end());
        const std::vector<double> b(lw.biases.begin(), lw.biases.end());
        const auto got = conv1d_valid(act, k, b, lw.shape[0], lw.shape[1]);
        const auto want = testing::naive_conv1d(act.data, act.length, act.channels, k, b, lw.shape[0], lw.shape[1]);
        for (std::size_t i = 0; i < want.size(); ++i) {
            if (std::abs(got.data[i] - want[i]) > kConvTol)
                return "conv layer " + std::to_string(layer + 1) + " differs from oracle by " +
                       fmt(std::abs(got.data[i] - want[i]));
        }
        act = got;
    }
    return {};
}

std::string metrics_oracles() {
    // 48 Hz makes 60/90/120 BPM whole-sample periods (48, 32, 24).
    constexpr double rate = 48.0;
    for (double bpm : {60.0, 90.0, 120.0}) {
        const auto period = static_cast<std::size_t>(rate * 60.0 / bpm);
        const auto n = static_cast<std::size_t>(rate * 20);
        const auto x = testing::pulse_train(n, period, 5);
        const auto peaks = detect_peaks(x, rate);
        // every pulse centre with a following sample
        if (peaks.indices.size() != (n - 2 - 5) / period + 1)
            return fmt(bpm) + " BPM: found " + std::to_string(peaks.indices.size()) + " peaks";
        for (std::size_t k = 0; k < peaks.indices.size(); ++k)
            if (peaks.indices[k] != 5 + k * period) return fmt(bpm) + " BPM: peak " + std::to_string(k) + " misplaced";
        const auto hr = hr_bpm(peaks);
        for (double h : hr)
            if (h != bpm) return fmt(bpm) + " BPM train recovered " + fmt(h);
        if (ppe_bpm(peaks, peaks) != 0.0 || rmse_matched_bpm(peaks, peaks) != 0.0)
            return fmt(bpm) + " BPM: identical series give nonzero error";
        if (rmse_bpm(hr, hr) != 0.0) return "rmse of identical sequences is nonzero";
        std::vector<double> shifted = hr;
        for (double& h : shifted) h += 3.0;
        if (rmse_bpm(shifted, hr) != 3.0) return "constant 3 BPM offset gives rmse " + fmt(rmse_bpm(shifted, hr));
    }
    // 62 vs 60 samples per beat at 62 Hz: 60 BPM reference, 62 BPM estimate.
    PeakSeries ref{{}, 62.0}, est{{}, 62.0};
    for (std::size_t k = 0; k < 11; ++k) ref.indices.push_back(62 * k);
    for (std::size_t k = 0; k < 12; ++k) est.indices.push_back(60 * k);
    if (ppe_bpm(est, ref) != 2.0) return "constant 2 BPM offset gives PPE " + fmt(ppe_bpm(est, ref));
    if (rmse_matched_bpm(est, ref) != 2.0) return "constant 2 BPM offset gives RMSE " + fmt(rmse_matched_bpm(est, ref));
    return {};
}

std::string run_identity_pipeline(const fs::path& root, std::uint64_t seed, std::vector<std::string>& outputs) {
    fs::create_directories(root / "bidmc");
    fs::create_directories(root / "traces");
    for (int i = 0; i < 6; ++i) {
        write_bidmc(testing::synthetic_bidmc("bidmc0" + std::to_string(i + 1), 58.0 + 9.0 * i, 240.0),
                    root / "bidmc");
    }
    testing::write_e4_file(root / "traces" / "waving_low.csv", 960, 24, 1);
    testing::write_e4_file(root / "traces" / "shaking_hands_high.csv", 960, 90, 2);

    PipelineConfig c;
    c.bidmc_dir = root / "bidmc";
    c.trace_dir = root / "traces";
    c.out_dir = root / "corpus";
    c.seed = seed;
    c.strict_splits = false;
    c.workers = 0;
    cmd_synth(c);

    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(c.out_dir / "signals"))
        if (e.path().filename().string().ends_with("_noisy.csv")) files.push_back(e.path());
    std::sort(files.begin(), files.end());

    // Alternate labels so both routes are exercised.
    std::ostringstream labels;
    labels << "file,window_offset,p_clean,p_noisy,label\n";
    std::size_t expected_windows = 0, k = 0;
    for (const auto& f : files) {
        const auto n = read_signal_csv(f).size() / kWindowSize;
        expected_windows += n;
        for (std::size_t w = 0; w < n; ++w, ++k)
            labels << f.stem().string() << ',' << w * kWindowSize << (k % 2 ? ",0.2,0.8,noisy\n" : ",0.8,0.2,clean\n");
    }
    testing::write_bytes(root / "labels.csv", labels.str());

    c.labels = root / "labels.csv";
    c.out_dir = root / "denoised";
    c.translator = TranslatorMode::Identity;
    const auto summary = cmd_denoise(c, files);
    if (summary.provenance.size() != expected_windows)
        return "provenance has " + std::to_string(summary.provenance.size()) + " rows for " +
               std::to_string(expected_windows) + " windows";

    std::size_t translated = 0, passed = 0;
    for (const auto& f : files) {
        const auto input = normalized_windows(read_signal_csv(f).samples());
        const auto output = read_signal_csv(c.out_dir / (f.stem().string() + "_denoised.csv"));
        if (output.size() != input.size()) return f.filename().string() + ": output length differs";
        for (const auto& row : summary.provenance) {
            if (row.file != f.stem().string()) continue;
            for (std::size_t i = row.offset; i < row.offset + kWindowSize; ++i) {
                const double in = input[i], out = output.samples()[i];
                if (row.route == Route::PassThrough && out != in)
                    return row.file + ": pass-through window " + std::to_string(row.offset) + " altered";
                if (row.route == Route::Translated && !(std::abs(out - in) <= kCodecBound))
                    return row.file + ": translated window " + std::to_string(row.offset) + " off by " +
                           fmt(std::abs(out - in));
            }
            (row.route == Route::Translated ? translated : passed) += 1;
        }
        outputs.push_back(testing::read_bytes(c.out_dir / (f.stem().string() + "_denoised.csv")));
    }
    if (translated == 0 || passed == 0) return "both routes must be exercised";
    outputs.push_back(testing::read_bytes(c.out_dir / "provenance.csv"));
    outputs.push_back(testing::read_bytes(root / "corpus" / "manifest.csv"));
    return {};
}

std::string end_to_end_identity() {
    testing::TempDir a("ppgclean-accept-a"), b("ppgclean-accept-b");
    std::vector<std::string> first, second;
    if (auto e = run_identity_pipeline(a.path(), 11, first); !e.empty()) return e;
    if (auto e = run_identity_pipeline(b.path(), 11, second); !e.empty()) return "rerun: " + e;
    if (first != second) return "rerun with the same seed is not byte-identical";
    return {};
}

std::string format_rejection() {
    testing::TempDir dir("ppgclean-accept-formats");
    const std::pair<const char*, std::string> headers[] = {
        {"maxval", "P5\n256 256\n65535\n" + std::string(65536 * 2, '\0')},
        {"width", "P5\n255 256\n255\n" + std::string(255 * 256, '\0')},
        {"magic", "P6\n256 256\n255\n" + std::string(65536 * 3, '\0')},
        {"pixel data", "P5\n256 256\n255\n" + std::string(100, '\0')},
    };
    for (const auto& [field, bytes] : headers) {
        testing::write_bytes(dir / "x.pgm", bytes);
        const auto kind = testing::error_kind([&] { read_pgm(dir / "x.pgm"); });
        if (kind != ErrorKind::Format) return std::string("PGM with bad ") + field + " not rejected as format error";
    }

    const auto bytes = serialize_weights(random_weights(1));
    for (std::size_t cut : {std::size_t{3}, std::size_t{16}, bytes.size() / 3, bytes.size() - 1}) {
        const auto kind = testing::error_kind([&] { parse_weights(std::span(bytes.data(), cut)); });
        if (kind != ErrorKind::Truncated) return "weights cut at " + std::to_string(cut) + " not reported as truncated";
    }

    auto wrong = zero_weights();
    wrong.layers[3].shape[0] = 139;
    wrong.layers[3].weights.resize(139 * 10 * 70);
    wrong.layers[3].biases.resize(139);
    const auto msg = testing::error_message([&] { parse_weights(serialize_weights(wrong)); });
    if (testing::error_kind([&] { parse_weights(serialize_weights(wrong)); }) != ErrorKind::Topology)
        return "wrong topology not reported as topology error";
    if (msg.find("layer 4") == std::string::npos) return "topology error does not name layer 4: " + msg;
    return {};
}

}  // namespace

int main() {
    const Criterion criteria[] = {
        {"codec round trip", kCodecBudget, codec_round_trip},
        {"published table aggregate", kTableBudget, table_aggregate},
        {"noise model oracle", kNoiseBudget, noise_oracle},
        {"detector shape contract", kDetectorBudget, detector_contract},
        {"metrics oracles", kMetricsBudget, metrics_oracles},
        {"end-to-end identity mode", kEndToEndBudget, end_to_end_identity},
        {"format rejection suite", kFormatBudget, format_rejection},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string why;
        try {
            why = c.check();
        } catch (const std::exception& e) {
            why = std::string("exception: ") + e.what();
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (why.empty() && elapsed > c.budget_s) why = "over budget";
        const std::string& detail = why.empty() ? g_note : why;
        std::printf("%s  %-28s %8.3f s / %5.1f s%s%s\n", why.empty() ? "PASS" : "FAIL", c.name, elapsed, c.budget_s,
                    detail.empty() ? "" : "  ", detail.c_str());
        g_note.clear();
        failures += why.empty() ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
    return failures == 0 ? 0 : 1;
}
