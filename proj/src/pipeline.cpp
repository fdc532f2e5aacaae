// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "ppgclean/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <set>

#include "csv.hpp"
#include "log.hpp"
#include "parallel.hpp"
#include "ppgclean/dataset.hpp"
#include "ppgclean/detector.hpp"

namespace fs = std::filesystem;

namespace ppgclean {
namespace {

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::Path, "cannot open " + path.string() + " for writing");
    }
    return out;
}

void require_dir(const fs::path& dir, const std::string& what) {
    if (dir.empty()) {
        throw Error(ErrorKind::Config, what + " is not set");
    }
    if (!fs::is_directory(dir)) {
        throw Error(ErrorKind::Path, what + " not found: " + dir.string());
    }
}

struct WindowWork {
    std::optional<SignalWindow> window;  // nullopt for constant windows
    std::size_t offset = 0;
};

std::vector<WindowWork> split_and_normalize(const RawSignal& signal, const std::string& stem) {
    std::vector<WindowWork> out;
    for (auto& seg : window_split(signal)) {
        WindowWork w;
        w.offset = seg.origin_index;
        try {
            w.window = normalize(seg.samples, seg.origin_index);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::DegenerateWindow) throw;
            log_warning(stem + ": skipping constant window at offset " + std::to_string(seg.origin_index));
        }
        out.push_back(std::move(w));
    }
    return out;
}

std::unique_ptr<Detector> make_detector(const PipelineConfig& config) {
    if (config.weights.empty()) {
        throw Error(ErrorKind::Config, "weights file is not set");
    }
    if (!fs::exists(config.weights)) {
        throw Error(ErrorKind::Path, "weights file not found: " + config.weights.string());
    }
    return std::make_unique<Detector>(load_weights(config.weights));
}

std::string label_of(bool noisy) { return noisy ? "noisy" : "clean"; }

}  // namespace

std::vector<double> normalized_windows(std::span<const double> samples, std::size_t* degenerate) {
    std::vector<double> out;
    std::size_t skipped = 0;
    if (samples.size() >= kWindowSize) {
        const RawSignal signal(std::vector<double>(samples.begin(), samples.end()), kPipelineRateHz);
        for (auto& seg : window_split(signal)) {
            try {
                const auto w = normalize(seg.samples, seg.origin_index);
                out.insert(out.end(), w.samples().begin(), w.samples().end());
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::DegenerateWindow) throw;
                out.insert(out.end(), kWindowSize, 0.0);
                ++skipped;
            }
        }
    }
    if (degenerate != nullptr) *degenerate = skipped;
    return out;
}

// ---------------------------------------------------------------------------

SynthSummary cmd_synth(const PipelineConfig& config) {
    require_dir(config.bidmc_dir, "bidmc_dir");
    require_dir(config.trace_dir, "trace_dir");

    const auto records = load_bidmc(config.bidmc_dir);
    const auto traces = load_trace_dir(config.trace_dir, config.e4_counts_per_g);
    if (traces.empty()) {
        throw Error(ErrorKind::Ingestion, "no accelerometer traces in " + config.trace_dir.string());
    }
    std::vector<std::string> ids;
    for (const auto& r : records) ids.push_back(r.id);
    const SplitPlan plan =
        build_splits(ids, config.seed, config.strict_splits ? SplitPolicy::Strict : SplitPolicy::Lenient);
    const auto corpus = build_noisy_corpus(plan, records, traces, config.gain);

    const fs::path signals = config.out_dir / "signals";
    fs::create_directories(signals);
    parallel_map<int>(corpus.size(), config.workers, [&](std::size_t i) {
        const CorpusSegment& seg = corpus[i];
        write_signal_csv(seg.record.clean.samples(), signals / (seg.stem() + "_clean.csv"));
        write_signal_csv(seg.record.noisy.samples(), signals / (seg.stem() + "_noisy.csv"));
        return 0;
    });

    {
        auto out = open_out(config.out_dir / "splits.csv");
        out << "record_id,role\n";
        const std::set<std::string> noisy(plan.train_noisy_source_ids.begin(), plan.train_noisy_source_ids.end());
        for (const auto& id : plan.train_clean_ids) out << id << ',' << (noisy.count(id) ? "train_noisy" : "train") << '\n';
        for (const auto& id : plan.test_ids) out << id << ",test\n";
    }
    SynthSummary summary{corpus.size(), config.out_dir / "manifest.csv"};
    write_manifest(corpus, summary.manifest);
    return summary;
}

// ---------------------------------------------------------------------------

std::vector<DetectionRow> cmd_detect(const PipelineConfig& config, std::span<const fs::path> files) {
    const auto detector = make_detector(config);
    std::vector<DetectionRow> rows;
    for (const fs::path& file : files) {
        const std::string stem = file.stem().string();
        const auto windows = split_and_normalize(read_signal_csv(file), stem);
        const auto scores = parallel_map<std::optional<ClassScores>>(windows.size(), config.workers, [&](std::size_t i) {
            return windows[i].window ? std::optional(detector->infer(*windows[i].window)) : std::nullopt;
        });
        for (std::size_t i = 0; i < windows.size(); ++i) {
            if (!scores[i]) continue;
            rows.push_back({stem, windows[i].offset, scores[i]->p_clean, scores[i]->p_noisy, scores[i]->noisy()});
        }
    }

    auto out = open_out(config.out_dir / "detections.csv");
    out << "file,window_offset,p_clean,p_noisy,label\n";
    for (const auto& r : rows) {
        out << r.file << ',' << r.offset << ',' << csv::format_number(r.p_clean) << ','
            << csv::format_number(r.p_noisy) << ',' << label_of(r.noisy) << '\n';
    }
    return rows;
}

std::vector<DetectionRow> read_detections(const fs::path& path) {
    const csv::Table t = csv::read_file(path);
    const std::string file = path.string();
    const std::size_t c_file = t.column("file", file), c_off = t.column("window_offset", file),
                      c_pc = t.column("p_clean", file), c_pn = t.column("p_noisy", file),
                      c_label = t.column("label", file);
    std::vector<DetectionRow> rows;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::string& label = t.rows[r][c_label];
        if (label != "clean" && label != "noisy") {
            throw Error(ErrorKind::Ingestion, "bad label '" + label + "' at row " + std::to_string(r + 1) + " in " + file);
        }
        rows.push_back({t.rows[r][c_file], static_cast<std::size_t>(t.number(r, c_off, file)),
                        t.number(r, c_pc, file), t.number(r, c_pn, file), label == "noisy"});
    }
    return rows;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Route route) noexcept {
    switch (route) {
    case Route::PassThrough: return "passthrough";
    case Route::Translated: return "translated";
    case Route::Degenerate: return "degenerate";
    case Route::MissingTranslation: return "missing_translation";
    }
    return "unknown";
}

namespace {

struct WindowOutcome {
    ProvenanceRow row;
    std::array<double, kWindowSize> samples{};
};

std::optional<fs::path> find_translation(const fs::path& dir, const std::string& stem, std::size_t offset) {
    const fs::path primary = dir / image_filename(stem, offset, ImageRole::Translated);
    if (fs::exists(primary)) return primary;
    const fs::path suffixed = dir / (stem + "_" + std::to_string(offset) + "_noisy_translated.pgm");
    if (fs::exists(suffixed)) return suffixed;
    return std::nullopt;
}

}  // namespace

DenoiseSummary cmd_denoise(const PipelineConfig& config, std::span<const fs::path> files) {
    if (config.translator == TranslatorMode::ExternalImages) {
        if (config.images_dir.empty()) {
            throw Error(ErrorKind::Config, "external_images translator needs images_dir");
        }
        require_dir(config.images_dir, "images_dir");
    }

    std::unique_ptr<Detector> detector;
    std::map<std::pair<std::string, std::size_t>, DetectionRow> labels;
    if (!config.labels.empty()) {
        for (auto& r : read_detections(config.labels)) labels[{r.file, r.offset}] = r;
    } else {
        detector = make_detector(config);
    }

    DenoiseSummary summary;
    fs::create_directories(config.out_dir);
    for (const fs::path& file : files) {
        const std::string stem = file.stem().string();
        const auto windows = split_and_normalize(read_signal_csv(file), stem);

        auto outcomes = parallel_map<WindowOutcome>(windows.size(), config.workers, [&](std::size_t i) {
            const WindowWork& work = windows[i];
            WindowOutcome out;
            out.row.file = stem;
            out.row.offset = work.offset;
            if (!work.window) {
                out.row.route = Route::Degenerate;
                return out;
            }
            const SignalWindow& window = *work.window;
            bool noisy = false;
            if (detector) {
                const ClassScores s = detector->infer(window);
                out.row.p_clean = s.p_clean;
                out.row.p_noisy = s.p_noisy;
                noisy = s.noisy();
            } else {
                const auto it = labels.find({stem, work.offset});
                if (it == labels.end()) {
                    throw Error(ErrorKind::Config, "labels file has no entry for " + stem + " offset " +
                                                       std::to_string(work.offset));
                }
                out.row.p_clean = it->second.p_clean;
                out.row.p_noisy = it->second.p_noisy;
                noisy = it->second.noisy;
            }
            if (!noisy) {
                out.row.route = Route::PassThrough;
                out.samples = window.samples();
                return out;
            }

            const GrayImage encoded = encode(window, stem);
            GrayImage translated;
            if (config.translator == TranslatorMode::Identity) {
                translated = encoded;
            } else {
                const std::string noisy_name = image_filename(stem, work.offset, ImageRole::Noisy);
                write_pgm(encoded, config.images_dir / noisy_name);
                const auto found = find_translation(config.images_dir, stem, work.offset);
                if (!found) {
                    out.row.route = Route::MissingTranslation;
                    out.row.image = image_filename(stem, work.offset, ImageRole::Translated);
                    out.samples = window.samples();
                    return out;
                }
                translated = read_pgm(*found);
                out.row.image = found->filename().string();
            }
            out.row.route = Route::Translated;
            out.samples = decode(translated, work.offset).samples();
            return out;
        });

        std::vector<double> stitched;
        stitched.reserve(outcomes.size() * kWindowSize);
        for (auto& o : outcomes) {
            stitched.insert(stitched.end(), o.samples.begin(), o.samples.end());
            if (o.row.route == Route::MissingTranslation) {
                log_warning(stem + ": no translated image " + o.row.image);
                ++summary.missing;
            }
            summary.provenance.push_back(std::move(o.row));
        }
        if (stitched.empty()) {
            log_warning(stem + ": shorter than one window; nothing written");
            continue;
        }
        write_signal_csv(stitched, config.out_dir / (stem + "_denoised.csv"));
    }

    auto out = open_out(config.out_dir / "provenance.csv");
    out << "file,window_offset,route,p_clean,p_noisy,image\n";
    for (const auto& r : summary.provenance) {
        out << r.file << ',' << r.offset << ',' << to_string(r.route) << ',' << csv::format_number(r.p_clean) << ','
            << csv::format_number(r.p_noisy) << ',' << r.image << '\n';
    }
    return summary;
}

std::size_t cmd_images(const PipelineConfig& config, std::span<const fs::path> files, ImageRole role) {
    if (config.images_dir.empty()) {
        throw Error(ErrorKind::Config, "images_dir is not set");
    }
    fs::create_directories(config.images_dir);
    std::size_t written = 0;
    for (const fs::path& file : files) {
        const std::string stem = file.stem().string();
        const auto windows = split_and_normalize(read_signal_csv(file), stem);
        const auto done = parallel_map<int>(windows.size(), config.workers, [&](std::size_t i) {
            if (!windows[i].window) return 0;
            write_pgm(encode(*windows[i].window, stem), config.images_dir / image_filename(stem, windows[i].offset, role));
            return 1;
        });
        written += static_cast<std::size_t>(std::accumulate(done.begin(), done.end(), 0));
    }
    return written;
}

// ---------------------------------------------------------------------------

namespace {

struct SegmentErrors {
    double rmse_gen = 0.0;
    double rmse_noisy = 0.0;
    double ppe_gen = 0.0;
    double ppe_noisy = 0.0;
};

PeakSeries peaks_or_empty(std::span<const double> x) {
    return detect_peaks(x, kPipelineRateHz);
}

// An estimate with fewer than two beats misses every reference beat.
double penalized(const PeakSeries& est, const PeakSeries& ref, RmseMode mode, bool rmse, std::size_t seconds) {
    if (est.indices.size() < 2) {
        const auto hr = hr_bpm(ref);
        if (!rmse) return std::accumulate(hr.begin(), hr.end(), 0.0) / static_cast<double>(hr.size());
        const std::vector<double> zeros(hr.size(), 0.0);
        return rmse_bpm(zeros, hr);
    }
    if (!rmse) return ppe_bpm(est, ref);
    if (mode == RmseMode::PerSecond) {
        return rmse_bpm(hr_per_second(est, seconds), hr_per_second(ref, seconds));
    }
    return rmse_matched_bpm(est, ref);
}

}  // namespace

EvalReport cmd_eval(const PipelineConfig& config) {
    if (config.manifest.empty()) throw Error(ErrorKind::Config, "manifest is not set");
    require_dir(config.reference_dir, "reference_dir");
    require_dir(config.reconstructed_dir, "reconstructed_dir");
    const auto manifest = read_manifest(config.manifest);
    if (manifest.empty()) {
        throw Error(ErrorKind::Ingestion, "manifest " + config.manifest.string() + " has no rows");
    }

    struct Prepared {
        std::vector<double> clean, noisy, recon;
    };
    auto load = [&](const ManifestRow& m) {
        const auto clean = read_signal_csv(config.reference_dir / (m.stem() + "_clean.csv"));
        const auto noisy = read_signal_csv(config.reference_dir / (m.stem() + "_noisy.csv"));
        const auto recon = read_signal_csv(config.reconstructed_dir / (m.stem() + "_noisy_denoised.csv"));
        Prepared p{normalized_windows(clean.samples()), normalized_windows(noisy.samples()),
                   std::vector<double>(recon.samples().begin(), recon.samples().end())};
        const std::size_t n = std::min({p.clean.size(), p.noisy.size(), p.recon.size()});
        p.clean.resize(n);
        p.noisy.resize(n);
        p.recon.resize(n);
        return p;
    };

    const auto errors = parallel_map<SegmentErrors>(manifest.size(), config.workers, [&](std::size_t i) {
        const Prepared p = load(manifest[i]);
        const PeakSeries ref = peaks_or_empty(p.clean);
        if (ref.indices.size() < 2) {
            throw Error(ErrorKind::InsufficientPeaks, manifest[i].stem() + ": reference has fewer than 2 beats");
        }
        const PeakSeries gen = peaks_or_empty(p.recon);
        const PeakSeries noisy = peaks_or_empty(p.noisy);
        const std::size_t seconds = static_cast<std::size_t>(static_cast<double>(p.clean.size()) / kPipelineRateHz);
        return SegmentErrors{penalized(gen, ref, config.rmse_mode, true, seconds),
                             penalized(noisy, ref, config.rmse_mode, true, seconds),
                             penalized(gen, ref, config.rmse_mode, false, seconds),
                             penalized(noisy, ref, config.rmse_mode, false, seconds)};
    });

    // groups ordered by activity then intensity
    struct Group {
        std::vector<std::size_t> members;
    };
    std::map<std::pair<int, int>, Group> groups;
    for (std::size_t i = 0; i < manifest.size(); ++i) {
        const auto a = parse_activity(manifest[i].activity);
        const auto level = parse_intensity(manifest[i].intensity);
        if (!a || !level) {
            throw Error(ErrorKind::Ingestion, "manifest row " + std::to_string(i + 1) + " has unknown activity/intensity");
        }
        groups[{static_cast<int>(*a), static_cast<int>(*level)}].members.push_back(i);
    }

    std::vector<EvalRow> rows;
    auto overlay = open_out(config.out_dir / "overlay.csv");
    overlay << "group,stem,sample_index,clean,noisy,reconstructed\n";
    for (const auto& [key, group] : groups) {
        double snr = 0, rg = 0, rn = 0, pg = 0, pn = 0;
        for (std::size_t i : group.members) {
            snr += manifest[i].snr_db;
            rg += errors[i].rmse_gen;
            rn += errors[i].rmse_noisy;
            pg += errors[i].ppe_gen;
            pn += errors[i].ppe_noisy;
        }
        const double n = static_cast<double>(group.members.size());
        const ManifestRow& first = manifest[group.members.front()];
        rows.push_back(make_row(first.activity, first.intensity, snr / n, rg / n, rn / n, pg / n, pn / n));

        const Prepared p = load(first);
        const std::size_t samples = std::min(p.clean.size(), config.plot_windows * kWindowSize);
        const std::string name = first.activity + "_" + first.intensity;
        for (std::size_t s = 0; s < samples; ++s) {
            overlay << name << ',' << first.stem() << ',' << s << ',' << csv::format_number(p.clean[s]) << ','
                    << csv::format_number(p.noisy[s]) << ',' << csv::format_number(p.recon[s]) << '\n';
        }
    }

    EvalReport report = aggregate(rows);
    write_report_csv(report, config.out_dir / "report.csv");
    return report;
}

EvalReport cmd_eval_rows(const PipelineConfig& config, const fs::path& rows_csv) {
    const auto rows = read_rows_csv(rows_csv);
    EvalReport report = aggregate(rows);
    fs::create_directories(config.out_dir);
    write_report_csv(report, config.out_dir / "report.csv");
    return report;
}

}  // namespace ppgclean
