// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "ppgclean/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>

#include "csv.hpp"
#include "log.hpp"
#include "ppgclean/error.hpp"

namespace fs = std::filesystem;

namespace ppgclean {
namespace {

constexpr std::string_view kSignalsSuffix = "_Signals.csv";
constexpr std::string_view kNumericsSuffix = "_Numerics.csv";

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::vector<double> read_column(const csv::Table& table, std::size_t col, const std::string& file,
                                bool allow_nan) {
    std::vector<double> out;
    out.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const double v = table.number(r, col, file);
        if (!allow_nan && !std::isfinite(v)) {
            throw Error(ErrorKind::Ingestion, "non-finite value at row " + std::to_string(r + 1) + ", column " +
                                                  std::to_string(col + 1) + " in " + file);
        }
        out.push_back(v);
    }
    return out;
}

BidmcRecord load_one_bidmc(const fs::path& dir, const std::string& id) {
    const fs::path signals = dir / (id + std::string(kSignalsSuffix));
    const fs::path numerics = dir / (id + std::string(kNumericsSuffix));
    if (!fs::exists(numerics)) {
        throw Error(ErrorKind::Ingestion, "record " + id + ": absent file " + numerics.string());
    }

    const csv::Table sig = csv::read_file(signals);
    auto ppg_col = sig.find("PPG");
    if (!ppg_col) ppg_col = sig.find("PLETH");
    if (!ppg_col) {
        throw Error(ErrorKind::Ingestion, "missing column 'PPG' in " + signals.string());
    }
    auto ppg = read_column(sig, *ppg_col, signals.string(), false);
    if (ppg.empty()) {
        throw Error(ErrorKind::Ingestion, "no PPG samples in " + signals.string());
    }

    const csv::Table num = csv::read_file(numerics);
    auto hr = read_column(num, num.column("HR", numerics.string()), numerics.string(), true);

    const double duration = static_cast<double>(ppg.size()) / kBidmcRateHz;
    return BidmcRecord{id, RawSignal(std::move(ppg), kBidmcRateHz, id), std::move(hr), duration};
}

std::uint64_t bounded(std::mt19937_64& gen, std::uint64_t n) {
    // rejection sampling keeps the draw unbiased and identical across standard libraries
    const std::uint64_t threshold = (0 - n) % n;
    while (true) {
        const std::uint64_t r = gen();
        if (r >= threshold) return r % n;
    }
}

std::vector<double> tiled(std::span<const double> src, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = src[i % src.size()];
    return out;
}

}  // namespace

std::vector<BidmcRecord> load_bidmc(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw Error(ErrorKind::Path, "BIDMC directory not found: " + dir.string());
    }
    std::vector<std::string> ids;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (entry.is_regular_file() && ends_with(name, kSignalsSuffix)) {
            ids.push_back(name.substr(0, name.size() - kSignalsSuffix.size()));
        }
    }
    std::sort(ids.begin(), ids.end());
    if (ids.empty()) {
        log_warning("no *_Signals.csv records in " + dir.string());
    }
    std::vector<BidmcRecord> records;
    records.reserve(ids.size());
    for (const auto& id : ids) {
        records.push_back(load_one_bidmc(dir, id));
    }
    return records;
}

void write_bidmc(const BidmcRecord& record, const fs::path& dir) {
    std::ofstream sig(dir / (record.id + std::string(kSignalsSuffix)), std::ios::trunc);
    std::ofstream num(dir / (record.id + std::string(kNumericsSuffix)), std::ios::trunc);
    if (!sig || !num) {
        throw Error(ErrorKind::Path, "cannot write record " + record.id + " into " + dir.string());
    }
    sig << "Time [s], PLETH\n";
    const auto ppg = record.ppg.samples();
    for (std::size_t i = 0; i < ppg.size(); ++i) {
        sig << csv::format_number(static_cast<double>(i) / record.ppg.rate_hz()) << ", "
            << csv::format_number(ppg[i]) << '\n';
    }
    num << "Time [s], HR\n";
    for (std::size_t i = 0; i < record.hr_ref.size(); ++i) {
        num << i << ", " << csv::format_number(record.hr_ref[i]) << '\n';
    }
}

AccelTrace load_e4_acc(const fs::path& file, Activity activity, Intensity intensity, double counts_per_g) {
    if (!(counts_per_g > 0.0)) {
        throw Error(ErrorKind::InvalidInput, "E4 scale must be positive");
    }
    const csv::Table table = csv::read_file(file, false);
    const std::string name = file.string();
    if (table.rows.size() < 3) {
        throw Error(ErrorKind::Ingestion, name + ": need timestamp, rate and at least one sample row");
    }
    for (const auto& row : table.rows) {
        if (row.size() != 3) {
            throw Error(ErrorKind::Ingestion, name + ": every row must have 3 cells");
        }
    }
    for (std::size_t c = 0; c < 3; ++c) {
        table.number(0, c, name);
        const double rate = table.number(1, c, name);
        if (rate != kPipelineRateHz) {
            throw Error(ErrorKind::Rate, name + ": declared rate " + csv::format_number(rate) + " Hz, expected 32");
        }
    }

    AccelTrace trace;
    trace.rate_hz = kPipelineRateHz;
    trace.activity = activity;
    trace.intensity = intensity;
    trace.samples.reserve(table.rows.size() - 2);
    for (std::size_t r = 2; r < table.rows.size(); ++r) {
        double axis[3];
        for (std::size_t c = 0; c < 3; ++c) {
            axis[c] = table.number(r, c, name);
            if (!(std::abs(axis[c]) <= 128.0)) {
                throw Error(ErrorKind::Range, name + ": count " + table.rows[r][c] + " at row " +
                                                  std::to_string(r + 1) + " outside +-128");
            }
        }
        trace.samples.push_back(
            AccelSample::clipped(axis[0] / counts_per_g, axis[1] / counts_per_g, axis[2] / counts_per_g));
    }
    return trace;
}

std::vector<AccelTrace> load_trace_dir(const fs::path& dir, double counts_per_g) {
    if (!fs::is_directory(dir)) {
        throw Error(ErrorKind::Path, "trace directory not found: " + dir.string());
    }
    struct Found {
        Activity activity;
        Intensity intensity;
        fs::path path;
    };
    std::vector<Found> found;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
        const std::string stem = entry.path().stem().string();
        bool matched = false;
        for (Activity a : kAllActivities) {
            for (Intensity level : {Intensity::Low, Intensity::High}) {
                const std::string tail = std::string(to_string(a)) + "_" + std::string(to_string(level));
                if (stem == tail || ends_with(stem, "_" + tail)) {
                    found.push_back({a, level, entry.path()});
                    matched = true;
                }
            }
        }
        if (!matched) {
            log_warning("skipping " + entry.path().string() + ": name does not end in <activity>_<low|high>");
        }
    }
    std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) {
        if (a.activity != b.activity) return a.activity < b.activity;
        if (a.intensity != b.intensity) return a.intensity < b.intensity;
        return a.path.filename() < b.path.filename();
    });
    std::vector<AccelTrace> traces;
    for (const Found& f : found) {
        traces.push_back(load_e4_acc(f.path, f.activity, f.intensity, counts_per_g));
    }
    return traces;
}

SplitPlan build_splits(std::vector<std::string> ids, std::uint64_t seed, SplitPolicy policy) {
    constexpr std::size_t kRecords = 53, kTrain = 40, kNoisy = 20;
    const std::size_t n = ids.size();
    std::size_t train = kTrain;
    std::size_t noisy = kNoisy;
    if (n != kRecords) {
        if (policy == SplitPolicy::Strict) {
            throw Error(ErrorKind::InvalidInput, "split needs 53 records, got " + std::to_string(n));
        }
        if (n < 3) {
            throw Error(ErrorKind::InvalidInput, "split needs at least 3 records, got " + std::to_string(n));
        }
        train = std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(static_cast<double>(n) * kTrain / kRecords)),
                                        1, n - 1);
        noisy = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(static_cast<double>(train) * kNoisy / kTrain)));
    }

    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
        throw Error(ErrorKind::InvalidInput, "split: duplicate record ids");
    }
    std::mt19937_64 gen(seed);
    for (std::size_t i = n - 1; i > 0; --i) {
        std::swap(ids[i], ids[bounded(gen, i + 1)]);
    }

    SplitPlan plan;
    plan.seed = seed;
    plan.train_clean_ids.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(train));
    plan.train_noisy_source_ids.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(noisy));
    plan.test_ids.assign(ids.begin() + static_cast<std::ptrdiff_t>(train), ids.end());
    return plan;
}

std::string CorpusSegment::stem() const {
    return record_id + "_" + std::to_string(offset);
}

std::string ManifestRow::stem() const {
    return record_id + "_" + std::to_string(segment_offset);
}

std::vector<CorpusSegment> build_noisy_corpus(const SplitPlan& plan, std::span<const BidmcRecord> records,
                                              std::span<const AccelTrace> traces, double gain) {
    if (traces.empty()) {
        throw Error(ErrorKind::InvalidInput, "noisy corpus needs at least one accelerometer trace");
    }
    std::map<std::string, const BidmcRecord*> by_id;
    for (const BidmcRecord& r : records) by_id[r.id] = &r;

    std::vector<std::vector<double>> noise;
    noise.reserve(traces.size());
    for (const AccelTrace& t : traces) {
        noise.push_back(tiled(motion_noise(t), kSegmentSamples));
    }

    std::vector<CorpusSegment> corpus;
    std::size_t next_trace = 0;
    auto add = [&](const std::vector<std::string>& ids, const std::string& split) {
        for (const std::string& id : ids) {
            const auto it = by_id.find(id);
            if (it == by_id.end()) {
                throw Error(ErrorKind::InvalidInput, "split plan names unknown record " + id);
            }
            const RawSignal at32 = resample(it->second->ppg, kPipelineRateHz);
            const auto s = at32.samples();
            for (std::size_t off = 0; off + kSegmentSamples <= s.size(); off += kSegmentSamples) {
                const std::size_t slot = next_trace++ % traces.size();
                RawSignal clean(std::vector<double>(s.begin() + static_cast<std::ptrdiff_t>(off),
                                                    s.begin() + static_cast<std::ptrdiff_t>(off + kSegmentSamples)),
                                kPipelineRateHz, id);
                corpus.push_back({id, split, off,
                                  mix(clean, noise[slot], gain, traces[slot].activity, traces[slot].intensity)});
            }
        }
    };
    add(plan.train_noisy_source_ids, "train");
    add(plan.test_ids, "test");
    return corpus;
}

void write_manifest(std::span<const CorpusSegment> corpus, const fs::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::Path, "cannot open " + path.string() + " for writing");
    }
    out << "record_id,split,segment_offset,activity,intensity,gain,snr_db\n";
    for (const CorpusSegment& seg : corpus) {
        out << seg.record_id << ',' << seg.split << ',' << seg.offset << ',' << to_string(seg.record.activity) << ','
            << to_string(seg.record.intensity) << ',' << csv::format_number(seg.record.gain) << ','
            << csv::format_number(seg.record.snr_db) << '\n';
    }
}

std::vector<ManifestRow> read_manifest(const fs::path& path) {
    const csv::Table t = csv::read_file(path);
    const std::string file = path.string();
    const std::size_t c_id = t.column("record_id", file), c_split = t.column("split", file),
                      c_off = t.column("segment_offset", file), c_act = t.column("activity", file),
                      c_int = t.column("intensity", file), c_gain = t.column("gain", file),
                      c_snr = t.column("snr_db", file);
    std::vector<ManifestRow> rows;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double off = t.number(r, c_off, file);
        if (!(off >= 0.0) || off != std::floor(off)) {
            throw Error(ErrorKind::Ingestion, "bad segment_offset at row " + std::to_string(r + 1) + " in " + file);
        }
        rows.push_back({t.rows[r][c_id], t.rows[r][c_split], static_cast<std::size_t>(off), t.rows[r][c_act],
                        t.rows[r][c_int], t.number(r, c_gain, file), t.number(r, c_snr, file)});
    }
    return rows;
}

void write_signal_csv(std::span<const double> samples, const fs::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::Path, "cannot open " + path.string() + " for writing");
    }
    out << "value\n";
    for (double v : samples) out << csv::format_number(v) << '\n';
}

RawSignal read_signal_csv(const fs::path& path, double rate_hz) {
    const csv::Table t = csv::read_file(path);
    const std::string file = path.string();
    auto values = read_column(t, t.column("value", file), file, false);
    if (values.empty()) {
        throw Error(ErrorKind::Ingestion, "no samples in " + file);
    }
    return RawSignal(std::move(values), rate_hz, path.stem().string());
}

}  // namespace ppgclean
