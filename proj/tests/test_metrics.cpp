// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ppgclean/metrics.hpp"
#include "support.hpp"

using namespace ppgclean;
using testing::error_kind;

namespace {

PeakSeries series(std::vector<std::size_t> idx, double rate) { return PeakSeries{std::move(idx), rate}; }

std::vector<std::size_t> arithmetic(std::size_t first, std::size_t step, std::size_t count) {
    std::vector<std::size_t> v;
    for (std::size_t k = 0; k < count; ++k) v.push_back(first + k * step);
    return v;
}

std::filesystem::path fixture() { return std::filesystem::path(PPGCLEAN_TEST_DATA) / "published_rows.csv"; }

}  // namespace

TEST_CASE("peak detection on simple signals") {
    CHECK(detect_peaks(std::vector<double>(64, 0.3), 32.0).indices.empty());

    SUBCASE("1 Hz sinusoid at 32 Hz") {
        // sin(2 pi (i + 0.3) / 32) peaks analytically at i = 7.7 + 32k; nearest samples are 8 + 32k.
        std::vector<double> x(256);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2.0 * std::numbers::pi * (i + 0.3) / 32.0);
        const auto p = detect_peaks(x, 32.0);
        CHECK(p.indices == arithmetic(8, 32, 8));
        CHECK(hr_bpm(p) == std::vector<double>(7, 60.0));
    }
    SUBCASE("1.5 Hz sinusoid at 32 Hz") {
        std::vector<double> x(256);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2.0 * std::numbers::pi * 1.5 * (i + 0.1) / 32.0);
        const auto p = detect_peaks(x, 32.0);
        REQUIRE(p.indices.size() == 12);
        for (std::size_t k = 0; k < 12; ++k) {
            const double analytic = (0.25 + static_cast<double>(k)) * 32.0 / 1.5 - 0.1;
            CHECK(std::abs(static_cast<double>(p.indices[k]) - analytic) <= 0.5);
        }
    }
    SUBCASE("plateau peaks report their first sample") {
        const auto x = testing::pulse_train(96, 32, 5);
        auto y = x;
        y[6] = y[5];
        CHECK(detect_peaks(y, 32.0).indices == detect_peaks(x, 32.0).indices);
    }
    SUBCASE("a bump inside the refractory gap is merged") {
        auto x = testing::pulse_train(128, 32, 4);
        x[8] = 2.0;  // 4 samples after a peak, higher than it
        const auto p = detect_peaks(x, 32.0);
        CHECK(p.indices.front() == 8);
        CHECK(p.indices.size() == 4);
    }
    CHECK(error_kind([] { detect_peaks(std::vector<double>(63, 0.0), 32.0); }) == ErrorKind::InvalidInput);
}

TEST_CASE("heart rate from peaks") {
    CHECK(hr_bpm(series({0, 32, 80}, 32.0)) == std::vector<double>{60.0, 40.0});
    CHECK(error_kind([] { hr_bpm(series({10}, 32.0)); }) == ErrorKind::InsufficientPeaks);
}

TEST_CASE("rmse") {
    CHECK(rmse_bpm(std::vector<double>{60, 60}, std::vector<double>{60, 60}) == 0.0);
    CHECK(rmse_bpm(std::vector<double>{62, 58}, std::vector<double>{60, 60}) == 2.0);
    CHECK(rmse_bpm(std::vector<double>{63, 60, 60, 60}, std::vector<double>{60, 60, 60, 64}) ==
          doctest::Approx(2.5));
    CHECK(error_kind([] { rmse_bpm(std::vector<double>{1}, std::vector<double>{1, 2}); }) == ErrorKind::InvalidInput);
    CHECK(error_kind([] { rmse_bpm(std::vector<double>{}, std::vector<double>{}); }) == ErrorKind::InvalidInput);
}

TEST_CASE("peak position error") {
    const auto ref = series(arithmetic(0, 32, 6), 32.0);
    CHECK(ppe_bpm(ref, ref) == 0.0);
    CHECK(rmse_matched_bpm(ref, ref) == 0.0);

    SUBCASE("constant 2 BPM offset") {
        // 62 samples per beat at 62 Hz is 60 BPM; 60 samples per beat is 62 BPM.
        const auto r = series(arithmetic(0, 62, 11), 62.0);
        const auto e = series(arithmetic(0, 60, 12), 62.0);
        CHECK(ppe_bpm(e, r) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(rmse_matched_bpm(e, r) == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("an unmatched reference beat costs its full heart rate") {
        const auto e = series(arithmetic(0, 32, 5), 32.0);
        CHECK(ppe_bpm(e, ref) == doctest::Approx(60.0 / 5.0));
        const auto pairs = match_beats(e, ref);
        REQUIRE(pairs.size() == 5);
        CHECK_FALSE(pairs.back().estimate_hr.has_value());
        CHECK(rmse_matched_bpm(e, ref) == doctest::Approx(std::sqrt(60.0 * 60.0 / 5.0)));
    }
    SUBCASE("different sampling rates are aligned in time") {
        const auto e = series(arithmetic(0, 64, 6), 64.0);
        CHECK(ppe_bpm(e, ref) == 0.0);
    }
    SUBCASE("beats beyond half a second do not match") {
        const auto e = series(arithmetic(200, 32, 6), 32.0);
        const auto pairs = match_beats(e, ref);
        for (const auto& p : pairs) CHECK_FALSE(p.estimate_hr.has_value());
        CHECK(ppe_bpm(e, ref) == 60.0);
    }
}

TEST_CASE("per-second heart rate interpolation") {
    const auto hr = hr_per_second(series({0, 32, 96, 128}, 32.0), 6);
    // beats end at 1 s (60), 3 s (30), 4 s (60)
    CHECK(hr == std::vector<double>{60, 60, 45, 30, 60, 60});
}

TEST_CASE("improvement ratios") {
    CHECK(improvement_ratio(41.76, 0.213) == doctest::Approx(196.07).epsilon(1e-3));
    CHECK(improvement_ratio(21.76, 3.008) == doctest::Approx(7.235).epsilon(1e-3));
    CHECK(std::isinf(improvement_ratio(5.0, 0.0)));
    const auto row = make_row("Waving", "low", 20.04, 0.213, 41.76, 0.136, 32.89);
    CHECK(row.rmse_improvement == doctest::Approx(196.06).epsilon(1e-4));
    CHECK(row.ppe_improvement == doctest::Approx(241.84).epsilon(1e-3));
}

TEST_CASE("aggregating the published rows reproduces the published averages") {
    const auto rows = read_rows_csv(fixture());
    REQUIRE(rows.size() == 12);
    CHECK(rows[0].noise_type == "Waving");
    CHECK(rows[0].intensity == "low");
    const auto report = aggregate(rows);
    const auto& a = report.averages;
    CHECK(a.noise_type == "Average");
    CHECK(a.snr_db == doctest::Approx(17.85).epsilon(0.005));
    CHECK(a.rmse_gen_bpm == doctest::Approx(2.18).epsilon(0.005));
    CHECK(a.rmse_noisy_bpm == doctest::Approx(56.19).epsilon(0.005));
    CHECK(a.rmse_improvement == doctest::Approx(41.18).epsilon(0.005));
    CHECK(a.ppe_gen_bpm == doctest::Approx(0.958).epsilon(0.005));
    CHECK(a.ppe_noisy_bpm == doctest::Approx(37.465).epsilon(0.005));
    CHECK(a.ppe_improvement == doctest::Approx(58.68).epsilon(0.005));

    CHECK(aggregate(select_intensity(rows, "low")).averages.snr_db == doctest::Approx(21.7).epsilon(0.005));
    CHECK(aggregate(select_intensity(rows, "high")).averages.snr_db == doctest::Approx(14.0).epsilon(0.005));
}

TEST_CASE("aggregate edge cases") {
    const auto row = make_row("Waving", "low", 10, 1, 2, 3, 6);
    const auto one = aggregate(std::vector<EvalRow>{row}).averages;
    CHECK(one.snr_db == 10);
    CHECK(one.rmse_improvement == 2);
    CHECK(one.ppe_improvement == 2);
    CHECK(error_kind([] { aggregate(std::vector<EvalRow>{}); }) == ErrorKind::InvalidInput);
}

TEST_CASE("report csv round trip") {
    testing::TempDir dir;
    const auto rows = read_rows_csv(fixture());
    write_report_csv(aggregate(rows), dir / "r.csv");
    const auto text = testing::read_bytes(dir / "r.csv");
    CHECK(text.rfind("Noise Type,S/N (dB),RMSE Gen. (BPM)", 0) == 0);
    CHECK(text.find("\nAverage,") != std::string::npos);
    const auto back = read_rows_csv(dir / "r.csv");
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].noise_type == rows[i].noise_type);
        CHECK(back[i].intensity == rows[i].intensity);
        CHECK(back[i].ppe_noisy_bpm == rows[i].ppe_noisy_bpm);
    }
}
