// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>

namespace fs = std::filesystem;

namespace ppgclean::testing {

TempDir::TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = fs::temp_directory_path() / (tag + "-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

std::string read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_bytes(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << bytes;
}

std::vector<double> naive_conv1d(const std::vector<double>& input, std::size_t length, std::size_t channels,
                                 const std::vector<double>& kernels, const std::vector<double>& bias,
                                 std::size_t filters, std::size_t width) {
    const std::size_t out_len = length - width + 1;
    std::vector<double> out(out_len * filters);
    for (std::size_t t = 0; t < out_len; ++t) {
        for (std::size_t k = 0; k < filters; ++k) {
            long double acc = bias[k];
            for (std::size_t w = 0; w < width; ++w) {
                for (std::size_t c = 0; c < channels; ++c) {
                    acc += static_cast<long double>(input[(t + w) * channels + c]) *
                           kernels[(k * width + w) * channels + c];
                }
            }
            out[t * filters + k] = acc > 0 ? static_cast<double>(acc) : 0.0;
        }
    }
    return out;
}

std::vector<double> reference_motion_noise(const std::vector<AccelSample>& s) {
    const std::size_t n = s.size();
    std::vector<double> out(n, 0.0);
    double avg = 0.0;
    for (std::size_t start = 0; start < n; start += 32) {
        const std::size_t stop = std::min(n, start + 32);
        std::fill(out.begin() + static_cast<std::ptrdiff_t>(start), out.begin() + static_cast<std::ptrdiff_t>(stop), avg);
        if (stop - start < 32) break;
        double sum = 0.0;
        for (std::size_t i = std::max<std::size_t>(start, 1); i < stop; ++i) {
            const double dx = std::fabs(s[i].x - s[i - 1].x);
            const double dy = std::fabs(s[i].y - s[i - 1].y);
            const double dz = std::fabs(s[i].z - s[i - 1].z);
            sum += dx > dy ? (dx > dz ? dx : dz) : (dy > dz ? dy : dz);
        }
        avg = 0.9 * avg + 0.1 * (sum / 32.0);
    }
    return out;
}

std::vector<AccelSample> random_trace(std::mt19937_64& gen, std::size_t n) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<AccelSample> out(n);
    for (auto& a : out) a = {u(gen), u(gen), u(gen)};
    return out;
}

std::vector<double> synthetic_ppg(std::size_t n, double rate_hz, double bpm, double phase_s) {
    const double period = 60.0 / bpm;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / rate_hz;
        const double beat_t = std::fmod(t - phase_s + 10.0 * period, period);
        auto bump = [](double x, double mu, double sigma) { return std::exp(-0.5 * (x - mu) * (x - mu) / (sigma * sigma)); };
        const double systolic = bump(beat_t, 0.0, 0.06) + bump(beat_t, period, 0.06);
        const double dicrotic = 0.3 * bump(beat_t, 0.25 * period + 0.1, 0.05);
        const double wander = 0.05 * std::sin(2.0 * std::numbers::pi * 0.2 * t);
        out[i] = 1.0 + systolic + dicrotic + wander;
    }
    return out;
}

std::vector<double> pulse_train(std::size_t n, std::size_t period, std::size_t first) {
    std::vector<double> out(n, 0.0);
    for (std::size_t p = first; p < n; p += period) {
        for (std::size_t i = 0; i < n; ++i) {
            const double d = static_cast<double>(i) - static_cast<double>(p);
            out[i] += std::exp(-0.5 * d * d / 4.0);
        }
    }
    return out;
}

BidmcRecord synthetic_bidmc(const std::string& id, double bpm, double seconds) {
    const auto n = static_cast<std::size_t>(seconds * 125.0);
    auto ppg = synthetic_ppg(n, 125.0, bpm);
    std::vector<double> hr(static_cast<std::size_t>(seconds), bpm);
    return BidmcRecord{id, RawSignal(std::move(ppg), 125.0, id), std::move(hr), seconds};
}

void write_e4_file(const fs::path& path, std::size_t n, int counts, std::uint64_t seed, int declared_rate) {
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<int> jitter(-counts, counts);
    std::ofstream out(path, std::ios::trunc);
    out << "1495437325.000000, 1495437325.000000, 1495437325.000000\n";
    out << declared_rate << ".000000, " << declared_rate << ".000000, " << declared_rate << ".000000\n";
    for (std::size_t i = 0; i < n; ++i) {
        out << jitter(gen) << ", " << 64 + jitter(gen) / 2 << ", " << jitter(gen) << '\n';
    }
}

std::vector<double> random_unit_window(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> w(256);
    for (double& v : w) v = u(gen);
    const std::size_t lo = gen() % 256;
    w[lo] = 0.0;
    w[(lo + 1 + gen() % 255) % 256] = 1.0;
    return w;
}

}  // namespace ppgclean::testing
