// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "ppgclean/image.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <vector>

#include "ppgclean/error.hpp"
#include "ppgclean/kernels/kernels.hpp"

namespace ppgclean {

GrayImage encode(const SignalWindow& window, std::string source_id) {
    const auto& s = window.samples();
    for (std::size_t i = 0; i < kWindowSize; ++i) {
        if (!(s[i] >= 0.0 && s[i] <= 1.0)) {
            throw Error(ErrorKind::InvalidInput, "encode: sample " + std::to_string(i) + " outside [0, 1]");
        }
    }
    GrayImage img;
    img.source_id = std::move(source_id);
    const auto& k = kernels::active_kernels();
    for (std::size_t i = 0; i < kImageSide; ++i) {
        k.encode_row(s[i], s.data(), kImageSide, img.pixels.data() + i * kImageSide);
    }
    return img;
}

SignalWindow decode(const GrayImage& image, std::size_t origin_index) {
    std::array<double, kWindowSize> s{};
    for (std::size_t i = 0; i < kWindowSize; ++i) {
        s[i] = static_cast<double>(image.at(i, i)) / 256.0;
    }
    return SignalWindow::from_unit_samples(s, origin_index);
}

void write_pgm(const GrayImage& image, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::Path, "cannot open " + path.string() + " for writing");
    }
    out << "P5\n" << kImageSide << ' ' << kImageSide << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()),
              static_cast<std::streamsize>(image.pixels.size()));
    if (!out) {
        throw Error(ErrorKind::Path, "write failed for " + path.string());
    }
}

namespace {

class HeaderReader {
public:
    HeaderReader(const std::vector<char>& bytes, const std::string& file) : bytes_(bytes), file_(file) {}

    std::string token(std::string_view field) {
        skip_space_and_comments();
        std::string tok;
        while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
            tok.push_back(bytes_[pos_++]);
        }
        if (tok.empty()) {
            fail(field, "missing");
        }
        return tok;
    }

    long number(std::string_view field) {
        const std::string tok = token(field);
        for (char c : tok) {
            if (!std::isdigit(static_cast<unsigned char>(c))) {
                fail(field, "'" + tok + "' is not a decimal integer");
            }
        }
        if (tok.size() > 9) {
            fail(field, "value " + tok + " out of range");
        }
        return std::stol(tok);
    }

    // exactly one whitespace byte separates maxval from the raster
    std::size_t raster_start() {
        if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
            fail("maxval", "not followed by whitespace");
        }
        return pos_ + 1;
    }

    [[noreturn]] void fail(std::string_view field, const std::string& what) const {
        throw Error(ErrorKind::Format, "pgm " + std::string(field) + ": " + what + " (" + file_ + ")");
    }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const char c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    const std::vector<char>& bytes_;
    const std::string& file_;
    std::size_t pos_ = 0;
};

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Path, "cannot open " + path.string());
    }
    const std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const std::string file = path.string();
    HeaderReader header(bytes, file);

    if (header.token("magic") != "P5") {
        header.fail("magic", "expected P5");
    }
    const long width = header.number("width");
    const long height = header.number("height");
    const long maxval = header.number("maxval");
    if (width != static_cast<long>(kImageSide)) {
        header.fail("width", "expected 256, got " + std::to_string(width));
    }
    if (height != static_cast<long>(kImageSide)) {
        header.fail("height", "expected 256, got " + std::to_string(height));
    }
    if (maxval != 255) {
        header.fail("maxval", "expected 255, got " + std::to_string(maxval));
    }
    const std::size_t start = header.raster_start();
    const std::size_t need = kImageSide * kImageSide;
    if (bytes.size() - std::min(start, bytes.size()) != need) {
        header.fail("pixel data", "expected " + std::to_string(need) + " bytes, found " +
                                      std::to_string(bytes.size() - std::min(start, bytes.size())));
    }

    GrayImage img;
    img.source_id = path.stem().string();
    std::copy(bytes.begin() + static_cast<std::ptrdiff_t>(start), bytes.end(), img.pixels.begin());
    return img;
}

std::string_view to_string(ImageRole role) noexcept {
    switch (role) {
    case ImageRole::Clean: return "clean";
    case ImageRole::Noisy: return "noisy";
    case ImageRole::Translated: return "translated";
    }
    return "unknown";
}

std::string image_filename(std::string_view record, std::size_t offset, ImageRole role) {
    std::string name(record);
    name += '_';
    name += std::to_string(offset);
    name += '_';
    name += to_string(role);
    name += ".pgm";
    return name;
}

}  // namespace ppgclean
