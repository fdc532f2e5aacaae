// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//
// Window <-> grayscale image transform and the PGM exchange format used to
// hand images to the translation model.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "ppgclean/signal.hpp"

namespace ppgclean {

inline constexpr std::size_t kImageSide = kWindowSize;

struct GrayImage {
    std::array<std::uint8_t, kImageSide * kImageSide> pixels{};
    std::string source_id;

    std::uint8_t at(std::size_t row, std::size_t col) const noexcept {
        return pixels[row * kImageSide + col];
    }
    std::uint8_t& at(std::size_t row, std::size_t col) noexcept { return pixels[row * kImageSide + col]; }

    bool operator==(const GrayImage& other) const noexcept { return pixels == other.pixels; }
};

/// pixel(i, j) = min(255, floor((s[i] + s[j]) * 128)).
GrayImage encode(const SignalWindow& window, std::string source_id = {});

/// s[i] = pixel(i, i) / 256. Off-diagonal pixels are ignored.
SignalWindow decode(const GrayImage& image, std::size_t origin_index = 0);

/// Binary PGM: "P5\n256 256\n255\n" then row-major pixel bytes.
void write_pgm(const GrayImage& image, const std::filesystem::path& path);

/// Accepts any header whitespace and '#' comments. Rejects anything other
/// than a 256x256 image with maxval 255; the error names the bad field.
GrayImage read_pgm(const std::filesystem::path& path);

enum class ImageRole { Clean, Noisy, Translated };

std::string_view to_string(ImageRole role) noexcept;

/// "<record>_<offset>_<clean|noisy|translated>.pgm"
std::string image_filename(std::string_view record, std::size_t offset, ImageRole role);

}  // namespace ppgclean
