// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//
// Minimal comma-separated reader/writer helpers. No quoting: none of the
// formats this project reads or writes needs it.

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ppgclean::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Case-insensitive header lookup.
    std::optional<std::size_t> find(std::string_view name) const;
    /// As find(); throws Ingestion naming the column and file.
    std::size_t column(std::string_view name, const std::string& file) const;
    /// Throws Ingestion with 1-based data row and column on bad cells.
    double number(std::size_t row, std::size_t col, const std::string& file) const;
};

/// First non-empty line is the header. Throws Ingestion when the file is
/// absent or a row has the wrong number of cells.
Table read_file(const std::filesystem::path& path, bool has_header = true);

std::vector<std::string> split_line(std::string_view line);
std::string_view trim(std::string_view s);
std::optional<double> parse_number(std::string_view s);

/// Shortest representation that round-trips; "inf"/"-inf"/"nan" for
/// non-finite values.
std::string format_number(double v);

}  // namespace ppgclean::csv
