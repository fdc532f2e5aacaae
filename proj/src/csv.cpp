// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>

#include "ppgclean/error.hpp"

namespace ppgclean::csv {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                                   : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::optional<double> parse_number(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

namespace {

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

}  // namespace

std::optional<std::size_t> Table::find(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (iequals(header[i], name)) return i;
    }
    return std::nullopt;
}

std::size_t Table::column(std::string_view name, const std::string& file) const {
    if (auto i = find(name)) return *i;
    throw Error(ErrorKind::Ingestion, "missing column '" + std::string(name) + "' in " + file);
}

double Table::number(std::size_t row, std::size_t col, const std::string& file) const {
    if (auto v = parse_number(rows[row][col])) return *v;
    throw Error(ErrorKind::Ingestion, "non-numeric cell '" + rows[row][col] + "' at row " + std::to_string(row + 1) +
                                          ", column " + std::to_string(col + 1) + " in " + file);
}

Table read_file(const std::filesystem::path& path, bool has_header) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Ingestion, "cannot read " + path.string() + ": file absent or unreadable");
    }
    Table table;
    std::string line;
    bool first = true;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_line(line);
        if (first && has_header) {
            table.header = std::move(cells);
            first = false;
            continue;
        }
        if (!table.header.empty() && cells.size() != table.header.size()) {
            throw Error(ErrorKind::Ingestion, path.string() + ":" + std::to_string(line_no) + ": expected " +
                                                  std::to_string(table.header.size()) + " cells, got " +
                                                  std::to_string(cells.size()));
        }
        table.rows.push_back(std::move(cells));
        first = false;
    }
    return table;
}

}  // namespace ppgclean::csv
