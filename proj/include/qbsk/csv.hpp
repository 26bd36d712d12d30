#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "qbsk/errors.hpp"

namespace qbsk {

/// Deterministic CSV: fixed header, rows rendered with 17 significant
/// digits, LF line endings. Byte-identical for identical inputs.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    static std::string num(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.16e", v);
        return buf;
    }

    void add_row(std::vector<std::string> cells) { rows.push_back(std::move(cells)); }

    [[nodiscard]] std::string to_string() const {
        std::string out;
        auto line = [&out](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) out += ',';
                out += cells[i];
            }
            out += '\n';
        };
        line(header);
        for (const auto& row : rows) line(row);
        return out;
    }
};

/// Write to a file, or stdout for the sentinel path "-".
inline void emit_csv(const CsvTable& table, const std::string& path) {
    std::string body = table.to_string();
    if (path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << body;
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace qbsk
