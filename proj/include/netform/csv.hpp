#pragma once

#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "netform/common.hpp"

namespace netform {

// Comma-delimited, no quoting. Fields may not contain commas.
inline std::vector<std::string_view> split_csv_row(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

struct CsvFile {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based file line of each row
};

inline CsvFile read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open file: " + path);
    CsvFile csv;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = trim(line);
        if (sv.empty()) continue;
        auto fields = split_csv_row(sv);
        std::vector<std::string> row(fields.begin(), fields.end());
        if (!have_header) {
            csv.header = std::move(row);
            have_header = true;
        } else {
            csv.rows.push_back(std::move(row));
            csv.line_numbers.push_back(lineno);
        }
    }
    if (!have_header) throw io_error("empty file (missing header): " + path);
    return csv;
}

inline void expect_header(const CsvFile& csv, const std::vector<std::string>& expected, const std::string& path) {
    if (csv.header != expected) {
        std::string want;
        for (std::size_t i = 0; i < expected.size(); ++i) want += (i ? "," : "") + expected[i];
        std::string got;
        for (std::size_t i = 0; i < csv.header.size(); ++i) got += (i ? "," : "") + csv.header[i];
        throw io_error("bad header in " + path + ": expected '" + want + "', got '" + got + "'");
    }
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // '\n' endings on every platform
    if (!out) throw io_error("cannot open output file: " + path);
    return out;
}

}  // namespace netform
