#ifndef TSMT_CSV_HPP
#define TSMT_CSV_HPP

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "tsmt/dataset.hpp"
#include "tsmt/error.hpp"

namespace tsmt::csv {

/// Shortest round-trip-safe text for a double: 17 significant digits, "inf"/"-inf"/"nan" for non-finite.
inline std::string format_double(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    // shortest representation that parses back to the same bits
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

/// Splits one line on commas. No quoting: every field in this tool's formats is a bare token.
inline std::vector<std::string_view> split_line(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

/// Parses a decimal float; "inf", "-inf" and "nan" are accepted.
inline bool parse_double(std::string_view token, double& out)
{
    if (token.empty()) return false;
    if (token.front() == '+') token.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc() && ptr == token.data() + token.size();
}

/// Reads an m x n numeric matrix. Blank lines are ignored; every data row must have the same
/// width. A non-numeric cell is reported with its 1-based row and column.
inline Dataset read_dataset(std::istream& in, bool skip_header = false)
{
    std::vector<double> values;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t line_no = 0;
    std::string line;
    bool header_pending = skip_header;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (header_pending) {
            header_pending = false;
            continue;
        }
        const auto fields = split_line(line);
        if (rows == 0) {
            cols = fields.size();
        } else if (fields.size() != cols) {
            throw data_error("CSV line " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                             " columns, found " + std::to_string(fields.size()));
        }
        for (std::size_t j = 0; j < fields.size(); ++j) {
            double v = 0.0;
            if (!parse_double(fields[j], v) || !std::isfinite(v)) {
                throw data_error("CSV row " + std::to_string(line_no) + ", column " + std::to_string(j + 1) +
                                 ": not a number: '" + std::string(fields[j]) + "'");
            }
            values.push_back(v);
        }
        ++rows;
    }
    return Dataset(rows, cols, std::move(values));
}

inline Dataset read_dataset_file(const std::string& path, bool skip_header = false)
{
    std::ifstream in(path);
    if (!in) throw data_error("cannot open '" + path + "'");
    return read_dataset(in, skip_header);
}

/// Header-keyed table of string cells, used to read back this tool's own CSV outputs.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(std::string_view name) const
    {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return static_cast<int>(i);
        }
        return -1;
    }
};

inline Table read_table(std::istream& in)
{
    Table t;
    std::string line;
    bool have_header = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<std::string> cells;
        for (auto f : split_line(line)) cells.emplace_back(f);
        if (!have_header) {
            t.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != t.header.size()) {
            throw data_error("CSV line " + std::to_string(line_no) + ": expected " +
                             std::to_string(t.header.size()) + " columns, found " + std::to_string(cells.size()));
        }
        t.rows.push_back(std::move(cells));
    }
    return t;
}

}  // namespace tsmt::csv

#endif  // TSMT_CSV_HPP
