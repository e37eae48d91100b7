#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

// Rectangular numeric result tables with deterministic, bit-stable
// serialization. Absent values are NaN in memory, empty CSV cells, JSON null.
namespace phonoq::table {

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, std::string> metadata; // emitted in key order

    void add_row(std::vector<double> row);
    int column_index(const std::string& name) const; // -1 when missing
};

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

// '#'-prefixed metadata lines, header row, LF endings, UTF-8.
void write_csv(const ResultTable& t, std::ostream& os);
std::string to_csv(const ResultTable& t);
ResultTable read_csv(std::istream& is);

std::string to_json(const ResultTable& t);

// FNV-1a over a byte string, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

} // namespace phonoq::table
