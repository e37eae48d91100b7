#include "phonoq/table.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "phonoq/errors.hpp"

namespace phonoq::table {

void ResultTable::add_row(std::vector<double> row) {
    if (row.size() != columns.size())
        throw ShapeError("row width " + std::to_string(row.size()) + " does not match " +
                         std::to_string(columns.size()) + " columns");
    rows.push_back(std::move(row));
}

int ResultTable::column_index(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    return -1;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw Error("double formatting failed");
    return std::string(buf, ptr);
}

void write_csv(const ResultTable& t, std::ostream& os) {
    for (const auto& [k, v] : t.metadata) os << "# " << k << "=" << v << "\n";
    for (size_t c = 0; c < t.columns.size(); ++c)
        os << (c ? "," : "") << t.columns[c];
    os << "\n";
    for (const auto& row : t.rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) os << ",";
            if (!std::isnan(row[c])) os << format_double(row[c]);
        }
        os << "\n";
    }
}

std::string to_csv(const ResultTable& t) {
    std::ostringstream os;
    write_csv(t, os);
    return os.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

ResultTable read_csv(std::istream& is) {
    ResultTable t;
    std::string line;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            if (!body.empty() && body[0] == ' ') body.erase(0, 1);
            const auto eq = body.find('=');
            if (eq != std::string::npos) t.metadata[body.substr(0, eq)] = body.substr(eq + 1);
            continue;
        }
        if (!have_header) {
            t.columns = split_csv_line(line);
            have_header = true;
            continue;
        }
        const auto cells = split_csv_line(line);
        std::vector<double> row(cells.size());
        for (size_t i = 0; i < cells.size(); ++i) {
            if (cells[i].empty()) {
                row[i] = std::nan("");
                continue;
            }
            double v;
            const auto* first = cells[i].data();
            auto [ptr, ec] = std::from_chars(first, first + cells[i].size(), v);
            if (ec != std::errc() || ptr != first + cells[i].size())
                throw ConfigError("bad CSV number: '" + cells[i] + "'");
            row[i] = v;
        }
        t.add_row(std::move(row));
    }
    return t;
}

std::string to_json(const ResultTable& t) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.metadata) meta[k] = v;
    j["metadata"] = meta;
    j["columns"] = t.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (double v : row) {
            if (std::isnan(v))
                r.push_back(nullptr);
            else
                r.push_back(v);
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace phonoq::table
