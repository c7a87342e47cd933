#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace fractfid {

inline constexpr std::string_view kToolVersion = "1.0.0";

/// Decimal, 17 significant digits; round-trips every double.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

using CsvCell = std::variant<double, std::int64_t, std::string>;

inline std::string format_cell(const CsvCell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
}

/// Comma-separated table with exactly one header line.
class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<CsvCell> row) {
        if (row.size() != header_.size()) throw std::invalid_argument("csv row width differs from header");
        rows_.push_back(std::move(row));
    }

    std::size_t rows() const { return rows_.size(); }

    std::string str() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << header_[i];
        os << '\n';
        for (const auto& r : rows_) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_cell(r[i]);
            os << '\n';
        }
        return os.str();
    }

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<CsvCell>> rows_;
};

inline void write_text(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline void write_csv(const std::filesystem::path& path, const CsvTable& t) { write_text(path, t.str()); }

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    write_text(path, j.dump(2) + "\n");
}

/// NaN and infinities are not representable in JSON; they become null.
inline nlohmann::json json_number(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

/// Reads one numeric column of a CSV file with a single header line.
/// An empty `column` selects the last column.
inline std::vector<double> read_csv_column(const std::filesystem::path& path, const std::string& column = {}) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path.string());
    auto split = [](const std::string& line) {
        std::vector<std::string> out;
        std::string cell;
        std::istringstream ss(line);
        while (std::getline(ss, cell, ',')) {
            const auto b = cell.find_first_not_of(" \t\r");
            const auto e = cell.find_last_not_of(" \t\r");
            out.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
        }
        return out;
    };
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument(path.string() + ": empty file");
    const auto header = split(line);
    if (header.empty()) throw std::invalid_argument(path.string() + ": empty header");
    std::size_t idx = header.size() - 1;
    if (!column.empty()) {
        idx = header.size();
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == column) idx = i;
        }
        if (idx == header.size()) throw std::invalid_argument(path.string() + ": no column named " + column);
    }
    std::vector<double> values;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split(line);
        if (idx >= cells.size()) throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": missing column");
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(cells[idx], &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != cells[idx].size()) {
            throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": not a number: " + cells[idx]);
        }
        values.push_back(v);
    }
    return values;
}

}  // namespace fractfid
