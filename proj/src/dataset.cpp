#include "cdl/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cdl/graph_io.hpp"

namespace cdl {

void Dataset::add_column(std::string name, std::vector<double> values) {
    if (name.empty()) throw std::invalid_argument("column names must be nonempty");
    if (index_.count(name)) throw std::invalid_argument("duplicate column '" + name + "'");
    if (!names_.empty() && values.size() != rows_) {
        throw std::invalid_argument("column '" + name + "' has " + std::to_string(values.size()) +
                                    " rows, expected " + std::to_string(rows_));
    }
    for (double v : values) {
        if (std::isnan(v)) throw std::invalid_argument("column '" + name + "' contains NaN");
    }
    rows_ = values.size();
    index_.emplace(name, names_.size());
    names_.push_back(std::move(name));
    columns_.push_back(std::move(values));
}

std::span<const double> Dataset::column(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) throw std::out_of_range("no column named '" + std::string(name) + "'");
    return columns_[it->second];
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    for (auto& cell : cells) {
        const auto a = cell.find_first_not_of(" \t");
        const auto b = cell.find_last_not_of(" \t");
        cell = a == std::string::npos ? std::string{} : cell.substr(a, b - a + 1);
    }
    return cells;
}

}  // namespace

Dataset parse_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        header = split_csv_line(line);
        break;
    }
    if (header.empty()) throw FormatError(0, "CSV input has no header row");

    std::vector<std::vector<double>> cols(header.size());
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            throw FormatError(lineno, "expected " + std::to_string(header.size()) +
                                          " fields, found " + std::to_string(cells.size()));
        }
        for (std::size_t k = 0; k < cells.size(); ++k) {
            const auto& cell = cells[k];
            double v = 0.0;
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty() || res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
                throw FormatError(lineno, "cannot parse '" + cell + "' as a number");
            }
            if (std::isnan(v)) throw FormatError(lineno, "NaN in column '" + header[k] + "'");
            cols[k].push_back(v);
        }
    }

    Dataset d;
    for (std::size_t k = 0; k < header.size(); ++k) {
        try {
            d.add_column(header[k], std::move(cols[k]));
        } catch (const std::invalid_argument& e) {
            throw FormatError(1, e.what());
        }
    }
    return d;
}

Dataset read_csv(const std::filesystem::path& path) { return parse_csv(read_text_file(path)); }

std::string to_csv(const Dataset& d) {
    std::string out;
    for (std::size_t k = 0; k < d.cols(); ++k) {
        if (k) out.push_back(',');
        out += d.names()[k];
    }
    out.push_back('\n');
    std::vector<std::span<const double>> cols;
    for (const auto& n : d.names()) cols.push_back(d.column(n));
    char buf[40];
    for (std::size_t r = 0; r < d.rows(); ++r) {
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (k) out.push_back(',');
            std::snprintf(buf, sizeof buf, "%.17g", cols[k][r]);
            out += buf;
        }
        out.push_back('\n');
    }
    return out;
}

void write_csv(const Dataset& d, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << to_csv(d);
}

}  // namespace cdl
