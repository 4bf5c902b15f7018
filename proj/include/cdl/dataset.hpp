#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cdl/format_error.hpp"

namespace cdl {

/// Named real-valued columns of equal length. NaN is rejected on insertion.
class Dataset {
public:
    Dataset() = default;

    /// Throws std::invalid_argument on a duplicate name, a length mismatch or NaN.
    void add_column(std::string name, std::vector<double> values);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return names_.size(); }
    /// Column names in insertion order.
    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
    [[nodiscard]] bool has(std::string_view name) const { return index_.count(std::string(name)) != 0; }
    /// Throws std::out_of_range for an unknown column.
    [[nodiscard]] std::span<const double> column(std::string_view name) const;

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    std::vector<std::string> names_;
    std::vector<std::vector<double>> columns_;
    std::map<std::string, std::size_t> index_;
    std::size_t rows_ = 0;
};

/// Header row of names, then rows of decimal floats. Throws FormatError on
/// ragged rows, unparsable cells, NaN or duplicate column names.
[[nodiscard]] Dataset parse_csv(std::string_view text);
[[nodiscard]] Dataset read_csv(const std::filesystem::path& path);

/// Values printed with 17 significant digits.
[[nodiscard]] std::string to_csv(const Dataset& d);
void write_csv(const Dataset& d, const std::filesystem::path& path);

}  // namespace cdl
