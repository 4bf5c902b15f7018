#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cdl {

/// Malformed text input (edge lists, constraint files, SCM files, CSV).
/// `line` is 1-based; 0 when the error is not tied to a line.
class FormatError : public std::runtime_error {
public:
    FormatError(std::size_t line, const std::string& message)
        : std::runtime_error(line == 0 ? message
                                       : "line " + std::to_string(line) + ": " + message),
          line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace cdl
