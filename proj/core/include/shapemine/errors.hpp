#pragma once

#include <stdexcept>
#include <string>

namespace shapemine {

// Raised by the trace loaders and the LSE parser. `line`/`column` are
// 1-based when known, 0 otherwise.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(std::string message, std::size_t line = 0, std::size_t column = 0)
        : std::runtime_error(std::move(message)), line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace shapemine
