#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace suppkg {

/// Data or validation failure. Carries an optional 1-based line number
/// when the failure is tied to a position in an input file.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message, std::size_t line = 0);

    std::size_t line() const noexcept { return line_; }

protected:
    std::size_t line_;
};

/// Syntax error in a pattern definition, located by line and column.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column);

    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

}  // namespace suppkg
