#include "suppkg/error.hpp"

#include <fmt/format.h>

namespace suppkg {

namespace {

std::string with_line(const std::string& message, std::size_t line) {
    if (line == 0) return message;
    return fmt::format("line {}: {}", line, message);
}

}  // namespace

Error::Error(const std::string& message, std::size_t line)
    : std::runtime_error(with_line(message, line)), line_(line) {}

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : Error(fmt::format("{}:{}: {}", line, column, message)), column_(column) {
    line_ = line;
}

}  // namespace suppkg
