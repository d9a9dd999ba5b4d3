#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace suppkg {

/// Splits on every occurrence of `delim`. An input of "a|b|" yields
/// {"a", "b", ""}, so joining the pieces reproduces the input exactly.
std::vector<std::string_view> split(std::string_view line, char delim);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Comma-joined list field ("a,b,c"). Empty input gives an empty list;
/// pieces are trimmed and empty pieces dropped.
std::vector<std::string> split_list(std::string_view field);

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);

/// "2710240" -> "2,710,240"; negative values keep their sign.
std::string format_count(std::int64_t value);

/// Fixed two-decimal rendering, e.g. 59.9414 -> "59.94".
std::string format_fixed2(double value);

/// Reads one line, stripping the terminator. `eol` receives the stripped
/// terminator ("\n", "\r\n" or "" at end of stream without newline).
bool read_line(std::istream& in, std::string& line, std::string& eol);

/// Replaces tab, CR and LF with spaces so a value fits in one TSV cell.
std::string tsv_cell(std::string_view value);

/// Header-indexed TSV reader. The first line must be a header; rows are
/// returned as raw lines so callers decide how to treat ragged input.
class TsvReader {
public:
    explicit TsvReader(std::istream& in);

    const std::vector<std::string>& header() const noexcept { return header_; }

    /// Index of a named column, or nullopt when the header lacks it.
    std::optional<std::size_t> column(std::string_view name) const;

    /// Index of a named column; throws Error naming the column if absent.
    std::size_t require(std::string_view name) const;

    /// Next data line (without terminator). Blank lines are skipped.
    bool next(std::string& line);

    /// 1-based physical line number of the line last returned.
    std::size_t line_number() const noexcept { return line_no_; }

private:
    std::istream& in_;
    std::vector<std::string> header_;
    std::size_t line_no_ = 0;
};

}  // namespace suppkg
