#include "suppkg/text.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include <fmt/format.h>

#include "suppkg/error.hpp"

namespace suppkg {

std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out.append(sep);
        out.append(parts[i]);
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_list(std::string_view field) {
    std::vector<std::string> out;
    for (auto piece : split(field, ',')) {
        piece = trim(piece);
        if (!piece.empty()) out.emplace_back(piece);
    }
    return out;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string format_count(std::int64_t value) {
    std::string digits = std::to_string(value < 0 ? -value : value);
    std::string out;
    out.reserve(digits.size() + digits.size() / 3 + 1);
    std::size_t lead = digits.size() % 3;
    if (lead == 0) lead = 3;
    out.append(digits, 0, lead);
    for (std::size_t i = lead; i < digits.size(); i += 3) {
        out.push_back(',');
        out.append(digits, i, 3);
    }
    return value < 0 ? "-" + out : out;
}

std::string format_fixed2(double value) {
    std::string out = fmt::format("{:.2f}", value);
    if (out == "-0.00") out = "0.00";
    return out;
}

bool read_line(std::istream& in, std::string& line, std::string& eol) {
    line.clear();
    eol.clear();
    if (!std::getline(in, line)) return false;
    if (in.eof()) {
        eol.clear();
    } else {
        eol = "\n";
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
        eol = "\r" + eol;
    }
    return true;
}

std::string tsv_cell(std::string_view value) {
    std::string out(value);
    for (char& c : out) {
        if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    }
    return out;
}

TsvReader::TsvReader(std::istream& in) : in_(in) {
    std::string line;
    std::string eol;
    while (read_line(in_, line, eol)) {
        ++line_no_;
        if (trim(line).empty()) continue;
        for (auto cell : split(line, '\t')) header_.emplace_back(trim(cell));
        return;
    }
}

std::optional<std::size_t> TsvReader::column(std::string_view name) const {
    auto it = std::find(header_.begin(), header_.end(), name);
    if (it == header_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header_.begin());
}

std::size_t TsvReader::require(std::string_view name) const {
    auto idx = column(name);
    if (!idx) throw Error(fmt::format("missing column '{}'", name));
    return *idx;
}

bool TsvReader::next(std::string& line) {
    std::string eol;
    while (read_line(in_, line, eol)) {
        ++line_no_;
        if (trim(line).empty()) continue;
        return true;
    }
    return false;
}

}  // namespace suppkg
