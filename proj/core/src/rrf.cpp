#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "suppkg/error.hpp"
#include "suppkg/terminology.hpp"
#include "suppkg/text.hpp"

namespace suppkg::terminology {

namespace {

// MRCONSO column positions.
constexpr std::size_t kConsoCui = 0;
constexpr std::size_t kConsoLat = 1;
constexpr std::size_t kConsoIspref = 6;
constexpr std::size_t kConsoSab = 11;
constexpr std::size_t kConsoTty = 12;
constexpr std::size_t kConsoCode = 13;
constexpr std::size_t kConsoStr = 14;

std::size_t min_pieces(RrfKind kind) {
    switch (kind) {
        case RrfKind::Mrconso: return kConsoStr + 1;
        case RrfKind::Mrsty: return 2;
        case RrfKind::Mrrank: return 4;
        case RrfKind::Mrsab: return 4;
    }
    return 1;
}

// Standard layouts, trailing pipe included.
std::size_t default_pieces(RrfKind kind) {
    switch (kind) {
        case RrfKind::Mrconso: return 19;
        case RrfKind::Mrsty: return 7;
        case RrfKind::Mrrank: return 5;
        case RrfKind::Mrsab: return 26;
    }
    return 1;
}

}  // namespace

std::string RrfRow::text() const {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back('|');
        out.append(fields[i]);
    }
    return out;
}

std::string_view file_name(RrfKind kind) {
    switch (kind) {
        case RrfKind::Mrconso: return "MRCONSO.RRF";
        case RrfKind::Mrsty: return "MRSTY.RRF";
        case RrfKind::Mrrank: return "MRRANK.RRF";
        case RrfKind::Mrsab: return "MRSAB.RRF";
    }
    return "";
}

bool RrfTable::trailing_pipe() const {
    if (rows.empty()) return true;
    return rows.front().fields.back().empty();
}

void RrfTable::append(const std::vector<std::pair<std::size_t, std::string>>& values) {
    if (field_count == 0) field_count = default_pieces(kind);
    std::size_t data_columns = field_count - (trailing_pipe() ? 1 : 0);
    RrfRow row;
    row.fields.assign(field_count, std::string{});
    for (const auto& [pos, value] : values) {
        if (pos < data_columns) row.fields[pos] = value;
    }
    row.eol = default_eol;
    // A final input line without newline must gain one once rows follow it.
    if (!rows.empty() && rows.back().eol.empty()) rows.back().eol = default_eol;
    rows.push_back(std::move(row));
}

RrfTable read_rrf(std::istream& in, RrfKind kind, Warnings* warnings) {
    RrfTable table;
    table.kind = kind;
    std::unordered_set<std::string> seen;
    std::string line;
    std::string eol;
    std::size_t line_no = 0;
    while (read_line(in, line, eol)) {
        ++line_no;
        auto pieces = split(line, '|');
        if (table.field_count == 0) {
            if (pieces.size() < min_pieces(kind)) {
                throw Error(fmt::format("{}: expected at least {} fields, found {}",
                                        file_name(kind), min_pieces(kind), pieces.size()),
                            line_no);
            }
            table.field_count = pieces.size();
            if (!eol.empty()) table.default_eol = eol;
        } else if (pieces.size() != table.field_count) {
            throw Error(fmt::format("{}: expected {} fields, found {}", file_name(kind),
                                    table.field_count, pieces.size()),
                        line_no);
        }
        if (!seen.insert(line).second) {
            if (warnings) {
                warnings->push_back(fmt::format("{} line {}: duplicate row dropped",
                                                file_name(kind), line_no));
            }
            // Keep the terminator of the last physical line.
            if (eol.empty() && !table.rows.empty()) table.rows.back().eol = eol;
            continue;
        }
        RrfRow row;
        row.fields.reserve(pieces.size());
        for (auto p : pieces) row.fields.emplace_back(p);
        row.eol = eol;
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::size_t write_rrf(const RrfTable& table, std::ostream& out) {
    std::size_t bytes = 0;
    std::string text;
    for (const auto& row : table.rows) {
        text = row.text();
        out << text << row.eol;
        bytes += text.size() + row.eol.size();
    }
    return bytes;
}

bool is_cui(std::string_view s) {
    if (s.size() != 8 || s[0] != 'C') return false;
    return std::all_of(s.begin() + 1, s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string format_cui(long value) { return fmt::format("C{:07d}", value); }

std::vector<ConceptRecord> concepts_from(const RrfTable& mrconso) {
    std::vector<ConceptRecord> out;
    std::unordered_map<std::string, std::size_t> index;
    std::vector<bool> has_preferred;
    for (const auto& row : mrconso.rows) {
        const auto& f = row.fields;
        auto [it, inserted] = index.try_emplace(f[kConsoCui], out.size());
        if (inserted) {
            out.emplace_back();
            out.back().cui = f[kConsoCui];
            has_preferred.push_back(false);
        }
        ConceptRecord& rec = out[it->second];
        Atom atom;
        atom.term = f[kConsoStr];
        atom.source = f[kConsoSab];
        atom.term_type = f[kConsoTty];
        atom.source_code = f[kConsoCode];
        atom.language = f[kConsoLat];
        if (f[kConsoIspref] == "Y" && !has_preferred[it->second]) {
            rec.preferred_atom = rec.atoms.size();
            has_preferred[it->second] = true;
        }
        rec.atoms.push_back(std::move(atom));
    }
    return out;
}

std::vector<ConceptRecord> parse_mrconso(std::istream& in, Warnings* warnings) {
    return concepts_from(read_rrf(in, RrfKind::Mrconso, warnings));
}

SemanticTypeMap semantic_types_from(const RrfTable& mrsty) {
    SemanticTypeMap out;
    for (const auto& row : mrsty.rows) out[row.fields[0]].insert(row.fields[1]);
    return out;
}

SemanticTypeMap parse_mrsty(std::istream& in, Warnings* warnings) {
    return semantic_types_from(read_rrf(in, RrfKind::Mrsty, warnings));
}

std::optional<std::size_t> SourceRanking::position(std::string_view source,
                                                   std::string_view term_type) const {
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        if (ranked[i].source == source && ranked[i].term_type == term_type) return i;
    }
    return std::nullopt;
}

const RankEntry* SourceRanking::find(std::string_view source, std::string_view term_type) const {
    auto pos = position(source, term_type);
    return pos ? &ranked[*pos] : nullptr;
}

SourceRanking ranking_from(const RrfTable& mrrank) {
    SourceRanking ranking;
    std::unordered_set<std::string> pairs;
    std::size_t line_no = 0;
    for (const auto& row : mrrank.rows) {
        ++line_no;
        RankEntry e;
        e.rank_text = row.fields[0];
        std::string_view text = trim(e.rank_text);
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), e.rank);
        if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
            throw Error(fmt::format("MRRANK.RRF: non-numeric rank '{}'", e.rank_text), line_no);
        }
        e.source = row.fields[1];
        e.term_type = row.fields[2];
        e.suppress = row.fields[3];
        if (!pairs.insert(e.source + '|' + e.term_type).second) {
            throw Error(fmt::format("MRRANK.RRF: duplicate entry for {}/{}", e.source, e.term_type),
                        line_no);
        }
        ranking.ranked.push_back(std::move(e));
    }
    std::stable_sort(ranking.ranked.begin(), ranking.ranked.end(),
                     [](const RankEntry& a, const RankEntry& b) { return a.rank > b.rank; });
    return ranking;
}

SourceRanking parse_mrrank(std::istream& in, Warnings* warnings) {
    return ranking_from(read_rrf(in, RrfKind::Mrrank, warnings));
}

}  // namespace suppkg::terminology
