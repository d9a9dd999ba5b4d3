#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace suppkg::terminology {

using Warnings = std::vector<std::string>;

// ---------------------------------------------------------------------------
// Raw RRF tables
// ---------------------------------------------------------------------------

/// One pipe-delimited row. `fields` holds every piece between pipes, so a
/// row with a trailing pipe ends in an empty field; `eol` is the exact line
/// terminator read from input ("" for a final line without newline).
struct RrfRow {
    std::vector<std::string> fields;
    std::string eol;

    std::string text() const;
    bool operator==(const RrfRow&) const = default;
};

/// Known RRF files and the minimum number of pipe-separated pieces each
/// row must have for the consumed columns to exist.
enum class RrfKind { Mrconso, Mrsty, Mrrank, Mrsab };

std::string_view file_name(RrfKind kind);

struct RrfTable {
    RrfKind kind = RrfKind::Mrconso;
    std::vector<RrfRow> rows{};
    /// Pieces per row, fixed by the first row read (0 for an empty table).
    std::size_t field_count = 0;
    /// Terminator used for appended rows, taken from the first input row.
    std::string default_eol = "\n";

    bool trailing_pipe() const;

    /// Appends a row of the table's layout with the given positions set.
    /// Positions beyond the data columns of the layout are ignored.
    void append(const std::vector<std::pair<std::size_t, std::string>>& values);

    bool operator==(const RrfTable&) const = default;
};

/// Reads a whole RRF stream. Every row must split into the same number of
/// pieces as the first one; otherwise an Error carrying the line number is
/// thrown. Exact duplicate rows are dropped and reported in `warnings`.
RrfTable read_rrf(std::istream& in, RrfKind kind, Warnings* warnings = nullptr);

/// Writes rows back verbatim. Returns the number of bytes written.
std::size_t write_rrf(const RrfTable& table, std::ostream& out);

// ---------------------------------------------------------------------------
// Concept model
// ---------------------------------------------------------------------------

struct Atom {
    std::string term;
    std::string source;
    std::string term_type;
    std::string source_code;
    std::string language = "ENG";

    bool operator==(const Atom&) const = default;
};

struct ConceptRecord {
    std::string cui;
    std::vector<Atom> atoms;
    std::size_t preferred_atom = 0;
    std::set<std::string> semantic_types;
    std::optional<std::string> link;

    const Atom& preferred() const { return atoms.at(preferred_atom); }
    bool operator==(const ConceptRecord&) const = default;
};

/// True for "C" followed by exactly seven decimal digits.
bool is_cui(std::string_view s);

std::string format_cui(long value);

/// Groups MRCONSO rows by CUI in first-appearance order. The preferred atom
/// is the first one whose ISPREF column is "Y" (index 0 if none is).
std::vector<ConceptRecord> concepts_from(const RrfTable& mrconso);

std::vector<ConceptRecord> parse_mrconso(std::istream& in, Warnings* warnings = nullptr);

using SemanticTypeMap = std::map<std::string, std::set<std::string>>;

SemanticTypeMap semantic_types_from(const RrfTable& mrsty);
SemanticTypeMap parse_mrsty(std::istream& in, Warnings* warnings = nullptr);

// ---------------------------------------------------------------------------
// Source ranking
// ---------------------------------------------------------------------------

struct RankEntry {
    long rank = 0;
    std::string rank_text;  // as written, e.g. "0400"
    std::string source;
    std::string term_type;
    std::string suppress;

    bool operator==(const RankEntry&) const = default;
};

/// (source, term type) pairs, highest precedence first.
struct SourceRanking {
    std::vector<RankEntry> ranked;

    /// 0-based precedence of a pair; smaller is more preferred.
    std::optional<std::size_t> position(std::string_view source,
                                        std::string_view term_type) const;
    const RankEntry* find(std::string_view source, std::string_view term_type) const;
};

/// Sorts by numeric RANK descending (file order among equal ranks).
/// Non-numeric ranks and duplicate (SAB, TTY) pairs are errors.
SourceRanking ranking_from(const RrfTable& mrrank);
SourceRanking parse_mrrank(std::istream& in, Warnings* warnings = nullptr);

// ---------------------------------------------------------------------------
// Supplement vocabulary and merging
// ---------------------------------------------------------------------------

struct SupplementAtom {
    std::string term;
    std::string term_type;
    std::string source;
    bool preferred = false;
};

struct SupplementConcept {
    std::string id;
    std::vector<SupplementAtom> atoms;
    std::optional<std::string> linked_cui;
};

/// Reads the supplement TSV (header: supplement_id, term, term_type,
/// is_preferred, linked_cui, source). Rows sharing an id form one concept;
/// concepts come back sorted by id.
std::vector<SupplementConcept> read_supplement(std::istream& in);

/// Sequential CUIs above the numeric maximum of `existing`, assigned to the
/// ids in lexicographic order.
std::vector<std::pair<std::string, std::string>> allocate_cuis(
    std::vector<std::string> supplement_ids, const std::set<std::string>& existing);

/// The semantic type stamped on every merged concept. The default is the
/// UMLS Pharmacologic Substance row of the semantic network.
struct SemanticTypeDef {
    std::string tui = "T121";
    std::string tree_number = "A1.4.1.1.1";
    std::string name = "Pharmacologic Substance";
};

/// Looks up tree number and name for a handful of well-known TUIs; other
/// TUIs get empty tree number and name.
SemanticTypeDef semantic_type_for(std::string_view tui);

struct RrfSet {
    RrfTable mrconso{RrfKind::Mrconso};
    RrfTable mrsty{RrfKind::Mrsty};
    std::optional<RrfTable> mrrank;
    std::optional<RrfTable> mrsab;

    bool operator==(const RrfSet&) const = default;
};

struct MergeReport {
    std::size_t new_concepts = 0;
    std::size_t linked_concepts = 0;
    std::size_t atoms_added = 0;
    std::size_t semantic_types_added = 0;
    std::size_t sources_added = 0;
    std::size_t rank_entries_added = 0;
    std::vector<std::pair<std::string, std::string>> cuis_allocated;

    bool operator==(const MergeReport&) const = default;
};

struct MergeResult {
    RrfSet merged;
    MergeReport report;
    Warnings warnings;
};

/// Adds supplement concepts to a base RRF set.
///
/// Unlinked concepts receive freshly allocated CUIs and keep the atom the
/// supplement marks preferred (falling back to `supplement_ranking`, then
/// to the first atom). Linked concepts add their atoms under the existing
/// CUI without touching its preferred atom. Every touched CUI ends up with
/// `semantic_type` in MRSTY, and MRSAB/MRRANK gain entries for supplement
/// sources they do not list yet. Base rows are never modified; new rows are
/// appended in CUI order.
MergeResult merge_terminology(const RrfSet& base,
                              std::span<const SupplementConcept> supplement,
                              const SourceRanking& supplement_ranking,
                              const SemanticTypeDef& semantic_type = {});

/// Every MRSTY CUI must exist in MRCONSO; throws Error on the first
/// dangling reference.
void validate(const RrfSet& set);

struct EmitCounts {
    std::size_t mrconso = 0;
    std::size_t mrsty = 0;
    std::size_t mrrank = 0;
    std::size_t mrsab = 0;
};

/// Validates and writes the set. Optional tables are written only when the
/// set holds them and a stream is supplied.
EmitCounts emit_rrf(const RrfSet& set, std::ostream& mrconso, std::ostream& mrsty,
                    std::ostream* mrrank = nullptr, std::ostream* mrsab = nullptr);

std::string to_json(const MergeReport& report);

}  // namespace suppkg::terminology
