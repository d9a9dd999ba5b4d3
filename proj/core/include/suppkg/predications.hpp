#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "suppkg/predicate.hpp"

namespace suppkg {

/// One subject-predicate-object assertion extracted from a sentence.
/// Set-valued fields are kept sorted and unique.
struct Predication {
    std::string id;
    std::string pmid;
    std::string sentence;
    std::string subject_cui;
    std::string subject_name;
    std::vector<std::string> subject_semtypes;
    std::vector<std::string> subject_sources;
    Predicate predicate = Predicate::ASSOCIATED_WITH;
    std::string object_cui;
    std::string object_name;
    std::vector<std::string> object_semtypes;
    std::vector<std::string> object_sources;

    bool operator==(const Predication&) const = default;
};

enum class Label : std::uint8_t { Correct, Incorrect };

std::string_view to_string(Label label);
std::optional<Label> parse_label(std::string_view text);

struct Annotation {
    std::string predication_id;
    Label label = Label::Correct;
    std::string annotator;

    bool operator==(const Annotation&) const = default;
};

/// A data row that failed validation.
struct RejectRecord {
    std::size_t line_number = 0;
    std::string reason_code;
    std::string raw_row;
};

struct PredicationParse {
    std::vector<Predication> predications;
    std::vector<RejectRecord> rejects;
};

/// Column order of the predication exchange TSV.
const std::vector<std::string>& predication_columns();

/// Parses the predication TSV. Columns are located by header name (a
/// missing one is an Error naming it). Rows with the wrong number of cells
/// (`field_count`), an empty CUI (`empty_cui`), an empty id (`empty_id`) or
/// a predicate outside the vocabulary (`unknown_predicate`) become reject
/// records; a repeated id is an Error.
PredicationParse parse_predications(std::istream& in);

/// Writes predications in the exchange format, header included.
void write_predications(std::span<const Predication> predications, std::ostream& out);

void write_rejects(std::span<const RejectRecord> rejects, std::ostream& out);

/// Collapses predications equal on (pmid, sentence, subject, predicate,
/// object) to their first occurrence, preserving order.
std::vector<Predication> dedupe(std::span<const Predication> predications);

/// Reads the annotation TSV (predication_id, label, annotator).
std::vector<Annotation> read_annotations(std::istream& in);

// ---------------------------------------------------------------------------
// Extraction comparison
// ---------------------------------------------------------------------------

struct CountComparison {
    std::int64_t base = 0;
    std::int64_t extended = 0;
    std::int64_t difference = 0;
    /// 100 * (extended - base) / base; empty when base is zero and extended
    /// is not.
    std::optional<double> percent;

    /// "855,790 (+158.52%)", or "855,790 (undefined)".
    std::string difference_text() const;
};

CountComparison compare_counts(std::int64_t base, std::int64_t extended);

struct ExtractionComparison {
    CountComparison entity_mentions;
    CountComparison relations;
};

/// Counts supplement-entity mentions (one per supplement-sourced endpoint)
/// and relations with at least one such endpoint, for both extractions.
ExtractionComparison compare_extractions(std::span<const Predication> base,
                                         std::span<const Predication> extended,
                                         std::string_view supplement_source);

void write_comparison(const ExtractionComparison& comparison, std::ostream& out);

}  // namespace suppkg
