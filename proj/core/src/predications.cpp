#include "suppkg/predications.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <tuple>
#include <unordered_set>

#include <fmt/format.h>

#include "suppkg/error.hpp"
#include "suppkg/text.hpp"

namespace suppkg {

namespace {

std::vector<std::string> sorted_list(std::string_view field) {
    auto items = split_list(field);
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    return items;
}

std::string comma_join(const std::vector<std::string>& items) { return join(items, ","); }

bool has_source(const std::vector<std::string>& sources, std::string_view source) {
    return std::binary_search(sources.begin(), sources.end(), source);
}

}  // namespace

std::string_view to_string(Label label) {
    return label == Label::Correct ? "correct" : "incorrect";
}

std::optional<Label> parse_label(std::string_view text) {
    if (text == "correct") return Label::Correct;
    if (text == "incorrect") return Label::Incorrect;
    return std::nullopt;
}

const std::vector<std::string>& predication_columns() {
    static const std::vector<std::string> columns = {
        "id",           "pmid",           "sentence",        "subject_cui",
        "subject_name", "subject_semtypes", "subject_sources", "predicate",
        "object_cui",   "object_name",    "object_semtypes", "object_sources",
    };
    return columns;
}

PredicationParse parse_predications(std::istream& in) {
    PredicationParse out;
    TsvReader reader(in);
    if (reader.header().empty()) throw Error("predications: missing header");

    const auto& names = predication_columns();
    std::vector<std::size_t> col;
    col.reserve(names.size());
    for (const auto& name : names) col.push_back(reader.require(name));
    enum : std::size_t {
        kId, kPmid, kSentence, kSubjCui, kSubjName, kSubjTypes, kSubjSources,
        kPredicate, kObjCui, kObjName, kObjTypes, kObjSources
    };
    const std::size_t width = reader.header().size();

    std::unordered_set<std::string> ids;
    std::string line;
    while (reader.next(line)) {
        const std::size_t line_no = reader.line_number();
        auto cells = split(line, '\t');
        auto reject = [&](std::string code) {
            out.rejects.push_back({line_no, std::move(code), line});
        };
        if (cells.size() != width) {
            reject("field_count");
            continue;
        }
        auto cell = [&](std::size_t which) { return trim(cells[col[which]]); };
        if (cell(kId).empty()) {
            reject("empty_id");
            continue;
        }
        if (cell(kSubjCui).empty() || cell(kObjCui).empty()) {
            reject("empty_cui");
            continue;
        }
        auto predicate = parse_predicate(cell(kPredicate));
        if (!predicate) {
            reject("unknown_predicate");
            continue;
        }
        Predication p;
        p.id = std::string(cell(kId));
        if (!ids.insert(p.id).second) {
            throw Error(fmt::format("predications: duplicate id '{}'", p.id), line_no);
        }
        p.pmid = std::string(cell(kPmid));
        p.sentence = std::string(cells[col[kSentence]]);
        p.subject_cui = std::string(cell(kSubjCui));
        p.subject_name = std::string(cell(kSubjName));
        p.subject_semtypes = sorted_list(cell(kSubjTypes));
        p.subject_sources = sorted_list(cell(kSubjSources));
        p.predicate = *predicate;
        p.object_cui = std::string(cell(kObjCui));
        p.object_name = std::string(cell(kObjName));
        p.object_semtypes = sorted_list(cell(kObjTypes));
        p.object_sources = sorted_list(cell(kObjSources));
        out.predications.push_back(std::move(p));
    }
    return out;
}

void write_predications(std::span<const Predication> predications, std::ostream& out) {
    out << join(predication_columns(), "\t") << '\n';
    for (const auto& p : predications) {
        out << p.id << '\t' << p.pmid << '\t' << tsv_cell(p.sentence) << '\t' << p.subject_cui
            << '\t' << tsv_cell(p.subject_name) << '\t' << comma_join(p.subject_semtypes) << '\t'
            << comma_join(p.subject_sources) << '\t' << to_string(p.predicate) << '\t'
            << p.object_cui << '\t' << tsv_cell(p.object_name) << '\t'
            << comma_join(p.object_semtypes) << '\t' << comma_join(p.object_sources) << '\n';
    }
}

void write_rejects(std::span<const RejectRecord> rejects, std::ostream& out) {
    out << "line_number\treason_code\traw_row\n";
    for (const auto& r : rejects) {
        out << r.line_number << '\t' << r.reason_code << '\t' << tsv_cell(r.raw_row) << '\n';
    }
}

std::vector<Predication> dedupe(std::span<const Predication> predications) {
    using Key = std::tuple<std::string_view, std::string_view, std::string_view, Predicate,
                           std::string_view>;
    std::set<Key> seen;
    std::vector<Predication> out;
    out.reserve(predications.size());
    for (const auto& p : predications) {
        Key key{p.pmid, p.sentence, p.subject_cui, p.predicate, p.object_cui};
        if (seen.insert(key).second) out.push_back(p);
    }
    return out;
}

std::vector<Annotation> read_annotations(std::istream& in) {
    TsvReader reader(in);
    if (reader.header().empty()) return {};
    const std::size_t c_id = reader.require("predication_id");
    const std::size_t c_label = reader.require("label");
    const auto c_annotator = reader.column("annotator");
    std::vector<Annotation> out;
    std::string line;
    while (reader.next(line)) {
        auto cells = split(line, '\t');
        if (cells.size() != reader.header().size()) {
            throw Error(fmt::format("annotations: expected {} cells, found {}",
                                    reader.header().size(), cells.size()),
                        reader.line_number());
        }
        auto label = parse_label(trim(cells[c_label]));
        if (!label) {
            throw Error(fmt::format("annotations: label must be correct or incorrect, got '{}'",
                                    trim(cells[c_label])),
                        reader.line_number());
        }
        Annotation a;
        a.predication_id = std::string(trim(cells[c_id]));
        a.label = *label;
        if (c_annotator) a.annotator = std::string(trim(cells[*c_annotator]));
        out.push_back(std::move(a));
    }
    return out;
}

std::string CountComparison::difference_text() const {
    std::string sign = difference >= 0 ? "+" : "";
    if (!percent) return fmt::format("{}{} (undefined)", sign, format_count(difference));
    std::string psign = *percent >= 0 ? "+" : "";
    return fmt::format("{}{} ({}{}%)", sign, format_count(difference), psign,
                       format_fixed2(*percent));
}

CountComparison compare_counts(std::int64_t base, std::int64_t extended) {
    CountComparison c;
    c.base = base;
    c.extended = extended;
    c.difference = extended - base;
    if (base != 0) {
        c.percent = 100.0 * static_cast<double>(c.difference) / static_cast<double>(base);
    } else if (extended == 0) {
        c.percent = 0.0;
    }
    return c;
}

ExtractionComparison compare_extractions(std::span<const Predication> base,
                                         std::span<const Predication> extended,
                                         std::string_view supplement_source) {
    auto tally = [&](std::span<const Predication> items) {
        std::int64_t mentions = 0;
        std::int64_t relations = 0;
        for (const auto& p : items) {
            const bool s = has_source(p.subject_sources, supplement_source);
            const bool o = has_source(p.object_sources, supplement_source);
            mentions += static_cast<int>(s) + static_cast<int>(o);
            relations += (s || o) ? 1 : 0;
        }
        return std::pair{mentions, relations};
    };
    auto [bm, br] = tally(base);
    auto [em, er] = tally(extended);
    return {compare_counts(bm, em), compare_counts(br, er)};
}

void write_comparison(const ExtractionComparison& comparison, std::ostream& out) {
    out << "measure\tbase\textended\tdifference\n";
    auto row = [&](std::string_view name, const CountComparison& c) {
        out << name << '\t' << format_count(c.base) << '\t' << format_count(c.extended) << '\t'
            << c.difference_text() << '\n';
    };
    row("ds_entity_mentions", comparison.entity_mentions);
    row("relations_with_ds_entity", comparison.relations);
}

}  // namespace suppkg
