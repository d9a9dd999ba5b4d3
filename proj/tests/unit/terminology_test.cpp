#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "suppkg/error.hpp"
#include "suppkg/terminology.hpp"
#include "support.hpp"

namespace suppkg::terminology {
namespace {

using suppkg::testing::data_path;
using suppkg::testing::read_text;

RrfTable table_from(const std::string& text, RrfKind kind, Warnings* w = nullptr) {
    std::istringstream in(text);
    return read_rrf(in, kind, w);
}

std::string emit(const RrfTable& t) {
    std::ostringstream out;
    write_rrf(t, out);
    return out.str();
}

RrfSet load_base() {
    const auto dir = data_path("rrf_base");
    RrfSet set;
    set.mrconso = table_from(read_text(dir / "MRCONSO.RRF"), RrfKind::Mrconso);
    set.mrsty = table_from(read_text(dir / "MRSTY.RRF"), RrfKind::Mrsty);
    set.mrrank = table_from(read_text(dir / "MRRANK.RRF"), RrfKind::Mrrank);
    set.mrsab = table_from(read_text(dir / "MRSAB.RRF"), RrfKind::Mrsab);
    return set;
}

SourceRanking load_supplement_ranking() {
    std::istringstream in(read_text(data_path("supplement/ranking.rrf")));
    return parse_mrrank(in);
}

std::vector<SupplementConcept> load_supplement(const char* name = "supplement/concepts.tsv") {
    std::istringstream in(read_text(data_path(name)));
    return read_supplement(in);
}

// Count of ISPREF=Y rows per CUI, straight from the raw table.
std::map<std::string, int> preferred_rows(const RrfTable& mrconso) {
    std::map<std::string, int> out;
    for (const auto& row : mrconso.rows) out[row.fields[0]] += row.fields[6] == "Y";
    return out;
}

const char* kRow =
    "C0000001|ENG|P|L1|PF|S1|Y|A1||||SRC1|PT|X1|Ginkgo|0|N|256|\n";

// ---------------------------------------------------------------------------

TEST(ParseMrconso, SingleRowGivesOneConcept) {
    std::istringstream in(kRow);
    auto concepts = parse_mrconso(in);
    ASSERT_EQ(concepts.size(), 1u);
    EXPECT_EQ(concepts[0].cui, "C0000001");
    ASSERT_EQ(concepts[0].atoms.size(), 1u);
    EXPECT_EQ(concepts[0].preferred_atom, 0u);
    EXPECT_EQ(concepts[0].atoms[0].term, "Ginkgo");
    EXPECT_EQ(concepts[0].atoms[0].source, "SRC1");
    EXPECT_EQ(concepts[0].atoms[0].term_type, "PT");
    EXPECT_EQ(concepts[0].atoms[0].source_code, "X1");
    EXPECT_EQ(concepts[0].atoms[0].language, "ENG");
}

TEST(ParseMrconso, EmptyStream) {
    std::istringstream in("");
    EXPECT_TRUE(parse_mrconso(in).empty());
}

TEST(ParseMrconso, GroupsRowsByCuiInRowOrder) {
    std::istringstream in(read_text(data_path("mrconso_two_concepts.rrf")));
    auto concepts = parse_mrconso(in);
    ASSERT_EQ(concepts.size(), 2u);
    EXPECT_EQ(concepts[0].atoms.size(), 3u);
    EXPECT_EQ(concepts[1].atoms.size(), 2u);
    // The first ISPREF=Y row of C0000010 is its second row.
    EXPECT_EQ(concepts[0].preferred_atom, 1u);
    EXPECT_EQ(concepts[0].preferred().term, "Ginkgo");
    EXPECT_EQ(concepts[0].atoms[2].term, "Maidenhair tree");
    EXPECT_EQ(concepts[1].preferred().term, "Warfarin");
}

TEST(ParseMrconso, WrongFieldCountReportsLine) {
    std::string text = std::string(kRow) + "C0000002|ENG|P|L1|PF|S1|Y|A1||||SRC1|PT|X1|Other|\n";
    std::istringstream in(text);
    try {
        parse_mrconso(in);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    std::istringstream short_row("C0000001|ENG|P|\n");
    EXPECT_THROW(parse_mrconso(short_row), Error);
}

TEST(ParseMrconso, DuplicateRowIsDroppedWithWarning) {
    std::istringstream in(std::string(kRow) + kRow);
    Warnings w;
    auto concepts = parse_mrconso(in, &w);
    ASSERT_EQ(concepts.size(), 1u);
    EXPECT_EQ(concepts[0].atoms.size(), 1u);
    ASSERT_EQ(w.size(), 1u);
    EXPECT_NE(w[0].find("line 2"), std::string::npos);
}

TEST(ParseMrsty, Examples) {
    std::istringstream one("C0000001|T121|A1.4.1.1.1|Pharmacologic Substance|AT1||\n");
    auto m = parse_mrsty(one);
    ASSERT_EQ(m.size(), 1u);
    EXPECT_EQ(m["C0000001"], (std::set<std::string>{"T121"}));

    std::istringstream two("C0000001|T121|x|y|AT1||\nC0000001|T002|x|y|AT2||\n");
    EXPECT_EQ(parse_mrsty(two)["C0000001"].size(), 2u);

    std::istringstream empty("");
    EXPECT_TRUE(parse_mrsty(empty).empty());

    std::istringstream bad("C0000001|T121|x|\nC0000002\n");
    try {
        parse_mrsty(bad);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(ParseMrrank, SortsByRankDescending) {
    std::istringstream in(read_text(data_path("mrrank_example.rrf")));
    auto r = parse_mrrank(in);
    ASSERT_EQ(r.ranked.size(), 2u);
    EXPECT_EQ(r.ranked[0].source, "SRC_A");
    EXPECT_EQ(r.ranked[0].term_type, "PT");
    EXPECT_EQ(r.ranked[1].source, "SRC_B");
    EXPECT_EQ(r.ranked[1].term_type, "SY");
    EXPECT_EQ(r.position("SRC_B", "SY"), 1u);
    EXPECT_FALSE(r.position("SRC_C", "SY"));
}

TEST(ParseMrrank, EmptyAndInvalid) {
    std::istringstream empty("");
    EXPECT_TRUE(parse_mrrank(empty).ranked.empty());
    std::istringstream dup("0400|A|PT|N|\n0300|A|PT|N|\n");
    EXPECT_THROW(parse_mrrank(dup), Error);
    std::istringstream nonnum("04x0|A|PT|N|\n");
    EXPECT_THROW(parse_mrrank(nonnum), Error);
}

// ---------------------------------------------------------------------------

TEST(AllocateCuis, ContinuesFromExistingMaximum) {
    auto a = allocate_cuis({"DS2", "DS1"}, {"C0000005", "C0970000", "C0000100"});
    ASSERT_EQ(a.size(), 2u);
    EXPECT_EQ(a[0], (std::pair<std::string, std::string>{"DS1", "C0970001"}));
    EXPECT_EQ(a[1], (std::pair<std::string, std::string>{"DS2", "C0970002"}));
    EXPECT_TRUE(allocate_cuis({}, {"C0000001"}).empty());
    EXPECT_EQ(allocate_cuis({"X"}, {}).at(0).second, "C0000001");
}

TEST(AllocateCuis, OverflowIsAnError) {
    EXPECT_EQ(allocate_cuis({"a"}, {"C9999998"}).at(0).second, "C9999999");
    EXPECT_THROW(allocate_cuis({"a", "b"}, {"C9999998"}), Error);
}

TEST(AllocateCuis, PropertyIncreasingDisjointDeterministic) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::set<std::string> existing;
        const std::size_t n_existing = rng() % 30;
        for (std::size_t i = 0; i < n_existing; ++i) existing.insert(format_cui(static_cast<long>(rng() % 5000000)));
        std::vector<std::string> ids;
        const std::size_t n_new = rng() % 20;
        for (std::size_t i = 0; i < n_new; ++i) ids.push_back("DS" + std::to_string(rng() % 1000));
        auto a = allocate_cuis(ids, existing);
        EXPECT_EQ(a, allocate_cuis(ids, existing));
        std::set<std::string> unique_ids(ids.begin(), ids.end());
        ASSERT_EQ(a.size(), unique_ids.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_TRUE(is_cui(a[i].second));
            EXPECT_FALSE(existing.count(a[i].second));
            if (i) {
                EXPECT_LT(a[i - 1].second, a[i].second);
                EXPECT_LT(a[i - 1].first, a[i].first);
            }
        }
    }
}

// ---------------------------------------------------------------------------

TEST(Supplement, ReadGroupsRowsAndSortsById) {
    auto concepts = load_supplement();
    ASSERT_EQ(concepts.size(), 20u);
    for (std::size_t i = 1; i < concepts.size(); ++i) EXPECT_LT(concepts[i - 1].id, concepts[i].id);
    EXPECT_EQ(concepts[2].id, "DS000003");
    EXPECT_EQ(concepts[2].linked_cui, "C0000001");
    EXPECT_EQ(concepts[3].atoms.size(), 3u);
}

TEST(Supplement, RejectsBadRows) {
    std::istringstream bad_flag("supplement_id\tterm\tterm_type\tis_preferred\tlinked_cui\tsource\nA\tx\tPT\t2\t\tS\n");
    EXPECT_THROW(read_supplement(bad_flag), Error);
    std::istringstream bad_cui("supplement_id\tterm\tterm_type\tis_preferred\tlinked_cui\tsource\nA\tx\tPT\t1\tC12\tS\n");
    EXPECT_THROW(read_supplement(bad_cui), Error);
    std::istringstream missing("supplement_id\tterm\nA\tx\n");
    try {
        read_supplement(missing);
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("term_type"), std::string::npos);
    }
}

TEST(Merge, EmptySupplementIsIdentity) {
    const auto base = load_base();
    auto r = merge_terminology(base, {}, load_supplement_ranking());
    EXPECT_EQ(r.merged, base);
    EXPECT_EQ(r.report, MergeReport{});
    EXPECT_TRUE(r.warnings.empty());
    EXPECT_EQ(emit(r.merged.mrconso), read_text(data_path("rrf_base/MRCONSO.RRF")));
}

TEST(Merge, OneUnlinkedConceptWithTwoAtoms) {
    const auto base = load_base();
    SupplementConcept c{"DS9", {{"Turmeric", "PT", "IDISK", true}, {"Curcuma longa", "SY", "IDISK", false}}, {}};
    auto r = merge_terminology(base, std::span(&c, 1), load_supplement_ranking());
    EXPECT_EQ(r.report.new_concepts, 1u);
    EXPECT_EQ(r.report.linked_concepts, 0u);
    EXPECT_EQ(r.report.atoms_added, 2u);
    ASSERT_EQ(r.report.cuis_allocated.size(), 1u);
    EXPECT_EQ(r.report.cuis_allocated[0].second, "C0970001");
    EXPECT_EQ(r.merged.mrconso.rows.size(), base.mrconso.rows.size() + 2);
    EXPECT_EQ(r.merged.mrsty.rows.size(), base.mrsty.rows.size() + 1);
    auto types = semantic_types_from(r.merged.mrsty);
    EXPECT_EQ(types["C0970001"], (std::set<std::string>{"T121"}));
    auto concepts = concepts_from(r.merged.mrconso);
    EXPECT_EQ(concepts.back().cui, "C0970001");
    EXPECT_EQ(concepts.back().preferred().term, "Turmeric");
    // Appended rows follow the input layout.
    EXPECT_EQ(r.merged.mrconso.rows.back().fields.size(), 19u);
    EXPECT_EQ(r.merged.mrconso.rows.back().text(),
              "C0970001|ENG|S||PF||N|||||IDISK|SY|DS9|Curcuma longa|0|N||");
}

TEST(Merge, LinkedConceptKeepsExistingPreferredTerm) {
    const auto base = load_base();
    SupplementConcept c{"DS1", {{"Ginkgo biloba leaf", "PT", "IDISK", true}}, "C0000001"};
    auto r = merge_terminology(base, std::span(&c, 1), load_supplement_ranking());
    EXPECT_EQ(r.report.linked_concepts, 1u);
    EXPECT_EQ(r.report.atoms_added, 1u);
    EXPECT_TRUE(r.report.cuis_allocated.empty());
    auto concepts = concepts_from(r.merged.mrconso);
    EXPECT_EQ(concepts[0].cui, "C0000001");
    EXPECT_EQ(concepts[0].preferred().term, "Ginkgo");
    EXPECT_EQ(concepts[0].atoms.size(), 4u);
    // C0000001 already carries T121.
    EXPECT_EQ(r.report.semantic_types_added, 0u);
}

TEST(Merge, LinkToAbsentCuiNamesTheConcept) {
    const auto base = load_base();
    SupplementConcept c{"DS404", {{"Nothing", "PT", "IDISK", true}}, "C0123456"};
    try {
        merge_terminology(base, std::span(&c, 1), load_supplement_ranking());
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("DS404"), std::string::npos);
    }
}

TEST(Merge, DuplicateAtomIsSkippedWithWarning) {
    const auto base = load_base();
    SupplementConcept c{"DS1", {{"Fish oil", "PT", "IDISK", true}}, "C0000003"};
    auto r = merge_terminology(base, std::span(&c, 1), load_supplement_ranking());
    EXPECT_EQ(r.report.atoms_added, 0u);
    EXPECT_EQ(r.warnings.size(), 1u);
    EXPECT_EQ(r.merged.mrconso, base.mrconso);
    // Merging the merged output again adds nothing more.
    auto again = merge_terminology(r.merged, std::span(&c, 1), load_supplement_ranking());
    EXPECT_EQ(again.merged, r.merged);
}

TEST(Merge, RemergeIsIdempotentForAtoms) {
    const auto base = load_base();
    const auto supplement = load_supplement();
    auto first = merge_terminology(base, supplement, load_supplement_ranking());
    std::vector<SupplementConcept> linked;
    for (auto c : supplement) {
        if (!c.linked_cui) {
            for (const auto& [id, cui] : first.report.cuis_allocated) {
                if (id == c.id) c.linked_cui = cui;
            }
        }
        linked.push_back(c);
    }
    auto second = merge_terminology(first.merged, linked, load_supplement_ranking());
    EXPECT_EQ(second.report.atoms_added, 0u);
    EXPECT_EQ(second.merged, first.merged);
}

TEST(Merge, FixtureMatchesHandComputedReport) {
    const auto base = load_base();
    auto r = merge_terminology(base, load_supplement(), load_supplement_ranking());
    EXPECT_EQ(to_json(r.report), read_text(data_path("supplement/expected_report.json")));
    EXPECT_EQ(r.warnings.size(), 1u);  // DS000015 "Fish oil" already under C0000003

    // One preferred atom per concept, counted on raw rows.
    for (const auto& [cui, n] : preferred_rows(r.merged.mrconso)) EXPECT_EQ(n, 1) << cui;

    auto types = semantic_types_from(r.merged.mrsty);
    for (const auto& [id, cui] : r.report.cuis_allocated) EXPECT_TRUE(types[cui].count("T121")) << cui;
    for (const char* linked : {"C0000001", "C0000002", "C0000003"}) EXPECT_TRUE(types[linked].count("T121"));

    auto concepts = concepts_from(r.merged.mrconso);
    std::map<std::string, std::string> preferred;
    for (const auto& c : concepts) preferred[c.cui] = c.preferred().term;
    EXPECT_EQ(preferred["C0000001"], "Ginkgo");
    EXPECT_EQ(preferred["C0000002"], "Glucosamine");
    EXPECT_EQ(preferred["C0970007"], "Feverfew");  // DS000008: no flag, IDISK/SY outranks DSLD/SY
    EXPECT_EQ(preferred["C0970013"], "Licorice");  // DS000016: IDISK/SY outranks DSLD/PT

    // Base rows unchanged and first.
    for (std::size_t i = 0; i < base.mrconso.rows.size(); ++i) {
        EXPECT_EQ(r.merged.mrconso.rows[i], base.mrconso.rows[i]);
    }
    // New rows appended in CUI order.
    for (std::size_t i = base.mrconso.rows.size() + 1; i < r.merged.mrconso.rows.size(); ++i) {
        EXPECT_LE(r.merged.mrconso.rows[i - 1].fields[0], r.merged.mrconso.rows[i].fields[0]);
    }
    EXPECT_EQ(r.merged.mrconso.rows.size(), base.mrconso.rows.size() + 34);
    EXPECT_EQ(r.merged.mrsty.rows.size(), base.mrsty.rows.size() + 18);

    ASSERT_TRUE(r.merged.mrrank);
    std::vector<std::string> added;
    for (std::size_t i = base.mrrank->rows.size(); i < r.merged.mrrank->rows.size(); ++i) {
        added.push_back(r.merged.mrrank->rows[i].text());
    }
    EXPECT_EQ(added, (std::vector<std::string>{"0040|IDISK|SY|N|", "0030|DSLD|SY|N|", "0020|DSLD|PT|N|"}));
    ASSERT_TRUE(r.merged.mrsab);
    ASSERT_EQ(r.merged.mrsab->rows.size(), 5u);
    EXPECT_EQ(r.merged.mrsab->rows[3].fields[3], "DSLD");
    EXPECT_EQ(r.merged.mrsab->rows[4].fields[3], "IDISK");
    EXPECT_EQ(r.merged.mrsab->rows[4].fields.size(), 26u);
}

TEST(Merge, CreatesSourceTablesWhenAbsent) {
    auto base = load_base();
    base.mrrank.reset();
    base.mrsab.reset();
    SupplementConcept c{"DS1", {{"Turmeric", "PT", "IDISK", true}}, {}};
    auto r = merge_terminology(base, std::span(&c, 1), SourceRanking{});
    ASSERT_TRUE(r.merged.mrrank);
    ASSERT_TRUE(r.merged.mrsab);
    EXPECT_EQ(r.merged.mrrank->rows.at(0).text(), "0000|IDISK|PT|N|");
    EXPECT_EQ(r.merged.mrsab->rows.at(0).fields.size(), 26u);
}

TEST(Merge, ConfigurableSemanticType) {
    const auto base = load_base();
    SupplementConcept c{"DS1", {{"Turmeric", "PT", "IDISK", true}}, {}};
    auto r = merge_terminology(base, std::span(&c, 1), {}, semantic_type_for("T109"));
    auto types = semantic_types_from(r.merged.mrsty);
    EXPECT_EQ(types["C0970001"], (std::set<std::string>{"T109"}));
    EXPECT_EQ(semantic_type_for("T121").name, "Pharmacologic Substance");
}

// ---------------------------------------------------------------------------

TEST(Emit, RoundTripIsByteIdentical) {
    for (const char* name : {"MRCONSO.RRF", "MRSTY.RRF", "MRRANK.RRF", "MRSAB.RRF"}) {
        const std::string text = read_text(data_path("rrf_base") / name);
        const RrfKind kind = std::string(name) == "MRCONSO.RRF" ? RrfKind::Mrconso
                             : std::string(name) == "MRSTY.RRF" ? RrfKind::Mrsty
                             : std::string(name) == "MRRANK.RRF" ? RrfKind::Mrrank
                                                                 : RrfKind::Mrsab;
        EXPECT_EQ(emit(table_from(text, kind)), text) << name;
    }
}

TEST(Emit, PreservesCrlfAndMissingFinalNewline) {
    const std::string crlf = "C0000001|T121|x|y|\r\nC0000002|T121|x|y|\r\n";
    EXPECT_EQ(emit(table_from(crlf, RrfKind::Mrsty)), crlf);
    const std::string open_end = "C0000001|T121|x|y\nC0000002|T121|x|y";
    auto t = table_from(open_end, RrfKind::Mrsty);
    EXPECT_EQ(emit(t), open_end);
    EXPECT_FALSE(t.trailing_pipe());
    t.append({{0, "C0000003"}, {1, "T121"}});
    EXPECT_EQ(emit(t), open_end + "\nC0000003|T121||\n");
}

TEST(Emit, CountsRowsOfOneNewConcept) {
    const auto base = load_base();
    SupplementConcept c{"DS9", {{"A", "PT", "IDISK", true}, {"B", "SY", "IDISK", false}, {"C", "SY", "DSLD", false}}, {}};
    auto r = merge_terminology(base, std::span(&c, 1), load_supplement_ranking());
    std::ostringstream conso, sty, rank, sab;
    auto counts = emit_rrf(r.merged, conso, sty, &rank, &sab);
    auto lines = [](const std::string& s) { return std::count(s.begin(), s.end(), '\n'); };
    EXPECT_EQ(lines(conso.str()), static_cast<long>(base.mrconso.rows.size() + 3));
    EXPECT_EQ(lines(sty.str()), static_cast<long>(base.mrsty.rows.size() + 1));
    EXPECT_EQ(counts.mrconso, conso.str().size());
    EXPECT_EQ(counts.mrsab, sab.str().size());
}

TEST(Emit, DanglingMrstyCuiIsAnError) {
    auto base = load_base();
    base.mrsty.append({{0, "C0999999"}, {1, "T121"}});
    std::ostringstream a, b;
    EXPECT_THROW(emit_rrf(base, a, b), Error);
    EXPECT_THROW(validate(base), Error);
}

}  // namespace
}  // namespace suppkg::terminology
