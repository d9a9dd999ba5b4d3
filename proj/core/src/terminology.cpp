#include "suppkg/terminology.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_set>

#include <fmt/format.h>
#include <json.hpp>

#include "suppkg/error.hpp"
#include "suppkg/text.hpp"

namespace suppkg::terminology {

namespace {

constexpr long kMaxCui = 9'999'999;

std::optional<long> cui_number(std::string_view cui) {
    if (!is_cui(cui)) return std::nullopt;
    return std::stol(std::string(cui.substr(1)));
}

}  // namespace

std::vector<SupplementConcept> read_supplement(std::istream& in) {
    TsvReader reader(in);
    if (reader.header().empty()) return {};
    const std::size_t c_id = reader.require("supplement_id");
    const std::size_t c_term = reader.require("term");
    const std::size_t c_tty = reader.require("term_type");
    const std::size_t c_pref = reader.require("is_preferred");
    const std::size_t c_link = reader.require("linked_cui");
    const std::size_t c_source = reader.require("source");
    const std::size_t width = reader.header().size();

    std::map<std::string, SupplementConcept> by_id;
    std::string line;
    while (reader.next(line)) {
        const std::size_t line_no = reader.line_number();
        auto cells = split(line, '\t');
        if (cells.size() != width) {
            throw Error(fmt::format("supplement: expected {} cells, found {}", width, cells.size()),
                        line_no);
        }
        std::string id(trim(cells[c_id]));
        SupplementAtom atom;
        atom.term = std::string(trim(cells[c_term]));
        atom.term_type = std::string(trim(cells[c_tty]));
        atom.source = std::string(trim(cells[c_source]));
        auto pref = trim(cells[c_pref]);
        auto link = trim(cells[c_link]);
        if (id.empty()) throw Error("supplement: empty supplement_id", line_no);
        if (atom.term.empty()) throw Error("supplement: empty term", line_no);
        if (atom.source.empty()) throw Error("supplement: empty source", line_no);
        if (pref != "0" && pref != "1") {
            throw Error(fmt::format("supplement: is_preferred must be 0 or 1, got '{}'", pref),
                        line_no);
        }
        atom.preferred = pref == "1";
        if (!link.empty() && !is_cui(link)) {
            throw Error(fmt::format("supplement: malformed linked_cui '{}'", link), line_no);
        }

        auto [it, inserted] = by_id.try_emplace(id);
        SupplementConcept& concept_ = it->second;
        if (inserted) {
            concept_.id = id;
            if (!link.empty()) concept_.linked_cui = std::string(link);
        } else if (concept_.linked_cui.value_or("") != link) {
            throw Error(fmt::format("supplement: concept {} has conflicting linked_cui values", id),
                        line_no);
        }
        concept_.atoms.push_back(std::move(atom));
    }

    std::vector<SupplementConcept> out;
    out.reserve(by_id.size());
    for (auto& [id, c] : by_id) out.push_back(std::move(c));
    return out;
}

std::vector<std::pair<std::string, std::string>> allocate_cuis(
    std::vector<std::string> supplement_ids, const std::set<std::string>& existing) {
    std::sort(supplement_ids.begin(), supplement_ids.end());
    supplement_ids.erase(std::unique(supplement_ids.begin(), supplement_ids.end()),
                         supplement_ids.end());
    long max_existing = 0;
    for (const auto& cui : existing) {
        if (auto n = cui_number(cui)) max_existing = std::max(max_existing, *n);
    }
    const long needed = static_cast<long>(supplement_ids.size());
    if (max_existing + needed > kMaxCui) {
        throw Error(fmt::format("cannot allocate {} CUIs above {}: identifier space exhausted",
                                needed, format_cui(max_existing)));
    }
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(supplement_ids.size());
    long next = max_existing + 1;
    for (auto& id : supplement_ids) out.emplace_back(std::move(id), format_cui(next++));
    return out;
}

SemanticTypeDef semantic_type_for(std::string_view tui) {
    static const std::map<std::string, std::pair<std::string, std::string>, std::less<>> known = {
        {"T121", {"A1.4.1.1.1", "Pharmacologic Substance"}},
        {"T109", {"A1.4.1.2.1", "Organic Chemical"}},
        {"T116", {"A1.4.1.2.1.7", "Amino Acid, Peptide, or Protein"}},
        {"T127", {"A1.4.1.1.4", "Vitamin"}},
        {"T168", {"A1.3.3", "Food"}},
        {"T002", {"A1.1.3.2", "Plant"}},
    };
    SemanticTypeDef def;
    def.tui = std::string(tui);
    auto it = known.find(tui);
    if (it == known.end()) {
        def.tree_number.clear();
        def.name.clear();
    } else {
        def.tree_number = it->second.first;
        def.name = it->second.second;
    }
    return def;
}

MergeResult merge_terminology(const RrfSet& base, std::span<const SupplementConcept> supplement,
                              const SourceRanking& supplement_ranking,
                              const SemanticTypeDef& semantic_type) {
    MergeResult result;
    result.merged = base;
    MergeReport& report = result.report;

    const auto existing = concepts_from(base.mrconso);
    std::set<std::string> existing_cuis;
    std::set<std::tuple<std::string, std::string, std::string>> atom_keys;  // cui, source, term
    for (const auto& rec : existing) {
        existing_cuis.insert(rec.cui);
        for (const auto& a : rec.atoms) atom_keys.emplace(rec.cui, a.source, a.term);
    }

    std::vector<std::string> unlinked_ids;
    for (const auto& c : supplement) {
        if (c.linked_cui) {
            if (!existing_cuis.count(*c.linked_cui)) {
                throw Error(fmt::format("supplement concept {} links to {}, which is not in MRCONSO",
                                        c.id, *c.linked_cui));
            }
        } else {
            unlinked_ids.push_back(c.id);
        }
    }
    report.cuis_allocated = allocate_cuis(unlinked_ids, existing_cuis);
    std::map<std::string, std::string> allocated(report.cuis_allocated.begin(),
                                                 report.cuis_allocated.end());

    struct NewAtom {
        std::string cui;
        const SupplementAtom* atom;
        std::string code;
        bool preferred;
    };
    std::vector<NewAtom> new_atoms;
    std::set<std::string> touched;

    for (const auto& c : supplement) {
        const bool linked = c.linked_cui.has_value();
        const std::string cui = linked ? *c.linked_cui : allocated.at(c.id);
        touched.insert(cui);
        if (linked) {
            ++report.linked_concepts;
        } else {
            ++report.new_concepts;
        }

        std::vector<const SupplementAtom*> kept;
        for (const auto& a : c.atoms) {
            if (!atom_keys.emplace(cui, a.source, a.term).second) {
                result.warnings.push_back(fmt::format(
                    "supplement concept {}: atom '{}' from {} already present under {}; skipped",
                    c.id, a.term, a.source, cui));
                continue;
            }
            kept.push_back(&a);
        }
        if (kept.empty()) continue;

        std::size_t preferred = kept.size();
        if (!linked) {
            for (std::size_t i = 0; i < kept.size() && preferred == kept.size(); ++i) {
                if (kept[i]->preferred) preferred = i;
            }
            if (preferred == kept.size()) {
                std::optional<std::size_t> best_rank;
                preferred = 0;
                for (std::size_t i = 0; i < kept.size(); ++i) {
                    auto rank = supplement_ranking.position(kept[i]->source, kept[i]->term_type);
                    if (rank && (!best_rank || *rank < *best_rank)) {
                        best_rank = rank;
                        preferred = i;
                    }
                }
            }
        }
        for (std::size_t i = 0; i < kept.size(); ++i) {
            new_atoms.push_back({cui, kept[i], c.id, i == preferred});
        }
    }
    report.atoms_added = new_atoms.size();

    // MRCONSO rows, appended in CUI order.
    std::stable_sort(new_atoms.begin(), new_atoms.end(),
                     [](const NewAtom& a, const NewAtom& b) { return a.cui < b.cui; });
    for (const auto& na : new_atoms) {
        result.merged.mrconso.append({
            {0, na.cui},
            {1, "ENG"},
            {2, na.preferred ? "P" : "S"},
            {4, "PF"},
            {6, na.preferred ? "Y" : "N"},
            {11, na.atom->source},
            {12, na.atom->term_type},
            {13, na.code},
            {14, na.atom->term},
            {15, "0"},
            {16, "N"},
        });
    }

    // MRSTY rows for every touched CUI lacking the configured type.
    const auto types = semantic_types_from(base.mrsty);
    for (const auto& cui : touched) {
        auto it = types.find(cui);
        if (it != types.end() && it->second.count(semantic_type.tui)) continue;
        result.merged.mrsty.append({
            {0, cui},
            {1, semantic_type.tui},
            {2, semantic_type.tree_number},
            {3, semantic_type.name},
        });
        ++report.semantic_types_added;
    }

    // Source metadata for vocabularies introduced by the merge.
    std::set<std::string> sources;
    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& na : new_atoms) {
        sources.insert(na.atom->source);
        pairs.emplace(na.atom->source, na.atom->term_type);
    }

    std::set<std::string> known_sources;
    if (base.mrsab) {
        for (const auto& row : base.mrsab->rows) known_sources.insert(row.fields[3]);
    }
    for (const auto& sab : sources) {
        if (known_sources.count(sab)) continue;
        if (!result.merged.mrsab) result.merged.mrsab = RrfTable{RrfKind::Mrsab};
        result.merged.mrsab->append({
            {2, sab}, {3, sab}, {4, sab}, {5, sab}, {19, "ENG"}, {21, "Y"}, {22, "Y"},
        });
        ++report.sources_added;
    }

    SourceRanking base_ranking;
    if (base.mrrank) base_ranking = ranking_from(*base.mrrank);
    std::vector<std::pair<std::string, std::string>> missing;
    for (const auto& p : pairs) {
        if (!base_ranking.find(p.first, p.second)) missing.push_back(p);
    }
    std::stable_sort(missing.begin(), missing.end(), [&](const auto& a, const auto& b) {
        auto ra = supplement_ranking.position(a.first, a.second);
        auto rb = supplement_ranking.position(b.first, b.second);
        if (ra && rb) return *ra < *rb;
        return ra.has_value() && !rb.has_value();
    });
    for (const auto& [sab, tty] : missing) {
        if (!result.merged.mrrank) result.merged.mrrank = RrfTable{RrfKind::Mrrank};
        const RankEntry* e = supplement_ranking.find(sab, tty);
        result.merged.mrrank->append({
            {0, e ? e->rank_text : "0000"},
            {1, sab},
            {2, tty},
            {3, e ? e->suppress : "N"},
        });
        ++report.rank_entries_added;
    }
    return result;
}

void validate(const RrfSet& set) {
    std::unordered_set<std::string> cuis;
    for (const auto& row : set.mrconso.rows) cuis.insert(row.fields[0]);
    std::size_t line_no = 0;
    for (const auto& row : set.mrsty.rows) {
        ++line_no;
        if (!cuis.count(row.fields[0])) {
            throw Error(fmt::format("MRSTY.RRF: CUI {} has no MRCONSO entry", row.fields[0]),
                        line_no);
        }
    }
}

EmitCounts emit_rrf(const RrfSet& set, std::ostream& mrconso, std::ostream& mrsty,
                    std::ostream* mrrank, std::ostream* mrsab) {
    validate(set);
    EmitCounts counts;
    counts.mrconso = write_rrf(set.mrconso, mrconso);
    counts.mrsty = write_rrf(set.mrsty, mrsty);
    if (set.mrrank && mrrank) counts.mrrank = write_rrf(*set.mrrank, *mrrank);
    if (set.mrsab && mrsab) counts.mrsab = write_rrf(*set.mrsab, *mrsab);
    return counts;
}

std::string to_json(const MergeReport& report) {
    nlohmann::ordered_json j;
    j["new_concepts"] = report.new_concepts;
    j["linked_concepts"] = report.linked_concepts;
    j["atoms_added"] = report.atoms_added;
    j["semantic_types_added"] = report.semantic_types_added;
    j["sources_added"] = report.sources_added;
    j["rank_entries_added"] = report.rank_entries_added;
    auto& alloc = j["cuis_allocated"] = nlohmann::ordered_json::array();
    for (const auto& [id, cui] : report.cuis_allocated) {
        alloc.push_back({{"supplement_id", id}, {"cui", cui}});
    }
    return j.dump(2) + "\n";
}

}  // namespace suppkg::terminology
