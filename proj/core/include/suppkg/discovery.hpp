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

#include "suppkg/kgraph.hpp"
#include "suppkg/pattern.hpp"

namespace suppkg {

struct EdgeRef {
    std::string subject;
    Predicate predicate = Predicate::ASSOCIATED_WITH;
    std::string object;

    auto operator<=>(const EdgeRef&) const = default;
    bool operator==(const EdgeRef&) const = default;
};

/// A concrete match of a pattern: distinct nodes joined by stored edges.
struct Pathway {
    std::string pattern;
    std::vector<std::string> node_cuis;
    std::vector<EdgeRef> edges;
    /// Sum of the matched edges' confidences, accumulated in path order.
    double score = 0.0;
    /// Supporting pmids of each matched edge.
    std::vector<std::vector<std::string>> provenance;

    bool operator==(const Pathway&) const = default;
};

/// Whether a node satisfies every present field of a constraint.
bool matches(const NodeConstraint& constraint, const Node& node);

/// All simple matches of `pattern` in `g`, ordered by descending score,
/// then node CUIs, then edges.
std::vector<Pathway> find_pathways(const Graph& g, const PatternSpec& pattern);

/// Ranking order: score descending, ties by node CUIs lexicographically.
bool rank_before(const Pathway& a, const Pathway& b);

/// Stable sort by ranking order, truncated to `top_k` when given.
std::vector<Pathway> rank_pathways(std::vector<Pathway> pathways,
                                   std::optional<std::size_t> top_k = {});

/// Keeps the best-ranked pathway per (first, last) endpoint pair.
std::vector<Pathway> collapse_endpoints(std::span<const Pathway> ranked);

struct NoveltySplit {
    std::vector<Pathway> novel;
    std::vector<Pathway> directly_connected;
};

/// A pathway is directly connected when the graph already joins its first
/// and last node, in either direction, by one of `interaction_predicates`.
NoveltySplit novelty_filter(const Graph& g, std::span<const Pathway> pathways,
                            const std::set<Predicate>& interaction_predicates = {
                                Predicate::INTERACTS_WITH});

struct KnownInteractionList {
    std::set<std::pair<std::string, std::string>> pairs;  // (supplement, drug)

    bool contains(std::string_view a, std::string_view b) const;
};

/// Reads a TSV with header supplement_cui, drug_cui.
KnownInteractionList read_known(std::istream& in);

struct KnownCheck {
    std::vector<Pathway> known;
    std::vector<Pathway> unknown;
    /// pattern name -> (known, total)
    std::map<std::string, std::pair<std::size_t, std::size_t>> per_pattern;
};

/// A pathway is known when (first, last) or (last, first) is a listed pair.
KnownCheck check_known(std::span<const Pathway> pathways, const KnownInteractionList& known);

/// Pathway exchange TSV: rank, pattern, score, nodes, edges, pmids.
void write_pathways(std::span<const Pathway> pathways, std::ostream& out);
std::vector<Pathway> read_pathways(std::istream& in);

/// Sentence lookup for the worksheet, keyed by predication id.
class PredicationStore {
public:
    PredicationStore() = default;
    explicit PredicationStore(std::span<const Predication> predications);

    const Predication* find(std::string_view id) const;
    std::size_t size() const noexcept { return by_id_.size(); }

private:
    std::vector<Predication> items_;
    std::map<std::string, std::size_t, std::less<>> by_id_;
};

/// Reviewer worksheet: one row per pathway (at most `top_k`) with rank,
/// score, node and edge chains, supporting pmids and sentences per edge,
/// and blank verdict columns. Edges missing from the graph or predication
/// ids missing from the store are an Error.
void write_review_worksheet(std::span<const Pathway> ranked, const Graph& g,
                            const PredicationStore& store, std::ostream& out,
                            std::optional<std::size_t> top_k = {});

}  // namespace suppkg
