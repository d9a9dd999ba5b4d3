#include "suppkg/discovery.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "suppkg/error.hpp"
#include "suppkg/text.hpp"

namespace suppkg {

namespace {

bool intersects(const std::set<std::string>& wanted, const std::vector<std::string>& have) {
    for (const auto& h : have) {
        if (wanted.count(h)) return true;
    }
    return false;
}

bool pathway_less(const Pathway& a, const Pathway& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.node_cuis != b.node_cuis) return a.node_cuis < b.node_cuis;
    return a.edges < b.edges;
}

class Matcher {
public:
    Matcher(const Graph& g, const PatternSpec& p) : g_(g), p_(p) {
        const std::size_t n = g.nodes().size();
        node_ok_.assign(p.nodes.size(), std::vector<char>(n, 0));
        for (std::size_t i = 0; i < p.nodes.size(); ++i) {
            for (NodeId v = 0; v < n; ++v) node_ok_[i][v] = matches(p.nodes[i], g.node(v)) ? 1 : 0;
        }
        pred_ok_.resize(p.edges.size());
        for (std::size_t i = 0; i < p.edges.size(); ++i) {
            pred_ok_[i].fill(false);
            for (Predicate pr : p.edges[i].predicates) pred_ok_[i][static_cast<std::size_t>(pr)] = true;
        }
        path_.resize(p.nodes.size());
        via_.resize(p.edges.size());
    }

    std::vector<Pathway> run() {
        if (p_.nodes.size() < 2) return {};
        for (NodeId v = 0; v < g_.nodes().size(); ++v) {
            if (!node_ok_[0][v]) continue;
            path_[0] = v;
            extend(1);
        }
        std::sort(out_.begin(), out_.end(), pathway_less);
        return std::move(out_);
    }

private:
    bool on_path(NodeId v, std::size_t filled) const {
        return std::find(path_.begin(), path_.begin() + static_cast<long>(filled), v) !=
               path_.begin() + static_cast<long>(filled);
    }

    void extend(std::size_t i) {
        if (i == p_.nodes.size()) {
            emit();
            return;
        }
        const NodeId prev = path_[i - 1];
        const bool forward = p_.edges[i - 1].direction == Direction::Forward;
        auto candidates = forward ? g_.out_edges(prev) : g_.in_edges(prev);
        for (EdgeId id : candidates) {
            const Edge& e = g_.edge(id);
            if (!pred_ok_[i - 1][static_cast<std::size_t>(e.predicate)]) continue;
            const NodeId next = forward ? e.object : e.subject;
            if (!node_ok_[i][next] || on_path(next, i)) continue;
            path_[i] = next;
            via_[i - 1] = id;
            extend(i + 1);
        }
    }

    void emit() {
        Pathway pw;
        pw.pattern = p_.name;
        pw.node_cuis.reserve(path_.size());
        for (NodeId v : path_) pw.node_cuis.push_back(g_.node(v).cui);
        for (EdgeId id : via_) {
            const Edge& e = g_.edge(id);
            pw.edges.push_back({g_.node(e.subject).cui, e.predicate, g_.node(e.object).cui});
            pw.score += e.confidence;
            pw.provenance.push_back(e.pmids);
        }
        out_.push_back(std::move(pw));
    }

    const Graph& g_;
    const PatternSpec& p_;
    std::vector<std::vector<char>> node_ok_;
    std::vector<std::array<bool, kPredicateCount>> pred_ok_;
    std::vector<NodeId> path_;
    std::vector<EdgeId> via_;
    std::vector<Pathway> out_;
};

}  // namespace

bool matches(const NodeConstraint& c, const Node& node) {
    if (c.semtypes && !intersects(*c.semtypes, node.semtypes)) return false;
    if (c.require_supplement && *c.require_supplement != node.is_supplement) return false;
    if (c.cui_allow && !c.cui_allow->count(node.cui)) return false;
    if (c.cui_deny && c.cui_deny->count(node.cui)) return false;
    return true;
}

std::vector<Pathway> find_pathways(const Graph& g, const PatternSpec& pattern) {
    return Matcher(g, pattern).run();
}

bool rank_before(const Pathway& a, const Pathway& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.node_cuis < b.node_cuis;
}

std::vector<Pathway> rank_pathways(std::vector<Pathway> pathways, std::optional<std::size_t> top_k) {
    std::stable_sort(pathways.begin(), pathways.end(), rank_before);
    if (top_k && pathways.size() > *top_k) pathways.resize(*top_k);
    return pathways;
}

std::vector<Pathway> collapse_endpoints(std::span<const Pathway> ranked) {
    std::set<std::pair<std::string, std::string>> seen;
    std::vector<Pathway> out;
    for (const auto& p : ranked) {
        if (p.node_cuis.empty()) continue;
        if (seen.emplace(p.node_cuis.front(), p.node_cuis.back()).second) out.push_back(p);
    }
    return out;
}

NoveltySplit novelty_filter(const Graph& g, std::span<const Pathway> pathways,
                            const std::set<Predicate>& interaction_predicates) {
    auto joined = [&](std::string_view a, std::string_view b) {
        auto s = g.find_node(a);
        auto o = g.find_node(b);
        if (!s || !o) return false;
        for (EdgeId id : g.out_edges(*s)) {
            const Edge& e = g.edge(id);
            if (e.object == *o && interaction_predicates.count(e.predicate)) return true;
        }
        return false;
    };
    NoveltySplit out;
    for (const auto& p : pathways) {
        const bool direct = !p.node_cuis.empty() &&
                            (joined(p.node_cuis.front(), p.node_cuis.back()) ||
                             joined(p.node_cuis.back(), p.node_cuis.front()));
        (direct ? out.directly_connected : out.novel).push_back(p);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Known interactions
// ---------------------------------------------------------------------------

bool KnownInteractionList::contains(std::string_view a, std::string_view b) const {
    return pairs.count({std::string(a), std::string(b)}) ||
           pairs.count({std::string(b), std::string(a)});
}

KnownInteractionList read_known(std::istream& in) {
    KnownInteractionList out;
    TsvReader reader(in);
    if (reader.header().empty()) return out;
    const std::size_t c_sup = reader.require("supplement_cui");
    const std::size_t c_drug = reader.require("drug_cui");
    std::string line;
    while (reader.next(line)) {
        auto cells = split(line, '\t');
        if (cells.size() != reader.header().size()) {
            throw Error(fmt::format("known interactions: expected {} cells, found {}",
                                    reader.header().size(), cells.size()),
                        reader.line_number());
        }
        auto sup = trim(cells[c_sup]);
        auto drug = trim(cells[c_drug]);
        if (sup.empty() || drug.empty()) {
            throw Error("known interactions: empty CUI", reader.line_number());
        }
        out.pairs.emplace(std::string(sup), std::string(drug));
    }
    return out;
}

KnownCheck check_known(std::span<const Pathway> pathways, const KnownInteractionList& known) {
    KnownCheck out;
    for (const auto& p : pathways) {
        auto& [k, total] = out.per_pattern[p.pattern];
        ++total;
        if (!p.node_cuis.empty() && known.contains(p.node_cuis.front(), p.node_cuis.back())) {
            ++k;
            out.known.push_back(p);
        } else {
            out.unknown.push_back(p);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pathway exchange
// ---------------------------------------------------------------------------

void write_pathways(std::span<const Pathway> pathways, std::ostream& out) {
    out << "rank\tpattern\tscore\tnodes\tedges\tpmids\n";
    std::size_t rank = 0;
    for (const auto& p : pathways) {
        std::vector<std::string> edges;
        for (const auto& e : p.edges) {
            edges.push_back(fmt::format("{}|{}|{}", e.subject, to_string(e.predicate), e.object));
        }
        std::vector<std::string> pmids;
        for (const auto& prov : p.provenance) pmids.push_back(join(prov, ","));
        out << ++rank << '\t' << p.pattern << '\t' << fmt::format("{}", p.score) << '\t'
            << join(p.node_cuis, ",") << '\t' << join(edges, ";") << '\t' << join(pmids, ";")
            << '\n';
    }
}

std::vector<Pathway> read_pathways(std::istream& in) {
    TsvReader reader(in);
    std::vector<Pathway> out;
    if (reader.header().empty()) return out;
    const std::size_t c_pattern = reader.require("pattern");
    const std::size_t c_score = reader.require("score");
    const std::size_t c_nodes = reader.require("nodes");
    const std::size_t c_edges = reader.require("edges");
    const auto c_pmids = reader.column("pmids");
    std::string line;
    while (reader.next(line)) {
        const std::size_t line_no = reader.line_number();
        auto cells = split(line, '\t');
        if (cells.size() != reader.header().size()) {
            throw Error(fmt::format("pathways: expected {} cells, found {}",
                                    reader.header().size(), cells.size()),
                        line_no);
        }
        Pathway p;
        p.pattern = std::string(cells[c_pattern]);
        auto score = trim(cells[c_score]);
        auto [ptr, ec] = std::from_chars(score.data(), score.data() + score.size(), p.score);
        if (ec != std::errc{} || ptr != score.data() + score.size()) {
            throw Error(fmt::format("pathways: bad score '{}'", score), line_no);
        }
        p.node_cuis = split_list(cells[c_nodes]);
        for (auto piece : split(cells[c_edges], ';')) {
            auto parts = split(piece, '|');
            if (parts.size() != 3) throw Error(fmt::format("pathways: bad edge '{}'", piece), line_no);
            auto pred = parse_predicate(parts[1]);
            if (!pred) throw Error(fmt::format("pathways: unknown predicate '{}'", parts[1]), line_no);
            p.edges.push_back({std::string(parts[0]), *pred, std::string(parts[2])});
        }
        if (p.node_cuis.size() != p.edges.size() + 1) {
            throw Error("pathways: node and edge counts disagree", line_no);
        }
        if (c_pmids) {
            for (auto piece : split(cells[*c_pmids], ';')) p.provenance.push_back(split_list(piece));
            if (p.provenance.size() != p.edges.size()) p.provenance.resize(p.edges.size());
        }
        out.push_back(std::move(p));
    }
    return out;
}

PredicationStore::PredicationStore(std::span<const Predication> predications)
    : items_(predications.begin(), predications.end()) {
    for (std::size_t i = 0; i < items_.size(); ++i) by_id_.emplace(items_[i].id, i);
}

const Predication* PredicationStore::find(std::string_view id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &items_[it->second];
}

}  // namespace suppkg
