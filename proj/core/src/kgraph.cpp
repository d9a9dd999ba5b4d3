#include "suppkg/kgraph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <tuple>
#include <unordered_map>

#include <fmt/format.h>

#include "suppkg/error.hpp"
#include "suppkg/text.hpp"

namespace suppkg {

namespace {

void sort_unique(std::vector<std::string>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<std::string> set_union(const std::vector<std::string>& a,
                                   const std::vector<std::string>& b) {
    std::vector<std::string> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// `v` itself when already sorted and unique, else a normalized copy in `scratch`.
const std::vector<std::string>& sorted_view(const std::vector<std::string>& v,
                                            std::vector<std::string>& scratch) {
    if (std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end()) return v;
    scratch = v;
    sort_unique(scratch);
    return scratch;
}

bool contains(const std::vector<std::string>& sorted, std::string_view value) {
    return std::binary_search(sorted.begin(), sorted.end(), value);
}

}  // namespace

// ---------------------------------------------------------------------------
// Graph
// ---------------------------------------------------------------------------

Graph Graph::assemble(std::string supplement_source, std::vector<Node> nodes,
                      std::vector<EdgeSpec> edges) {
    Graph g;
    g.supplement_source_ = std::move(supplement_source);

    std::sort(nodes.begin(), nodes.end(),
              [](const Node& a, const Node& b) { return a.cui < b.cui; });
    std::unordered_map<std::string_view, NodeId> index;
    index.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        Node& n = nodes[i];
        if (n.cui.empty()) throw Error("graph: node with empty CUI");
        if (n.name.empty()) throw Error(fmt::format("graph: node {} has an empty name", n.cui));
        if (i > 0 && nodes[i - 1].cui == n.cui) {
            throw Error(fmt::format("graph: duplicate node {}", n.cui));
        }
        sort_unique(n.semtypes);
        sort_unique(n.sources);
        n.is_supplement = !g.supplement_source_.empty() && contains(n.sources, g.supplement_source_);
    }
    g.nodes_ = std::move(nodes);
    for (std::size_t i = 0; i < g.nodes_.size(); ++i) {
        index.emplace(g.nodes_[i].cui, static_cast<NodeId>(i));
    }

    g.edges_.reserve(edges.size());
    for (auto& spec : edges) {
        auto s = index.find(spec.subject);
        auto o = index.find(spec.object);
        if (s == index.end()) {
            throw Error(fmt::format("graph: edge subject {} is not a node", spec.subject));
        }
        if (o == index.end()) {
            throw Error(fmt::format("graph: edge object {} is not a node", spec.object));
        }
        if (!(spec.confidence >= 0.0 && spec.confidence <= 1.0)) {
            throw Error(fmt::format("graph: edge {} {} {} has confidence {} outside [0, 1]",
                                    spec.subject, to_string(spec.predicate), spec.object,
                                    spec.confidence));
        }
        Edge e;
        e.subject = s->second;
        e.object = o->second;
        e.predicate = spec.predicate;
        e.confidence = spec.confidence;
        e.pmids = std::move(spec.pmids);
        e.predication_ids = std::move(spec.predication_ids);
        sort_unique(e.pmids);
        sort_unique(e.predication_ids);
        if (e.predication_ids.empty()) {
            throw Error(fmt::format("graph: edge {} {} {} has no supporting predications",
                                    spec.subject, to_string(spec.predicate), spec.object));
        }
        g.edges_.push_back(std::move(e));
    }
    auto key = [](const Edge& e) { return std::tuple(e.subject, e.predicate, e.object); };
    std::sort(g.edges_.begin(), g.edges_.end(),
              [&](const Edge& a, const Edge& b) { return key(a) < key(b); });
    for (std::size_t i = 1; i < g.edges_.size(); ++i) {
        if (key(g.edges_[i - 1]) == key(g.edges_[i])) {
            const Edge& e = g.edges_[i];
            throw Error(fmt::format("graph: duplicate edge {} {} {}", g.nodes_[e.subject].cui,
                                    to_string(e.predicate), g.nodes_[e.object].cui));
        }
    }
    g.index();
    return g;
}

void Graph::index() {
    const std::size_t n = nodes_.size();
    out_offsets_.assign(n + 1, 0);
    in_offsets_.assign(n + 1, 0);
    for (const auto& e : edges_) {
        ++out_offsets_[e.subject + 1];
        ++in_offsets_[e.object + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        out_offsets_[i + 1] += out_offsets_[i];
        in_offsets_[i + 1] += in_offsets_[i];
    }
    out_list_.assign(edges_.size(), 0);
    in_list_.assign(edges_.size(), 0);
    std::vector<std::size_t> out_fill(out_offsets_.begin(), out_offsets_.end() - 1);
    std::vector<std::size_t> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        out_list_[out_fill[e.subject]++] = static_cast<EdgeId>(i);
        in_list_[in_fill[e.object]++] = static_cast<EdgeId>(i);
    }
}

std::optional<NodeId> Graph::find_node(std::string_view cui) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), cui,
                               [](const Node& n, std::string_view c) { return n.cui < c; });
    if (it == nodes_.end() || it->cui != cui) return std::nullopt;
    return static_cast<NodeId>(it - nodes_.begin());
}

std::optional<EdgeId> Graph::find_edge(std::string_view subject, Predicate predicate,
                                       std::string_view object) const {
    auto s = find_node(subject);
    auto o = find_node(object);
    if (!s || !o) return std::nullopt;
    for (EdgeId id : out_edges(*s)) {
        const Edge& e = edges_[id];
        if (e.predicate == predicate && e.object == *o) return id;
    }
    return std::nullopt;
}

std::span<const EdgeId> Graph::out_edges(NodeId node) const {
    if (node >= nodes_.size()) return {};
    return std::span<const EdgeId>(out_list_).subspan(out_offsets_[node],
                                                      out_offsets_[node + 1] - out_offsets_[node]);
}

std::span<const EdgeId> Graph::in_edges(NodeId node) const {
    if (node >= nodes_.size()) return {};
    return std::span<const EdgeId>(in_list_).subspan(in_offsets_[node],
                                                     in_offsets_[node + 1] - in_offsets_[node]);
}

bool Graph::operator==(const Graph& other) const {
    return supplement_source_ == other.supplement_source_ && nodes_ == other.nodes_ &&
           edges_ == other.edges_;
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

Graph build_graph(std::span<const Predication> predications, std::span<const Score> scores,
                  std::string supplement_source) {
    const auto probs = align_scores(predications, scores);

    std::vector<Node> nodes;
    std::unordered_map<std::string, std::size_t> node_at;
    auto touch = [&](const std::string& cui, const std::string& name,
                     const std::vector<std::string>& raw_semtypes,
                     const std::vector<std::string>& raw_sources) {
        std::vector<std::string> semtypes_copy;
        std::vector<std::string> sources_copy;
        const auto& semtypes = sorted_view(raw_semtypes, semtypes_copy);
        const auto& sources = sorted_view(raw_sources, sources_copy);
        auto [it, inserted] = node_at.try_emplace(cui, nodes.size());
        if (inserted) {
            Node n;
            n.cui = cui;
            n.name = name;
            n.semtypes = semtypes;
            n.sources = sources;
            nodes.push_back(std::move(n));
            return;
        }
        Node& n = nodes[it->second];
        if (n.name.empty()) n.name = name;
        if (!std::includes(n.semtypes.begin(), n.semtypes.end(), semtypes.begin(), semtypes.end())) {
            n.semtypes = set_union(n.semtypes, semtypes);
        }
        if (!std::includes(n.sources.begin(), n.sources.end(), sources.begin(), sources.end())) {
            n.sources = set_union(n.sources, sources);
        }
    };

    std::vector<EdgeSpec> edges;
    std::unordered_map<std::string, std::size_t> edge_at;
    std::string key;
    for (std::size_t i = 0; i < predications.size(); ++i) {
        const Predication& p = predications[i];
        touch(p.subject_cui, p.subject_name, p.subject_semtypes, p.subject_sources);
        touch(p.object_cui, p.object_name, p.object_semtypes, p.object_sources);

        key.clear();
        key.append(p.subject_cui).push_back('\x1f');
        key.append(to_string(p.predicate)).push_back('\x1f');
        key.append(p.object_cui);
        auto [it, inserted] = edge_at.try_emplace(key, edges.size());
        if (inserted) {
            EdgeSpec e;
            e.subject = p.subject_cui;
            e.predicate = p.predicate;
            e.object = p.object_cui;
            e.confidence = probs[i];
            edges.push_back(std::move(e));
        }
        EdgeSpec& e = edges[it->second];
        e.confidence = std::max(e.confidence, probs[i]);
        if (!p.pmid.empty()) e.pmids.push_back(p.pmid);
        e.predication_ids.push_back(p.id);
    }
    for (auto& n : nodes) {
        if (n.name.empty()) n.name = n.cui;
    }
    return Graph::assemble(std::move(supplement_source), std::move(nodes), std::move(edges));
}

GraphMerge merge_graphs(const Graph& a, const Graph& b) {
    GraphMerge out;
    std::map<std::string, Node> nodes;
    for (const auto& n : a.nodes()) nodes.emplace(n.cui, n);
    for (const auto& n : b.nodes()) {
        auto [it, inserted] = nodes.try_emplace(n.cui, n);
        if (inserted) continue;
        Node& kept = it->second;
        if (kept.name != n.name) out.conflicts.push_back({n.cui, kept.name, n.name});
        kept.semtypes = set_union(kept.semtypes, n.semtypes);
        kept.sources = set_union(kept.sources, n.sources);
    }

    using Key = std::tuple<std::string, Predicate, std::string>;
    std::map<Key, EdgeSpec> edges;
    auto add = [&](const Graph& g) {
        for (const auto& e : g.edges()) {
            const std::string& s = g.node(e.subject).cui;
            const std::string& o = g.node(e.object).cui;
            auto [it, inserted] = edges.try_emplace(Key{s, e.predicate, o});
            EdgeSpec& spec = it->second;
            if (inserted) {
                spec.subject = s;
                spec.predicate = e.predicate;
                spec.object = o;
                spec.confidence = e.confidence;
                spec.pmids = e.pmids;
                spec.predication_ids = e.predication_ids;
                continue;
            }
            spec.confidence = std::max(spec.confidence, e.confidence);
            spec.pmids = set_union(spec.pmids, e.pmids);
            spec.predication_ids = set_union(spec.predication_ids, e.predication_ids);
        }
    };
    add(a);
    add(b);

    std::vector<Node> node_list;
    node_list.reserve(nodes.size());
    for (auto& [cui, n] : nodes) node_list.push_back(std::move(n));
    std::vector<EdgeSpec> edge_list;
    edge_list.reserve(edges.size());
    for (auto& [k, e] : edges) edge_list.push_back(std::move(e));

    std::string source = a.supplement_source().empty() ? b.supplement_source()
                                                       : a.supplement_source();
    out.graph = Graph::assemble(std::move(source), std::move(node_list), std::move(edge_list));
    return out;
}

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

std::string GraphStats::text() const {
    return fmt::format("{} nodes, {} edges", format_count(static_cast<std::int64_t>(nodes)),
                       format_count(static_cast<std::int64_t>(edges)));
}

GraphStats graph_stats(const Graph& g) {
    GraphStats s;
    s.nodes = g.nodes().size();
    s.edges = g.edges().size();
    for (const auto& n : g.nodes()) s.supplement_nodes += n.is_supplement ? 1 : 0;
    for (const auto& e : g.edges()) {
        ++s.edges_per_predicate[e.predicate];
        s.predications += e.support();
    }
    return s;
}

std::vector<PredicateShare> predicate_distribution(const std::map<Predicate, std::size_t>& counts,
                                                   std::optional<std::size_t> total) {
    std::size_t sum = 0;
    for (const auto& [p, c] : counts) sum += c;
    const std::size_t denominator = total.value_or(sum);
    std::vector<PredicateShare> out;
    for (const auto& [p, c] : counts) {
        if (c == 0) continue;
        PredicateShare share;
        share.predicate = p;
        share.count = c;
        share.percent = denominator == 0 ? 0.0
                                         : 100.0 * static_cast<double>(c) /
                                               static_cast<double>(denominator);
        out.push_back(share);
    }
    // Map order is alphabetical, so a stable sort on count leaves ties alphabetical.
    std::stable_sort(out.begin(), out.end(), [](const PredicateShare& a, const PredicateShare& b) {
        return a.count > b.count;
    });
    return out;
}

std::vector<PredicateShare> predicate_distribution(std::span<const Predication> predications) {
    std::map<Predicate, std::size_t> counts;
    for (const auto& p : predications) ++counts[p.predicate];
    return predicate_distribution(counts);
}

std::vector<PredicateShare> predicate_distribution(const Graph& g) {
    std::map<Predicate, std::size_t> counts;
    for (const auto& e : g.edges()) counts[e.predicate] += e.support();
    return predicate_distribution(counts);
}

}  // namespace suppkg
