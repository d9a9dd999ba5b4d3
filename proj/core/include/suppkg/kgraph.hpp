#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "suppkg/filtering.hpp"
#include "suppkg/predicate.hpp"
#include "suppkg/predications.hpp"

namespace suppkg {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

struct Node {
    std::string cui;
    std::string name;
    std::vector<std::string> semtypes;  // sorted, unique
    std::vector<std::string> sources;   // sorted, unique
    bool is_supplement = false;

    bool operator==(const Node&) const = default;
};

struct Edge {
    NodeId subject = 0;
    NodeId object = 0;
    Predicate predicate = Predicate::ASSOCIATED_WITH;
    /// Maximum score over the supporting predications.
    double confidence = 0.0;
    std::vector<std::string> pmids;            // sorted, unique
    std::vector<std::string> predication_ids;  // sorted, unique

    std::size_t support() const noexcept { return predication_ids.size(); }
    bool operator==(const Edge&) const = default;
};

/// Edge description keyed by CUI, used to assemble graphs.
struct EdgeSpec {
    std::string subject;
    Predicate predicate = Predicate::ASSOCIATED_WITH;
    std::string object;
    double confidence = 0.0;
    std::vector<std::string> pmids;
    std::vector<std::string> predication_ids;
};

/// Immutable directed labelled multigraph. Nodes are stored sorted by CUI
/// and edges by (subject, predicate, object), so node and edge ids follow
/// canonical order. Outgoing and incoming edge lists are indexed per node.
/// Safe for concurrent readers.
class Graph {
public:
    Graph() = default;

    /// Validates and indexes a graph. Throws Error on a duplicate CUI,
    /// an empty name, a dangling endpoint, a repeated (subject, predicate,
    /// object) triple, a confidence outside [0, 1] or an edge without
    /// supporting predications.
    static Graph assemble(std::string supplement_source, std::vector<Node> nodes,
                          std::vector<EdgeSpec> edges);

    const std::string& supplement_source() const noexcept { return supplement_source_; }

    std::span<const Node> nodes() const noexcept { return nodes_; }
    std::span<const Edge> edges() const noexcept { return edges_; }
    const Node& node(NodeId id) const { return nodes_.at(id); }
    const Edge& edge(EdgeId id) const { return edges_.at(id); }

    std::optional<NodeId> find_node(std::string_view cui) const;
    std::optional<EdgeId> find_edge(std::string_view subject, Predicate predicate,
                                    std::string_view object) const;

    /// Edge ids leaving / entering a node, in canonical edge order.
    std::span<const EdgeId> out_edges(NodeId node) const;
    std::span<const EdgeId> in_edges(NodeId node) const;

    bool empty() const noexcept { return nodes_.empty(); }
    bool operator==(const Graph& other) const;

private:
    void index();

    std::string supplement_source_;
    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> out_offsets_;
    std::vector<EdgeId> out_list_;
    std::vector<std::size_t> in_offsets_;
    std::vector<EdgeId> in_list_;
};

/// One node per distinct endpoint CUI (first-seen name, unioned semtypes
/// and sources) and one edge per distinct triple (max score, every
/// supporting predication recorded).
Graph build_graph(std::span<const Predication> predications, std::span<const Score> scores,
                  std::string supplement_source);

struct NameConflict {
    std::string cui;
    std::string kept;
    std::string dropped;
};

struct GraphMerge {
    Graph graph;
    std::vector<NameConflict> conflicts;
};

/// Union of two graphs. Names from `a` win; coincident edges take the
/// maximum confidence and the union of pmids and predication ids, so
/// merging a graph with itself is the identity.
GraphMerge merge_graphs(const Graph& a, const Graph& b);

struct GraphStats {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t supplement_nodes = 0;
    std::size_t predications = 0;  // sum of edge support
    std::map<Predicate, std::size_t> edges_per_predicate;

    /// "56,635 nodes, 595,222 edges"
    std::string text() const;
};

GraphStats graph_stats(const Graph& g);

struct PredicateShare {
    Predicate predicate = Predicate::ASSOCIATED_WITH;
    std::size_t count = 0;
    double percent = 0.0;
};

/// Shares sorted by count descending, ties alphabetical. `total` defaults
/// to the sum of counts; pass a reference total to report against an
/// externally stated population size.
std::vector<PredicateShare> predicate_distribution(
    const std::map<Predicate, std::size_t>& counts, std::optional<std::size_t> total = {});
std::vector<PredicateShare> predicate_distribution(std::span<const Predication> predications);
/// Counts predications (edge support), not collapsed edges.
std::vector<PredicateShare> predicate_distribution(const Graph& g);

/// Canonical JSON document: version, supplement_source, nodes, edges.
std::string serialize(const Graph& g);

/// Throws Error naming the offending element path, e.g. "edges[3].subject".
Graph deserialize(std::string_view document);

}  // namespace suppkg
