#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "suppkg/predicate.hpp"

namespace suppkg {

/// Conditions on one position of a pathway. Absent fields match anything.
struct NodeConstraint {
    std::string label;
    std::optional<std::set<std::string>> semtypes;  // non-empty intersection
    std::optional<bool> require_supplement;
    std::optional<std::set<std::string>> cui_allow;
    std::optional<std::set<std::string>> cui_deny;

    bool operator==(const NodeConstraint&) const = default;
};

enum class Direction { Forward, Reverse };

/// Link between two adjacent pattern positions. Reverse means the stored
/// edge points from `to_label` back to `from_label`.
struct EdgeConstraint {
    std::string from_label;
    std::string to_label;
    std::set<Predicate> predicates;
    Direction direction = Direction::Forward;

    bool operator==(const EdgeConstraint&) const = default;
};

struct PatternSpec {
    std::string name;
    std::vector<NodeConstraint> nodes;
    std::vector<EdgeConstraint> edges;  // edges[i] joins nodes[i] and nodes[i + 1]

    bool operator==(const PatternSpec&) const = default;
};

/// Parses one pattern definition:
///
///     pattern NAME {
///       node A { supplement: true }
///       edge A -> B { pred: [INHIBITS, STIMULATES] }
///       node B { semtype: [gngm, aapp] }
///     }
///
/// Node blocks accept `semtype:`, `supplement:`, `allow:` and `deny:`;
/// `#` starts a comment. Syntax errors throw ParseError with line and
/// column; semantic errors (unknown predicate, duplicate label, an edge
/// that does not join the neighbouring nodes, fewer than two nodes) throw
/// it as well, located at the offending token.
PatternSpec parse_pattern(std::string_view text);

/// Renders a pattern back into the definition language.
std::string to_text(const PatternSpec& pattern);

/// Built-in supplement-gene-drug pattern.
std::string_view dsgd_pattern_text();
/// Built-in supplement-gene-function-gene-drug pattern.
std::string_view dsgfgd_pattern_text();

/// Built-in pattern by name ("DsGD" or "DsGFGD", case-insensitive).
std::optional<PatternSpec> shipped_pattern(std::string_view name);

}  // namespace suppkg
