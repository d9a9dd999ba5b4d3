#include "suppkg/predicate.hpp"

#include <algorithm>

namespace suppkg {

namespace {

constexpr std::array<std::string_view, kPredicateCount> kNames = {
    "ADMINISTERED_TO", "AFFECTS",     "ASSOCIATED_WITH", "AUGMENTS",         "CAUSES",
    "COEXISTS_WITH",   "COMPARED_WITH", "COMPLICATES",   "CONVERTS_TO",      "DIAGNOSES",
    "DISRUPTS",        "HIGHER_THAN", "INHIBITS",        "INTERACTS_WITH",   "ISA",
    "LOCATION_OF",     "LOWER_THAN",  "MANIFESTATION_OF", "MEASURES",        "METHOD_OF",
    "OCCURS_IN",       "PART_OF",     "PRECEDES",        "PREDISPOSES",      "PREVENTS",
    "PROCESS_OF",      "PRODUCES",    "SAME_AS",         "STIMULATES",       "TREATS",
    "USES",
};

static_assert(std::is_sorted(kNames.begin(), kNames.end()));

}  // namespace

const std::array<Predicate, kPredicateCount>& all_predicates() {
    static const auto all = [] {
        std::array<Predicate, kPredicateCount> a{};
        for (std::size_t i = 0; i < kPredicateCount; ++i) a[i] = static_cast<Predicate>(i);
        return a;
    }();
    return all;
}

std::string_view to_string(Predicate p) { return kNames[static_cast<std::size_t>(p)]; }

std::optional<Predicate> parse_predicate(std::string_view name) {
    auto it = std::lower_bound(kNames.begin(), kNames.end(), name);
    if (it == kNames.end() || *it != name) return std::nullopt;
    return static_cast<Predicate>(it - kNames.begin());
}

}  // namespace suppkg
