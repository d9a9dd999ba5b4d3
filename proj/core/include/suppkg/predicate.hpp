#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace suppkg {

/// Closed predicate vocabulary of the filtered predication set.
enum class Predicate : std::uint8_t {
    ADMINISTERED_TO,
    AFFECTS,
    ASSOCIATED_WITH,
    AUGMENTS,
    CAUSES,
    COEXISTS_WITH,
    COMPARED_WITH,
    COMPLICATES,
    CONVERTS_TO,
    DIAGNOSES,
    DISRUPTS,
    HIGHER_THAN,
    INHIBITS,
    INTERACTS_WITH,
    ISA,
    LOCATION_OF,
    LOWER_THAN,
    MANIFESTATION_OF,
    MEASURES,
    METHOD_OF,
    OCCURS_IN,
    PART_OF,
    PRECEDES,
    PREDISPOSES,
    PREVENTS,
    PROCESS_OF,
    PRODUCES,
    SAME_AS,
    STIMULATES,
    TREATS,
    USES,
};

inline constexpr std::size_t kPredicateCount = 31;

/// Every predicate, in alphabetical order (which is also enum order).
const std::array<Predicate, kPredicateCount>& all_predicates();

std::string_view to_string(Predicate p);

/// Exact, case-sensitive lookup of an upper-case predicate name.
std::optional<Predicate> parse_predicate(std::string_view name);

}  // namespace suppkg
