#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "suppkg/predications.hpp"

namespace suppkg {

struct Score {
    std::string predication_id;
    double probability = 0.0;

    bool operator==(const Score&) const = default;
};

/// Reads a score TSV (predication_id, probability). Probabilities outside
/// [0, 1] or unparsable are an Error with the line number.
std::vector<Score> read_scores(std::istream& in);
void write_scores(std::span<const Score> scores, std::ostream& out);

// ---------------------------------------------------------------------------
// Scorers
// ---------------------------------------------------------------------------

/// Probabilities supplied by an external classifier, keyed by id.
struct ExternalScorer {
    std::unordered_map<std::string, double> probabilities;

    static ExternalScorer from(std::span<const Score> scores);
};

struct ConstantScorer {
    double value = 1.0;
};

/// Baseline that distrusts predications whose sentence negates the
/// predicate's cue word. See negation_score().
struct NegationScorer {
    double negated = 0.1;
    double plain = 0.9;
};

using Scorer = std::variant<ExternalScorer, ConstantScorer, NegationScorer>;

/// True when `sentence` holds a negation cue ("not", "no", "without",
/// "does not", "failed to") within five tokens of the predicate's cue
/// phrase (lower-cased predicate, underscores as spaces). When the cue
/// phrase does not occur in the sentence the whole sentence is searched.
bool has_negation_near(std::string_view sentence, Predicate predicate);

std::vector<Score> score_predications(std::span<const Predication> predications,
                                      const Scorer& scorer);

// ---------------------------------------------------------------------------
// Threshold filter
// ---------------------------------------------------------------------------

struct FilterStats {
    std::size_t input = 0;
    std::size_t retained = 0;

    double retained_percent() const;
    /// "2,710,240 (59.94%)"
    std::string text() const;
};

/// Indices into the input, in input order.
struct FilterResult {
    std::vector<std::size_t> retained;
    std::vector<std::size_t> removed;
    FilterStats stats;
};

/// Keeps predications whose probability is >= threshold. Scores are
/// matched by id; a predication without a score is an Error.
FilterResult filter_by_threshold(std::span<const Predication> predications,
                                 std::span<const Score> scores, double threshold);

/// Probability per predication, aligned to `predications`.
std::vector<double> align_scores(std::span<const Predication> predications,
                                 std::span<const Score> scores);

template <typename T>
std::vector<T> select(std::span<const T> items, std::span<const std::size_t> indices) {
    std::vector<T> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) out.push_back(items[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Annotation splits
// ---------------------------------------------------------------------------

struct SplitSpec {
    double train = 0.7;
    double dev = 0.2;
    double test = 0.1;
    std::uint64_t seed = 0;
    bool balance_train_dev = true;
    bool test_matches_source_distribution = true;

    void validate() const;
};

struct Splits {
    std::vector<std::string> train;
    std::vector<std::string> dev;
    std::vector<std::string> test;
    /// Majority-class items dropped while balancing train and dev.
    std::vector<std::string> discarded;
    /// Sizes of the train and dev pools before balancing.
    std::size_t train_pool = 0;
    std::size_t dev_pool = 0;

    bool operator==(const Splits&) const = default;
};

/// Seeded three-way split. The test set is drawn first with the class
/// proportions of the whole input; the rest is divided into train and dev
/// pools by ratio, with each pool balanced by dropping majority-class items.
Splits split_dataset(std::span<const Annotation> annotations, const SplitSpec& spec);

void write_id_list(std::span<const std::string> ids, std::ostream& out);

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

struct PrecisionReport {
    std::size_t total_before = 0;
    std::size_t correct_before = 0;
    std::size_t total_after = 0;
    std::size_t correct_after = 0;

    std::optional<double> before() const;
    std::optional<double> after() const;
};

/// Precision over every annotated predication and over the retained ones.
/// Retained ids without an annotation are an Error.
PrecisionReport evaluate_precision(std::span<const Annotation> annotations,
                                   std::span<const std::string> retained_ids);

/// Two decimals, or "undefined" when empty.
std::string format_precision(std::optional<double> value);

struct RunSummary {
    std::string metric;
    std::vector<double> values;
    double mean = 0.0;
    double low = 0.0;
    double high = 0.0;
};

/// Two-sided 97.5% Student t quantile. Tabulated for 1..30 degrees of
/// freedom; larger values use the normal quantile 1.960.
double t_quantile_975(std::size_t degrees_of_freedom);

/// Mean with a 95% t interval. Needs at least two values.
RunSummary summarize_runs(std::span<const double> values, std::string metric = {});

}  // namespace suppkg
