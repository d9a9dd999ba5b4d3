#include "suppkg/filtering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "suppkg/error.hpp"
#include "suppkg/text.hpp"

namespace suppkg {

namespace {

// Unbiased draw in [0, n) by rejection; std::uniform_int_distribution is
// implementation-defined, which would make splits differ across platforms.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    std::uint64_t r = 0;
    do {
        r = rng();
    } while (r < threshold);
    return r % n;
}

template <typename T>
void shuffle(std::vector<T>& items, std::mt19937_64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = bounded(rng, i);
        std::swap(items[i - 1], items[j]);
    }
}

std::size_t rounded(double x) { return static_cast<std::size_t>(std::llround(x)); }

}  // namespace

// ---------------------------------------------------------------------------
// Threshold filter
// ---------------------------------------------------------------------------

double FilterStats::retained_percent() const {
    if (input == 0) return 0.0;
    return 100.0 * static_cast<double>(retained) / static_cast<double>(input);
}

std::string FilterStats::text() const {
    return fmt::format("{} ({}%)", format_count(static_cast<std::int64_t>(retained)),
                       format_fixed2(retained_percent()));
}

std::vector<double> align_scores(std::span<const Predication> predications,
                                 std::span<const Score> scores) {
    std::vector<double> out(predications.size());
    bool aligned = scores.size() == predications.size();
    for (std::size_t i = 0; aligned && i < predications.size(); ++i) {
        if (scores[i].predication_id != predications[i].id) {
            aligned = false;
        } else {
            out[i] = scores[i].probability;
        }
    }
    if (aligned) return out;

    std::unordered_map<std::string_view, double> by_id;
    by_id.reserve(scores.size());
    for (const auto& s : scores) by_id[s.predication_id] = s.probability;
    for (std::size_t i = 0; i < predications.size(); ++i) {
        auto it = by_id.find(predications[i].id);
        if (it == by_id.end()) {
            throw Error(fmt::format("predication '{}' has no score", predications[i].id));
        }
        out[i] = it->second;
    }
    return out;
}

FilterResult filter_by_threshold(std::span<const Predication> predications,
                                 std::span<const Score> scores, double threshold) {
    const auto probs = align_scores(predications, scores);
    FilterResult r;
    r.stats.input = predications.size();
    for (std::size_t i = 0; i < probs.size(); ++i) {
        (probs[i] >= threshold ? r.retained : r.removed).push_back(i);
    }
    r.stats.retained = r.retained.size();
    return r;
}

// ---------------------------------------------------------------------------
// Splits
// ---------------------------------------------------------------------------

void SplitSpec::validate() const {
    if (!(train > 0.0) || !(dev > 0.0) || !(test > 0.0)) {
        throw Error("split ratios must be positive");
    }
    if (std::abs(train + dev + test - 1.0) > 1e-9) {
        throw Error(fmt::format("split ratios sum to {}, not 1", train + dev + test));
    }
}

Splits split_dataset(std::span<const Annotation> annotations, const SplitSpec& spec) {
    spec.validate();
    std::vector<std::string> pos;
    std::vector<std::string> neg;
    std::unordered_set<std::string_view> seen;
    for (const auto& a : annotations) {
        if (!seen.insert(a.predication_id).second) {
            throw Error(fmt::format("predication '{}' is annotated more than once", a.predication_id));
        }
        (a.label == Label::Correct ? pos : neg).push_back(a.predication_id);
    }
    if (pos.empty()) throw Error("split: no items labelled correct");
    if (neg.empty()) throw Error("split: no items labelled incorrect");

    std::mt19937_64 rng(spec.seed);
    shuffle(pos, rng);
    shuffle(neg, rng);

    const std::size_t n = pos.size() + neg.size();
    const std::size_t test_n = std::min(n, rounded(static_cast<double>(n) * spec.test));
    std::size_t test_pos = 0;
    if (spec.test_matches_source_distribution) {
        test_pos = rounded(static_cast<double>(test_n) * static_cast<double>(pos.size()) /
                           static_cast<double>(n));
    } else {
        // Class counts of a uniform draw without replacement.
        std::size_t p_left = pos.size();
        std::size_t left = n;
        for (std::size_t i = 0; i < test_n; ++i, --left) {
            if (bounded(rng, left) < p_left) {
                ++test_pos;
                --p_left;
            }
        }
    }
    test_pos = std::min({test_pos, pos.size(), test_n});
    std::size_t test_neg = std::min(test_n - test_pos, neg.size());
    test_pos = test_n - test_neg;

    Splits out;
    auto take = [](std::vector<std::string>& from, std::size_t k, std::vector<std::string>& to) {
        to.insert(to.end(), from.begin(), from.begin() + static_cast<long>(k));
        from.erase(from.begin(), from.begin() + static_cast<long>(k));
    };
    take(pos, test_pos, out.test);
    take(neg, test_neg, out.test);

    const std::size_t m = pos.size() + neg.size();
    out.train_pool = std::min(m, rounded(static_cast<double>(n) * spec.train));
    out.dev_pool = m - out.train_pool;

    std::size_t train_pos = 0;
    if (m > 0) {
        train_pos = rounded(static_cast<double>(out.train_pool) * static_cast<double>(pos.size()) /
                            static_cast<double>(m));
    }
    train_pos = std::min({train_pos, pos.size(), out.train_pool});
    std::size_t train_neg = std::min(out.train_pool - train_pos, neg.size());
    train_pos = out.train_pool - train_neg;

    auto fill = [&](std::size_t k_pos, std::size_t k_neg, std::vector<std::string>& split) {
        std::vector<std::string> p;
        std::vector<std::string> q;
        take(pos, k_pos, p);
        take(neg, k_neg, q);
        if (spec.balance_train_dev) {
            std::vector<std::string>& major = p.size() > q.size() ? p : q;
            const std::size_t cap = std::min(p.size(), q.size()) + 1;
            if (major.size() > cap) {
                out.discarded.insert(out.discarded.end(), major.begin() + static_cast<long>(cap),
                                     major.end());
                major.resize(cap);
            }
        }
        split.insert(split.end(), p.begin(), p.end());
        split.insert(split.end(), q.begin(), q.end());
    };
    fill(train_pos, train_neg, out.train);
    fill(pos.size(), neg.size(), out.dev);

    std::sort(out.train.begin(), out.train.end());
    std::sort(out.dev.begin(), out.dev.end());
    std::sort(out.test.begin(), out.test.end());
    std::sort(out.discarded.begin(), out.discarded.end());
    return out;
}

void write_id_list(std::span<const std::string> ids, std::ostream& out) {
    out << "predication_id\n";
    for (const auto& id : ids) out << id << '\n';
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

std::optional<double> PrecisionReport::before() const {
    if (total_before == 0) return std::nullopt;
    return static_cast<double>(correct_before) / static_cast<double>(total_before);
}

std::optional<double> PrecisionReport::after() const {
    if (total_after == 0) return std::nullopt;
    return static_cast<double>(correct_after) / static_cast<double>(total_after);
}

PrecisionReport evaluate_precision(std::span<const Annotation> annotations,
                                   std::span<const std::string> retained_ids) {
    PrecisionReport r;
    std::unordered_map<std::string_view, Label> labels;
    labels.reserve(annotations.size());
    for (const auto& a : annotations) {
        if (!labels.emplace(a.predication_id, a.label).second) {
            throw Error(fmt::format("predication '{}' is annotated more than once", a.predication_id));
        }
        ++r.total_before;
        if (a.label == Label::Correct) ++r.correct_before;
    }
    std::unordered_set<std::string_view> counted;
    for (const auto& id : retained_ids) {
        if (!counted.insert(id).second) continue;
        auto it = labels.find(id);
        if (it == labels.end()) {
            throw Error(fmt::format("retained predication '{}' has no annotation", id));
        }
        ++r.total_after;
        if (it->second == Label::Correct) ++r.correct_after;
    }
    return r;
}

std::string format_precision(std::optional<double> value) {
    return value ? format_fixed2(*value) : "undefined";
}

double t_quantile_975(std::size_t degrees_of_freedom) {
    static constexpr std::array<double, 30> kTable = {
        12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
        2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
        2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042,
    };
    if (degrees_of_freedom == 0) throw Error("t quantile needs at least one degree of freedom");
    if (degrees_of_freedom > kTable.size()) return 1.960;
    return kTable[degrees_of_freedom - 1];
}

RunSummary summarize_runs(std::span<const double> values, std::string metric) {
    if (values.size() < 2) {
        throw Error(fmt::format("run summary needs at least 2 values, got {}", values.size()));
    }
    RunSummary s;
    s.metric = std::move(metric);
    s.values.assign(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    const double half = t_quantile_975(values.size() - 1) * sd / std::sqrt(n);
    s.low = s.mean - half;
    s.high = s.mean + half;
    return s;
}

}  // namespace suppkg
