#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "suppkg/error.hpp"
#include "suppkg/filtering.hpp"
#include "suppkg/text.hpp"

namespace suppkg {

namespace {

constexpr std::size_t kNegationWindow = 5;

std::vector<std::string> word_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

// Start positions of every occurrence of `phrase` in `tokens`.
std::vector<std::size_t> occurrences(const std::vector<std::string>& tokens,
                                     const std::vector<std::string>& phrase) {
    std::vector<std::size_t> out;
    if (phrase.empty() || phrase.size() > tokens.size()) return out;
    for (std::size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
        if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + static_cast<long>(i))) {
            out.push_back(i);
        }
    }
    return out;
}

double check_probability(double p, std::string_view id) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
        throw Error(fmt::format("probability {} for '{}' is outside [0, 1]", p, id));
    }
    return p;
}

}  // namespace

std::vector<Score> read_scores(std::istream& in) {
    TsvReader reader(in);
    if (reader.header().empty()) return {};
    const std::size_t c_id = reader.require("predication_id");
    const std::size_t c_prob = reader.require("probability");
    std::vector<Score> out;
    std::string line;
    while (reader.next(line)) {
        auto cells = split(line, '\t');
        if (cells.size() != reader.header().size()) {
            throw Error(fmt::format("scores: expected {} cells, found {}", reader.header().size(),
                                    cells.size()),
                        reader.line_number());
        }
        Score s;
        s.predication_id = std::string(trim(cells[c_id]));
        auto text = trim(cells[c_prob]);
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), s.probability);
        if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
            throw Error(fmt::format("scores: '{}' is not a number", text), reader.line_number());
        }
        if (!std::isfinite(s.probability) || s.probability < 0.0 || s.probability > 1.0) {
            throw Error(fmt::format("scores: probability {} is outside [0, 1]", text),
                        reader.line_number());
        }
        out.push_back(std::move(s));
    }
    return out;
}

void write_scores(std::span<const Score> scores, std::ostream& out) {
    out << "predication_id\tprobability\n";
    for (const auto& s : scores) out << s.predication_id << '\t' << fmt::format("{}", s.probability) << '\n';
}

ExternalScorer ExternalScorer::from(std::span<const Score> scores) {
    ExternalScorer scorer;
    scorer.probabilities.reserve(scores.size());
    for (const auto& s : scores) {
        scorer.probabilities[s.predication_id] = check_probability(s.probability, s.predication_id);
    }
    return scorer;
}

bool has_negation_near(std::string_view sentence, Predicate predicate) {
    static const std::vector<std::vector<std::string>> kNegations = {
        {"not"}, {"no"}, {"without"}, {"does", "not"}, {"failed", "to"},
    };
    const auto tokens = word_tokens(sentence);
    std::vector<std::string> cue;
    for (auto part : split(to_lower(to_string(predicate)), '_')) cue.emplace_back(part);
    const auto cue_at = occurrences(tokens, cue);

    for (const auto& neg : kNegations) {
        for (std::size_t ns : occurrences(tokens, neg)) {
            if (cue_at.empty()) return true;
            const std::size_t ne = ns + neg.size() - 1;
            for (std::size_t cs : cue_at) {
                const std::size_t ce = cs + cue.size() - 1;
                std::size_t gap = 0;
                if (ne < cs) {
                    gap = cs - ne;
                } else if (ce < ns) {
                    gap = ns - ce;
                }
                if (gap <= kNegationWindow) return true;
            }
        }
    }
    return false;
}

std::vector<Score> score_predications(std::span<const Predication> predications,
                                      const Scorer& scorer) {
    std::vector<Score> out;
    out.reserve(predications.size());
    if (const auto* ext = std::get_if<ExternalScorer>(&scorer)) {
        std::vector<std::string> missing;
        for (const auto& p : predications) {
            auto it = ext->probabilities.find(p.id);
            if (it == ext->probabilities.end()) {
                missing.push_back(p.id);
                continue;
            }
            out.push_back({p.id, check_probability(it->second, p.id)});
        }
        if (!missing.empty()) {
            constexpr std::size_t kShown = 20;
            std::vector<std::string> shown(missing.begin(),
                                           missing.begin() + static_cast<long>(std::min(kShown, missing.size())));
            std::string more = missing.size() > kShown
                                   ? fmt::format(" (and {} more)", missing.size() - kShown)
                                   : "";
            throw Error(fmt::format("score file has no probability for {} predication(s): {}{}",
                                    missing.size(), join(shown, ", "), more));
        }
    } else if (const auto* c = std::get_if<ConstantScorer>(&scorer)) {
        const double v = check_probability(c->value, "constant");
        for (const auto& p : predications) out.push_back({p.id, v});
    } else {
        const auto& neg = std::get<NegationScorer>(scorer);
        for (const auto& p : predications) {
            out.push_back({p.id, has_negation_near(p.sentence, p.predicate) ? neg.negated : neg.plain});
        }
    }
    return out;
}

}  // namespace suppkg
