#include <algorithm>
#include <ostream>

#include <fmt/format.h>

#include "suppkg/discovery.hpp"
#include "suppkg/error.hpp"
#include "suppkg/text.hpp"

namespace suppkg {

void write_review_worksheet(std::span<const Pathway> ranked, const Graph& g,
                            const PredicationStore& store, std::ostream& out,
                            std::optional<std::size_t> top_k) {
    const std::size_t rows = top_k ? std::min(*top_k, ranked.size()) : ranked.size();
    std::size_t width = 0;
    for (std::size_t i = 0; i < rows; ++i) width = std::max(width, ranked[i].edges.size());

    std::vector<std::string> header = {"rank", "pattern", "score", "node_chain", "edge_chain"};
    for (std::size_t k = 1; k <= width; ++k) {
        header.push_back(fmt::format("edge{}_pmids", k));
        header.push_back(fmt::format("edge{}_sentences", k));
    }
    header.emplace_back("reviewer_verdict");
    header.emplace_back("reviewer_notes");
    out << join(header, "\t") << '\n';

    for (std::size_t i = 0; i < rows; ++i) {
        const Pathway& p = ranked[i];
        std::vector<std::string> nodes;
        for (const auto& cui : p.node_cuis) {
            auto id = g.find_node(cui);
            if (!id) throw Error(fmt::format("worksheet: pathway {} names unknown node {}", i + 1, cui));
            nodes.push_back(cui + ":" + g.node(*id).name);
        }
        std::vector<std::string> edges;
        std::vector<std::string> cells;
        for (const auto& ref : p.edges) {
            auto id = g.find_edge(ref.subject, ref.predicate, ref.object);
            if (!id) {
                throw Error(fmt::format("worksheet: pathway {} names unknown edge {} {} {}", i + 1,
                                        ref.subject, to_string(ref.predicate), ref.object));
            }
            const Edge& e = g.edge(*id);
            edges.push_back(fmt::format("{}({})", to_string(e.predicate), e.confidence));
            std::vector<std::string> sentences;
            for (const auto& pid : e.predication_ids) {
                const Predication* pred = store.find(pid);
                if (!pred) {
                    throw Error(fmt::format("worksheet: predication '{}' is not in the store", pid));
                }
                if (std::find(sentences.begin(), sentences.end(), pred->sentence) == sentences.end()) {
                    sentences.push_back(pred->sentence);
                }
            }
            for (auto& s : sentences) s = tsv_cell(s);
            cells.push_back(join(e.pmids, ","));
            cells.push_back(join(sentences, " || "));
        }
        cells.resize(2 * width);

        std::vector<std::string> row = {std::to_string(i + 1), p.pattern, fmt::format("{}", p.score),
                                        tsv_cell(join(nodes, " -> ")), join(edges, " -> ")};
        row.insert(row.end(), cells.begin(), cells.end());
        row.emplace_back();
        row.emplace_back();
        out << join(row, "\t") << '\n';
    }
}

}  // namespace suppkg
