#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "suppkg/discovery.hpp"
#include "suppkg/kgraph.hpp"
#include "suppkg/pattern.hpp"
#include "suppkg/predications.hpp"

namespace suppkg::testing {

namespace fs = std::filesystem;

fs::path data_path(std::string_view relative);
std::string read_text(const fs::path& path);
void write_text(const fs::path& path, std::string_view text);

class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const fs::path& path() const noexcept { return path_; }
    fs::path operator/(std::string_view name) const { return path_ / name; }

private:
    fs::path path_;
};

Predication make_predication(std::string id, std::string subject, Predicate predicate,
                             std::string object, std::string pmid = "1",
                             std::string sentence = "s");

double uniform01(std::mt19937_64& rng);
std::size_t pick(std::mt19937_64& rng, std::size_t n);

/// Random graph with semtypes drawn from the vocabulary the shipped
/// patterns mention, some supplement-sourced nodes and predicates biased
/// toward pattern predicates. Self loops are allowed.
Graph random_graph(std::mt19937_64& rng, std::size_t nodes, std::size_t edges,
                   const std::string& supplement_source = "IDISK");

/// Random predications over `concepts` CUIs, some sharing triples.
std::vector<Predication> random_predications(std::mt19937_64& rng, std::size_t count,
                                             std::size_t concepts,
                                             const std::string& supplement_source = "IDISK");

/// Independent pathway enumeration: filters the flat edge list per edge
/// slot and joins the slots left to right. Returns (node cuis, edge refs)
/// tuples rendered as strings, sorted.
std::vector<std::string> join_oracle(const Graph& g, const PatternSpec& p);

/// Exhaustive enumeration over all node tuples; only for tiny graphs.
std::vector<std::string> tuple_oracle(const Graph& g, const PatternSpec& p);

/// The same rendering applied to find_pathways results.
std::vector<std::string> render(const std::vector<Pathway>& pathways);

}  // namespace suppkg::testing
