#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "suppkg/discovery.hpp"
#include "suppkg/filtering.hpp"
#include "suppkg/kgraph.hpp"
#include "suppkg/predications.hpp"
#include "suppkg/terminology.hpp"
#include "suppkg/text.hpp"

namespace {

using namespace suppkg;

constexpr const char* kSemtypes[] = {"phsu", "gngm", "aapp", "celf", "biof", "dsyn", "orch"};

std::string cui(std::size_t i) { return terminology::format_cui(static_cast<long>(i + 1)); }

struct Corpus {
    std::vector<Predication> predications;
    std::vector<Score> scores;
};

Corpus corpus(std::size_t n, std::size_t concepts) {
    std::mt19937_64 rng(n);
    std::uniform_int_distribution<std::size_t> c(0, concepts - 1);
    std::uniform_int_distribution<int> pred(0, static_cast<int>(kPredicateCount) - 1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Corpus out;
    out.predications.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Predication p;
        p.id = std::to_string(i);
        p.pmid = std::to_string(i / 4);
        p.sentence = "sentence " + p.pmid;
        const std::size_t s = c(rng);
        const std::size_t o = c(rng);
        p.subject_cui = cui(s);
        p.subject_name = "concept " + p.subject_cui;
        p.subject_semtypes = {kSemtypes[s % 7]};
        p.subject_sources = s % 10 == 0 ? std::vector<std::string>{"IDISK", "MSH"} : std::vector<std::string>{"MSH"};
        p.predicate = static_cast<Predicate>(pred(rng));
        p.object_cui = cui(o);
        p.object_name = "concept " + p.object_cui;
        p.object_semtypes = {kSemtypes[o % 7]};
        p.object_sources = {"MSH"};
        out.scores.push_back({p.id, u(rng)});
        out.predications.push_back(std::move(p));
    }
    return out;
}

void BM_ParsePredications(benchmark::State& state) {
    auto c = corpus(static_cast<std::size_t>(state.range(0)), 5000);
    std::ostringstream out;
    write_predications(c.predications, out);
    const std::string text = out.str();
    for (auto _ : state) {
        std::istringstream in(text);
        benchmark::DoNotOptimize(parse_predications(in));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParsePredications)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_FilterByThreshold(benchmark::State& state) {
    auto c = corpus(static_cast<std::size_t>(state.range(0)), 5000);
    for (auto _ : state) benchmark::DoNotOptimize(filter_by_threshold(c.predications, c.scores, 0.5));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FilterByThreshold)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_BuildGraph(benchmark::State& state) {
    auto c = corpus(static_cast<std::size_t>(state.range(0)), 20000);
    for (auto _ : state) benchmark::DoNotOptimize(build_graph(c.predications, c.scores, "IDISK"));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildGraph)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_FindPathways(benchmark::State& state) {
    auto c = corpus(static_cast<std::size_t>(state.range(0)), 400);
    Graph g = build_graph(c.predications, c.scores, "IDISK");
    const auto pattern = *shipped_pattern(state.range(1) == 0 ? "DsGD" : "DsGFGD");
    std::size_t found = 0;
    for (auto _ : state) {
        auto p = find_pathways(g, pattern);
        found = p.size();
        benchmark::DoNotOptimize(p);
    }
    state.counters["pathways"] = static_cast<double>(found);
}
BENCHMARK(BM_FindPathways)->Args({50000, 0})->Args({50000, 1})->Unit(benchmark::kMillisecond);

void BM_SerializeGraph(benchmark::State& state) {
    auto c = corpus(static_cast<std::size_t>(state.range(0)), 5000);
    Graph g = build_graph(c.predications, c.scores, "IDISK");
    for (auto _ : state) benchmark::DoNotOptimize(deserialize(serialize(g)));
}
BENCHMARK(BM_SerializeGraph)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
