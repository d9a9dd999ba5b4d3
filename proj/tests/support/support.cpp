#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace suppkg::testing {

fs::path data_path(std::string_view relative) {
    return fs::path(SUPPKG_TEST_DATA) / relative;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const fs::path& path, std::string_view text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
}

TempDir::TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    const auto base = fs::temp_directory_path();
    for (;;) {
        path_ = base / ("suppkg-test-" + std::to_string(rng()));
        if (fs::create_directory(path_)) break;
    }
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

Predication make_predication(std::string id, std::string subject, Predicate predicate,
                             std::string object, std::string pmid, std::string sentence) {
    Predication p;
    p.id = std::move(id);
    p.pmid = std::move(pmid);
    p.sentence = std::move(sentence);
    p.subject_name = "name of " + subject;
    p.subject_cui = std::move(subject);
    p.predicate = predicate;
    p.object_name = "name of " + object;
    p.object_cui = std::move(object);
    p.subject_semtypes = {"phsu"};
    p.object_semtypes = {"gngm"};
    p.subject_sources = {"MSH"};
    p.object_sources = {"MSH"};
    return p;
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t pick(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
}

namespace {

const std::vector<std::string> kSemtypes = {"gngm", "aapp", "phsu", "celf", "moft",
                                            "biof", "orch", "dsyn"};
const std::vector<Predicate> kPredicates = {
    Predicate::INHIBITS,       Predicate::STIMULATES, Predicate::AUGMENTS,
    Predicate::DISRUPTS,       Predicate::PRODUCES,   Predicate::INTERACTS_WITH,
    Predicate::TREATS,         Predicate::CAUSES,     Predicate::COEXISTS_WITH,
};

std::string cui_of(std::size_t i) {
    std::string s = std::to_string(i);
    return "C" + std::string(7 - s.size(), '0') + s;
}

}  // namespace

Graph random_graph(std::mt19937_64& rng, std::size_t n, std::size_t m,
                   const std::string& supplement_source) {
    std::vector<Node> nodes;
    std::vector<std::string> cuis;
    for (std::size_t i = 0; i < n; ++i) {
        Node node;
        node.cui = cui_of(1 + pick(rng, 9000000));
        node.name = "concept " + node.cui;
        std::set<std::string> types;
        const std::size_t k = 1 + pick(rng, 2);
        while (types.size() < k) types.insert(kSemtypes[pick(rng, kSemtypes.size())]);
        node.semtypes.assign(types.begin(), types.end());
        node.sources = {"MSH"};
        if (uniform01(rng) < 0.3) node.sources.insert(node.sources.begin(), supplement_source);
        std::sort(node.sources.begin(), node.sources.end());
        if (std::find(cuis.begin(), cuis.end(), node.cui) != cuis.end()) continue;
        cuis.push_back(node.cui);
        nodes.push_back(std::move(node));
    }
    std::vector<EdgeSpec> edges;
    std::set<std::tuple<std::string, Predicate, std::string>> seen;
    for (std::size_t i = 0; i < m && !cuis.empty(); ++i) {
        EdgeSpec e;
        e.subject = cuis[pick(rng, cuis.size())];
        e.object = cuis[pick(rng, cuis.size())];
        e.predicate = kPredicates[pick(rng, kPredicates.size())];
        if (!seen.emplace(e.subject, e.predicate, e.object).second) continue;
        e.confidence = uniform01(rng);
        e.pmids = {std::to_string(pick(rng, 100000))};
        e.predication_ids = {"e" + std::to_string(i)};
        edges.push_back(std::move(e));
    }
    return Graph::assemble(supplement_source, std::move(nodes), std::move(edges));
}

std::vector<Predication> random_predications(std::mt19937_64& rng, std::size_t count,
                                             std::size_t concepts,
                                             const std::string& supplement_source) {
    std::vector<Predication> out;
    out.reserve(count);
    const auto& all = all_predicates();
    for (std::size_t i = 0; i < count; ++i) {
        auto p = make_predication("p" + std::to_string(i), cui_of(1 + pick(rng, concepts)),
                                  all[pick(rng, 4)], cui_of(1 + pick(rng, concepts)),
                                  std::to_string(pick(rng, 50)), "sentence " + std::to_string(i));
        p.subject_name = pick(rng, 3) == 0 ? "" : "name " + p.subject_cui + "/" + std::to_string(pick(rng, 2));
        p.subject_semtypes = {kSemtypes[pick(rng, kSemtypes.size())]};
        p.object_semtypes = {kSemtypes[pick(rng, kSemtypes.size())], kSemtypes[pick(rng, kSemtypes.size())]};
        std::sort(p.object_semtypes.begin(), p.object_semtypes.end());
        p.object_semtypes.erase(std::unique(p.object_semtypes.begin(), p.object_semtypes.end()),
                                p.object_semtypes.end());
        if (pick(rng, 4) == 0) p.subject_sources = {supplement_source};
        out.push_back(std::move(p));
    }
    return out;
}

namespace {

bool oracle_node_ok(const NodeConstraint& c, const Node& n, const std::string& source) {
    if (c.semtypes) {
        bool any = false;
        for (const auto& t : n.semtypes) any = any || c.semtypes->count(t) > 0;
        if (!any) return false;
    }
    if (c.require_supplement) {
        const bool supp = std::find(n.sources.begin(), n.sources.end(), source) != n.sources.end();
        if (supp != *c.require_supplement) return false;
    }
    if (c.cui_allow && !c.cui_allow->count(n.cui)) return false;
    if (c.cui_deny && c.cui_deny->count(n.cui)) return false;
    return true;
}

struct Partial {
    std::vector<std::string> nodes;
    std::vector<std::string> edges;
};

std::string render_one(const std::vector<std::string>& nodes, const std::vector<std::string>& edges) {
    std::string s;
    for (const auto& n : nodes) s += n + ",";
    s += "|";
    for (const auto& e : edges) s += e + ";";
    return s;
}

std::string edge_text(const std::string& s, Predicate p, const std::string& o) {
    return s + ">" + std::string(to_string(p)) + ">" + o;
}

}  // namespace

std::vector<std::string> join_oracle(const Graph& g, const PatternSpec& p) {
    const std::string& source = g.supplement_source();
    std::map<std::string, const Node*> by_cui;
    for (const auto& n : g.nodes()) by_cui[n.cui] = &n;

    // Per slot, the (from, to, edge text) triples in path orientation.
    struct Hop {
        std::string from, to, text;
    };
    std::vector<std::vector<Hop>> slots(p.edges.size());
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
        const auto& ec = p.edges[i];
        for (const auto& e : g.edges()) {
            if (!ec.predicates.count(e.predicate)) continue;
            const std::string& s = g.node(e.subject).cui;
            const std::string& o = g.node(e.object).cui;
            const bool fwd = ec.direction == Direction::Forward;
            const std::string& from = fwd ? s : o;
            const std::string& to = fwd ? o : s;
            if (!oracle_node_ok(p.nodes[i], *by_cui[from], source)) continue;
            if (!oracle_node_ok(p.nodes[i + 1], *by_cui[to], source)) continue;
            slots[i].push_back({from, to, edge_text(s, e.predicate, o)});
        }
    }
    std::vector<Partial> partials;
    if (!slots.empty()) {
        for (const auto& h : slots[0]) {
            if (h.from == h.to) continue;
            partials.push_back({{h.from, h.to}, {h.text}});
        }
    }
    for (std::size_t i = 1; i < slots.size(); ++i) {
        std::multimap<std::string, const Hop*> by_from;
        for (const auto& h : slots[i]) by_from.emplace(h.from, &h);
        std::vector<Partial> next;
        for (const auto& part : partials) {
            auto [lo, hi] = by_from.equal_range(part.nodes.back());
            for (auto it = lo; it != hi; ++it) {
                const Hop& h = *it->second;
                if (std::find(part.nodes.begin(), part.nodes.end(), h.to) != part.nodes.end()) continue;
                Partial q = part;
                q.nodes.push_back(h.to);
                q.edges.push_back(h.text);
                next.push_back(std::move(q));
            }
        }
        partials = std::move(next);
    }
    std::vector<std::string> out;
    for (const auto& part : partials) out.push_back(render_one(part.nodes, part.edges));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> tuple_oracle(const Graph& g, const PatternSpec& p) {
    const std::size_t n = g.nodes().size();
    const std::size_t k = p.nodes.size();
    std::vector<std::string> out;
    if (n == 0) return out;
    std::vector<std::size_t> t(k, 0);
    for (;;) {
        bool ok = true;
        for (std::size_t i = 0; i < k && ok; ++i) {
            for (std::size_t j = 0; j < i && ok; ++j) ok = t[i] != t[j];
            ok = ok && oracle_node_ok(p.nodes[i], g.nodes()[t[i]], g.supplement_source());
        }
        if (ok) {
            // Every combination of stored edges realising the slots.
            std::vector<std::vector<std::string>> options(k - 1);
            for (std::size_t i = 0; i + 1 < k; ++i) {
                const auto& ec = p.edges[i];
                const auto& a = g.nodes()[t[i]].cui;
                const auto& b = g.nodes()[t[i + 1]].cui;
                const std::string& s = ec.direction == Direction::Forward ? a : b;
                const std::string& o = ec.direction == Direction::Forward ? b : a;
                for (const auto& e : g.edges()) {
                    if (g.node(e.subject).cui == s && g.node(e.object).cui == o &&
                        ec.predicates.count(e.predicate)) {
                        options[i].push_back(edge_text(s, e.predicate, o));
                    }
                }
            }
            std::vector<std::string> nodes;
            for (auto idx : t) nodes.push_back(g.nodes()[idx].cui);
            std::vector<std::vector<std::string>> combos = {{}};
            for (const auto& opt : options) {
                std::vector<std::vector<std::string>> grown;
                for (const auto& c : combos) {
                    for (const auto& e : opt) {
                        auto d = c;
                        d.push_back(e);
                        grown.push_back(std::move(d));
                    }
                }
                combos = std::move(grown);
            }
            for (const auto& c : combos) out.push_back(render_one(nodes, c));
        }
        std::size_t i = 0;
        while (i < k && ++t[i] == n) t[i++] = 0;
        if (i == k) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> render(const std::vector<Pathway>& pathways) {
    std::vector<std::string> out;
    for (const auto& pw : pathways) {
        std::vector<std::string> edges;
        for (const auto& e : pw.edges) edges.push_back(edge_text(e.subject, e.predicate, e.object));
        out.push_back(render_one(pw.node_cuis, edges));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace suppkg::testing
