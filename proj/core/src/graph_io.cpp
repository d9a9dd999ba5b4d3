#include <algorithm>
#include <set>
#include <tuple>

#include <fmt/format.h>
#include <json.hpp>

#include "suppkg/error.hpp"
#include "suppkg/kgraph.hpp"

namespace suppkg {

namespace {

using json = nlohmann::ordered_json;

constexpr int kDocumentVersion = 1;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw Error(fmt::format("graph document: {}: {}", path, what));
}

const json& field(const json& obj, const std::string& path, const char* name) {
    auto it = obj.find(name);
    if (it == obj.end()) fail(path, fmt::format("missing field '{}'", name));
    return *it;
}

std::string string_field(const json& obj, const std::string& path, const char* name) {
    const json& v = field(obj, path, name);
    if (!v.is_string()) fail(path + "." + name, "expected a string");
    return v.get<std::string>();
}

std::vector<std::string> string_list(const json& obj, const std::string& path, const char* name) {
    const json& v = field(obj, path, name);
    const std::string here = path + "." + name;
    if (!v.is_array()) fail(here, "expected an array");
    std::vector<std::string> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_string()) fail(fmt::format("{}[{}]", here, i), "expected a string");
        out.push_back(v[i].get<std::string>());
    }
    return out;
}

}  // namespace

std::string serialize(const Graph& g) {
    json doc;
    doc["version"] = kDocumentVersion;
    doc["supplement_source"] = g.supplement_source();
    json& nodes = doc["nodes"] = json::array();
    for (const auto& n : g.nodes()) {
        nodes.push_back({{"cui", n.cui},
                         {"name", n.name},
                         {"semtypes", n.semtypes},
                         {"sources", n.sources},
                         {"is_supplement", n.is_supplement}});
    }
    json& edges = doc["edges"] = json::array();
    for (const auto& e : g.edges()) {
        edges.push_back({{"subject", g.node(e.subject).cui},
                         {"predicate", std::string(to_string(e.predicate))},
                         {"object", g.node(e.object).cui},
                         {"confidence", e.confidence},
                         {"support", e.support()},
                         {"pmids", e.pmids},
                         {"predication_ids", e.predication_ids}});
    }
    return doc.dump(1) + "\n";
}

Graph deserialize(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document.begin(), document.end());
    } catch (const json::parse_error& e) {
        throw Error(fmt::format("graph document: {}", e.what()));
    }
    if (!doc.is_object()) fail("$", "expected an object");
    const json& version = field(doc, "$", "version");
    if (!version.is_number_integer()) fail("$.version", "expected an integer");
    if (version.get<int>() != kDocumentVersion) {
        fail("$.version", fmt::format("unsupported version {}", version.get<int>()));
    }
    std::string source = string_field(doc, "$", "supplement_source");

    const json& jnodes = field(doc, "$", "nodes");
    if (!jnodes.is_array()) fail("$.nodes", "expected an array");
    std::vector<Node> nodes;
    nodes.reserve(jnodes.size());
    std::set<std::string> cuis;
    for (std::size_t i = 0; i < jnodes.size(); ++i) {
        const std::string path = fmt::format("nodes[{}]", i);
        const json& jn = jnodes[i];
        if (!jn.is_object()) fail(path, "expected an object");
        Node n;
        n.cui = string_field(jn, path, "cui");
        if (n.cui.empty()) fail(path + ".cui", "empty CUI");
        if (!cuis.insert(n.cui).second) fail(path + ".cui", fmt::format("duplicate CUI {}", n.cui));
        n.name = string_field(jn, path, "name");
        if (n.name.empty()) fail(path + ".name", "empty name");
        n.semtypes = string_list(jn, path, "semtypes");
        n.sources = string_list(jn, path, "sources");
        const json& sup = field(jn, path, "is_supplement");
        if (!sup.is_boolean()) fail(path + ".is_supplement", "expected a boolean");
        n.is_supplement = sup.get<bool>();
        const bool expected = !source.empty() &&
                              std::find(n.sources.begin(), n.sources.end(), source) != n.sources.end();
        if (n.is_supplement != expected) {
            fail(path + ".is_supplement", "disagrees with sources and supplement_source");
        }
        nodes.push_back(std::move(n));
    }

    const json& jedges = field(doc, "$", "edges");
    if (!jedges.is_array()) fail("$.edges", "expected an array");
    std::vector<EdgeSpec> edges;
    edges.reserve(jedges.size());
    std::set<std::tuple<std::string, Predicate, std::string>> keys;
    for (std::size_t i = 0; i < jedges.size(); ++i) {
        const std::string path = fmt::format("edges[{}]", i);
        const json& je = jedges[i];
        if (!je.is_object()) fail(path, "expected an object");
        EdgeSpec e;
        e.subject = string_field(je, path, "subject");
        if (!cuis.count(e.subject)) fail(path + ".subject", fmt::format("unknown node {}", e.subject));
        e.object = string_field(je, path, "object");
        if (!cuis.count(e.object)) fail(path + ".object", fmt::format("unknown node {}", e.object));
        std::string pred = string_field(je, path, "predicate");
        auto p = parse_predicate(pred);
        if (!p) fail(path + ".predicate", fmt::format("unknown predicate '{}'", pred));
        e.predicate = *p;
        if (!keys.emplace(e.subject, e.predicate, e.object).second) {
            fail(path, "duplicate (subject, predicate, object)");
        }
        const json& conf = field(je, path, "confidence");
        if (!conf.is_number()) fail(path + ".confidence", "expected a number");
        e.confidence = conf.get<double>();
        if (!(e.confidence >= 0.0 && e.confidence <= 1.0)) {
            fail(path + ".confidence", "outside [0, 1]");
        }
        e.pmids = string_list(je, path, "pmids");
        e.predication_ids = string_list(je, path, "predication_ids");
        const json& support = field(je, path, "support");
        if (!support.is_number_unsigned() && !support.is_number_integer()) {
            fail(path + ".support", "expected an integer");
        }
        std::set<std::string> unique_ids(e.predication_ids.begin(), e.predication_ids.end());
        if (support.get<long long>() < 1 ||
            static_cast<std::size_t>(support.get<long long>()) != unique_ids.size()) {
            fail(path + ".support", "must equal the number of predication_ids and be positive");
        }
        edges.push_back(std::move(e));
    }
    return Graph::assemble(std::move(source), std::move(nodes), std::move(edges));
}

}  // namespace suppkg
