#ifndef GTS_JSON_IO_HPP
#define GTS_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "gts/grape.hpp"
#include "gts/graph.hpp"
#include "gts/morphism.hpp"

namespace gts {

using Json = nlohmann::json;

/// {"nodes":[{"id":...,"label":...}],"edges":[{"id","src","tgt","label"}]}
/// Arrays come out sorted by id (the graph's canonical order), object keys
/// alphabetically; output is byte-stable for equal graph values.
inline Json graph_to_json(const Graph& g) {
    Json nodes = Json::array();
    for (const Node& n : g.nodes()) {
        Json jn{{"id", n.id}};
        jn["label"] = n.label ? Json(*n.label) : Json(nullptr);
        nodes.push_back(std::move(jn));
    }
    Json edges = Json::array();
    for (const Edge& e : g.edges()) {
        Json je{{"id", e.id}, {"src", e.src}, {"tgt", e.tgt}};
        je["label"] = e.label ? Json(*e.label) : Json(nullptr);
        edges.push_back(std::move(je));
    }
    return Json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

/// Validates through Graph::build, so malformed structures are rejected with
/// the usual construction errors.
inline Graph graph_from_json(const Json& j) {
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    for (const Json& jn : j.at("nodes")) {
        Node n;
        n.id = jn.at("id").get<std::string>();
        if (jn.contains("label") && !jn.at("label").is_null())
            n.label = jn.at("label").get<std::string>();
        nodes.push_back(std::move(n));
    }
    for (const Json& je : j.at("edges")) {
        Edge e;
        e.id = je.at("id").get<std::string>();
        e.src = je.at("src").get<std::string>();
        e.tgt = je.at("tgt").get<std::string>();
        if (je.contains("label") && !je.at("label").is_null())
            e.label = je.at("label").get<std::string>();
        edges.push_back(std::move(e));
    }
    return Graph::build(std::move(nodes), std::move(edges));
}

inline Json morphism_to_json(const Morphism& m) {
    Json nodes = Json::object();
    for (const auto& [p, h] : m.node_map) nodes[p] = h;
    Json edges = Json::object();
    for (const auto& [p, h] : m.edge_map) edges[p] = h;
    return Json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

inline Morphism morphism_from_json(const Json& j) {
    Morphism m;
    for (const auto& [p, h] : j.at("nodes").items()) m.node_map.emplace(p, h.get<std::string>());
    for (const auto& [p, h] : j.at("edges").items()) m.edge_map.emplace(p, h.get<std::string>());
    return m;
}

/// Array of elements; each element an array of {"id", "k"} entries.
inline Json grape_to_json(const Grape& g) {
    Json elements = Json::array();
    for (const GrapeElement& el : g.elements) {
        Json je = Json::array();
        for (const ConstrainedGraph& cg : el) {
            Json names = Json::array();
            for (const std::string& k : cg.constraints) names.push_back(k);
            je.push_back(Json{{"id", cg.graph}, {"k", std::move(names)}});
        }
        elements.push_back(std::move(je));
    }
    return elements;
}

inline Grape grape_from_json(const Json& j) {
    std::vector<GrapeElement> elements;
    for (const Json& je : j) {
        GrapeElement el;
        for (const Json& jcg : je) {
            ConstrainedGraph cg;
            cg.graph = jcg.at("id").get<GraphId>();
            for (const Json& name : jcg.at("k")) cg.constraints.insert(name.get<std::string>());
            el.insert(std::move(cg));
        }
        elements.push_back(std::move(el));
    }
    return Grape(std::move(elements));
}

} // namespace gts

#endif // GTS_JSON_IO_HPP
