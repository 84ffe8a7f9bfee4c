#ifndef GTS_RULE_HPP
#define GTS_RULE_HPP

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gts/graph.hpp"
#include "gts/hash.hpp"
#include "gts/morphism.hpp"

namespace gts {

/// Rewrite rule (L, R). The interface is the set of element ids present on
/// both sides; it is computed, never stored, and preserved by application.
class Rule {
public:
    /// Validates that shared elements agree between the sides: equal labels,
    /// and for edges equal endpoints. Throws RuleError otherwise.
    static Rule make(std::string name, Graph lhs, Graph rhs, bool iso_match = false) {
        Rule r;
        r.name_ = std::move(name);
        r.lhs_ = std::move(lhs);
        r.rhs_ = std::move(rhs);
        r.iso_match_ = iso_match;
        for (const Node& ln : r.lhs_.nodes()) {
            if (const Node* rn = r.rhs_.find_node(ln.id)) {
                if (ln.label != rn->label)
                    throw RuleError("rule " + r.name_ + ": interface node " + ln.id +
                                    " has conflicting labels");
                r.iface_nodes_.insert(ln.id);
            }
        }
        for (const Edge& le : r.lhs_.edges()) {
            if (const Edge* re = r.rhs_.find_edge(le.id)) {
                if (le.label != re->label || le.src != re->src || le.tgt != re->tgt)
                    throw RuleError("rule " + r.name_ + ": interface edge " + le.id +
                                    " differs between sides");
                r.iface_edges_.insert(le.id);
            }
        }
        return r;
    }

    const std::string& name() const { return name_; }
    const Graph& lhs() const { return lhs_; }
    const Graph& rhs() const { return rhs_; }
    bool iso_match() const { return iso_match_; }
    const std::set<std::string>& interface_nodes() const { return iface_nodes_; }
    const std::set<std::string>& interface_edges() const { return iface_edges_; }

    bool deletes_node(const std::string& id) const { return !iface_nodes_.count(id); }
    bool deletes_edge(const std::string& id) const { return !iface_edges_.count(id); }

    friend bool operator==(const Rule& a, const Rule& b) {
        return a.name_ == b.name_ && a.lhs_ == b.lhs_ && a.rhs_ == b.rhs_ &&
               a.iso_match_ == b.iso_match_;
    }

private:
    std::string name_;
    Graph lhs_;
    Graph rhs_;
    bool iso_match_ = false;
    std::set<std::string> iface_nodes_;
    std::set<std::string> iface_edges_;
};

/// One recorded rule application: input ⇝ output at a concrete match.
struct DerivationStep {
    std::string rule_name;
    Morphism match;
    GraphId input_graph_id = 0;
    GraphId output_graph_id = 0;

    friend bool operator==(const DerivationStep&, const DerivationStep&) = default;
};

namespace detail {

/// Gluing condition. Dangling: every host edge incident to the image of a
/// deleted node must itself be the image of a deleted edge. Identification:
/// the host image of a deleted element must have exactly one pre-image in L.
inline bool gluing_ok(const Rule& r, const Graph& host, const Morphism& m) {
    std::set<std::string> deleted_edge_images;
    for (const Edge& le : r.lhs().edges())
        if (r.deletes_edge(le.id)) deleted_edge_images.insert(m.edge_map.at(le.id));

    std::map<std::string, int> node_preimages;
    for (const auto& [pid, hid] : m.node_map) ++node_preimages[hid];
    std::map<std::string, int> edge_preimages;
    for (const auto& [pid, hid] : m.edge_map) ++edge_preimages[hid];

    for (const Node& ln : r.lhs().nodes()) {
        if (!r.deletes_node(ln.id)) continue;
        const std::string& hid = m.node_map.at(ln.id);
        if (node_preimages[hid] != 1) return false;
        std::size_t h = *host.node_index(hid);
        for (std::uint32_t e : host.out_edges(h))
            if (!deleted_edge_images.count(host.edges()[e].id)) return false;
        for (std::uint32_t e : host.in_edges(h))
            if (!deleted_edge_images.count(host.edges()[e].id)) return false;
    }
    for (const Edge& le : r.lhs().edges()) {
        if (!r.deletes_edge(le.id)) continue;
        if (edge_preimages[m.edge_map.at(le.id)] != 1) return false;
    }
    return true;
}

inline std::string encode_match(const Morphism& m) {
    std::string out = "n!";
    for (const auto& [p, h] : m.node_map) {
        out += p;
        out += '>';
        out += h;
        out += ';';
    }
    out += "e!";
    for (const auto& [p, h] : m.edge_map) {
        out += p;
        out += '>';
        out += h;
        out += ';';
    }
    return out;
}

} // namespace detail

/// All matches of the rule in the host: morphisms of the left-hand side
/// (injective iff the rule requires isomorphic matching) that satisfy the
/// gluing condition.
inline std::vector<Morphism> find_matches(const Rule& r, const Graph& host) {
    std::vector<Morphism> out;
    for (Morphism& m : enumerate_morphisms(r.lhs(), host, r.iso_match()))
        if (detail::gluing_ok(r, host, m)) out.push_back(std::move(m));
    return out;
}

inline bool is_valid_match(const Rule& r, const Graph& host, const Morphism& m) {
    return validate_morphism(r.lhs(), host, m, r.iso_match()) && detail::gluing_ok(r, host, m);
}

/// Applies the rule at the given match. Deletes the images of L−I, creates
/// fresh copies of R−I attached to the preserved images of I, and leaves the
/// host untouched. Ids of created elements are a stable function of
/// (host value, rule name, match, template id), so replays are bit-identical.
inline Graph apply(const Rule& r, const Graph& host, const Morphism& m) {
    if (!is_valid_match(r, host, m))
        throw InvalidMatchError("morphism is not a valid match for rule " + r.name());

    std::set<std::string> del_nodes, del_edges;
    for (const Node& ln : r.lhs().nodes())
        if (r.deletes_node(ln.id)) del_nodes.insert(m.node_map.at(ln.id));
    for (const Edge& le : r.lhs().edges())
        if (r.deletes_edge(le.id)) del_edges.insert(m.edge_map.at(le.id));

    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::set<std::string> node_ids, edge_ids;
    for (const Node& hn : host.nodes())
        if (!del_nodes.count(hn.id)) {
            nodes.push_back(hn);
            node_ids.insert(hn.id);
        }
    for (const Edge& he : host.edges())
        if (!del_edges.count(he.id)) {
            edges.push_back(he);
            edge_ids.insert(he.id);
        }

    const std::string match_key = detail::encode_match(m);
    auto fresh_id = [&](char kind, const std::string& template_id,
                        const std::set<std::string>& taken) {
        for (std::uint64_t salt = 0;; ++salt) {
            Digest128 acc;
            acc.absorb(host.value_hash()[0]);
            acc.absorb(host.value_hash()[1]);
            acc.absorb(r.name());
            acc.absorb(match_key);
            acc.absorb(static_cast<std::uint64_t>(kind));
            acc.absorb(template_id);
            acc.absorb(salt);
            std::string id;
            id += kind;
            id += ':';
            id += to_hex(acc.finish()[0]);
            if (!taken.count(id)) return id;
        }
    };

    // rhs node id -> id in the result graph
    std::map<std::string, std::string> placed;
    for (const Node& rn : r.rhs().nodes()) {
        if (r.interface_nodes().count(rn.id)) {
            placed[rn.id] = m.node_map.at(rn.id);
        } else {
            std::string id = fresh_id('n', rn.id, node_ids);
            node_ids.insert(id);
            nodes.push_back(Node{id, rn.label});
            placed[rn.id] = id;
        }
    }
    for (const Edge& re : r.rhs().edges()) {
        if (r.interface_edges().count(re.id)) continue;
        std::string id = fresh_id('e', re.id, edge_ids);
        edge_ids.insert(id);
        edges.push_back(Edge{id, placed.at(re.src), placed.at(re.tgt), re.label});
    }

    return Graph::build(std::move(nodes), std::move(edges));
}

/// All direct derivations of `host` under `r` whose results pass `keep`.
/// Deterministic: follows the canonical match order.
template <typename KeepFn>
std::vector<std::pair<Morphism, Graph>> derive_all(const Rule& r, const Graph& host, KeepFn keep) {
    std::vector<std::pair<Morphism, Graph>> out;
    for (Morphism& m : find_matches(r, host)) {
        Graph produced = apply(r, host, m);
        if (keep(produced)) out.emplace_back(std::move(m), std::move(produced));
    }
    return out;
}

inline std::vector<std::pair<Morphism, Graph>> derive_all(const Rule& r, const Graph& host) {
    return derive_all(r, host, [](const Graph&) { return true; });
}

} // namespace gts

#endif // GTS_RULE_HPP
