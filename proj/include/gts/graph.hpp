#ifndef GTS_GRAPH_HPP
#define GTS_GRAPH_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gts/errors.hpp"
#include "gts/hash.hpp"

namespace gts {

/// Id a graph carries inside a GraphStore.
using GraphId = std::uint64_t;

struct Node {
    std::string id;
    std::optional<std::string> label;

    friend bool operator==(const Node&, const Node&) = default;
    friend auto operator<=>(const Node&, const Node&) = default;
};

struct Edge {
    std::string id;
    std::string src;
    std::string tgt;
    std::optional<std::string> label;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Isomorphism-invariant hash. Equal for isomorphic graphs, collisions
/// between non-isomorphic graphs are possible and must be resolved by an
/// exact check.
struct Certificate {
    std::array<std::uint64_t, 2> bytes{};
    std::uint32_t refinement_rounds = 0;

    friend bool operator==(const Certificate&, const Certificate&) = default;
    friend auto operator<=>(const Certificate&, const Certificate&) = default;
};

/// Immutable finite labeled multigraph. Nodes and edges are kept sorted by
/// id; copies share storage. Safe to share across threads.
class Graph {
public:
    Graph() : data_(empty_data()) {}

    /// Validates and canonicalizes the element lists.
    /// Throws GraphBuildError on duplicate ids or edges naming missing nodes.
    static Graph build(std::vector<Node> nodes, std::vector<Edge> edges) {
        auto data = std::make_shared<Data>();
        data->nodes = std::move(nodes);
        data->edges = std::move(edges);
        std::sort(data->nodes.begin(), data->nodes.end(),
                  [](const Node& a, const Node& b) { return a.id < b.id; });
        std::sort(data->edges.begin(), data->edges.end(),
                  [](const Edge& a, const Edge& b) { return a.id < b.id; });
        for (std::size_t i = 1; i < data->nodes.size(); ++i) {
            if (data->nodes[i].id == data->nodes[i - 1].id)
                throw GraphBuildError(GraphBuildError::Kind::DuplicateId,
                                      "duplicate node id: " + data->nodes[i].id);
        }
        for (std::size_t i = 1; i < data->edges.size(); ++i) {
            if (data->edges[i].id == data->edges[i - 1].id)
                throw GraphBuildError(GraphBuildError::Kind::DuplicateId,
                                      "duplicate edge id: " + data->edges[i].id);
        }
        data->out_adj.resize(data->nodes.size());
        data->in_adj.resize(data->nodes.size());
        for (std::size_t e = 0; e < data->edges.size(); ++e) {
            const Edge& edge = data->edges[e];
            auto s = data->node_index(edge.src);
            auto t = data->node_index(edge.tgt);
            if (!s)
                throw GraphBuildError(GraphBuildError::Kind::DanglingEdgeRef,
                                      "edge " + edge.id + " names missing source node " + edge.src);
            if (!t)
                throw GraphBuildError(GraphBuildError::Kind::DanglingEdgeRef,
                                      "edge " + edge.id + " names missing target node " + edge.tgt);
            data->out_adj[*s].push_back(static_cast<std::uint32_t>(e));
            data->in_adj[*t].push_back(static_cast<std::uint32_t>(e));
        }
        data->value_hash = compute_value_hash(*data);
        return Graph(std::move(data));
    }

    std::span<const Node> nodes() const { return data_->nodes; }
    std::span<const Edge> edges() const { return data_->edges; }
    std::size_t node_count() const { return data_->nodes.size(); }
    std::size_t edge_count() const { return data_->edges.size(); }
    bool empty() const { return data_->nodes.empty() && data_->edges.empty(); }

    const Node* find_node(std::string_view id) const {
        auto i = data_->node_index(id);
        return i ? &data_->nodes[*i] : nullptr;
    }

    const Edge* find_edge(std::string_view id) const {
        auto i = data_->edge_index(id);
        return i ? &data_->edges[*i] : nullptr;
    }

    std::optional<std::size_t> node_index(std::string_view id) const { return data_->node_index(id); }
    std::optional<std::size_t> edge_index(std::string_view id) const { return data_->edge_index(id); }

    /// Indices into edges() of edges leaving / entering the given node.
    std::span<const std::uint32_t> out_edges(std::size_t node_idx) const { return data_->out_adj[node_idx]; }
    std::span<const std::uint32_t> in_edges(std::size_t node_idx) const { return data_->in_adj[node_idx]; }

    std::size_t out_degree(std::size_t node_idx) const { return data_->out_adj[node_idx].size(); }
    std::size_t in_degree(std::size_t node_idx) const { return data_->in_adj[node_idx].size(); }

    /// Content hash over the canonical (id-sorted) element lists. Sensitive
    /// to ids and labels; bit-identical graphs hash equal.
    const std::array<std::uint64_t, 2>& value_hash() const { return data_->value_hash; }

    /// Computed on first use, cached for the lifetime of the graph value.
    const Certificate& certificate() const {
        std::call_once(data_->cert_once, [this] { data_->cert = compute_certificate(*data_); });
        return data_->cert;
    }

    friend bool operator==(const Graph& a, const Graph& b) {
        if (a.data_ == b.data_) return true;
        return a.data_->nodes == b.data_->nodes && a.data_->edges == b.data_->edges;
    }

    /// Lexicographic order over the canonical element lists; total on graph
    /// values, used as the fallback tie-break for uninterned graphs.
    friend std::strong_ordering structural_compare(const Graph& a, const Graph& b) {
        if (a.data_ == b.data_) return std::strong_ordering::equal;
        if (auto c = a.data_->nodes <=> b.data_->nodes; c != 0) return c;
        return a.data_->edges <=> b.data_->edges;
    }

private:
    struct Data {
        std::vector<Node> nodes;
        std::vector<Edge> edges;
        std::vector<std::vector<std::uint32_t>> out_adj;
        std::vector<std::vector<std::uint32_t>> in_adj;
        std::array<std::uint64_t, 2> value_hash{};
        mutable std::once_flag cert_once;
        mutable Certificate cert;

        std::optional<std::size_t> node_index(std::string_view id) const {
            auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                                       [](const Node& n, std::string_view v) { return n.id < v; });
            if (it == nodes.end() || it->id != id) return std::nullopt;
            return static_cast<std::size_t>(it - nodes.begin());
        }

        std::optional<std::size_t> edge_index(std::string_view id) const {
            auto it = std::lower_bound(edges.begin(), edges.end(), id,
                                       [](const Edge& e, std::string_view v) { return e.id < v; });
            if (it == edges.end() || it->id != id) return std::nullopt;
            return static_cast<std::size_t>(it - edges.begin());
        }
    };

    explicit Graph(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

    static const std::shared_ptr<const Data>& empty_data() {
        static const std::shared_ptr<const Data> instance = [] {
            auto d = std::make_shared<Data>();
            d->value_hash = compute_value_hash(*d);
            return d;
        }();
        return instance;
    }

    static std::uint64_t label_key(const std::optional<std::string>& label) {
        return label ? fnv1a(*label) : 0x517cc1b727220a95ull;
    }

    static std::array<std::uint64_t, 2> compute_value_hash(const Data& d) {
        Digest128 acc;
        acc.absorb(d.nodes.size());
        for (const Node& n : d.nodes) {
            acc.absorb(n.id);
            acc.absorb(label_key(n.label));
        }
        acc.absorb(d.edges.size());
        for (const Edge& e : d.edges) {
            acc.absorb(e.id);
            acc.absorb(e.src);
            acc.absorb(e.tgt);
            acc.absorb(label_key(e.label));
        }
        return acc.finish();
    }

    /// Iterated neighborhood color refinement. Initial color is the node's
    /// label plus degree signature; each round folds in the sorted multisets
    /// of (edge label, neighbor color) over outgoing and incoming edges.
    /// Node ids never enter the computation, so renaming cannot change the
    /// result. Rounds: max(3, 1 + floor(log2(|N|+1))).
    static Certificate compute_certificate(const Data& d) {
        const std::size_t n = d.nodes.size();
        const std::uint32_t rounds =
            std::max<std::uint32_t>(3, std::bit_width(static_cast<std::uint64_t>(n) + 1));

        std::vector<std::uint64_t> color(n);
        for (std::size_t v = 0; v < n; ++v) {
            Digest128 init;
            init.absorb(label_key(d.nodes[v].label));
            init.absorb(d.out_adj[v].size());
            init.absorb(d.in_adj[v].size());
            color[v] = init.finish()[0];
        }

        std::vector<std::uint64_t> next(n);
        std::vector<std::uint64_t> sig;
        for (std::uint32_t r = 0; r < rounds; ++r) {
            for (std::size_t v = 0; v < n; ++v) {
                Digest128 acc;
                acc.absorb(color[v]);
                sig.clear();
                for (std::uint32_t e : d.out_adj[v]) {
                    auto t = *d.node_index(d.edges[e].tgt);
                    sig.push_back(mix64(label_key(d.edges[e].label) ^ mix64(color[t])));
                }
                std::sort(sig.begin(), sig.end());
                acc.absorb(sig.size());
                for (std::uint64_t s : sig) acc.absorb(s);
                sig.clear();
                for (std::uint32_t e : d.in_adj[v]) {
                    auto s = *d.node_index(d.edges[e].src);
                    sig.push_back(mix64(label_key(d.edges[e].label) ^ mix64(color[s])));
                }
                std::sort(sig.begin(), sig.end());
                acc.absorb(sig.size());
                for (std::uint64_t s : sig) acc.absorb(s);
                next[v] = acc.finish()[1];
            }
            color.swap(next);
        }

        std::vector<std::uint64_t> edge_sig;
        edge_sig.reserve(d.edges.size());
        for (const Edge& e : d.edges) {
            auto s = *d.node_index(e.src);
            auto t = *d.node_index(e.tgt);
            Digest128 acc;
            acc.absorb(label_key(e.label));
            acc.absorb(color[s]);
            acc.absorb(color[t]);
            edge_sig.push_back(acc.finish()[0]);
        }
        std::sort(edge_sig.begin(), edge_sig.end());
        std::sort(color.begin(), color.end());

        Digest128 out;
        out.absorb(d.nodes.size());
        out.absorb(d.edges.size());
        for (std::uint64_t c : color) out.absorb(c);
        for (std::uint64_t s : edge_sig) out.absorb(s);
        return Certificate{out.finish(), rounds};
    }

    std::shared_ptr<const Data> data_;
};

/// Convenience builders used pervasively in tests and fixtures.
inline Node node(std::string id) { return Node{std::move(id), std::nullopt}; }
inline Node node(std::string id, std::string label) { return Node{std::move(id), std::move(label)}; }
inline Edge edge(std::string id, std::string src, std::string tgt) {
    return Edge{std::move(id), std::move(src), std::move(tgt), std::nullopt};
}
inline Edge edge(std::string id, std::string src, std::string tgt, std::string label) {
    return Edge{std::move(id), std::move(src), std::move(tgt), std::move(label)};
}

} // namespace gts

#endif // GTS_GRAPH_HPP
