#ifndef GTS_TESTS_SUPPORT_HPP
#define GTS_TESTS_SUPPORT_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gts/graph.hpp"

namespace gts::test {

using Rng = std::mt19937_64;

inline std::optional<std::string> pick_label(Rng& rng, const std::vector<std::string>& pool,
                                             double unlabeled_chance = 0.3) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (pool.empty() || coin(rng) < unlabeled_chance) return std::nullopt;
    std::uniform_int_distribution<std::size_t> idx(0, pool.size() - 1);
    return pool[idx(rng)];
}

/// Random multigraph with up to max_nodes nodes and max_edges edges.
inline Graph random_graph(Rng& rng, std::size_t max_nodes, std::size_t max_edges,
                          const std::vector<std::string>& labels = {"A", "B"}) {
    std::uniform_int_distribution<std::size_t> ncount(0, max_nodes);
    std::size_t n = ncount(rng);
    std::vector<Node> nodes;
    for (std::size_t i = 0; i < n; ++i)
        nodes.push_back(Node{"n" + std::to_string(i), pick_label(rng, labels)});
    std::vector<Edge> edges;
    if (n > 0) {
        std::uniform_int_distribution<std::size_t> ecount(0, max_edges);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::size_t m = ecount(rng);
        for (std::size_t i = 0; i < m; ++i)
            edges.push_back(Edge{"e" + std::to_string(i), "n" + std::to_string(pick(rng)),
                                 "n" + std::to_string(pick(rng)), pick_label(rng, labels)});
    }
    return Graph::build(std::move(nodes), std::move(edges));
}

/// Isomorphic copy with fresh random ids and shuffled element order.
inline Graph permuted_copy(Rng& rng, const Graph& g, const std::string& prefix = "p") {
    std::vector<std::size_t> perm(g.node_count());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::map<std::string, std::string> rename;
    std::size_t k = 0;
    for (const Node& n : g.nodes()) rename[n.id] = prefix + std::to_string(perm[k++]);

    std::vector<Node> nodes;
    for (const Node& n : g.nodes()) nodes.push_back(Node{rename[n.id], n.label});
    std::vector<std::size_t> eperm(g.edge_count());
    for (std::size_t i = 0; i < eperm.size(); ++i) eperm[i] = i;
    std::shuffle(eperm.begin(), eperm.end(), rng);
    std::vector<Edge> edges;
    std::size_t j = 0;
    for (const Edge& e : g.edges())
        edges.push_back(Edge{prefix + "e" + std::to_string(eperm[j++]), rename[e.src], rename[e.tgt], e.label});
    std::shuffle(nodes.begin(), nodes.end(), rng);
    std::shuffle(edges.begin(), edges.end(), rng);
    return Graph::build(std::move(nodes), std::move(edges));
}

} // namespace gts::test

#endif // GTS_TESTS_SUPPORT_HPP
