#ifndef GTS_MORPHISM_HPP
#define GTS_MORPHISM_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "gts/graph.hpp"

namespace gts {

/// Structure- and label-preserving map from a pattern graph into a host
/// graph, keyed by element ids. Ordered so morphism sets are canonical.
struct Morphism {
    std::map<std::string, std::string> node_map;
    std::map<std::string, std::string> edge_map;

    friend bool operator==(const Morphism&, const Morphism&) = default;
    friend auto operator<=>(const Morphism&, const Morphism&) = default;
};

struct MorphismOptions {
    bool injective = false;
    /// Pre-pinned assignments (pattern id -> host id); enumeration extends
    /// them. Ignored entries for elements absent from the pattern are an
    /// error in the caller.
    const Morphism* seed = nullptr;
    /// Stop after this many results (0 means unlimited).
    std::size_t limit = 0;
};

namespace detail {

inline bool label_compatible(const std::optional<std::string>& pattern,
                             const std::optional<std::string>& host) {
    // Unlabeled pattern elements match anything; a label must match exactly.
    return !pattern || (host && *host == *pattern);
}

class MorphismSearch {
public:
    MorphismSearch(const Graph& pattern, const Graph& host, const MorphismOptions& opt)
        : pattern_(pattern), host_(host), opt_(opt) {}

    std::vector<Morphism> run() {
        const std::size_t np = pattern_.node_count();
        node_assign_.assign(np, kUnset);
        host_node_used_.assign(host_.node_count(), 0);

        // Assign high-degree nodes first: fails fast and fixes enumeration
        // order independent of input order.
        order_.resize(np);
        for (std::size_t i = 0; i < np; ++i) order_[i] = i;
        std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            auto da = pattern_.out_degree(a) + pattern_.in_degree(a);
            auto db = pattern_.out_degree(b) + pattern_.in_degree(b);
            if (da != db) return da > db;
            return pattern_.nodes()[a].id < pattern_.nodes()[b].id;
        });

        if (opt_.seed && !apply_seed()) return {};
        assign_nodes(0);
        std::sort(results_.begin(), results_.end());
        return std::move(results_);
    }

private:
    static constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

    bool apply_seed() {
        for (const auto& [pid, hid] : opt_.seed->node_map) {
            auto p = pattern_.node_index(pid);
            auto h = host_.node_index(hid);
            if (!p || !h) return false;
            if (!try_pin(*p, *h)) return false;
        }
        for (const auto& [pid, hid] : opt_.seed->edge_map) {
            auto p = pattern_.edge_index(pid);
            auto h = host_.edge_index(hid);
            if (!p || !h) return false;
            seeded_edges_.emplace_back(*p, *h);
        }
        return true;
    }

    bool try_pin(std::size_t p, std::size_t h) {
        if (node_assign_[p] != kUnset) return node_assign_[p] == h;
        if (!node_candidate_ok(p, h)) return false;
        node_assign_[p] = h;
        ++host_node_used_[h];
        return true;
    }

    bool node_candidate_ok(std::size_t p, std::size_t h) const {
        if (!label_compatible(pattern_.nodes()[p].label, host_.nodes()[h].label)) return false;
        if (opt_.injective) {
            if (host_node_used_[h]) return false;
            // An injective edge map sends distinct incident pattern edges to
            // distinct incident host edges, so degrees bound from below.
            if (host_.out_degree(h) < pattern_.out_degree(p)) return false;
            if (host_.in_degree(h) < pattern_.in_degree(p)) return false;
        }
        return true;
    }

    /// Every pattern edge with both endpoints assigned must have at least
    /// one compatible host edge between the mapped endpoints.
    bool edges_feasible() const {
        for (const Edge& pe : pattern_.edges()) {
            auto ps = *pattern_.node_index(pe.src);
            auto pt = *pattern_.node_index(pe.tgt);
            if (node_assign_[ps] == kUnset || node_assign_[pt] == kUnset) continue;
            bool found = false;
            for (std::uint32_t he : host_.out_edges(node_assign_[ps])) {
                const Edge& hedge = host_.edges()[he];
                if (*host_.node_index(hedge.tgt) != node_assign_[pt]) continue;
                if (!label_compatible(pe.label, hedge.label)) continue;
                found = true;
                break;
            }
            if (!found) return false;
        }
        return true;
    }

    void assign_nodes(std::size_t depth) {
        if (opt_.limit && results_.size() >= opt_.limit) return;
        if (depth == order_.size()) {
            assign_edges();
            return;
        }
        std::size_t p = order_[depth];
        if (node_assign_[p] != kUnset) {
            if (edges_feasible()) assign_nodes(depth + 1);
            return;
        }
        for (std::size_t h = 0; h < host_.node_count(); ++h) {
            if (!node_candidate_ok(p, h)) continue;
            node_assign_[p] = h;
            ++host_node_used_[h];
            if (edges_feasible()) assign_nodes(depth + 1);
            --host_node_used_[h];
            node_assign_[p] = kUnset;
            if (opt_.limit && results_.size() >= opt_.limit) return;
        }
    }

    void assign_edges() {
        // State is rebuilt per complete node assignment, so no unwinding of
        // the seed pins is needed.
        edge_assign_.assign(pattern_.edge_count(), kUnset);
        host_edge_used_.assign(host_.edge_count(), 0);
        for (const auto& [p, h] : seeded_edges_) {
            if (!edge_candidate_ok(p, h)) return;
            edge_assign_[p] = h;
            ++host_edge_used_[h];
        }
        assign_edge(0);
    }

    bool edge_candidate_ok(std::size_t p, std::size_t h) const {
        if (edge_assign_[p] != kUnset) return edge_assign_[p] == h;
        const Edge& pe = pattern_.edges()[p];
        const Edge& he = host_.edges()[h];
        if (opt_.injective && host_edge_used_[h]) return false;
        if (!label_compatible(pe.label, he.label)) return false;
        if (node_assign_[*pattern_.node_index(pe.src)] != *host_.node_index(he.src)) return false;
        if (node_assign_[*pattern_.node_index(pe.tgt)] != *host_.node_index(he.tgt)) return false;
        return true;
    }

    void assign_edge(std::size_t p) {
        if (opt_.limit && results_.size() >= opt_.limit) return;
        if (p == pattern_.edge_count()) {
            emit();
            return;
        }
        if (edge_assign_[p] != kUnset) {
            assign_edge(p + 1);
            return;
        }
        const Edge& pe = pattern_.edges()[p];
        auto ps = node_assign_[*pattern_.node_index(pe.src)];
        for (std::uint32_t h : host_.out_edges(ps)) {
            if (!edge_candidate_ok(p, h)) continue;
            edge_assign_[p] = h;
            ++host_edge_used_[h];
            assign_edge(p + 1);
            --host_edge_used_[h];
            edge_assign_[p] = kUnset;
            if (opt_.limit && results_.size() >= opt_.limit) return;
        }
    }

    void emit() {
        Morphism m;
        for (std::size_t p = 0; p < pattern_.node_count(); ++p)
            m.node_map.emplace(pattern_.nodes()[p].id, host_.nodes()[node_assign_[p]].id);
        for (std::size_t p = 0; p < pattern_.edge_count(); ++p)
            m.edge_map.emplace(pattern_.edges()[p].id, host_.edges()[edge_assign_[p]].id);
        results_.push_back(std::move(m));
    }

    const Graph& pattern_;
    const Graph& host_;
    const MorphismOptions& opt_;
    std::vector<std::size_t> order_;
    std::vector<std::size_t> node_assign_;
    std::vector<std::size_t> edge_assign_;
    std::vector<int> host_node_used_;
    std::vector<int> host_edge_used_;
    std::vector<std::pair<std::size_t, std::size_t>> seeded_edges_;
    std::vector<Morphism> results_;
};

} // namespace detail

/// All structure- and label-preserving morphisms pattern -> host, in
/// canonical order. The empty pattern yields exactly the empty morphism.
inline std::vector<Morphism> enumerate_morphisms(const Graph& pattern, const Graph& host,
                                                 const MorphismOptions& opt) {
    return detail::MorphismSearch(pattern, host, opt).run();
}

inline std::vector<Morphism> enumerate_morphisms(const Graph& pattern, const Graph& host,
                                                 bool injective = false) {
    MorphismOptions opt;
    opt.injective = injective;
    return enumerate_morphisms(pattern, host, opt);
}

inline bool morphism_exists(const Graph& pattern, const Graph& host, const MorphismOptions& opt_in) {
    MorphismOptions opt = opt_in;
    opt.limit = 1;
    return !detail::MorphismSearch(pattern, host, opt).run().empty();
}

/// Checks that m is a total, structure- and label-preserving map from
/// pattern into host (injective if requested). Used to validate externally
/// supplied matches.
inline bool validate_morphism(const Graph& pattern, const Graph& host, const Morphism& m,
                              bool injective) {
    if (m.node_map.size() != pattern.node_count()) return false;
    if (m.edge_map.size() != pattern.edge_count()) return false;
    for (const auto& [pid, hid] : m.node_map) {
        const Node* pn = pattern.find_node(pid);
        const Node* hn = host.find_node(hid);
        if (!pn || !hn) return false;
        if (!detail::label_compatible(pn->label, hn->label)) return false;
    }
    for (const auto& [pid, hid] : m.edge_map) {
        const Edge* pe = pattern.find_edge(pid);
        const Edge* he = host.find_edge(hid);
        if (!pe || !he) return false;
        if (!detail::label_compatible(pe->label, he->label)) return false;
        if (m.node_map.at(pe->src) != he->src) return false;
        if (m.node_map.at(pe->tgt) != he->tgt) return false;
    }
    if (injective) {
        std::vector<std::string> seen;
        for (const auto& [pid, hid] : m.node_map) seen.push_back(hid);
        std::sort(seen.begin(), seen.end());
        if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
        seen.clear();
        for (const auto& [pid, hid] : m.edge_map) seen.push_back(hid);
        std::sort(seen.begin(), seen.end());
        if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
    }
    return true;
}

/// Label-preserving bijection test. Certificates prefilter; the exact
/// search runs only on certificate equality. An injective morphism between
/// graphs of equal element counts is necessarily bijective.
inline bool isomorphic(const Graph& a, const Graph& b) {
    if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return false;
    if (a.certificate() != b.certificate()) return false;
    MorphismOptions opt;
    opt.injective = true;
    return morphism_exists(a, b, opt);
}

} // namespace gts

#endif // GTS_MORPHISM_HPP
