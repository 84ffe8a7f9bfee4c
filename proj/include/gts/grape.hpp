#ifndef GTS_GRAPE_HPP
#define GTS_GRAPE_HPP

#include <compare>
#include <set>
#include <string>
#include <vector>

#include "gts/graph.hpp"

namespace gts {

/// Interned graph plus the names of the constraints it is known to satisfy.
struct ConstrainedGraph {
    GraphId graph = 0;
    std::set<std::string> constraints;

    friend bool operator==(const ConstrainedGraph&, const ConstrainedGraph&) = default;
    friend auto operator<=>(const ConstrainedGraph&, const ConstrainedGraph&) = default;
};

using GrapeElement = std::set<ConstrainedGraph>;

/// Graph set enumeration: a non-empty sequence of finite sets of constrained
/// graphs. The single value type all operators consume and produce. Elements
/// may contain isomorphic graphs; only `distinct` collapses those.
struct Grape {
    std::vector<GrapeElement> elements;

    Grape() : elements(1) {}
    explicit Grape(std::vector<GrapeElement> els) : elements(std::move(els)) {
        if (elements.empty()) elements.emplace_back();
    }

    const GrapeElement& last() const { return elements.back(); }
    std::size_t length() const { return elements.size(); }

    /// Copy with one more element at the end.
    Grape appended(GrapeElement element) const {
        Grape out = *this;
        out.elements.push_back(std::move(element));
        return out;
    }

    /// Copy with the last element replaced.
    Grape with_last(GrapeElement element) const {
        Grape out = *this;
        out.elements.back() = std::move(element);
        return out;
    }

    /// All graph ids mentioned anywhere in the grape.
    std::set<GraphId> all_ids() const {
        std::set<GraphId> out;
        for (const GrapeElement& el : elements)
            for (const ConstrainedGraph& cg : el) out.insert(cg.graph);
        return out;
    }

    friend bool operator==(const Grape&, const Grape&) = default;
};

} // namespace gts

#endif // GTS_GRAPE_HPP
