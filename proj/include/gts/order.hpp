#ifndef GTS_ORDER_HPP
#define GTS_ORDER_HPP

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gts/errors.hpp"
#include "gts/graph.hpp"

namespace gts {

/// Graph plus the id it is stored under, if interned. Orders break ties on
/// the id; uninterned graphs fall back to their canonical serialization.
struct GraphRef {
    const Graph* graph = nullptr;
    std::optional<GraphId> id;
};

/// Named strict total order over stored graphs. `cmp` returns equivalent
/// only for the same stored graph (or the same uninterned value).
struct GraphOrder {
    std::string name;
    std::function<std::weak_ordering(const GraphRef&, const GraphRef&)> cmp;

    bool less(const GraphRef& a, const GraphRef& b) const { return cmp(a, b) < 0; }
};

namespace detail {

inline std::weak_ordering order_tie_break(const GraphRef& a, const GraphRef& b) {
    if (a.id && b.id) return *a.id <=> *b.id;
    if (a.id != b.id) return a.id.has_value() ? std::weak_ordering::less : std::weak_ordering::greater;
    return structural_compare(*a.graph, *b.graph);
}

inline std::weak_ordering size_key(const GraphRef& a, const GraphRef& b, bool nodes_first) {
    auto ka = nodes_first ? std::pair(a.graph->node_count(), a.graph->edge_count())
                          : std::pair(a.graph->edge_count(), a.graph->node_count());
    auto kb = nodes_first ? std::pair(b.graph->node_count(), b.graph->edge_count())
                          : std::pair(b.graph->edge_count(), b.graph->node_count());
    if (auto c = ka <=> kb; c != 0) return c;
    return a.graph->certificate() <=> b.graph->certificate();
}

} // namespace detail

/// Registry of named orders. Ships "nodes-asc" and "edges-asc" (count key
/// ascending) plus their "-desc" reversals; callers may add their own.
class OrderRegistry {
public:
    OrderRegistry() {
        auto keyed = [](bool nodes_first, bool reversed) {
            return [nodes_first, reversed](const GraphRef& a, const GraphRef& b) {
                auto c = reversed ? detail::size_key(b, a, nodes_first)
                                  : detail::size_key(a, b, nodes_first);
                if (c != 0) return c;
                return detail::order_tie_break(a, b);
            };
        };
        add({"nodes-asc", keyed(true, false)});
        add({"edges-asc", keyed(false, false)});
        add({"nodes-desc", keyed(true, true)});
        add({"edges-desc", keyed(false, true)});
    }

    void add(GraphOrder order) { orders_[order.name] = std::move(order); }

    bool contains(const std::string& name) const { return orders_.count(name) > 0; }

    const GraphOrder& get(const std::string& name) const {
        auto it = orders_.find(name);
        if (it == orders_.end()) throw UnknownOrderError(name);
        return it->second;
    }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto& [name, order] : orders_) out.push_back(name);
        return out;
    }

private:
    std::map<std::string, GraphOrder> orders_;
};

inline std::weak_ordering compare(const GraphOrder& order, const GraphRef& a, const GraphRef& b) {
    return order.cmp(a, b);
}

} // namespace gts

#endif // GTS_ORDER_HPP
