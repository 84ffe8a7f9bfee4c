#ifndef GTS_EVAL_HPP
#define GTS_EVAL_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gts/constraint.hpp"
#include "gts/errors.hpp"
#include "gts/grape.hpp"
#include "gts/order.hpp"
#include "gts/program.hpp"
#include "gts/rule.hpp"
#include "gts/store.hpp"
#include "gts/system.hpp"

namespace gts {

struct EvalConfig {
    /// Iteration cap shared by loop and search; exceeding it throws
    /// DivergenceError instead of silently stopping.
    std::size_t max_iterations = 10000;
    std::string default_order = "nodes-asc";
};

/// Interprets program expressions as functions from grapes to grapes.
/// Pure with respect to grape values: inputs are never mutated and repeated
/// evaluation yields grapes equal at interned-id level. The store accretes
/// interned graphs and derivation steps as side tables.
class Evaluator {
public:
    Evaluator(GraphStore& store, const GtsDocument& gts, const OrderRegistry& orders,
              EvalConfig config = {})
        : store_(store), gts_(gts), orders_(orders), config_(config) {}

    /// The unit grape: one element holding the empty graph, no constraints.
    Grape star() {
        Grape g;
        g.elements.back().insert(ConstrainedGraph{store_.intern(Graph()), {}});
        return g;
    }

    Grape eval(const ProgramExpr& e, const Grape& g) {
        return std::visit(
            [&](const auto& op) -> Grape {
                using T = std::decay_t<decltype(op)>;
                if constexpr (std::is_same_v<T, ConstrainOp>)
                    return op_constrain(op.constraint, g);
                else if constexpr (std::is_same_v<T, UnconstrainOp>)
                    return op_unconstrain(op.constraint, g);
                else if constexpr (std::is_same_v<T, DeriveOp>)
                    return op_derive(op.rule, g);
                else if constexpr (std::is_same_v<T, SelectOp>)
                    return op_select(op.count, op.order, g);
                else if constexpr (std::is_same_v<T, SeqOp>)
                    return eval(*op.second, eval(*op.first, g));
                else if constexpr (std::is_same_v<T, AltOp>)
                    return op_alt(*op.left, *op.right, g);
                else if constexpr (std::is_same_v<T, LoopOp>)
                    return op_loop(*op.body, g);
                else if constexpr (std::is_same_v<T, SearchOp>)
                    return op_search(op.constraint, *op.body, g);
                else if constexpr (std::is_same_v<T, CutOp>)
                    return op_cut(g);
                else if constexpr (std::is_same_v<T, DistinctOp>)
                    return op_distinct(op.order, g);
                else
                    return star();
            },
            e.node);
    }

    Grape eval(const ExprPtr& e, const Grape& g) { return eval(*e, g); }

    /// Keeps the graphs of the last element satisfying c and records c on
    /// them; everything else in the element is removed.
    Grape op_constrain(const std::string& cname, const Grape& g) {
        GrapeElement out;
        for (const ConstrainedGraph& cg : g.last()) {
            if (!graph_satisfies(cg.graph, cname)) continue;
            ConstrainedGraph kept = cg;
            kept.constraints.insert(cname);
            out.insert(std::move(kept));
        }
        return g.with_last(std::move(out));
    }

    /// Removes c from the last element's graphs; the graphs stay.
    Grape op_unconstrain(const std::string& cname, const Grape& g) {
        GrapeElement out;
        for (const ConstrainedGraph& cg : g.last()) {
            ConstrainedGraph kept = cg;
            kept.constraints.erase(cname);
            out.insert(std::move(kept));
        }
        return g.with_last(std::move(out));
    }

    /// Appends the element of all direct derivations of the last element's
    /// graphs. Results must satisfy every constraint carried by their source
    /// (constrained transformation); the constraint set carries over.
    Grape op_derive(const std::string& rule_name, const Grape& g) {
        const Rule& r = gts_.rule(rule_name);
        GrapeElement next;
        for (const ConstrainedGraph& cg : g.last()) {
            Graph host = store_.graph(cg.graph);
            for (const Morphism& m : find_matches(r, host)) {
                Graph produced = apply(r, host, m);
                bool valid = true;
                for (const std::string& k : cg.constraints)
                    if (!satisfies(produced, gts_.constraint(k))) {
                        valid = false;
                        break;
                    }
                if (!valid) continue;
                GraphId out_id = store_.intern(produced);
                store_.log_step(DerivationStep{rule_name, m, cg.graph, out_id});
                next.insert(ConstrainedGraph{out_id, cg.constraints});
            }
        }
        return g.appended(std::move(next));
    }

    /// Reduces the last element to at most k graphs. When the element is
    /// larger than k, exactly the k maximal graphs under the order survive:
    /// no removed graph may sit above a kept one.
    Grape op_select(std::size_t k, const std::string& order_name, const Grape& g) {
        const GraphOrder& order = orders_.get(order_name);
        const GrapeElement& last = g.last();
        if (last.size() <= k) return g;
        std::vector<ConstrainedGraph> ranked(last.begin(), last.end());
        std::vector<Graph> graphs;
        graphs.reserve(ranked.size());
        for (const ConstrainedGraph& cg : ranked) graphs.push_back(store_.graph(cg.graph));
        std::vector<std::size_t> idx(ranked.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            GraphRef ra{&graphs[a], ranked[a].graph};
            GraphRef rb{&graphs[b], ranked[b].graph};
            auto c = compare(order, ra, rb);
            if (c != 0) return c > 0; // maximal first
            return ranked[a].constraints < ranked[b].constraints;
        });
        GrapeElement out;
        for (std::size_t i = 0; i < k; ++i) out.insert(ranked[idx[i]]);
        return g.with_last(std::move(out));
    }

    /// Appends the union of the last elements produced by evaluating both
    /// branches on the same input grape; branch-internal history is
    /// discarded.
    Grape op_alt(const ProgramExpr& left, const ProgramExpr& right, const Grape& g) {
        Grape a = eval(left, g);
        Grape b = eval(right, g);
        GrapeElement unioned = a.last();
        unioned.insert(b.last().begin(), b.last().end());
        return g.appended(std::move(unioned));
    }

    Grape op_cut(const Grape& g) { return Grape({g.last()}); }

    /// Removes from the last element every graph with an isomorphic copy in
    /// an earlier element, or an isomorphic strictly smaller graph in the
    /// last element itself. Constraints are disregarded for isomorphism.
    Grape op_distinct(const std::optional<std::string>& order_name, const Grape& g) {
        const GraphOrder& order = orders_.get(order_name.value_or(config_.default_order));
        const GrapeElement& last = g.last();

        std::map<Certificate, std::vector<GraphId>> history;
        for (std::size_t i = 0; i + 1 < g.elements.size(); ++i)
            for (const ConstrainedGraph& cg : g.elements[i]) {
                Graph h = store_.graph(cg.graph);
                auto& bucket = history[h.certificate()];
                if (std::find(bucket.begin(), bucket.end(), cg.graph) == bucket.end())
                    bucket.push_back(cg.graph);
            }

        GrapeElement out;
        for (const ConstrainedGraph& cg : last) {
            Graph d = store_.graph(cg.graph);
            bool removed = false;
            if (auto it = history.find(d.certificate()); it != history.end()) {
                for (GraphId jid : it->second) {
                    if (jid == cg.graph || isomorphic(store_.graph(jid), d)) {
                        removed = true;
                        break;
                    }
                }
            }
            if (!removed) {
                for (const ConstrainedGraph& other : last) {
                    if (other.graph == cg.graph) continue;
                    Graph o = store_.graph(other.graph);
                    GraphRef ro{&o, other.graph};
                    GraphRef rd{&d, cg.graph};
                    if (order.less(ro, rd) && isomorphic(o, d)) {
                        removed = true;
                        break;
                    }
                }
            }
            if (!removed) out.insert(cg);
        }
        return g.with_last(std::move(out));
    }

    /// Re-evaluates the body while its result has a non-empty last element;
    /// returns the grape from before the failing evaluation.
    Grape op_loop(const ProgramExpr& body, const Grape& g) {
        Grape current = g;
        for (std::size_t used = 0;; ++used) {
            if (used == config_.max_iterations) throw DivergenceError(config_.max_iterations);
            Grape next = eval(body, current);
            if (next.last().empty()) return current;
            current = std::move(next);
        }
    }

    /// Re-evaluates the body until the last element is empty or contains a
    /// graph satisfying c; either exit returns the current grape untouched.
    Grape op_search(const std::string& cname, const ProgramExpr& body, const Grape& g) {
        Grape current = g;
        for (std::size_t used = 0;; ++used) {
            const GrapeElement& last = current.last();
            if (last.empty()) return current;
            bool found = false;
            for (const ConstrainedGraph& cg : last)
                if (graph_satisfies(cg.graph, cname)) {
                    found = true;
                    break;
                }
            if (found) return current;
            if (used == config_.max_iterations) throw DivergenceError(config_.max_iterations);
            current = eval(body, current);
        }
    }

    const EvalConfig& config() const { return config_; }

private:
    /// Satisfaction of named constraints on interned graphs, memoized:
    /// graphs are immutable and names resolve uniquely within one system.
    bool graph_satisfies(GraphId id, const std::string& cname) {
        auto key = std::make_pair(id, cname);
        if (auto it = sat_memo_.find(key); it != sat_memo_.end()) return it->second;
        bool result = satisfies(store_.graph(id), gts_.constraint(cname));
        sat_memo_.emplace(std::move(key), result);
        return result;
    }

    GraphStore& store_;
    const GtsDocument& gts_;
    const OrderRegistry& orders_;
    EvalConfig config_;
    std::map<std::pair<GraphId, std::string>, bool> sat_memo_;
};

} // namespace gts

#endif // GTS_EVAL_HPP
