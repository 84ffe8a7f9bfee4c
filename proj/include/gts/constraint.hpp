#ifndef GTS_CONSTRAINT_HPP
#define GTS_CONSTRAINT_HPP

#include <memory>
#include <string>
#include <utility>
#include <variant>

#include "gts/graph.hpp"
#include "gts/morphism.hpp"

namespace gts {

class Constraint;
using ConstraintPtr = std::shared_ptr<const Constraint>;

/// Premise -> conclusion pattern: wherever the premise occurs, the
/// occurrence must extend to the conclusion along the embedding. An empty
/// premise makes it a pure existence constraint.
struct AtomicConstraint {
    std::string name;
    Graph premise;
    Graph conclusion;
    Morphism embedding; // premise -> conclusion, a monomorphism
};

struct NotConstraint {
    ConstraintPtr inner;
};

struct OrConstraint {
    ConstraintPtr left;
    ConstraintPtr right;
};

class Constraint {
public:
    using Variant = std::variant<AtomicConstraint, NotConstraint, OrConstraint>;

    static ConstraintPtr atomic(std::string name, Graph premise, Graph conclusion,
                                Morphism embedding) {
        if (!validate_morphism(premise, conclusion, embedding, /*injective=*/true))
            throw Error("constraint " + name + ": embedding is not a monomorphism");
        return std::make_shared<Constraint>(
            Variant{AtomicConstraint{std::move(name), std::move(premise), std::move(conclusion),
                                     std::move(embedding)}});
    }

    /// Atomic constraint whose embedding is the shared-id inclusion: every
    /// premise element must reappear in the conclusion under the same id.
    static ConstraintPtr atomic_shared_ids(std::string name, Graph premise, Graph conclusion) {
        Morphism embedding;
        for (const Node& n : premise.nodes()) embedding.node_map.emplace(n.id, n.id);
        for (const Edge& e : premise.edges()) embedding.edge_map.emplace(e.id, e.id);
        return atomic(std::move(name), std::move(premise), std::move(conclusion),
                      std::move(embedding));
    }

    static ConstraintPtr negation(ConstraintPtr inner) {
        return std::make_shared<Constraint>(Variant{NotConstraint{std::move(inner)}});
    }

    static ConstraintPtr disjunction(ConstraintPtr left, ConstraintPtr right) {
        return std::make_shared<Constraint>(Variant{OrConstraint{std::move(left), std::move(right)}});
    }

    explicit Constraint(Variant v) : node_(std::move(v)) {}

    const Variant& node() const { return node_; }

    bool is_atomic() const { return std::holds_alternative<AtomicConstraint>(node_); }
    const AtomicConstraint* as_atomic() const { return std::get_if<AtomicConstraint>(&node_); }

private:
    Variant node_;
};

/// G |= k. Constraint matching is always injective. An atomic constraint
/// holds when every monomorphism h of the premise extends to a monomorphism
/// f of the conclusion with h = f ∘ embedding.
inline bool satisfies(const Graph& g, const Constraint& k) {
    return std::visit(
        [&](const auto& c) -> bool {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, AtomicConstraint>) {
                for (const Morphism& h : enumerate_morphisms(c.premise, g, /*injective=*/true)) {
                    // Extension must send embedding(x) to h(x); pin those
                    // images and search for any completion.
                    Morphism seed;
                    for (const auto& [p, t] : c.embedding.node_map)
                        seed.node_map[t] = h.node_map.at(p);
                    for (const auto& [p, t] : c.embedding.edge_map)
                        seed.edge_map[t] = h.edge_map.at(p);
                    MorphismOptions opt;
                    opt.injective = true;
                    opt.seed = &seed;
                    if (!morphism_exists(c.conclusion, g, opt)) return false;
                }
                return true;
            } else if constexpr (std::is_same_v<T, NotConstraint>) {
                return !satisfies(g, *c.inner);
            } else {
                return satisfies(g, *c.left) || satisfies(g, *c.right);
            }
        },
        k.node());
}

inline bool satisfies(const Graph& g, const ConstraintPtr& k) { return satisfies(g, *k); }

} // namespace gts

#endif // GTS_CONSTRAINT_HPP
