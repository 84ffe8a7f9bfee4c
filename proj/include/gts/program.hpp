#ifndef GTS_PROGRAM_HPP
#define GTS_PROGRAM_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>

namespace gts {

struct ProgramExpr;
using ExprPtr = std::shared_ptr<const ProgramExpr>;

/// The ten operators plus the unit grape constant. Rules, constraints and
/// orders are referenced by name; resolution happens at load time.
struct ConstrainOp {
    std::string constraint;
};
struct UnconstrainOp {
    std::string constraint;
};
struct DeriveOp {
    std::string rule;
};
struct SelectOp {
    std::size_t count = 0;
    std::string order;
};
struct SeqOp {
    ExprPtr first;
    ExprPtr second;
};
struct AltOp {
    ExprPtr left;
    ExprPtr right;
};
struct LoopOp {
    ExprPtr body;
};
struct SearchOp {
    std::string constraint;
    ExprPtr body;
};
struct CutOp {};
struct DistinctOp {
    /// Empty means the run configuration's default order.
    std::optional<std::string> order;
};
struct StarOp {};

struct ProgramExpr {
    using Variant = std::variant<ConstrainOp, UnconstrainOp, DeriveOp, SelectOp, SeqOp, AltOp,
                                 LoopOp, SearchOp, CutOp, DistinctOp, StarOp>;
    Variant node;
};

inline ExprPtr make_expr(ProgramExpr::Variant v) {
    return std::make_shared<ProgramExpr>(ProgramExpr{std::move(v)});
}

inline ExprPtr constrain(std::string c) { return make_expr(ConstrainOp{std::move(c)}); }
inline ExprPtr unconstrain(std::string c) { return make_expr(UnconstrainOp{std::move(c)}); }
inline ExprPtr derive(std::string rule) { return make_expr(DeriveOp{std::move(rule)}); }
inline ExprPtr select(std::size_t k, std::string order) {
    return make_expr(SelectOp{k, std::move(order)});
}
inline ExprPtr seq(ExprPtr a, ExprPtr b) { return make_expr(SeqOp{std::move(a), std::move(b)}); }
inline ExprPtr alt(ExprPtr a, ExprPtr b) { return make_expr(AltOp{std::move(a), std::move(b)}); }
inline ExprPtr loop(ExprPtr body) { return make_expr(LoopOp{std::move(body)}); }
inline ExprPtr search(std::string c, ExprPtr body) {
    return make_expr(SearchOp{std::move(c), std::move(body)});
}
inline ExprPtr cut() { return make_expr(CutOp{}); }
inline ExprPtr distinct(std::optional<std::string> order = std::nullopt) {
    return make_expr(DistinctOp{std::move(order)});
}
inline ExprPtr star() { return make_expr(StarOp{}); }

bool expr_equal(const ProgramExpr& a, const ProgramExpr& b);

inline bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return expr_equal(*a, *b);
}

inline bool expr_equal(const ProgramExpr& a, const ProgramExpr& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const T& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, ConstrainOp> || std::is_same_v<T, UnconstrainOp>)
                return x.constraint == y.constraint;
            else if constexpr (std::is_same_v<T, DeriveOp>)
                return x.rule == y.rule;
            else if constexpr (std::is_same_v<T, SelectOp>)
                return x.count == y.count && x.order == y.order;
            else if constexpr (std::is_same_v<T, SeqOp>)
                return expr_equal(x.first, y.first) && expr_equal(x.second, y.second);
            else if constexpr (std::is_same_v<T, AltOp>)
                return expr_equal(x.left, y.left) && expr_equal(x.right, y.right);
            else if constexpr (std::is_same_v<T, LoopOp>)
                return expr_equal(x.body, y.body);
            else if constexpr (std::is_same_v<T, SearchOp>)
                return x.constraint == y.constraint && expr_equal(x.body, y.body);
            else if constexpr (std::is_same_v<T, DistinctOp>)
                return x.order == y.order;
            else
                return true; // CutOp, StarOp
        },
        a.node);
}

} // namespace gts

#endif // GTS_PROGRAM_HPP
