#ifndef GTS_DSL_HPP
#define GTS_DSL_HPP

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gts/constraint.hpp"
#include "gts/errors.hpp"
#include "gts/graph.hpp"
#include "gts/order.hpp"
#include "gts/program.hpp"
#include "gts/system.hpp"

namespace gts {

// Textual definition language for transformation systems (.gts files).
// S-expression surface: (rule ...), (constraint ...), (program ...) forms;
// ';' starts a comment running to end of line. The program sublanguage and
// its translation into the core operators:
//
//   r                    derive r
//   c / c-               check: constrain then unconstrain (negated: of ¬c)
//   (schema c ..)        constrain each named constraint
//   (schema-drop c ..)   unconstrain each
//   (-> e ..)            sequence, right-folded
//   (|| e ..)            alternative, right-folded
//   (->* e ..)           loop over the sequenced body
//   (->?* c e ..)        search: iterate body until c holds in the last element
//   (->?+ c e ..)        cut, then search with distinct appended to the body
//   (cut) (newgrape) (dist) (select k v)

namespace sexpr {

struct SExpr {
    enum class Kind { List, Symbol, String, Int };
    Kind kind = Kind::List;
    std::string text;     // Symbol and String
    long long number = 0; // Int
    std::vector<SExpr> items;
    std::size_t line = 0;
    std::size_t column = 0;

    bool is_symbol(std::string_view s) const { return kind == Kind::Symbol && text == s; }
};

class Reader {
public:
    explicit Reader(std::string_view src) : src_(src) {}

    std::vector<SExpr> read_all() {
        std::vector<SExpr> out;
        skip_trivia();
        while (!eof()) {
            out.push_back(read());
            skip_trivia();
        }
        return out;
    }

private:
    bool eof() const { return pos_ >= src_.size(); }
    char peek() const { return src_[pos_]; }

    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_trivia() {
        while (!eof()) {
            char c = peek();
            if (c == ';') {
                while (!eof() && peek() != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                return;
            }
        }
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

    SExpr read() {
        skip_trivia();
        if (eof()) fail("unexpected end of input");
        SExpr e;
        e.line = line_;
        e.column = col_;
        char c = peek();
        if (c == '(') {
            advance();
            e.kind = SExpr::Kind::List;
            for (;;) {
                skip_trivia();
                if (eof()) fail("unterminated list");
                if (peek() == ')') {
                    advance();
                    return e;
                }
                e.items.push_back(read());
            }
        }
        if (c == ')') fail("unexpected ')'");
        if (c == '"') return read_string(e);
        return read_atom(e);
    }

    SExpr read_string(SExpr e) {
        advance(); // opening quote
        e.kind = SExpr::Kind::String;
        for (;;) {
            if (eof()) fail("unterminated string");
            char c = advance();
            if (c == '"') return e;
            if (c == '\\') {
                if (eof()) fail("unterminated escape");
                char esc = advance();
                switch (esc) {
                case '"': e.text += '"'; break;
                case '\\': e.text += '\\'; break;
                case 'n': e.text += '\n'; break;
                case 't': e.text += '\t'; break;
                default: fail(std::string("unknown escape: \\") + esc);
                }
            } else {
                e.text += c;
            }
        }
    }

    static bool atom_char(char c) {
        return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != '"' &&
               c != ';';
    }

    SExpr read_atom(SExpr e) {
        std::string text;
        while (!eof() && atom_char(peek())) text += advance();
        if (text.empty()) fail("unexpected character");
        bool numeric = std::isdigit(static_cast<unsigned char>(text[0])) ||
                       (text[0] == '-' && text.size() > 1 &&
                        std::isdigit(static_cast<unsigned char>(text[1])));
        if (numeric) {
            for (std::size_t i = (text[0] == '-') ? 1 : 0; i < text.size(); ++i)
                if (!std::isdigit(static_cast<unsigned char>(text[i])))
                    fail("malformed number: " + text);
            e.kind = SExpr::Kind::Int;
            e.number = std::stoll(text);
            e.text = std::move(text);
            return e;
        }
        e.kind = SExpr::Kind::Symbol;
        e.text = std::move(text);
        return e;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

} // namespace sexpr

namespace detail {

using sexpr::SExpr;

[[noreturn]] inline void syntax_error(const SExpr& at, const std::string& msg) {
    throw ParseError(msg, at.line, at.column);
}

[[noreturn]] inline void arity_error(const SExpr& at, const std::string& msg) {
    throw ArityError(msg, at.line, at.column);
}

inline std::string expect_symbol(const SExpr& e, const std::string& what) {
    if (e.kind != SExpr::Kind::Symbol) syntax_error(e, "expected " + what);
    return e.text;
}

/// (node ID [LABEL]) | (edge ID SRC TGT [LABEL])
inline void parse_decl(const SExpr& d, std::vector<Node>& nodes, std::vector<Edge>& edges) {
    if (d.kind != SExpr::Kind::List || d.items.empty())
        syntax_error(d, "expected a (node ...) or (edge ...) declaration");
    const std::string head = expect_symbol(d.items[0], "declaration head");
    auto label_at = [&](std::size_t i) -> std::optional<std::string> {
        if (d.items.size() <= i) return std::nullopt;
        if (d.items[i].kind != SExpr::Kind::String)
            syntax_error(d.items[i], "label must be a quoted string");
        return d.items[i].text;
    };
    if (head == "node") {
        if (d.items.size() < 2 || d.items.size() > 3) arity_error(d, "(node ID [\"label\"])");
        nodes.push_back(Node{expect_symbol(d.items[1], "node id"), label_at(2)});
    } else if (head == "edge") {
        if (d.items.size() < 4 || d.items.size() > 5)
            arity_error(d, "(edge ID SRC TGT [\"label\"])");
        edges.push_back(Edge{expect_symbol(d.items[1], "edge id"),
                             expect_symbol(d.items[2], "source node id"),
                             expect_symbol(d.items[3], "target node id"), label_at(4)});
    } else {
        syntax_error(d, "unknown declaration: " + head);
    }
}

inline Graph parse_side(const SExpr& side) {
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    for (std::size_t i = 1; i < side.items.size(); ++i) parse_decl(side.items[i], nodes, edges);
    try {
        return Graph::build(std::move(nodes), std::move(edges));
    } catch (const GraphBuildError& e) {
        syntax_error(side, e.what());
    }
}

/// Desugaring context: name resolution against the declarations collected in
/// the first pass, plus the order registry for select validation.
struct ProgramContext {
    const GtsDocument& doc;
    const OrderRegistry& orders;
    std::set<std::string>& referenced_orders;
};

inline std::string expect_constraint_name(const ProgramContext& ctx, const SExpr& e) {
    std::string name = expect_symbol(e, "constraint name");
    if (!ctx.doc.has_constraint(name)) throw ResolveError("unknown constraint: " + name);
    return name;
}

std::vector<ExprPtr> desugar_member(const ProgramContext& ctx, const SExpr& form);

inline ExprPtr fold_seq(const SExpr& at, const std::vector<ExprPtr>& members) {
    if (members.empty()) arity_error(at, "expected at least one expression");
    ExprPtr acc = members.back();
    for (std::size_t i = members.size() - 1; i-- > 0;) acc = seq(members[i], acc);
    return acc;
}

/// Splices schema groups, then right-folds the whole argument list.
inline ExprPtr sequence_of(const ProgramContext& ctx, const SExpr& at,
                           std::vector<SExpr>::const_iterator begin,
                           std::vector<SExpr>::const_iterator end) {
    std::vector<ExprPtr> members;
    for (auto it = begin; it != end; ++it)
        for (ExprPtr& e : desugar_member(ctx, *it)) members.push_back(std::move(e));
    return fold_seq(at, members);
}

inline std::vector<ExprPtr> desugar_member(const ProgramContext& ctx, const SExpr& form) {
    if (form.kind == SExpr::Kind::Symbol) {
        const std::string& name = form.text;
        bool is_rule = ctx.doc.has_rule(name);
        bool is_constraint = ctx.doc.has_constraint(name);
        if (is_rule && is_constraint)
            throw ResolveError("ambiguous name (both rule and constraint): " + name);
        if (is_rule) return {derive(name)};
        if (is_constraint) return {seq(constrain(name), unconstrain(name))};
        throw ResolveError("unknown name: " + name);
    }
    if (form.kind != SExpr::Kind::List || form.items.empty())
        syntax_error(form, "expected a program expression");
    const std::string head = expect_symbol(form.items[0], "operator");
    const auto& items = form.items;

    if (head == "schema" || head == "schema-drop") {
        if (items.size() < 2) arity_error(form, "(" + head + " CONSTRAINT ..)");
        std::vector<ExprPtr> out;
        for (std::size_t i = 1; i < items.size(); ++i) {
            std::string c = expect_constraint_name(ctx, items[i]);
            out.push_back(head == "schema" ? constrain(c) : unconstrain(c));
        }
        return out;
    }
    if (head == "->") {
        if (items.size() < 2) arity_error(form, "(-> EXPR ..)");
        return {sequence_of(ctx, form, items.begin() + 1, items.end())};
    }
    if (head == "||") {
        if (items.size() < 2) arity_error(form, "(|| EXPR ..)");
        std::vector<ExprPtr> branches;
        for (std::size_t i = 1; i < items.size(); ++i)
            branches.push_back(fold_seq(items[i], desugar_member(ctx, items[i])));
        // A one-branch alternative still appends the branch's last element;
        // evaluating the branch twice is equivalent and keeps the core binary.
        if (branches.size() == 1) return {alt(branches[0], branches[0])};
        ExprPtr acc = branches.back();
        for (std::size_t i = branches.size() - 1; i-- > 0;) acc = alt(branches[i], acc);
        return {acc};
    }
    if (head == "->*") {
        if (items.size() < 2) arity_error(form, "(->* EXPR ..)");
        return {loop(sequence_of(ctx, form, items.begin() + 1, items.end()))};
    }
    if (head == "->?*") {
        if (items.size() < 3) arity_error(form, "(->?* CONSTRAINT EXPR ..)");
        std::string c = expect_constraint_name(ctx, items[1]);
        return {search(c, sequence_of(ctx, form, items.begin() + 2, items.end()))};
    }
    if (head == "->?+") {
        if (items.size() < 3) arity_error(form, "(->?+ CONSTRAINT EXPR ..)");
        std::string c = expect_constraint_name(ctx, items[1]);
        ExprPtr body = sequence_of(ctx, form, items.begin() + 2, items.end());
        return {seq(cut(), search(c, seq(body, distinct())))};
    }
    if (head == "cut") {
        if (items.size() != 1) arity_error(form, "(cut)");
        return {cut()};
    }
    if (head == "newgrape") {
        if (items.size() != 1) arity_error(form, "(newgrape)");
        return {star()};
    }
    if (head == "dist") {
        if (items.size() != 1) arity_error(form, "(dist)");
        return {distinct()};
    }
    if (head == "select") {
        if (items.size() != 3) arity_error(form, "(select COUNT ORDER)");
        if (items[1].kind != SExpr::Kind::Int || items[1].number < 0)
            arity_error(items[1], "select count must be a non-negative integer");
        std::string order = expect_symbol(items[2], "order name");
        if (!ctx.orders.contains(order)) throw UnknownOrderError(order);
        ctx.referenced_orders.insert(order);
        return {select(static_cast<std::size_t>(items[1].number), order)};
    }
    syntax_error(form, "unknown operator: " + head);
}

} // namespace detail

inline const OrderRegistry& default_order_registry() {
    static const OrderRegistry registry;
    return registry;
}

/// Parses a full .gts document. Rules and constraints are loaded first, so
/// programs may reference declarations appearing later in the file. All
/// names are resolved here; unknown names never reach the evaluator.
inline GtsDocument parse_gts(std::string_view source,
                             const OrderRegistry& orders = default_order_registry()) {
    using detail::SExpr;
    sexpr::Reader reader(source);
    std::vector<SExpr> forms = reader.read_all();

    GtsDocument doc;
    std::vector<const SExpr*> program_forms;
    for (const SExpr& form : forms) {
        if (form.kind != SExpr::Kind::List || form.items.empty() ||
            form.items[0].kind != SExpr::Kind::Symbol)
            detail::syntax_error(form, "expected (rule ...), (constraint ...) or (program ...)");
        const std::string& head = form.items[0].text;
        if (head == "rule") {
            if (form.items.size() < 2) detail::arity_error(form, "(rule NAME ...)");
            std::string name = detail::expect_symbol(form.items[1], "rule name");
            bool iso = false;
            Graph lhs, rhs;
            bool saw_l = false, saw_r = false;
            for (std::size_t i = 2; i < form.items.size(); ++i) {
                const SExpr& part = form.items[i];
                if (part.is_symbol(":iso")) {
                    iso = true;
                    continue;
                }
                if (part.kind == SExpr::Kind::List && !part.items.empty() &&
                    part.items[0].is_symbol(":l")) {
                    if (saw_l) detail::syntax_error(part, "duplicate :l side");
                    saw_l = true;
                    lhs = detail::parse_side(part);
                    continue;
                }
                if (part.kind == SExpr::Kind::List && !part.items.empty() &&
                    part.items[0].is_symbol(":r")) {
                    if (saw_r) detail::syntax_error(part, "duplicate :r side");
                    saw_r = true;
                    rhs = detail::parse_side(part);
                    continue;
                }
                detail::syntax_error(part, "expected :iso, (:l ...) or (:r ...)");
            }
            try {
                doc.add_rule(Rule::make(std::move(name), std::move(lhs), std::move(rhs), iso));
            } catch (const RuleError& e) {
                detail::syntax_error(form, e.what());
            }
        } else if (head == "constraint") {
            if (form.items.size() < 2) detail::arity_error(form, "(constraint NAME ...)");
            std::string name = detail::expect_symbol(form.items[1], "constraint name");
            if (!name.empty() && name.back() == '-')
                detail::syntax_error(form.items[1],
                                     "constraint names must not end with '-' (reserved for negation)");
            Graph premise, conclusion;
            bool saw_if = false, saw_then = false;
            for (std::size_t i = 2; i < form.items.size(); ++i) {
                const SExpr& part = form.items[i];
                if (part.kind == SExpr::Kind::List && !part.items.empty() &&
                    part.items[0].is_symbol(":if")) {
                    if (saw_if) detail::syntax_error(part, "duplicate :if side");
                    saw_if = true;
                    premise = detail::parse_side(part);
                    continue;
                }
                if (part.kind == SExpr::Kind::List && !part.items.empty() &&
                    part.items[0].is_symbol(":then")) {
                    if (saw_then) detail::syntax_error(part, "duplicate :then side");
                    saw_then = true;
                    conclusion = detail::parse_side(part);
                    continue;
                }
                detail::syntax_error(part, "expected (:if ...) or (:then ...)");
            }
            ConstraintPtr built;
            try {
                built = Constraint::atomic_shared_ids(name, std::move(premise),
                                                      std::move(conclusion));
            } catch (const Error& e) {
                detail::syntax_error(form, e.what());
            }
            doc.add_constraint(name, std::move(built));
        } else if (head == "program") {
            if (form.items.size() < 3)
                detail::arity_error(form, "(program NAME EXPR ..)");
            detail::expect_symbol(form.items[1], "program name");
            program_forms.push_back(&form);
        } else {
            detail::syntax_error(form, "unknown top-level form: " + head);
        }
    }

    for (const SExpr* form : program_forms) {
        detail::ProgramContext ctx{doc, orders, doc.referenced_orders()};
        ExprPtr body = detail::sequence_of(ctx, *form, form->items.begin() + 2, form->items.end());
        doc.add_program(form->items[1].text, std::move(body));
    }
    return doc;
}

inline GtsDocument load_gts_file(const std::string& path,
                                 const OrderRegistry& orders = default_order_registry()) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_gts(buf.str(), orders);
}

// ---------------------------------------------------------------------------
// Pretty printer. Emits surface syntax that reparses to the same trees;
// recognized idioms (constraint checks, distinct-until) print in their sugar
// form so round-tripping is a fixed point.

namespace detail {

inline const SeqOp* as_seq(const ProgramExpr& e) { return std::get_if<SeqOp>(&e.node); }

/// Seq(Constrain(c), Unconstrain(c)) — the "check c" idiom.
inline std::optional<std::string> as_check(const ProgramExpr& e) {
    const SeqOp* s = as_seq(e);
    if (!s) return std::nullopt;
    const auto* cn = std::get_if<ConstrainOp>(&s->first->node);
    const auto* un = std::get_if<UnconstrainOp>(&s->second->node);
    if (cn && un && cn->constraint == un->constraint) return cn->constraint;
    return std::nullopt;
}

/// Seq(Cut, Search(c, Seq(body, Distinct))) — the "->?+" idiom.
struct DistinctUntil {
    const std::string* constraint;
    const ProgramExpr* body;
};
inline std::optional<DistinctUntil> as_distinct_until(const ProgramExpr& e) {
    const SeqOp* outer = as_seq(e);
    if (!outer || !std::holds_alternative<CutOp>(outer->first->node)) return std::nullopt;
    const auto* srch = std::get_if<SearchOp>(&outer->second->node);
    if (!srch) return std::nullopt;
    const SeqOp* inner = as_seq(*srch->body);
    if (!inner) return std::nullopt;
    const auto* dist = std::get_if<DistinctOp>(&inner->second->node);
    if (!dist || dist->order.has_value()) return std::nullopt;
    return DistinctUntil{&srch->constraint, inner->first.get()};
}

std::string pretty_expr(const ProgramExpr& e);

/// Right spine of a Seq chain; stops inside check-pairs so they print as a
/// single member.
inline void seq_members(const ProgramExpr& e, std::vector<const ProgramExpr*>& out) {
    if (as_check(e)) {
        out.push_back(&e);
        return;
    }
    if (const SeqOp* s = as_seq(e)) {
        out.push_back(s->first.get());
        seq_members(*s->second, out);
        return;
    }
    out.push_back(&e);
}

inline std::string join_members(const ProgramExpr& e) {
    std::vector<const ProgramExpr*> members;
    seq_members(e, members);
    std::string out;
    for (const ProgramExpr* m : members) {
        out += ' ';
        out += pretty_expr(*m);
    }
    return out;
}

inline void alt_members(const ProgramExpr& e, std::vector<const ProgramExpr*>& out) {
    if (const auto* a = std::get_if<AltOp>(&e.node)) {
        out.push_back(a->left.get());
        alt_members(*a->right, out);
        return;
    }
    out.push_back(&e);
}

inline std::string pretty_expr(const ProgramExpr& e) {
    if (auto check = as_check(e)) return *check;
    if (auto du = as_distinct_until(e))
        return "(->?+ " + *du->constraint + join_members(*du->body) + ")";
    return std::visit(
        [&](const auto& op) -> std::string {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, ConstrainOp>)
                return "(schema " + op.constraint + ")";
            else if constexpr (std::is_same_v<T, UnconstrainOp>)
                return "(schema-drop " + op.constraint + ")";
            else if constexpr (std::is_same_v<T, DeriveOp>)
                return op.rule;
            else if constexpr (std::is_same_v<T, SelectOp>)
                return "(select " + std::to_string(op.count) + " " + op.order + ")";
            else if constexpr (std::is_same_v<T, SeqOp>)
                return "(->" + join_members(e) + ")";
            else if constexpr (std::is_same_v<T, AltOp>) {
                std::vector<const ProgramExpr*> branches;
                alt_members(e, branches);
                std::string out = "(||";
                for (const ProgramExpr* b : branches) {
                    out += ' ';
                    out += pretty_expr(*b);
                }
                return out + ")";
            } else if constexpr (std::is_same_v<T, LoopOp>)
                return "(->*" + join_members(*op.body) + ")";
            else if constexpr (std::is_same_v<T, SearchOp>)
                return "(->?* " + op.constraint + join_members(*op.body) + ")";
            else if constexpr (std::is_same_v<T, CutOp>)
                return "(cut)";
            else if constexpr (std::is_same_v<T, DistinctOp>)
                return "(dist)";
            else
                return "(newgrape)";
        },
        e.node);
}

inline std::string quote_label(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out + "\"";
}

inline std::string print_side(const char* tag, const Graph& g) {
    if (g.node_count() == 0 && g.edge_count() == 0) return "";
    std::string out = "\n  (";
    out += tag;
    for (const Node& n : g.nodes()) {
        out += "\n    (node " + n.id;
        if (n.label) out += " " + quote_label(*n.label);
        out += ")";
    }
    for (const Edge& e : g.edges()) {
        out += "\n    (edge " + e.id + " " + e.src + " " + e.tgt;
        if (e.label) out += " " + quote_label(*e.label);
        out += ")";
    }
    return out + ")";
}

} // namespace detail

inline std::string pretty(const ProgramExpr& e) { return detail::pretty_expr(e); }
inline std::string pretty(const ExprPtr& e) { return detail::pretty_expr(*e); }

/// Whole-document printer; parse(pretty(parse(text))) == parse(text).
inline std::string pretty(const GtsDocument& doc) {
    std::string out;
    for (const auto& [name, rule] : doc.rules()) {
        out += "(rule " + name;
        if (rule.iso_match()) out += " :iso";
        out += detail::print_side(":l", rule.lhs());
        out += detail::print_side(":r", rule.rhs());
        out += ")\n\n";
    }
    for (const auto& [name, c] : doc.constraints()) {
        const AtomicConstraint* atom = c->as_atomic();
        out += "(constraint " + name;
        if (atom) {
            out += detail::print_side(":if", atom->premise);
            out += detail::print_side(":then", atom->conclusion);
        }
        out += ")\n\n";
    }
    for (const std::string& name : doc.program_names())
        out += "(program " + name + " " + pretty(doc.program(name)) + ")\n\n";
    return out;
}

} // namespace gts

#endif // GTS_DSL_HPP
