#ifndef GTS_SYSTEM_HPP
#define GTS_SYSTEM_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "gts/constraint.hpp"
#include "gts/errors.hpp"
#include "gts/program.hpp"
#include "gts/rule.hpp"

namespace gts {

/// A loaded graph transformation system: rules, constraints and programs,
/// with all cross-references resolved. Constraint names resolve in positive
/// and negated form: "c-" addresses the negation of "c".
class GtsDocument {
public:
    void add_rule(Rule r) {
        if (rules_.count(r.name())) throw ResolveError("duplicate rule name: " + r.name());
        rules_.emplace(r.name(), std::move(r));
    }

    void add_constraint(const std::string& name, ConstraintPtr c) {
        if (constraints_.count(name)) throw ResolveError("duplicate constraint name: " + name);
        constraints_.emplace(name, std::move(c));
    }

    void add_program(const std::string& name, ExprPtr body) {
        if (programs_.count(name)) throw ResolveError("duplicate program name: " + name);
        programs_.emplace(name, std::move(body));
        program_names_.push_back(name);
    }

    bool has_rule(const std::string& name) const { return rules_.count(name) > 0; }

    const Rule& rule(const std::string& name) const {
        auto it = rules_.find(name);
        if (it == rules_.end()) throw ResolveError("unknown rule: " + name);
        return it->second;
    }

    /// True for declared names and their "-" negations.
    bool has_constraint(const std::string& name) const {
        if (constraints_.count(name)) return true;
        if (name.size() > 1 && name.back() == '-')
            return constraints_.count(name.substr(0, name.size() - 1)) > 0;
        return false;
    }

    ConstraintPtr constraint(const std::string& name) const {
        if (auto it = constraints_.find(name); it != constraints_.end()) return it->second;
        if (name.size() > 1 && name.back() == '-') {
            auto base = constraints_.find(name.substr(0, name.size() - 1));
            if (base != constraints_.end()) return Constraint::negation(base->second);
        }
        throw ResolveError("unknown constraint: " + name);
    }

    bool has_program(const std::string& name) const { return programs_.count(name) > 0; }

    const ExprPtr& program(const std::string& name) const {
        auto it = programs_.find(name);
        if (it == programs_.end()) throw ResolveError("unknown program: " + name);
        return it->second;
    }

    const std::map<std::string, Rule>& rules() const { return rules_; }
    const std::map<std::string, ConstraintPtr>& constraints() const { return constraints_; }
    const std::map<std::string, ExprPtr>& programs() const { return programs_; }
    /// Declaration order, for deterministic printing.
    const std::vector<std::string>& program_names() const { return program_names_; }

    std::set<std::string>& referenced_orders() { return referenced_orders_; }
    const std::set<std::string>& referenced_orders() const { return referenced_orders_; }

private:
    std::map<std::string, Rule> rules_;
    std::map<std::string, ConstraintPtr> constraints_;
    std::map<std::string, ExprPtr> programs_;
    std::vector<std::string> program_names_;
    std::set<std::string> referenced_orders_;
};

} // namespace gts

#endif // GTS_SYSTEM_HPP
