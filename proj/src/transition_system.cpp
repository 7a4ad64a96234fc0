#include "ctlhorn/transition_system.hpp"

#include <set>
#include <sstream>

namespace ctlhorn {

std::string primed(const std::string& name) { return name + "'"; }

bool is_primed(const std::string& name) {
    return !name.empty() && name.back() == '\'';
}

std::string unprimed(const std::string& name) {
    return is_primed(name) ? name.substr(0, name.size() - 1) : name;
}

AssertionPtr command_step(const TransitionSystem& ts, const GuardedCommand& cmd) {
    (void)ts;
    std::vector<AssertionPtr> conj;
    conj.push_back(cmd.guard);
    for (const auto& [name, upd] : cmd.updates) {
        if (upd.havoc) continue;
        conj.push_back(assr_cmp(LinExpr::var(primed(name)), CmpOp::Eq, upd.expr));
    }
    return assr_and(std::move(conj));
}

AssertionPtr induced_next(const TransitionSystem& ts) {
    std::vector<AssertionPtr> disj;
    disj.reserve(ts.trans.size());
    for (const auto& cmd : ts.trans) {
        disj.push_back(command_step(ts, cmd));
    }
    return assr_or(std::move(disj));
}

std::string print_system(const TransitionSystem& ts) {
    std::ostringstream os;
    os << "(system\n";
    os << "  (vars";
    for (const auto& v : ts.vars) os << " (" << v << " Int)";
    os << ")\n";
    os << "  (init " << to_sexpr(ts.init) << ")\n";
    os << "  (trans";
    for (const auto& cmd : ts.trans) {
        os << "\n    (rule " << to_sexpr(cmd.guard) << " (";
        bool first = true;
        for (const auto& [name, upd] : cmd.updates) {
            if (!first) os << " ";
            first = false;
            os << "(" << name << " " << (upd.havoc ? "*" : to_sexpr(upd.expr)) << ")";
        }
        os << "))";
    }
    os << "))\n";
    return os.str();
}

void validate(const TransitionSystem& ts) {
    std::set<std::string> declared;
    for (const auto& v : ts.vars) {
        if (is_primed(v)) {
            throw ParseError("variable name may not be primed: " + v, {});
        }
        if (!declared.insert(v).second) {
            throw ParseError("duplicate variable declaration: " + v, {});
        }
    }
    auto check_unprimed_scope = [&](const AssertionPtr& a, const std::string& where) {
        std::set<std::string> used;
        collect_vars(a, used);
        for (const auto& u : used) {
            if (is_primed(u)) {
                throw ParseError("primed variable not allowed in " + where + ": " + u, {});
            }
            if (!declared.count(u)) {
                throw ParseError("undeclared variable in " + where + ": " + u, {});
            }
        }
    };
    check_unprimed_scope(ts.init, "init");
    for (size_t i = 0; i < ts.trans.size(); ++i) {
        const auto& cmd = ts.trans[i];
        const std::string where = "rule " + std::to_string(i + 1);
        check_unprimed_scope(cmd.guard, where + " guard");
        if (cmd.updates.size() != ts.vars.size()) {
            throw ParseError(where + " must update every variable exactly once", {});
        }
        for (size_t j = 0; j < cmd.updates.size(); ++j) {
            if (cmd.updates[j].first != ts.vars[j]) {
                throw ParseError(where + " updates must follow declaration order; expected " +
                                     ts.vars[j] + ", found " + cmd.updates[j].first,
                                 {});
            }
            const Update& upd = cmd.updates[j].second;
            if (upd.havoc) continue;
            std::set<std::string> used;
            upd.expr.collect_vars(used);
            for (const auto& u : used) {
                if (is_primed(u)) {
                    throw ParseError("primed variable not allowed in update expression: " + u, {});
                }
                if (!declared.count(u)) {
                    throw ParseError("undeclared variable in update expression: " + u, {});
                }
            }
        }
        if (cmd.site_id != static_cast<int>(i)) {
            throw ParseError(where + " has inconsistent site id", {});
        }
    }
}

}  // namespace ctlhorn
