#include "ctlhorn/horn.hpp"

#include <sstream>

namespace ctlhorn {

bool operator==(const PredApp& a, const PredApp& b) {
    return a.pred == b.pred && a.args == b.args;
}

const PredicateSymbol* find_decl(const ConstraintSystem& cs, const std::string& name) {
    for (const auto& d : cs.decls) {
        if (d.name == name) return &d;
    }
    return nullptr;
}

namespace {

std::string expr_str(const LinExpr& e) {
    // Plain variables stay bare; anything compound uses the infix atom form.
    if (e.is_var()) return e.coeffs.begin()->first;
    if (e.is_constant()) return std::to_string(e.constant);
    std::vector<std::pair<std::string, Int>> terms(e.coeffs.begin(), e.coeffs.end());
    std::ostringstream os;
    bool first = true;
    for (const auto& [name, c] : terms) {
        if (c > 0 && !first) os << " + ";
        if (c < 0) os << (first ? "-" : " - ");
        Int a = c < 0 ? -c : c;
        if (a != 1) os << a << "*";
        os << name;
        first = false;
    }
    if (e.constant > 0) os << " + " << e.constant;
    if (e.constant < 0) os << " - " << -e.constant;
    return os.str();
}

}  // namespace

std::string to_string(const PredApp& app) {
    std::ostringstream os;
    os << app.pred << "(";
    bool first = true;
    for (const auto& arg : app.args) {
        if (!first) os << ", ";
        first = false;
        os << expr_str(arg);
    }
    os << ")";
    return os.str();
}

std::string to_string(const HornClause& clause) {
    std::ostringstream os;
    bool first = true;
    auto sep = [&]() {
        if (!first) os << " && ";
        first = false;
    };
    for (const auto& atom : clause.body_atoms) {
        sep();
        if (atom.negated) os << "!";
        os << to_string(atom.app);
    }
    if (clause.body_constraint) {
        sep();
        os << to_infix(clause.body_constraint);
    }
    if (first) os << "true";
    os << " -> ";

    const ClauseHead& h = clause.head;
    if (!h.exists_vars.empty()) {
        os << "exists(";
        for (size_t i = 0; i < h.exists_vars.size(); ++i) {
            if (i) os << ", ";
            os << h.exists_vars[i];
        }
        os << "): ";
    }
    bool hfirst = true;
    auto hsep = [&]() {
        if (!hfirst) os << " && ";
        hfirst = false;
    };
    for (const auto& app : h.preds) {
        hsep();
        os << to_string(app);
    }
    if (h.constraint) {
        hsep();
        os << to_infix(h.constraint);
    }
    if (hfirst) os << "false";
    return os.str();
}

std::string to_string(const ConstraintSystem& cs) {
    std::ostringstream os;
    for (const auto& clause : cs.clauses) {
        os << to_string(clause) << ".\n";
    }
    for (const auto& mark : cs.wf_marks) {
        os << "wf(" << mark << ").\n";
    }
    return os.str();
}

}  // namespace ctlhorn
