#include "ctlhorn/assertion.hpp"

#include <algorithm>
#include <sstream>

namespace ctlhorn {

LinExpr LinExpr::var(const std::string& name, Int coeff) {
    LinExpr e;
    if (coeff != 0) e.coeffs[name] = coeff;
    return e;
}

LinExpr LinExpr::lit(Int value) {
    LinExpr e;
    e.constant = value;
    return e;
}

bool LinExpr::is_var() const {
    return constant == 0 && coeffs.size() == 1 && coeffs.begin()->second == 1;
}

LinExpr& LinExpr::add(const LinExpr& other, Int scale) {
    for (const auto& [name, c] : other.coeffs) {
        Int next = coeffs[name] + c * scale;
        if (next == 0) {
            coeffs.erase(name);
        } else {
            coeffs[name] = next;
        }
    }
    constant += other.constant * scale;
    return *this;
}

LinExpr LinExpr::scaled(Int k) const {
    LinExpr e;
    if (k != 0) {
        for (const auto& [name, c] : coeffs) e.coeffs[name] = c * k;
        e.constant = constant * k;
    }
    return e;
}

LinExpr LinExpr::substituted(const std::map<std::string, LinExpr>& map) const {
    LinExpr e = LinExpr::lit(constant);
    for (const auto& [name, c] : coeffs) {
        auto it = map.find(name);
        if (it != map.end()) {
            e.add(it->second, c);
        } else {
            e.add(LinExpr::var(name), c);
        }
    }
    return e;
}

Int LinExpr::eval(const std::map<std::string, Int>& valuation) const {
    Int v = constant;
    for (const auto& [name, c] : coeffs) {
        auto it = valuation.find(name);
        if (it == valuation.end()) {
            throw std::runtime_error("unbound variable in evaluation: " + name);
        }
        v += c * it->second;
    }
    return v;
}

void LinExpr::collect_vars(std::set<std::string>& out) const {
    for (const auto& [name, c] : coeffs) {
        (void)c;
        out.insert(name);
    }
}

bool operator==(const LinExpr& a, const LinExpr& b) {
    return a.constant == b.constant && a.coeffs == b.coeffs;
}

LinAtom LinAtom::make(LinExpr l, CmpOp op, LinExpr r) {
    LinAtom a;
    a.lhs = std::move(l);
    a.lhs.add(r, -1);
    a.rhs = -a.lhs.constant;
    a.lhs.constant = 0;
    a.op = op;
    return a;
}

bool LinAtom::eval(const std::map<std::string, Int>& valuation) const {
    Int v = lhs.eval(valuation);
    switch (op) {
        case CmpOp::Lt: return v < rhs;
        case CmpOp::Le: return v <= rhs;
        case CmpOp::Eq: return v == rhs;
        case CmpOp::Ge: return v >= rhs;
        case CmpOp::Gt: return v > rhs;
    }
    return false;
}

bool operator==(const LinAtom& a, const LinAtom& b) {
    return a.op == b.op && a.rhs == b.rhs && a.lhs == b.lhs;
}

namespace {

AssertionPtr make_node(Assertion::Kind kind) {
    auto node = std::make_shared<Assertion>();
    node->kind = kind;
    return node;
}

}  // namespace

AssertionPtr assr_true() {
    static const AssertionPtr t = make_node(Assertion::Kind::True);
    return t;
}

AssertionPtr assr_false() {
    static const AssertionPtr f = make_node(Assertion::Kind::False);
    return f;
}

AssertionPtr assr_atom(LinAtom a) {
    auto node = std::make_shared<Assertion>();
    node->kind = Assertion::Kind::Atom;
    node->atom = std::move(a);
    return node;
}

AssertionPtr assr_cmp(LinExpr l, CmpOp op, LinExpr r) {
    return assr_atom(LinAtom::make(std::move(l), op, std::move(r)));
}

AssertionPtr assr_not(AssertionPtr a) {
    auto node = std::make_shared<Assertion>();
    node->kind = Assertion::Kind::Not;
    node->args.push_back(std::move(a));
    return node;
}

AssertionPtr assr_and(std::vector<AssertionPtr> args) {
    if (args.empty()) return assr_true();
    if (args.size() == 1) return args.front();
    auto node = std::make_shared<Assertion>();
    node->kind = Assertion::Kind::And;
    node->args = std::move(args);
    return node;
}

AssertionPtr assr_or(std::vector<AssertionPtr> args) {
    if (args.empty()) return assr_false();
    if (args.size() == 1) return args.front();
    auto node = std::make_shared<Assertion>();
    node->kind = Assertion::Kind::Or;
    node->args = std::move(args);
    return node;
}

bool assr_eq(const AssertionPtr& a, const AssertionPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Assertion::Kind::True:
        case Assertion::Kind::False:
            return true;
        case Assertion::Kind::Atom:
            return a->atom == b->atom;
        case Assertion::Kind::Not:
        case Assertion::Kind::And:
        case Assertion::Kind::Or: {
            if (a->args.size() != b->args.size()) return false;
            for (size_t i = 0; i < a->args.size(); ++i) {
                if (!assr_eq(a->args[i], b->args[i])) return false;
            }
            return true;
        }
    }
    return false;
}

bool eval_assertion(const AssertionPtr& a, const std::map<std::string, Int>& valuation) {
    switch (a->kind) {
        case Assertion::Kind::True: return true;
        case Assertion::Kind::False: return false;
        case Assertion::Kind::Atom: return a->atom.eval(valuation);
        case Assertion::Kind::Not: return !eval_assertion(a->args[0], valuation);
        case Assertion::Kind::And:
            for (const auto& arg : a->args) {
                if (!eval_assertion(arg, valuation)) return false;
            }
            return true;
        case Assertion::Kind::Or:
            for (const auto& arg : a->args) {
                if (eval_assertion(arg, valuation)) return true;
            }
            return false;
    }
    return false;
}

namespace {

AssertionPtr negate_atom(const LinAtom& a) {
    switch (a.op) {
        case CmpOp::Lt: return assr_atom({a.lhs, CmpOp::Ge, a.rhs});
        case CmpOp::Le: return assr_atom({a.lhs, CmpOp::Gt, a.rhs});
        case CmpOp::Ge: return assr_atom({a.lhs, CmpOp::Lt, a.rhs});
        case CmpOp::Gt: return assr_atom({a.lhs, CmpOp::Le, a.rhs});
        case CmpOp::Eq:
            return assr_or({assr_atom({a.lhs, CmpOp::Lt, a.rhs}),
                            assr_atom({a.lhs, CmpOp::Gt, a.rhs})});
    }
    return assr_false();
}

}  // namespace

AssertionPtr negate_assertion(const AssertionPtr& a) {
    switch (a->kind) {
        case Assertion::Kind::True: return assr_false();
        case Assertion::Kind::False: return assr_true();
        case Assertion::Kind::Atom: return negate_atom(a->atom);
        case Assertion::Kind::Not: {
            // Double negation: rebuild the child itself in Not-free form.
            const AssertionPtr& child = a->args[0];
            return negate_assertion(negate_assertion(child));
        }
        case Assertion::Kind::And: {
            std::vector<AssertionPtr> negs;
            negs.reserve(a->args.size());
            for (const auto& arg : a->args) negs.push_back(negate_assertion(arg));
            return assr_or(std::move(negs));
        }
        case Assertion::Kind::Or: {
            std::vector<AssertionPtr> negs;
            negs.reserve(a->args.size());
            for (const auto& arg : a->args) negs.push_back(negate_assertion(arg));
            return assr_and(std::move(negs));
        }
    }
    return assr_false();
}

AssertionPtr subst_assertion(const AssertionPtr& a, const std::map<std::string, LinExpr>& map) {
    switch (a->kind) {
        case Assertion::Kind::True:
        case Assertion::Kind::False:
            return a;
        case Assertion::Kind::Atom: {
            LinExpr lhs = a->atom.lhs.substituted(map);
            return assr_atom(LinAtom::make(std::move(lhs), a->atom.op, LinExpr::lit(a->atom.rhs)));
        }
        case Assertion::Kind::Not:
            return assr_not(subst_assertion(a->args[0], map));
        case Assertion::Kind::And:
        case Assertion::Kind::Or: {
            std::vector<AssertionPtr> args;
            args.reserve(a->args.size());
            for (const auto& arg : a->args) args.push_back(subst_assertion(arg, map));
            auto node = std::make_shared<Assertion>();
            node->kind = a->kind;
            node->args = std::move(args);
            return node;
        }
    }
    return a;
}

void collect_vars(const AssertionPtr& a, std::set<std::string>& out) {
    switch (a->kind) {
        case Assertion::Kind::True:
        case Assertion::Kind::False:
            return;
        case Assertion::Kind::Atom:
            a->atom.lhs.collect_vars(out);
            return;
        case Assertion::Kind::Not:
        case Assertion::Kind::And:
        case Assertion::Kind::Or:
            for (const auto& arg : a->args) collect_vars(arg, out);
            return;
    }
}

namespace {

void flatten_into(const AssertionPtr& a, Assertion::Kind kind, std::vector<AssertionPtr>& out) {
    if (a->kind == kind) {
        for (const auto& arg : a->args) flatten_into(arg, kind, out);
    } else {
        out.push_back(canonical_guard(a));
    }
}

}  // namespace

AssertionPtr canonical_guard(const AssertionPtr& a) {
    switch (a->kind) {
        case Assertion::Kind::True:
        case Assertion::Kind::False:
        case Assertion::Kind::Atom:
            return a;
        case Assertion::Kind::Not:
            return assr_not(canonical_guard(a->args[0]));
        case Assertion::Kind::And:
        case Assertion::Kind::Or: {
            std::vector<AssertionPtr> flat;
            flatten_into(a, a->kind, flat);
            std::vector<std::pair<std::string, AssertionPtr>> keyed;
            keyed.reserve(flat.size());
            for (auto& f : flat) keyed.emplace_back(to_sexpr(f), std::move(f));
            std::sort(keyed.begin(), keyed.end(),
                      [](const auto& x, const auto& y) { return x.first < y.first; });
            keyed.erase(std::unique(keyed.begin(), keyed.end(),
                                    [](const auto& x, const auto& y) { return x.first == y.first; }),
                        keyed.end());
            std::vector<AssertionPtr> args;
            args.reserve(keyed.size());
            for (auto& [key, node] : keyed) {
                (void)key;
                args.push_back(std::move(node));
            }
            return a->kind == Assertion::Kind::And ? assr_and(std::move(args))
                                                   : assr_or(std::move(args));
        }
    }
    return a;
}

namespace {

const char* op_sexpr(CmpOp op) {
    switch (op) {
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Eq: return "=";
        case CmpOp::Ge: return ">=";
        case CmpOp::Gt: return ">";
    }
    return "?";
}

const char* op_infix(CmpOp op) {
    switch (op) {
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Eq: return "=";
        case CmpOp::Ge: return ">=";
        case CmpOp::Gt: return ">";
    }
    return "?";
}

// Renders a nonempty list of positive terms as `a + 2*b + 3`.
std::string render_terms(const std::vector<std::pair<std::string, Int>>& terms, Int constant) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [name, c] : terms) {
        if (!first) os << " + ";
        first = false;
        if (c == 1) {
            os << name;
        } else {
            os << c << "*" << name;
        }
    }
    if (constant != 0 || first) {
        if (!first) os << " + ";
        os << constant;
    }
    return os.str();
}

}  // namespace

std::string to_sexpr(const LinExpr& e) {
    if (e.coeffs.empty()) return std::to_string(e.constant);
    std::vector<std::string> parts;
    for (const auto& [name, c] : e.coeffs) {
        if (c == 1) {
            parts.push_back(name);
        } else {
            parts.push_back("(* " + std::to_string(c) + " " + name + ")");
        }
    }
    if (e.constant != 0) parts.push_back(std::to_string(e.constant));
    if (parts.size() == 1) return parts.front();
    std::string out = "(+";
    for (const auto& p : parts) out += " " + p;
    out += ")";
    return out;
}

std::string to_sexpr(const AssertionPtr& a) {
    switch (a->kind) {
        case Assertion::Kind::True: return "true";
        case Assertion::Kind::False: return "false";
        case Assertion::Kind::Atom: {
            std::ostringstream os;
            os << "(" << op_sexpr(a->atom.op) << " " << to_sexpr(a->atom.lhs) << " "
               << a->atom.rhs << ")";
            return os.str();
        }
        case Assertion::Kind::Not:
            return "(not " + to_sexpr(a->args[0]) + ")";
        case Assertion::Kind::And:
        case Assertion::Kind::Or: {
            std::string out = a->kind == Assertion::Kind::And ? "(and" : "(or";
            for (const auto& arg : a->args) out += " " + to_sexpr(arg);
            out += ")";
            return out;
        }
    }
    return "?";
}

std::string to_infix(const LinAtom& a) {
    // Move negative-coefficient terms to the right side so both sides print
    // with positive coefficients: -4*w <= -1 renders as `1 <= 4*w`.
    std::vector<std::pair<std::string, Int>> left, right;
    for (const auto& [name, c] : a.lhs.coeffs) {
        if (c > 0) {
            left.emplace_back(name, c);
        } else {
            right.emplace_back(name, -c);
        }
    }
    Int lconst = 0, rconst = 0;
    if (a.rhs >= 0) {
        rconst = a.rhs;
    } else {
        lconst = -a.rhs;
    }
    std::string ls = render_terms(left, lconst);
    std::string rs = render_terms(right, rconst);
    return ls + " " + op_infix(a.op) + " " + rs;
}

std::string to_infix(const AssertionPtr& a) {
    switch (a->kind) {
        case Assertion::Kind::True: return "true";
        case Assertion::Kind::False: return "false";
        case Assertion::Kind::Atom: return to_infix(a->atom);
        case Assertion::Kind::Not:
            return "!(" + to_infix(a->args[0]) + ")";
        case Assertion::Kind::And:
        case Assertion::Kind::Or: {
            const char* sep = a->kind == Assertion::Kind::And ? " && " : " || ";
            std::string out = "(";
            bool first = true;
            for (const auto& arg : a->args) {
                if (!first) out += sep;
                first = false;
                out += to_infix(arg);
            }
            out += ")";
            return out;
        }
    }
    return "?";
}

}  // namespace ctlhorn
