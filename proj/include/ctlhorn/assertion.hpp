#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctlhorn {

using Int = std::int64_t;

/// Linear integer expression: sum of coefficient*variable terms plus a constant.
/// Zero coefficients are never stored, so equal expressions compare equal.
struct LinExpr {
    std::map<std::string, Int> coeffs;
    Int constant = 0;

    static LinExpr var(const std::string& name, Int coeff = 1);
    static LinExpr lit(Int value);

    [[nodiscard]] bool is_constant() const { return coeffs.empty(); }
    [[nodiscard]] bool is_var() const;
    LinExpr& add(const LinExpr& other, Int scale = 1);
    [[nodiscard]] LinExpr scaled(Int k) const;
    [[nodiscard]] LinExpr substituted(const std::map<std::string, LinExpr>& map) const;
    [[nodiscard]] Int eval(const std::map<std::string, Int>& valuation) const;
    void collect_vars(std::set<std::string>& out) const;
};

bool operator==(const LinExpr& a, const LinExpr& b);
inline bool operator!=(const LinExpr& a, const LinExpr& b) { return !(a == b); }

enum class CmpOp { Lt, Le, Eq, Ge, Gt };

/// Canonical linear atom `lhs ⋈ rhs` where lhs carries all variable terms
/// (lhs.constant == 0) and rhs is an integer constant.
struct LinAtom {
    LinExpr lhs;
    CmpOp op = CmpOp::Eq;
    Int rhs = 0;

    static LinAtom make(LinExpr l, CmpOp op, LinExpr r);
    [[nodiscard]] bool eval(const std::map<std::string, Int>& valuation) const;
};

bool operator==(const LinAtom& a, const LinAtom& b);
inline bool operator!=(const LinAtom& a, const LinAtom& b) { return !(a == b); }

struct Assertion;
using AssertionPtr = std::shared_ptr<const Assertion>;

/// Quantifier-free boolean combination of linear atoms.
/// Values are immutable after construction and safe to share.
struct Assertion {
    enum class Kind { True, False, Atom, Not, And, Or };

    Kind kind = Kind::True;
    LinAtom atom;                    // Kind::Atom only
    std::vector<AssertionPtr> args;  // Not: 1 child; And/Or: children as written
};

AssertionPtr assr_true();
AssertionPtr assr_false();
AssertionPtr assr_atom(LinAtom a);
AssertionPtr assr_cmp(LinExpr l, CmpOp op, LinExpr r);
AssertionPtr assr_not(AssertionPtr a);
AssertionPtr assr_and(std::vector<AssertionPtr> args);  // 0 args -> true, 1 -> that arg
AssertionPtr assr_or(std::vector<AssertionPtr> args);   // 0 args -> false, 1 -> that arg

bool assr_eq(const AssertionPtr& a, const AssertionPtr& b);
bool eval_assertion(const AssertionPtr& a, const std::map<std::string, Int>& valuation);

/// Theory negation: the result contains no Not nodes (negation is pushed into
/// the atoms; ¬(a = c) becomes a < c ∨ a > c).
AssertionPtr negate_assertion(const AssertionPtr& a);

AssertionPtr subst_assertion(const AssertionPtr& a, const std::map<std::string, LinExpr>& map);
void collect_vars(const AssertionPtr& a, std::set<std::string>& out);

/// Canonical form for guard comparison: flattens nested and/or, sorts and
/// dedupes children. Used only to detect syntactically identical guards.
AssertionPtr canonical_guard(const AssertionPtr& a);

std::string to_sexpr(const LinExpr& e);
std::string to_sexpr(const AssertionPtr& a);
std::string to_infix(const LinAtom& a);
std::string to_infix(const AssertionPtr& a);

/// Raised on malformed surface syntax; spans are 1-based (line, column).
struct SourceSpan {
    int line = 0;
    int col = 0;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, SourceSpan span)
        : std::runtime_error(msg), span_(span) {}
    [[nodiscard]] SourceSpan span() const { return span_; }

private:
    SourceSpan span_;
};

}  // namespace ctlhorn
