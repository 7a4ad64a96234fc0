#pragma once

#include <string>
#include <vector>

#include "ctlhorn/assertion.hpp"

namespace ctlhorn {

/// Raised when a constraint system violates the structural shape an
/// operation requires (e.g. residual existentials at CHC emission time).
class StructuralError : public std::runtime_error {
public:
    explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

enum class PredRole {
    Plumbing,   // init / next
    AuxP,       // p<k>: intermediate sub-formula predicates
    Invariant,  // inv<k>
    Rank,       // rank<k>: binary relation over (state, state')
    Selector,   // sel<k>: disjunction choice
};

struct PredicateSymbol {
    std::string name;
    std::vector<std::string> params;  // formal parameter names, for display
    PredRole role = PredRole::AuxP;
};

struct PredApp {
    std::string pred;
    std::vector<LinExpr> args;
};

bool operator==(const PredApp& a, const PredApp& b);

/// One literal in a clause body: a predicate application, possibly negated.
struct BodyAtom {
    PredApp app;
    bool negated = false;
};

/// Clause head: an optional existential prefix binding primed variables,
/// a conjunction of predicate applications, and an optional constraint.
/// All three parts are conjoined; an empty head denotes `false`.
struct ClauseHead {
    std::vector<std::string> exists_vars;
    std::vector<PredApp> preds;
    AssertionPtr constraint;  // may be null (absent)
};

struct HornClause {
    std::vector<BodyAtom> body_atoms;
    AssertionPtr body_constraint;  // may be null (absent)
    ClauseHead head;
};

/// Forall-exists constraint system with well-foundedness side conditions:
/// the named rank predicates must be interpreted by well-founded relations.
struct ConstraintSystem {
    std::vector<PredicateSymbol> decls;
    std::vector<HornClause> clauses;
    std::vector<std::string> wf_marks;
};

const PredicateSymbol* find_decl(const ConstraintSystem& cs, const std::string& name);

std::string to_string(const PredApp& app);
std::string to_string(const HornClause& clause);
std::string to_string(const ConstraintSystem& cs);

}  // namespace ctlhorn
