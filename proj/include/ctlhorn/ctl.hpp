#pragma once

#include <memory>
#include <string>

#include "ctlhorn/assertion.hpp"

namespace ctlhorn {

enum class CtlOp {
    Atom,      // leaf assertion
    PredLeaf,  // reference to an auxiliary predicate (decomposition results only)
    And,
    Or,
    Imply,     // assertion antecedent -> formula; removed by normalization
    AX,
    EX,
    AG,
    EG,
    AF,
    EF,
    AU,
    EU,
};

struct CtlFormula;
using CtlPtr = std::shared_ptr<const CtlFormula>;

/// CTL state formula over linear-arithmetic atoms. Binary temporal operators
/// store the invariant side in lhs and the eventuality target in rhs.
struct CtlFormula {
    CtlOp op = CtlOp::Atom;
    AssertionPtr atom;      // CtlOp::Atom: the leaf; CtlOp::Imply: the antecedent
    std::string pred_name;  // CtlOp::PredLeaf only
    CtlPtr lhs;
    CtlPtr rhs;
};

CtlPtr mk_ctl_atom(AssertionPtr a);
CtlPtr mk_pred_leaf(std::string pred_name);
CtlPtr mk_unary(CtlOp op, CtlPtr sub);
CtlPtr mk_binary(CtlOp op, CtlPtr lhs, CtlPtr rhs);
CtlPtr mk_imply(AssertionPtr antecedent, CtlPtr consequent);

/// Lifts an arbitrary assertion into a formula whose Atom leaves are each
/// true, false, or a single comparison; and/or structure becomes formula
/// nodes and Not is eliminated by theory negation.
CtlPtr ctl_from_assertion(const AssertionPtr& a);

bool is_assertion(const CtlPtr& f);

/// For formulas built purely from Atom/And/Or nodes: the equivalent assertion.
AssertionPtr assertion_of(const CtlPtr& f);

bool ctl_eq(const CtlPtr& a, const CtlPtr& b);

/// Node count; AG(EF(w >= 1)) has size 3.
int formula_size(const CtlPtr& f);

std::string to_infix(const CtlPtr& f);

}  // namespace ctlhorn
