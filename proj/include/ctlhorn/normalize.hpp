#pragma once

#include <stdexcept>

#include "ctlhorn/ctl.hpp"

namespace ctlhorn {

/// Negation cannot be pushed through a general until operator: there is no
/// dual of AU/EU with a non-trivial left argument in this fragment.
class NonNegatableUntil : public std::runtime_error {
public:
    explicit NonNegatableUntil(const std::string& what) : std::runtime_error(what) {}
};

/// Rewrites a formula into the generator's input fragment:
///   AF(f)      => AU(true, f)
///   EF(f)      => EU(true, f)
///   (c -> f)   => !c || f           (c is an assertion antecedent)
/// applied recursively. Idempotent.
CtlPtr normalize(const CtlPtr& f);

/// Propositional-dual negation, applied eagerly:
///   !AX f = EX !f     !EX f = AX !f
///   !AG f = EF !f     !EF f = AG !f
///   !AF f = EG !f     !EG f = AF !f
/// with De Morgan over &&/|| and theory negation on atoms. AU(true, f) and
/// EU(true, f) are treated as AF/EF; any other until operand raises
/// NonNegatableUntil.
CtlPtr negate_formula(const CtlPtr& f);

/// True when the formula contains no AF/EF/Imply nodes (i.e. normalize is the
/// identity on it).
bool is_normalized(const CtlPtr& f);

}  // namespace ctlhorn
