#pragma once

#include <string>

#include "ctlhorn/ctl.hpp"

namespace ctlhorn {

/// Parses the infix property syntax:
///
///   formula := imply
///   imply   := or ('->' imply)?          antecedent must be an assertion
///   or      := and ('||' and)*
///   and     := unary ('&&' unary)*
///   unary   := '!' unary | 'AX' unary | 'EX' unary | 'AG' unary | 'EG' unary
///            | 'AF' unary | 'EF' unary
///            | 'AU' '(' formula ',' formula ')'
///            | 'EU' '(' formula ',' formula ')'
///            | '(' formula ')' | comparison | 'true' | 'false'
///
/// Comparisons are linear: sums of `k*x`, `x`, and integer literals on both
/// sides of <, <=, =, >=, >. `!` applies eager CTL negation and can therefore
/// reject general AU/EU operands (NonNegatableUntil).
CtlPtr parse_ctl(const std::string& text);

}  // namespace ctlhorn
