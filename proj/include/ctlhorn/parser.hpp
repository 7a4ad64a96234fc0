#pragma once

#include <string>

#include "ctlhorn/assertion.hpp"
#include "ctlhorn/transition_system.hpp"

namespace ctlhorn {

/// Parses the s-expression system syntax:
///
///   (system
///     (vars (x Int) (y Int))
///     (init (= x 0))
///     (trans
///       (rule (>= x 0) ((x (+ x 1)) (y *)))))
///
/// Update expressions admit (+ e...), (- e...), (* k x), integers, and
/// variables; `*` denotes havoc. Throws ParseError with a 1-based source
/// span on malformed input.
TransitionSystem parse_system(const std::string& text);

/// Parses a standalone s-expression assertion over the given text, e.g.
/// (and (= pc 1) (>= w 2)). The same expression grammar as parse_system.
AssertionPtr parse_assertion_sexpr(const std::string& text);

}  // namespace ctlhorn
