#pragma once

#include <string>

#include "ctlhorn/horn.hpp"
#include "ctlhorn/transition_system.hpp"

namespace ctlhorn {

/// Rewrites the system so no predicate occurs negated in a clause body:
/// a predicate whose positive occurrences consist of exactly one clause with
/// a pure-assertion head (its defining upper bound) is replaced by that
/// assertion, provided the defining clause's side conditions are contained in
/// every negated-occurrence body. This covers the assertion branches produced
/// for eventuality targets and Or selectors; anything else raises
/// StructuralError. Eliminated predicates lose their declarations.
ConstraintSystem ground_negations(const ConstraintSystem& cs);

/// SMT-LIB 2 HORN rendering. `init` and `next` applications are inlined as
/// the initial condition and the induced transition formula; every other
/// declared predicate becomes an uninterpreted relation. Requires a fully
/// discharged system: no existential heads, no wf marks, no negated body
/// atoms (ground first). Primed variables are suffixed `!p`. The first line
/// is exactly `; ctlhorn chc v1`.
std::string emit_chc(const ConstraintSystem& cs, const TransitionSystem& ts);

enum class SolverVerdict { Sat, Unsat, Unknown, Error };

struct SolverResult {
    SolverVerdict verdict = SolverVerdict::Error;
    std::string detail;  // first output line / failure description
};

/// Writes the script to a temp file and runs `cmd <path>` (cmd is split on
/// whitespace). The first whitespace-delimited token of stdout decides the
/// verdict; a timeout yields Unknown, a missing or failing binary Error.
SolverResult run_solver(const std::string& cmd, const std::string& script, int timeout_ms);

}  // namespace ctlhorn
