#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ctlhorn/assertion.hpp"

namespace ctlhorn {

/// Right-hand side of one variable in a guarded command: either a linear
/// expression over the pre-state, or a havoc (unconstrained fresh value).
struct Update {
    bool havoc = false;
    LinExpr expr;
};

/// `guard -> (x1 := e1, ..., xn := en)`. Updates are stored in declaration
/// order of the system variables and cover every variable exactly once.
struct GuardedCommand {
    AssertionPtr guard;
    std::vector<std::pair<std::string, Update>> updates;
    int site_id = 0;  // position within TransitionSystem::trans
};

struct TransitionSystem {
    std::vector<std::string> vars;
    AssertionPtr init;
    std::vector<GuardedCommand> trans;
};

std::string primed(const std::string& name);
bool is_primed(const std::string& name);
std::string unprimed(const std::string& name);

/// One-shot transition relation: the disjunction over commands of
/// guard ∧ ⋀ x' = e (havoc variables contribute no conjunct). An empty
/// command list yields false.
AssertionPtr induced_next(const TransitionSystem& ts);

/// Transition formula of a single command, same shape as induced_next.
AssertionPtr command_step(const TransitionSystem& ts, const GuardedCommand& cmd);

std::string print_system(const TransitionSystem& ts);

/// Checks declaration/use consistency; throws ParseError on violation.
void validate(const TransitionSystem& ts);

}  // namespace ctlhorn
