#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctlhorn/ctl.hpp"
#include "ctlhorn/finite_engine.hpp"
#include "ctlhorn/skolem.hpp"
#include "ctlhorn/transition_system.hpp"

namespace ctlhorn {

enum class Verdict {
    Holds,                 // certificate found
    Refuted,               // false on the (finite) instance
    NotProven,             // no certificate within the template space
    DisprovenByNegation,   // the dual task produced a certificate
    TaskError,             // this task could not be processed
};

std::string verdict_name(Verdict v);

struct TaskConfig {
    std::string engine = "auto";  // finite | chc | auto
    std::optional<Bounds> bounds;
    std::string solver_cmd = "z3";
    SkolemDomain skolem_domain;
    RankDomain rank_domain;
    int solver_timeout_ms = 60000;
    size_t state_cap = 100000;
    size_t max_scripts = 16;  // chc lane: candidate scripts per task
};

struct TaskResult {
    Verdict verdict = Verdict::NotProven;
    std::string candidate;  // human-readable witness when Holds
    std::string detail;
    double time_ms = 0.0;
    std::string engine_used;
    // Structured witness (finite lane, verdict == Holds).
    std::optional<SkolemChoice> choice;
    std::map<std::string, RankChoice> rank_choices;
};

struct RunReport {
    TaskResult phi;
    std::optional<TaskResult> negated;
    bool inconsistent = false;  // both tasks claim Holds on a nonempty init
};

/// One interval for every variable, spanning all integer constants occurring
/// in the system widened by `margin` (and always containing [0, 0]).
Bounds derive_bounds(const TransitionSystem& ts, Int margin = 1);

TaskResult run_task(const TransitionSystem& ts, const CtlPtr& phi, const TaskConfig& cfg);

/// Runs phi, and its negation when `negate` is set, then reconciles the two
/// verdicts (a certified negation downgrades NotProven to
/// DisprovenByNegation; two Holds verdicts flag an internal inconsistency).
RunReport run_verify(const TransitionSystem& ts, const CtlPtr& phi, bool negate,
                     const TaskConfig& cfg);

/// The CHC scripts for the first `cfg.max_scripts` discharge candidates, as
/// (candidate description, script) pairs, without invoking any solver.
std::vector<std::pair<std::string, std::string>> emit_candidates(const TransitionSystem& ts,
                                                                 const CtlPtr& phi,
                                                                 const TaskConfig& cfg);

}  // namespace ctlhorn
