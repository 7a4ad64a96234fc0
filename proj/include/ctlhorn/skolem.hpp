#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctlhorn/assertion.hpp"
#include "ctlhorn/finite_engine.hpp"
#include "ctlhorn/horn.hpp"
#include "ctlhorn/proofsys.hpp"
#include "ctlhorn/transition_system.hpp"

namespace ctlhorn {

/// Commands sharing a syntactically identical guard (after canonicalization)
/// form a guard-group; groups with more than one member are branch
/// nondeterminism sites. Havoc updates are value nondeterminism.
struct GuardGroup {
    std::string key;               // canonical guard rendering
    AssertionPtr guard;
    std::vector<int> members;      // site ids, declaration order
    std::optional<Int> pinned_pc;  // constant pc forced by the guard, if any
};

struct NondetReport {
    std::vector<GuardGroup> groups;                   // only groups with >= 2 members
    std::vector<std::pair<int, std::string>> havocs;  // (site id, variable)
    std::map<int, int> group_of;                      // site id -> index into groups
};

NondetReport find_nondet(const TransitionSystem& ts);

/// Values the `pc` variable can take, collected from equality pins in init
/// and guards plus constant pc updates. Empty when there is no pc variable.
std::vector<Int> known_locations(const TransitionSystem& ts);

/// One resolution of all nondeterminism: a selector table per group mapping
/// pc value to the member index to keep, and an affine expression per havoc
/// site given as [coefficient per state variable..., constant term].
struct SkolemChoice {
    std::vector<std::map<Int, int>> selections;
    std::vector<std::vector<Int>> havoc_exprs;
};

struct SkolemDomain {
    Int coeff_lo = -2, coeff_hi = 2;  // affine coefficients
    Int const_lo = -5, const_hi = 5;  // affine constant term
    size_t max_candidates = 256;
};

/// Deterministic candidate stream: selector tables vary first (member 0
/// before member 1, ...), havoc coefficients follow the value order
/// 0, -1, 1, -2, 2, ... Truncated at domain.max_candidates.
std::vector<SkolemChoice> enumerate_choices(const TransitionSystem& ts,
                                            const NondetReport& report,
                                            const SkolemDomain& domain = {});

std::string describe_choice(const TransitionSystem& ts, const NondetReport& report,
                            const SkolemChoice& choice);

/// Discharges every ∃-head clause into universal clauses: one totality clause
/// (the body implies some command guard) plus one clause per retained command
/// with primed variables substituted by the command's update expressions
/// (havoc slots by the chosen affine expressions) and the command's guard
/// conjoined to the body. Universal clauses, declarations and wf marks pass
/// through; rank applications keep their (substituted) argument lists.
ConstraintSystem skolemize(const ConstraintSystem& cs, const TransitionSystem& ts,
                           const NondetReport& report, const SkolemChoice& choice);

/// The finite successor relation restricted to retained commands, with havoc
/// slots resolved to the chosen affine expressions.
RestrictedRel restrict_instance(const FiniteInstance& inst, const NondetReport& report,
                                const SkolemChoice& choice);

/// A linear ranking measure delta(v) = sum coeffs_i * data_i + offset[pc].
/// Locations absent from the table contribute offset 0.
struct RankChoice {
    std::vector<std::string> data_vars;
    std::vector<Int> coeffs;     // parallel to data_vars
    std::map<Int, Int> offsets;  // location -> additive offset
};

std::string describe_rank(const std::string& rank_name, const RankChoice& rc);

/// Replaces every head application rank_k(u, u') by the concrete constraint
/// delta(u) >= 0 && delta(u) - delta(u') >= 1, case-splitting over known
/// locations when a pc argument is neither constant nor pinned by the body.
/// Rank declarations and wf marks are dropped.
ConstraintSystem apply_ranking(const ConstraintSystem& cs, const TransitionSystem& ts,
                               const std::map<std::string, RankChoice>& ranks);

struct RankDomain {
    Int coeff_lo = -8, coeff_hi = 8;
    size_t max_vectors = 100000;
};

/// Synthesizes a RankChoice per rank symbol from the decrease obligations its
/// candidate denotation induces on a finite probe instance: data coefficients
/// are enumerated smallest-absolute-first and per-location offsets solved as
/// a difference-constraint system. Returns nothing if some rank symbol has no
/// solution in the domain.
std::optional<std::map<std::string, RankChoice>> synthesize_rankings(
    const FiniteInstance& inst, const GenResult& gen, const NondetReport& report,
    const SkolemChoice& choice, const RankDomain& domain = {});

}  // namespace ctlhorn
