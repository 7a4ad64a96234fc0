#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctlhorn/ctl.hpp"
#include "ctlhorn/horn.hpp"
#include "ctlhorn/transition_system.hpp"

namespace ctlhorn {

/// A named state set. The name "init" refers to the interpreted initial-state
/// predicate; every other name is an unknown introduced by decomposition.
struct SetRef {
    std::string pred;
};

/// The judgment (pre, next) |= formula. The formula may contain PredLeaf
/// references produced by earlier decomposition steps.
struct Satisfaction {
    SetRef pre;
    CtlPtr formula;
};

/// Everything the finite engine needs to reconstruct a candidate solution
/// for a generated predicate: which sub-formula the symbol stands for.
///   AuxP      — the named sub-formula itself
///   Invariant — the temporal node whose rule introduced the invariant
///   Rank      — the AU/EU node whose eventuality the rank witnesses
///   Selector  — the left branch of the Or node it splits
struct PredInfo {
    PredRole role = PredRole::AuxP;
    CtlPtr formula;
};

/// Accumulates declarations, clauses, and fresh-name counters during one
/// generation run. Fresh names are p1, p2, ... / inv1, ... / rank1, ... /
/// sel1, ... numbered in depth-first descent order.
struct GenContext {
    const TransitionSystem* ts = nullptr;
    ConstraintSystem cs;
    std::map<std::string, PredInfo> info;
    int next_p = 1;
    int next_inv = 1;
    int next_rank = 1;
    int next_sel = 1;

    std::string fresh_p(const CtlPtr& named_formula);
    std::string fresh_inv(const CtlPtr& rule_formula);
    std::string fresh_rank(const CtlPtr& rule_formula);
    std::string fresh_sel(const CtlPtr& left_branch);
};

GenContext make_context(const TransitionSystem& ts);

struct DecompUniResult {
    Satisfaction reduced;
    Satisfaction nested;
    PredicateSymbol fresh;
};

/// Splits (pre, next) |= f(psi) for unary f into a reduced satisfaction over
/// a fresh predicate and a nested satisfaction for psi. For AX/EX/AG/EG, psi
/// must not be an assertion (the basic rule applies directly then); for the
/// eventualities AF/EF the target is split out unconditionally, mirroring
/// the flow that introduces p2 for the assertion w >= 1.
DecompUniResult decompose_uni(GenContext& ctx, const Satisfaction& sat);

struct DecompBinResult {
    std::optional<Satisfaction> reduced;  // AU/EU only; And/Or emit directly
    std::vector<Satisfaction> nested;
    std::vector<PredicateSymbol> fresh;
};

/// Handles f(psi1, psi2) for f in {AU, EU, And, Or}. Assertion children are
/// used directly except for the AU/EU eventuality target psi2, which always
/// receives a fresh predicate. And emits pre -> child clauses; Or introduces
/// a fresh selector predicate and emits the polarity-split clauses.
DecompBinResult decompose_bin(GenContext& ctx, const Satisfaction& sat);

/// Emits the clause schema for a basic satisfaction: the formula is an
/// assertion, or a single temporal operator over assertion/PredLeaf children.
void gen_basic(GenContext& ctx, const Satisfaction& sat);

struct GenResult {
    ConstraintSystem cs;
    std::map<std::string, PredInfo> info;
};

/// Full recursive-descent constraint generation for (init, next) |= formula.
/// The input is normalized first (idempotent), so EF/AF/implications are
/// accepted. Output is deterministic.
GenResult generate(const TransitionSystem& ts, const CtlPtr& formula);

}  // namespace ctlhorn
