#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ctlhorn/ctl.hpp"
#include "ctlhorn/proofsys.hpp"
#include "ctlhorn/transition_system.hpp"

namespace ctlhorn {

/// Inclusive per-variable integer intervals.
struct Bounds {
    std::map<std::string, std::pair<Int, Int>> intervals;

    [[nodiscard]] Int clamp(const std::string& var, Int value) const;
};

using State = std::vector<Int>;       // values in ts.vars order
using StateSet = std::vector<char>;   // indexed by state index

/// Explicit finite-domain restriction of a transition system. Updates
/// saturate at the bounds, so every command stays total within the state
/// space; havoc expands to one successor per admissible value.
struct FiniteInstance {
    TransitionSystem ts;
    Bounds bounds;
    std::vector<State> states;  // lexicographic order
    std::map<State, int> index;
    std::vector<std::vector<std::vector<int>>> cmd_succ;  // [cmd][state] -> successors
    std::vector<std::vector<int>> succ;                   // union over commands, deduped
    StateSet init_mask;
    std::vector<int> init_list;

    [[nodiscard]] size_t size() const { return states.size(); }
    [[nodiscard]] bool is_stuck(int s) const { return succ[s].empty(); }
    [[nodiscard]] std::map<std::string, Int> valuation(int s) const;
    [[nodiscard]] std::optional<int> index_of_clamped(const State& raw) const;
};

FiniteInstance build_instance(const TransitionSystem& ts, const Bounds& bounds,
                              size_t state_cap = 100000);

/// A sub-relation of the instance's successor relation, fixed by a Skolem
/// candidate: existential steps may only use these edges. Universal
/// obligations keep ranging over the full relation.
struct RestrictedRel {
    std::vector<std::vector<int>> succ;  // per state, retained successors
};

StateSet assertion_set(const FiniteInstance& inst, const AssertionPtr& a);

/// Fixpoint labeling per the branching-time semantics. Stuck states satisfy
/// universal successor obligations vacuously (AX true; AG requires only the
/// invariant locally; AU succeeds) and falsify existential ones (EX, EG, EU
/// all need a successor). PredLeaf nodes are rejected.
StateSet eval_formula(const FiniteInstance& inst, const CtlPtr& f,
                      const RestrictedRel* restrict_e = nullptr);

StateSet mc_ctl(const FiniteInstance& inst, const CtlPtr& f);
bool holds(const FiniteInstance& inst, const CtlPtr& f);

/// Least-fixpoint entry layers for an until formula: layer[s] is the
/// iteration at which s entered the fixpoint, or kUnreachedLayer. The rank
/// relation "layer strictly decreases" is well founded by construction.
inline constexpr Int kUnreachedLayer = -1;
std::vector<Int> until_layers(const FiniteInstance& inst, const CtlPtr& until_node,
                              const RestrictedRel* restrict_e = nullptr);

/// Interpretation of one rank symbol: either layer-based (rank(u,u') iff
/// both layers are defined and layer[u] > layer[u']) or an explicit pair set.
struct RankInterp {
    bool by_layers = true;
    std::vector<Int> layer;
    std::set<std::pair<int, int>> pairs;

    [[nodiscard]] bool holds_pair(int u, int v) const;
};

struct CandidateSolution {
    std::map<std::string, StateSet> sets;       // unary predicates
    std::map<std::string, RankInterp> ranks;    // rank-role predicates
};

/// Generated rule formulas name earlier auxiliary predicates by leaf (the
/// invariant recorded for AG(EF p) is AG over a leaf for the inner
/// predicate). Substitutes each leaf by the formula the referenced predicate
/// denotes; the reference graph is acyclic by construction.
CtlPtr expand_leaves(const CtlPtr& f, const std::map<std::string, PredInfo>& info);

/// Builds the denotation-based candidate: every aux/invariant/selector
/// predicate gets the state set of the sub-formula recorded at generation
/// time, every rank gets the until-layer decrease relation.
CandidateSolution construct_candidate(const FiniteInstance& inst, const GenResult& gen,
                                      const RestrictedRel* restrict_e = nullptr);

struct CheckResult {
    bool valid = true;
    int failing_clause = -1;   // index into cs.clauses, or -1
    std::string wf_failure;    // rank name whose graph has a cycle, or empty
    std::string detail;
};

/// Exhaustive clause check over all in-bounds states (edge-quantified
/// clauses over all transition edges). Predicate arguments are evaluated and
/// clamped to the bounds before membership tests, mirroring the instance's
/// saturating updates. init/next are interpreted from the instance itself.
CheckResult check_clauses(const FiniteInstance& inst, const ConstraintSystem& cs,
                          const CandidateSolution& cand);

struct SolveResult {
    bool solvable = false;
    CandidateSolution candidate;
    CheckResult last_check;
};

/// Decision procedure at finite scale: checks the constructed candidate,
/// then falls back to exhaustive per-pc selector-table enumeration before
/// declaring the system unsolvable.
SolveResult solve_finite(const FiniteInstance& inst, const GenResult& gen);

/// Reference oracle for tests: path-semantics evaluation by explicit DFS
/// with lasso detection. Exponential; intended for instances of ~8 states.
StateSet brute_mc(const FiniteInstance& inst, const CtlPtr& f);

struct RandomConfig {
    int max_pc = 4;          // pc ranges over 1..max_pc
    Int max_data = 5;        // data variable ranges over 0..max_data
    int max_formula_size = 9;  // cap on formula_size after normalize()
    bool allow_until = false;  // general AU/EU (outside the negatable fragment)
    bool allow_havoc = true;
};

TransitionSystem random_system(std::mt19937_64& rng, const RandomConfig& cfg);
Bounds random_bounds(const RandomConfig& cfg);
CtlPtr random_formula(std::mt19937_64& rng, const RandomConfig& cfg);

}  // namespace ctlhorn
