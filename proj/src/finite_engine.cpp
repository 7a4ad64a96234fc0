#include "ctlhorn/finite_engine.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "ctlhorn/horn.hpp"
#include "ctlhorn/normalize.hpp"

namespace ctlhorn {

Int Bounds::clamp(const std::string& var, Int value) const {
    auto it = intervals.find(var);
    if (it == intervals.end()) {
        throw std::runtime_error("no bounds for variable: " + var);
    }
    return std::max(it->second.first, std::min(it->second.second, value));
}

std::map<std::string, Int> FiniteInstance::valuation(int s) const {
    std::map<std::string, Int> v;
    for (size_t i = 0; i < ts.vars.size(); ++i) v.emplace(ts.vars[i], states[s][i]);
    return v;
}

std::optional<int> FiniteInstance::index_of_clamped(const State& raw) const {
    State clamped(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) {
        clamped[i] = bounds.clamp(ts.vars[i], raw[i]);
    }
    auto it = index.find(clamped);
    if (it == index.end()) return std::nullopt;
    return it->second;
}

FiniteInstance build_instance(const TransitionSystem& ts, const Bounds& bounds,
                              size_t state_cap) {
    FiniteInstance inst;
    inst.ts = ts;
    inst.bounds = bounds;

    size_t count = 1;
    std::vector<std::pair<Int, Int>> ranges;
    for (const auto& v : ts.vars) {
        auto it = bounds.intervals.find(v);
        if (it == bounds.intervals.end()) {
            throw std::runtime_error("no bounds for variable: " + v);
        }
        if (it->second.first > it->second.second) {
            throw std::runtime_error("empty bounds for variable: " + v);
        }
        size_t width = static_cast<size_t>(it->second.second - it->second.first + 1);
        if (count > state_cap / width + 1) {
            throw std::runtime_error("state cap exceeded");
        }
        count *= width;
        ranges.push_back(it->second);
    }
    if (count > state_cap) throw std::runtime_error("state cap exceeded");

    // Lexicographic enumeration in variable order.
    State cur(ts.vars.size());
    std::function<void(size_t)> enumerate = [&](size_t i) {
        if (i == ts.vars.size()) {
            inst.index.emplace(cur, static_cast<int>(inst.states.size()));
            inst.states.push_back(cur);
            return;
        }
        for (Int v = ranges[i].first; v <= ranges[i].second; ++v) {
            cur[i] = v;
            enumerate(i + 1);
        }
    };
    enumerate(0);

    const int n = static_cast<int>(inst.states.size());
    inst.init_mask.assign(n, 0);
    for (int s = 0; s < n; ++s) {
        if (eval_assertion(ts.init, inst.valuation(s))) {
            inst.init_mask[s] = 1;
            inst.init_list.push_back(s);
        }
    }

    inst.cmd_succ.assign(ts.trans.size(), {});
    inst.succ.assign(n, {});
    for (size_t c = 0; c < ts.trans.size(); ++c) {
        const GuardedCommand& cmd = ts.trans[c];
        inst.cmd_succ[c].assign(n, {});
        for (int s = 0; s < n; ++s) {
            auto val = inst.valuation(s);
            if (!eval_assertion(cmd.guard, val)) continue;
            // Deterministic updates first; havoc positions expand afterwards.
            State base(ts.vars.size());
            std::vector<size_t> havoc_positions;
            for (size_t i = 0; i < cmd.updates.size(); ++i) {
                const Update& u = cmd.updates[i].second;
                if (u.havoc) {
                    havoc_positions.push_back(i);
                } else {
                    base[i] = bounds.clamp(ts.vars[i], u.expr.eval(val));
                }
            }
            std::vector<State> succs;
            std::function<void(size_t, State&)> expand = [&](size_t h, State& st) {
                if (h == havoc_positions.size()) {
                    succs.push_back(st);
                    return;
                }
                size_t i = havoc_positions[h];
                auto range = bounds.intervals.at(ts.vars[i]);
                for (Int v = range.first; v <= range.second; ++v) {
                    st[i] = v;
                    expand(h + 1, st);
                }
            };
            expand(0, base);
            for (const State& st : succs) {
                inst.cmd_succ[c][s].push_back(inst.index.at(st));
            }
        }
    }
    for (int s = 0; s < n; ++s) {
        std::vector<int>& out = inst.succ[s];
        for (size_t c = 0; c < ts.trans.size(); ++c) {
            out.insert(out.end(), inst.cmd_succ[c][s].begin(), inst.cmd_succ[c][s].end());
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    return inst;
}

StateSet assertion_set(const FiniteInstance& inst, const AssertionPtr& a) {
    const int n = static_cast<int>(inst.size());
    StateSet out(n, 0);
    for (int s = 0; s < n; ++s) {
        if (eval_assertion(a, inst.valuation(s))) out[s] = 1;
    }
    return out;
}

namespace {

const std::vector<int>& e_succ(const FiniteInstance& inst, const RestrictedRel* rel, int s) {
    return rel ? rel->succ[s] : inst.succ[s];
}

bool all_in(const std::vector<int>& succs, const StateSet& z) {
    for (int t : succs) {
        if (!z[t]) return false;
    }
    return true;
}

bool any_in(const std::vector<int>& succs, const StateSet& z) {
    for (int t : succs) {
        if (z[t]) return true;
    }
    return false;
}

/// Least fixpoint of an until operator, returning entry layers.
/// universal = true gives the AU functional (stuck states enter at layer 0,
/// every full-relation successor must already be in); false gives EU (only
/// target states seed it, one restricted successor suffices).
std::vector<Int> until_fix(const FiniteInstance& inst, const StateSet& q, const StateSet& r,
                           bool universal, const RestrictedRel* rel) {
    const int n = static_cast<int>(inst.size());
    std::vector<Int> layer(n, kUnreachedLayer);
    for (int s = 0; s < n; ++s) {
        if (r[s] || (universal && inst.is_stuck(s))) layer[s] = 0;
    }
    StateSet in(n, 0);
    for (int s = 0; s < n; ++s) in[s] = layer[s] == 0;
    bool changed = true;
    Int round = 0;
    while (changed) {
        changed = false;
        ++round;
        for (int s = 0; s < n; ++s) {
            if (in[s] || !q[s]) continue;
            bool add;
            if (universal) {
                add = !inst.is_stuck(s) && all_in(inst.succ[s], in);
            } else {
                add = any_in(e_succ(inst, rel, s), in);
            }
            if (add) {
                layer[s] = round;
                changed = true;
            }
        }
        for (int s = 0; s < n; ++s) {
            if (layer[s] == round) in[s] = 1;
        }
    }
    return layer;
}

StateSet layers_to_set(const std::vector<Int>& layers) {
    StateSet out(layers.size(), 0);
    for (size_t s = 0; s < layers.size(); ++s) out[s] = layers[s] != kUnreachedLayer;
    return out;
}

StateSet all_states(const FiniteInstance& inst) { return StateSet(inst.size(), 1); }

}  // namespace

StateSet eval_formula(const FiniteInstance& inst, const CtlPtr& f,
                      const RestrictedRel* rel) {
    const int n = static_cast<int>(inst.size());
    switch (f->op) {
        case CtlOp::Atom:
            return assertion_set(inst, f->atom);
        case CtlOp::PredLeaf:
            throw StructuralError("eval_formula: unresolved predicate reference " + f->pred_name);
        case CtlOp::And:
        case CtlOp::Or: {
            StateSet a = eval_formula(inst, f->lhs, rel);
            StateSet b = eval_formula(inst, f->rhs, rel);
            StateSet out(n, 0);
            for (int s = 0; s < n; ++s) {
                out[s] = f->op == CtlOp::And ? (a[s] && b[s]) : (a[s] || b[s]);
            }
            return out;
        }
        case CtlOp::Imply: {
            StateSet c = assertion_set(inst, f->atom);
            StateSet b = eval_formula(inst, f->lhs, rel);
            StateSet out(n, 0);
            for (int s = 0; s < n; ++s) out[s] = !c[s] || b[s];
            return out;
        }
        case CtlOp::AX: {
            StateSet z = eval_formula(inst, f->lhs, rel);
            StateSet out(n, 0);
            for (int s = 0; s < n; ++s) out[s] = all_in(inst.succ[s], z);
            return out;
        }
        case CtlOp::EX: {
            StateSet z = eval_formula(inst, f->lhs, rel);
            StateSet out(n, 0);
            for (int s = 0; s < n; ++s) out[s] = any_in(e_succ(inst, rel, s), z);
            return out;
        }
        case CtlOp::AG:
        case CtlOp::EG: {
            StateSet q = eval_formula(inst, f->lhs, rel);
            StateSet z = q;
            bool changed = true;
            while (changed) {
                changed = false;
                for (int s = 0; s < n; ++s) {
                    if (!z[s]) continue;
                    bool keep;
                    if (f->op == CtlOp::AG) {
                        keep = all_in(inst.succ[s], z);
                    } else {
                        keep = any_in(e_succ(inst, rel, s), z);
                    }
                    if (!keep) {
                        z[s] = 0;
                        changed = true;
                    }
                }
            }
            return z;
        }
        case CtlOp::AF:
            return layers_to_set(until_fix(inst, all_states(inst),
                                           eval_formula(inst, f->lhs, rel), true, rel));
        case CtlOp::EF:
            return layers_to_set(until_fix(inst, all_states(inst),
                                           eval_formula(inst, f->lhs, rel), false, rel));
        case CtlOp::AU:
            return layers_to_set(until_fix(inst, eval_formula(inst, f->lhs, rel),
                                           eval_formula(inst, f->rhs, rel), true, rel));
        case CtlOp::EU:
            return layers_to_set(until_fix(inst, eval_formula(inst, f->lhs, rel),
                                           eval_formula(inst, f->rhs, rel), false, rel));
    }
    throw std::logic_error("eval_formula: unreachable");
}

StateSet mc_ctl(const FiniteInstance& inst, const CtlPtr& f) { return eval_formula(inst, f); }

bool holds(const FiniteInstance& inst, const CtlPtr& f) {
    StateSet z = mc_ctl(inst, f);
    for (int s : inst.init_list) {
        if (!z[s]) return false;
    }
    return true;
}

std::vector<Int> until_layers(const FiniteInstance& inst, const CtlPtr& until_node,
                              const RestrictedRel* rel) {
    switch (until_node->op) {
        case CtlOp::AU:
            return until_fix(inst, eval_formula(inst, until_node->lhs, rel),
                             eval_formula(inst, until_node->rhs, rel), true, rel);
        case CtlOp::EU:
            return until_fix(inst, eval_formula(inst, until_node->lhs, rel),
                             eval_formula(inst, until_node->rhs, rel), false, rel);
        case CtlOp::AF:
            return until_fix(inst, all_states(inst),
                             eval_formula(inst, until_node->lhs, rel), true, rel);
        case CtlOp::EF:
            return until_fix(inst, all_states(inst),
                             eval_formula(inst, until_node->lhs, rel), false, rel);
        default:
            throw StructuralError("until_layers: not an eventuality node");
    }
}

bool RankInterp::holds_pair(int u, int v) const {
    if (!by_layers) return pairs.count({u, v}) > 0;
    // States never entering the fixpoint sit above every layered state.
    const Int inf = std::numeric_limits<Int>::max();
    Int lu = layer[u] == kUnreachedLayer ? inf : layer[u];
    Int lv = layer[v] == kUnreachedLayer ? inf : layer[v];
    return lu > lv;
}

CtlPtr expand_leaves(const CtlPtr& f, const std::map<std::string, PredInfo>& info) {
    switch (f->op) {
        case CtlOp::Atom:
            return f;
        case CtlOp::PredLeaf: {
            auto it = info.find(f->pred_name);
            if (it == info.end()) {
                throw StructuralError("expand_leaves: unknown predicate " + f->pred_name);
            }
            return expand_leaves(it->second.formula, info);
        }
        case CtlOp::Imply:
            return mk_imply(f->atom, expand_leaves(f->lhs, info));
        default:
            if (f->rhs) {
                return mk_binary(f->op, expand_leaves(f->lhs, info),
                                 expand_leaves(f->rhs, info));
            }
            return mk_unary(f->op, expand_leaves(f->lhs, info));
    }
}

CandidateSolution construct_candidate(const FiniteInstance& inst, const GenResult& gen,
                                      const RestrictedRel* rel) {
    CandidateSolution cand;
    for (const auto& [name, info] : gen.info) {
        CtlPtr formula = expand_leaves(info.formula, gen.info);
        switch (info.role) {
            case PredRole::AuxP:
            case PredRole::Invariant:
            case PredRole::Selector:
                cand.sets.emplace(name, eval_formula(inst, formula, rel));
                break;
            case PredRole::Rank: {
                RankInterp interp;
                interp.by_layers = true;
                interp.layer = until_layers(inst, formula, rel);
                cand.ranks.emplace(name, std::move(interp));
                break;
            }
            case PredRole::Plumbing:
                break;
        }
    }
    return cand;
}

namespace {

/// Clause evaluation context: interprets init/next from the instance and
/// everything else from the candidate. Predicate arguments are clamped.
struct ClauseEval {
    const FiniteInstance& inst;
    const CandidateSolution& cand;

    [[nodiscard]] std::optional<State> eval_args(const std::vector<LinExpr>& args, size_t from,
                                                 size_t count,
                                                 const std::map<std::string, Int>& val) const {
        State st(count);
        for (size_t i = 0; i < count; ++i) st[i] = args[from + i].eval(val);
        return st;
    }

    [[nodiscard]] bool app_holds(const PredApp& app, const std::map<std::string, Int>& val,
                                 std::string* missing) const {
        const size_t n = inst.ts.vars.size();
        if (app.pred == "init") {
            auto st = eval_args(app.args, 0, n, val);
            auto idx = inst.index_of_clamped(*st);
            return idx && inst.init_mask[*idx];
        }
        if (app.pred == "next") {
            auto su = eval_args(app.args, 0, n, val);
            auto sv = eval_args(app.args, n, n, val);
            auto iu = inst.index_of_clamped(*su);
            auto iv = inst.index_of_clamped(*sv);
            if (!iu || !iv) return false;
            const auto& out = inst.succ[*iu];
            return std::binary_search(out.begin(), out.end(), *iv);
        }
        if (auto it = cand.ranks.find(app.pred); it != cand.ranks.end()) {
            auto su = eval_args(app.args, 0, n, val);
            auto sv = eval_args(app.args, n, n, val);
            auto iu = inst.index_of_clamped(*su);
            auto iv = inst.index_of_clamped(*sv);
            if (!iu || !iv) return false;
            return it->second.holds_pair(*iu, *iv);
        }
        auto it = cand.sets.find(app.pred);
        if (it == cand.sets.end()) {
            if (missing) *missing = app.pred;
            return false;
        }
        auto st = eval_args(app.args, 0, n, val);
        auto idx = inst.index_of_clamped(*st);
        return idx && it->second[*idx];
    }
};

bool mentions_primed(const LinExpr& e) {
    for (const auto& [name, c] : e.coeffs) {
        (void)c;
        if (is_primed(name)) return true;
    }
    return false;
}

bool mentions_primed(const AssertionPtr& a) {
    std::set<std::string> vars;
    collect_vars(a, vars);
    return std::any_of(vars.begin(), vars.end(),
                       [](const std::string& v) { return is_primed(v); });
}

bool clause_body_has_next(const HornClause& clause) {
    return std::any_of(clause.body_atoms.begin(), clause.body_atoms.end(),
                       [](const BodyAtom& a) { return a.app.pred == "next" && !a.negated; });
}

bool clause_mentions_primed(const HornClause& clause) {
    for (const auto& atom : clause.body_atoms) {
        for (const auto& arg : atom.app.args) {
            if (mentions_primed(arg)) return true;
        }
    }
    if (clause.body_constraint && mentions_primed(clause.body_constraint)) return true;
    if (clause.head.exists_vars.empty()) {
        for (const auto& app : clause.head.preds) {
            for (const auto& arg : app.args) {
                if (mentions_primed(arg)) return true;
            }
        }
        if (clause.head.constraint && mentions_primed(clause.head.constraint)) return true;
    }
    return false;
}

void merge_primed(std::map<std::string, Int>& val, const FiniteInstance& inst, int sprime) {
    for (size_t i = 0; i < inst.ts.vars.size(); ++i) {
        val[primed(inst.ts.vars[i])] = inst.states[sprime][i];
    }
}

}  // namespace

CheckResult check_clauses(const FiniteInstance& inst, const ConstraintSystem& cs,
                          const CandidateSolution& cand) {
    const int n = static_cast<int>(inst.size());
    ClauseEval ev{inst, cand};
    CheckResult result;

    for (size_t ci = 0; ci < cs.clauses.size(); ++ci) {
        const HornClause& clause = cs.clauses[ci];
        const bool has_exists = !clause.head.exists_vars.empty();
        const bool edge_quantified = !has_exists && clause_mentions_primed(clause);
        const bool via_next = clause_body_has_next(clause);

        auto body_holds = [&](const std::map<std::string, Int>& val) -> bool {
            std::string missing;
            for (const auto& atom : clause.body_atoms) {
                bool h = ev.app_holds(atom.app, val, &missing);
                if (!missing.empty()) {
                    result.valid = false;
                    result.failing_clause = static_cast<int>(ci);
                    result.detail = "no interpretation for predicate " + missing;
                    return false;
                }
                if (h == atom.negated) return false;
            }
            return !clause.body_constraint || eval_assertion(clause.body_constraint, val);
        };

        auto head_holds = [&](const std::map<std::string, Int>& val) -> bool {
            std::string missing;
            for (const auto& app : clause.head.preds) {
                if (!ev.app_holds(app, val, &missing)) return false;
            }
            return !clause.head.constraint || eval_assertion(clause.head.constraint, val);
        };

        auto fail_at = [&](int s, int sprime) {
            result.valid = false;
            result.failing_clause = static_cast<int>(ci);
            result.detail = "state " + std::to_string(s) +
                            (sprime >= 0 ? " -> " + std::to_string(sprime) : "");
        };

        if (has_exists) {
            for (int s = 0; s < n && result.valid; ++s) {
                auto val = inst.valuation(s);
                if (!body_holds(val)) continue;
                bool found = false;
                // ∃-heads in generated systems always conjoin next(v,v'), so
                // scanning the successor list is exhaustive; fall back to all
                // states for hand-built clauses.
                const std::vector<int>& range = inst.succ[s];
                std::vector<int> all;
                const std::vector<int>* scan = &range;
                bool head_has_next =
                    std::any_of(clause.head.preds.begin(), clause.head.preds.end(),
                                [](const PredApp& a) { return a.pred == "next"; });
                if (!head_has_next) {
                    all.resize(n);
                    for (int i = 0; i < n; ++i) all[i] = i;
                    scan = &all;
                }
                for (int sprime : *scan) {
                    auto val2 = val;
                    merge_primed(val2, inst, sprime);
                    if (head_holds(val2)) {
                        found = true;
                        break;
                    }
                }
                if (!found) {
                    fail_at(s, -1);
                }
            }
        } else if (edge_quantified && via_next) {
            for (int s = 0; s < n && result.valid; ++s) {
                auto val = inst.valuation(s);
                for (int sprime : inst.succ[s]) {
                    auto val2 = val;
                    merge_primed(val2, inst, sprime);
                    if (!body_holds(val2)) {
                        if (!result.valid) break;
                        continue;
                    }
                    if (!head_holds(val2)) {
                        fail_at(s, sprime);
                        break;
                    }
                }
            }
        } else if (edge_quantified) {
            for (int s = 0; s < n && result.valid; ++s) {
                auto val = inst.valuation(s);
                for (int sprime = 0; sprime < n; ++sprime) {
                    auto val2 = val;
                    merge_primed(val2, inst, sprime);
                    if (!body_holds(val2)) {
                        if (!result.valid) break;
                        continue;
                    }
                    if (!head_holds(val2)) {
                        fail_at(s, sprime);
                        break;
                    }
                }
            }
        } else {
            for (int s = 0; s < n && result.valid; ++s) {
                auto val = inst.valuation(s);
                if (!body_holds(val)) continue;
                if (!head_holds(val)) fail_at(s, -1);
            }
        }
        if (!result.valid) return result;
    }

    // Well-foundedness: layer-based interpretations decrease a fixed integer
    // measure, so only explicit pair sets need the cycle search.
    for (const auto& mark : cs.wf_marks) {
        auto it = cand.ranks.find(mark);
        if (it == cand.ranks.end()) {
            result.valid = false;
            result.wf_failure = mark;
            result.detail = "no interpretation for rank " + mark;
            return result;
        }
        const RankInterp& interp = it->second;
        if (interp.by_layers) continue;
        std::map<int, std::vector<int>> adj;
        for (const auto& [u, v] : interp.pairs) adj[u].push_back(v);
        std::map<int, int> color;  // 0 unvisited, 1 on stack, 2 done
        std::function<bool(int)> has_cycle = [&](int u) -> bool {
            color[u] = 1;
            for (int v : adj[u]) {
                if (color[v] == 1) return true;
                if (color[v] == 0 && has_cycle(v)) return true;
            }
            color[u] = 2;
            return false;
        };
        for (const auto& [u, vs] : adj) {
            (void)vs;
            if (color[u] == 0 && has_cycle(u)) {
                result.valid = false;
                result.wf_failure = mark;
                result.detail = "rank relation has a cycle";
                return result;
            }
        }
    }
    return result;
}

SolveResult solve_finite(const FiniteInstance& inst, const GenResult& gen) {
    SolveResult res;
    res.candidate = construct_candidate(inst, gen);
    res.last_check = check_clauses(inst, gen.cs, res.candidate);
    if (res.last_check.valid) {
        res.solvable = true;
        return res;
    }

    // Fallback: exhaustively retry per-pc selector tables. The denotation
    // candidate is already exact for generated systems, so this is a safety
    // net (and covers hand-modified systems with selector slack).
    std::vector<std::string> sels;
    for (const auto& d : gen.cs.decls) {
        if (d.role == PredRole::Selector) sels.push_back(d.name);
    }
    auto pc_it = std::find(inst.ts.vars.begin(), inst.ts.vars.end(), "pc");
    if (sels.empty() || pc_it == inst.ts.vars.end()) return res;
    size_t pc_pos = static_cast<size_t>(pc_it - inst.ts.vars.begin());
    std::vector<Int> pc_vals;
    for (const auto& st : inst.states) {
        if (pc_vals.empty() || pc_vals.back() != st[pc_pos]) pc_vals.push_back(st[pc_pos]);
    }
    std::sort(pc_vals.begin(), pc_vals.end());
    pc_vals.erase(std::unique(pc_vals.begin(), pc_vals.end()), pc_vals.end());

    const size_t bits = sels.size() * pc_vals.size();
    if (bits > 9) return res;  // 2^9 = 512 combination cap
    for (size_t combo = 0; combo < (size_t{1} << bits); ++combo) {
        CandidateSolution cand = res.candidate;
        size_t bit = 0;
        for (const auto& sel : sels) {
            StateSet set(inst.size(), 0);
            for (size_t s = 0; s < inst.size(); ++s) {
                size_t which = std::find(pc_vals.begin(), pc_vals.end(),
                                         inst.states[s][pc_pos]) -
                               pc_vals.begin();
                set[s] = (combo >> (bit + which)) & 1;
            }
            cand.sets[sel] = std::move(set);
            bit += pc_vals.size();
        }
        CheckResult check = check_clauses(inst, gen.cs, cand);
        if (check.valid) {
            res.solvable = true;
            res.candidate = std::move(cand);
            res.last_check = check;
            return res;
        }
    }
    return res;
}

namespace {

/// Path-semantics evaluation of one temporal operator given child sets,
/// by depth-first search with an explicit on-path set (lasso detection).
struct PathOracle {
    const FiniteInstance& inst;
    std::vector<char> on_path;

    bool eg_from(int s, const StateSet& q) {
        if (!q[s]) return false;
        if (on_path[s]) return true;  // lasso through q-states
        if (inst.is_stuck(s)) return false;
        on_path[s] = 1;
        bool ok = false;
        for (int t : inst.succ[s]) {
            if (eg_from(t, q)) {
                ok = true;
                break;
            }
        }
        on_path[s] = 0;
        return ok;
    }

    bool eu_from(int s, const StateSet& q, const StateSet& r) {
        if (r[s]) return true;
        if (!q[s] || on_path[s]) return false;
        on_path[s] = 1;
        bool ok = false;
        for (int t : inst.succ[s]) {
            if (eu_from(t, q, r)) {
                ok = true;
                break;
            }
        }
        on_path[s] = 0;
        return ok;
    }

    // Every maximal path from s reaches r (or its own end) through q-states.
    bool au_from(int s, const StateSet& q, const StateSet& r) {
        if (r[s]) return true;
        if (inst.is_stuck(s)) return true;  // the path ends; vacuous success
        if (!q[s]) return false;
        if (on_path[s]) return false;  // a loop avoiding r forever
        on_path[s] = 1;
        bool ok = true;
        for (int t : inst.succ[s]) {
            if (!au_from(t, q, r)) {
                ok = false;
                break;
            }
        }
        on_path[s] = 0;
        return ok;
    }

    bool ag_from(int s, const StateSet& q) {
        // All states reachable from s satisfy q.
        std::vector<char> seen(inst.size(), 0);
        std::vector<int> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            if (!q[u]) return false;
            for (int t : inst.succ[u]) {
                if (!seen[t]) {
                    seen[t] = 1;
                    stack.push_back(t);
                }
            }
        }
        return true;
    }
};

}  // namespace

StateSet brute_mc(const FiniteInstance& inst, const CtlPtr& f) {
    const int n = static_cast<int>(inst.size());
    switch (f->op) {
        case CtlOp::Atom:
            return assertion_set(inst, f->atom);
        case CtlOp::PredLeaf:
            throw StructuralError("brute_mc: unresolved predicate reference");
        case CtlOp::And:
        case CtlOp::Or: {
            StateSet a = brute_mc(inst, f->lhs);
            StateSet b = brute_mc(inst, f->rhs);
            StateSet out(n, 0);
            for (int s = 0; s < n; ++s) {
                out[s] = f->op == CtlOp::And ? (a[s] && b[s]) : (a[s] || b[s]);
            }
            return out;
        }
        case CtlOp::Imply: {
            StateSet c = assertion_set(inst, f->atom);
            StateSet b = brute_mc(inst, f->lhs);
            StateSet out(n, 0);
            for (int s = 0; s < n; ++s) out[s] = !c[s] || b[s];
            return out;
        }
        case CtlOp::AX:
        case CtlOp::EX: {
            StateSet z = brute_mc(inst, f->lhs);
            StateSet out(n, 0);
            for (int s = 0; s < n; ++s) {
                out[s] = f->op == CtlOp::AX ? all_in(inst.succ[s], z) : any_in(inst.succ[s], z);
            }
            return out;
        }
        default: {
            PathOracle oracle{inst, std::vector<char>(inst.size(), 0)};
            StateSet out(n, 0);
            StateSet q, r;
            switch (f->op) {
                case CtlOp::AG:
                case CtlOp::EG:
                    q = brute_mc(inst, f->lhs);
                    break;
                case CtlOp::AF:
                case CtlOp::EF:
                    q = all_states(inst);
                    r = brute_mc(inst, f->lhs);
                    break;
                case CtlOp::AU:
                case CtlOp::EU:
                    q = brute_mc(inst, f->lhs);
                    r = brute_mc(inst, f->rhs);
                    break;
                default:
                    throw std::logic_error("brute_mc: unreachable");
            }
            for (int s = 0; s < n; ++s) {
                switch (f->op) {
                    case CtlOp::AG:
                        out[s] = oracle.ag_from(s, q);
                        break;
                    case CtlOp::EG:
                        out[s] = oracle.eg_from(s, q);
                        break;
                    case CtlOp::AF:
                    case CtlOp::AU:
                        out[s] = oracle.au_from(s, q, r);
                        break;
                    case CtlOp::EF:
                    case CtlOp::EU:
                        out[s] = oracle.eu_from(s, q, r);
                        break;
                    default:
                        break;
                }
            }
            return out;
        }
    }
}

TransitionSystem random_system(std::mt19937_64& rng, const RandomConfig& cfg) {
    auto pick = [&](Int lo, Int hi) {
        return lo + static_cast<Int>(rng() % static_cast<uint64_t>(hi - lo + 1));
    };
    TransitionSystem ts;
    ts.vars = {"x", "pc"};
    const int npc = static_cast<int>(pick(2, cfg.max_pc));
    ts.init = assr_cmp(LinExpr::var("pc"), CmpOp::Eq, LinExpr::lit(1));

    auto random_guard = [&](Int at_pc) -> AssertionPtr {
        AssertionPtr base = assr_cmp(LinExpr::var("pc"), CmpOp::Eq, LinExpr::lit(at_pc));
        if (rng() % 3 == 0) {
            CmpOp op = rng() % 2 == 0 ? CmpOp::Le : CmpOp::Gt;
            return assr_and({base, assr_cmp(LinExpr::var("x"), op,
                                            LinExpr::lit(pick(0, cfg.max_data)))});
        }
        return base;
    };
    auto random_update = [&]() -> Update {
        Update u;
        switch (rng() % (cfg.allow_havoc ? 5 : 4)) {
            case 0: u.expr = LinExpr::var("x"); break;
            case 1: u.expr = LinExpr::var("x").add(LinExpr::lit(1)); break;
            case 2: u.expr = LinExpr::var("x").add(LinExpr::lit(-1)); break;
            case 3: u.expr = LinExpr::lit(pick(0, cfg.max_data)); break;
            default: u.havoc = true; break;
        }
        return u;
    };

    for (Int p = 1; p <= npc; ++p) {
        const int k = static_cast<int>(rng() % 3);  // 0..2 commands; 0 leaves stuck states
        for (int j = 0; j < k; ++j) {
            GuardedCommand cmd;
            cmd.site_id = static_cast<int>(ts.trans.size());
            cmd.guard = random_guard(p);
            Update pc_upd;
            pc_upd.expr = LinExpr::lit(pick(1, npc));
            cmd.updates.emplace_back("x", random_update());
            cmd.updates.emplace_back("pc", pc_upd);
            ts.trans.push_back(std::move(cmd));
        }
    }
    return ts;
}

Bounds random_bounds(const RandomConfig& cfg) {
    Bounds b;
    b.intervals["x"] = {0, cfg.max_data};
    b.intervals["pc"] = {1, cfg.max_pc};
    return b;
}

CtlPtr random_formula(std::mt19937_64& rng, const RandomConfig& cfg) {
    auto pick = [&](Int lo, Int hi) {
        return lo + static_cast<Int>(rng() % static_cast<uint64_t>(hi - lo + 1));
    };
    std::function<CtlPtr(int)> gen = [&](int budget) -> CtlPtr {
        if (budget <= 1 || rng() % 10 < 3) {
            switch (rng() % 3) {
                case 0:
                    return mk_ctl_atom(assr_cmp(LinExpr::var("x"),
                                                rng() % 2 ? CmpOp::Ge : CmpOp::Le,
                                                LinExpr::lit(pick(0, cfg.max_data))));
                case 1:
                    return mk_ctl_atom(assr_cmp(LinExpr::var("pc"), CmpOp::Eq,
                                                LinExpr::lit(pick(1, cfg.max_pc))));
                default:
                    return mk_ctl_atom(assr_cmp(LinExpr::var("x"), CmpOp::Gt,
                                                LinExpr::lit(pick(0, cfg.max_data))));
            }
        }
        const bool binary_ok = budget >= 3;
        const int choice = static_cast<int>(rng() % (binary_ok ? 10 : 6));
        switch (choice) {
            case 0: return mk_unary(CtlOp::AX, gen(budget - 1));
            case 1: return mk_unary(CtlOp::EX, gen(budget - 1));
            case 2: return mk_unary(CtlOp::AG, gen(budget - 1));
            case 3: return mk_unary(CtlOp::EG, gen(budget - 1));
            case 4: return mk_unary(CtlOp::AF, gen(budget - 1));
            case 5: return mk_unary(CtlOp::EF, gen(budget - 1));
            default: {
                int left = 1 + static_cast<int>(rng() % static_cast<uint64_t>(budget - 2));
                CtlPtr a = gen(left);
                CtlPtr b = gen(budget - 1 - left);
                if (cfg.allow_until && choice >= 8) {
                    return mk_binary(choice == 8 ? CtlOp::AU : CtlOp::EU, a, b);
                }
                return mk_binary(choice % 2 == 0 ? CtlOp::And : CtlOp::Or, a, b);
            }
        }
    };
    int budget = 2 + static_cast<int>(rng() % static_cast<uint64_t>(cfg.max_formula_size - 1));
    // Normalization rewrites AF/EF into AU/EU(true, .), growing the tree by a
    // node per rewrite; the configured cap is on the normalized size, so
    // resample until the result fits.
    for (;;) {
        CtlPtr f = gen(budget);
        if (formula_size(normalize(f)) <= cfg.max_formula_size) return f;
    }
}

}  // namespace ctlhorn
