#include "ctlhorn/driver.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "ctlhorn/chc_backend.hpp"
#include "ctlhorn/normalize.hpp"
#include "ctlhorn/proofsys.hpp"

namespace ctlhorn {

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "holds";
        case Verdict::Refuted: return "refuted";
        case Verdict::NotProven: return "not-proven";
        case Verdict::DisprovenByNegation: return "disproven-by-negation";
        case Verdict::TaskError: return "error";
    }
    return "error";
}

Bounds derive_bounds(const TransitionSystem& ts, Int margin) {
    Int lo = 0, hi = 0;
    auto see = [&](Int k) {
        lo = std::min(lo, k);
        hi = std::max(hi, k);
    };
    std::function<void(const AssertionPtr&)> walk = [&](const AssertionPtr& a) {
        switch (a->kind) {
            case Assertion::Kind::Atom:
                see(a->atom.rhs);
                break;
            case Assertion::Kind::Not:
            case Assertion::Kind::And:
            case Assertion::Kind::Or:
                for (const auto& c : a->args) walk(c);
                break;
            default:
                break;
        }
    };
    walk(ts.init);
    for (const auto& cmd : ts.trans) {
        walk(cmd.guard);
        for (const auto& [var, upd] : cmd.updates) {
            (void)var;
            if (!upd.havoc) see(upd.expr.constant);
        }
    }
    Bounds b;
    for (const auto& v : ts.vars) b.intervals[v] = {lo - margin, hi + margin};
    return b;
}

namespace {

/// Derived bounds overlaid with whatever intervals the user pinned (a partial
/// --bounds specification covers only some variables).
Bounds effective_bounds(const TransitionSystem& ts, const TaskConfig& cfg) {
    Bounds b = derive_bounds(ts);
    if (cfg.bounds) {
        for (const auto& [var, iv] : cfg.bounds->intervals) b.intervals[var] = iv;
    }
    return b;
}

std::string describe_candidate(const TransitionSystem& ts, const NondetReport& report,
                               const SkolemChoice& choice,
                               const std::map<std::string, RankChoice>& ranks) {
    std::string out = describe_choice(ts, report, choice);
    for (const auto& [name, rc] : ranks) {
        out += "; " + describe_rank(name, rc);
    }
    return out;
}

TaskResult run_finite(const TransitionSystem& ts, const CtlPtr& phi, const TaskConfig& cfg) {
    TaskResult res;
    res.engine_used = "finite";

    Bounds bounds = effective_bounds(ts, cfg);
    FiniteInstance inst = build_instance(ts, bounds, cfg.state_cap);

    if (!holds(inst, phi)) {
        StateSet sat = mc_ctl(inst, phi);
        res.verdict = Verdict::Refuted;
        for (int s : inst.init_list) {
            if (!sat[s]) {
                std::ostringstream os;
                os << "fails at initial state (";
                for (size_t i = 0; i < ts.vars.size(); ++i) {
                    os << (i ? ", " : "") << ts.vars[i] << "=" << inst.states[s][i];
                }
                os << ")";
                res.detail = os.str();
                break;
            }
        }
        return res;
    }

    GenResult gen = generate(ts, phi);
    NondetReport report = find_nondet(ts);
    std::vector<SkolemChoice> choices = enumerate_choices(ts, report, cfg.skolem_domain);
    for (const SkolemChoice& choice : choices) {
        // Affine rankings make the nicest witnesses (and feed the CHC lane),
        // but they are optional here: without one the rank symbols keep their
        // fixpoint-layer interpretation, which is well founded by
        // construction.
        auto ranks = synthesize_rankings(inst, gen, report, choice, cfg.rank_domain);
        ConstraintSystem discharged = skolemize(gen.cs, ts, report, choice);
        if (ranks) discharged = apply_ranking(discharged, ts, *ranks);
        RestrictedRel rel = restrict_instance(inst, report, choice);
        CandidateSolution cand = construct_candidate(inst, gen, &rel);
        CheckResult chk = check_clauses(inst, discharged, cand);
        if (chk.valid) {
            res.verdict = Verdict::Holds;
            res.choice = choice;
            if (ranks) {
                res.candidate = describe_candidate(ts, report, choice, *ranks);
                res.rank_choices = *ranks;
            } else {
                res.candidate = describe_choice(ts, report, choice);
                if (!gen.cs.wf_marks.empty()) {
                    res.candidate += "; rank by fixpoint layers";
                }
            }
            return res;
        }
    }
    res.verdict = Verdict::NotProven;
    res.detail = "holds on the finite instance, but no discharge candidate checked out";
    return res;
}

/// Ranking candidates for one discharge choice in the CHC lane: synthesized
/// from a finite probe when one can be built, canonical guesses otherwise.
std::vector<std::map<std::string, RankChoice>> chc_rank_candidates(
    const TransitionSystem& ts, const GenResult& gen, const NondetReport& report,
    const SkolemChoice& choice, const std::optional<FiniteInstance>& probe,
    const TaskConfig& cfg) {
    bool has_rank = std::any_of(gen.cs.decls.begin(), gen.cs.decls.end(),
                                [](const PredicateSymbol& d) { return d.role == PredRole::Rank; });
    if (!has_rank) return {std::map<std::string, RankChoice>{}};
    if (probe) {
        auto ranks = synthesize_rankings(*probe, gen, report, choice, cfg.rank_domain);
        if (ranks) return {*ranks};
        // A failed probe synthesis is advisory only (the probe bounds may be
        // too tight); fall through to the canonical guesses.
    }
    // A small canonical family, identical per rank symbol.
    std::vector<std::string> data_vars;
    for (const auto& v : ts.vars) {
        if (v != "pc") data_vars.push_back(v);
    }
    std::vector<std::map<std::string, RankChoice>> out;
    std::vector<std::vector<Int>> vectors;
    vectors.emplace_back(data_vars.size(), 0);
    for (size_t i = 0; i < data_vars.size(); ++i) {
        for (Int sign : {-1, 1}) {
            std::vector<Int> v(data_vars.size(), 0);
            v[i] = sign;
            vectors.push_back(std::move(v));
        }
    }
    for (const auto& vec : vectors) {
        std::map<std::string, RankChoice> m;
        for (const auto& d : gen.cs.decls) {
            if (d.role != PredRole::Rank) continue;
            RankChoice rc;
            rc.data_vars = data_vars;
            rc.coeffs = vec;
            m.emplace(d.name, std::move(rc));
        }
        out.push_back(std::move(m));
    }
    return out;
}

TaskResult run_chc(const TransitionSystem& ts, const CtlPtr& phi, const TaskConfig& cfg) {
    TaskResult res;
    res.engine_used = "chc";

    GenResult gen = generate(ts, phi);
    ConstraintSystem grounded = ground_negations(gen.cs);
    NondetReport report = find_nondet(ts);
    std::vector<SkolemChoice> choices = enumerate_choices(ts, report, cfg.skolem_domain);

    std::optional<FiniteInstance> probe;
    try {
        Bounds bounds = effective_bounds(ts, cfg);
        probe = build_instance(ts, bounds, cfg.state_cap);
    } catch (const std::runtime_error&) {
        probe = std::nullopt;
    }

    size_t scripts = 0;
    for (const SkolemChoice& choice : choices) {
        if (scripts >= cfg.max_scripts) break;
        for (const auto& ranks :
             chc_rank_candidates(ts, gen, report, choice, probe, cfg)) {
            if (scripts >= cfg.max_scripts) break;
            ConstraintSystem discharged =
                apply_ranking(skolemize(grounded, ts, report, choice), ts, ranks);
            std::string script = emit_chc(discharged, ts);
            ++scripts;
            SolverResult sr = run_solver(cfg.solver_cmd, script, cfg.solver_timeout_ms);
            if (sr.verdict == SolverVerdict::Sat) {
                res.verdict = Verdict::Holds;
                res.candidate = describe_candidate(ts, report, choice, ranks);
                res.choice = choice;
                res.rank_choices = ranks;
                return res;
            }
            if (sr.verdict == SolverVerdict::Error) {
                res.verdict = Verdict::TaskError;
                res.detail = sr.detail;
                return res;
            }
        }
    }
    res.verdict = Verdict::NotProven;
    res.detail = scripts == 0 ? "no discharge candidate admits a ranking"
                              : "all candidate systems were rejected by the solver";
    return res;
}

}  // namespace

TaskResult run_task(const TransitionSystem& ts, const CtlPtr& phi, const TaskConfig& cfg) {
    auto start = std::chrono::steady_clock::now();
    TaskResult res;
    try {
        if (cfg.engine == "finite") {
            res = run_finite(ts, phi, cfg);
        } else if (cfg.engine == "chc") {
            res = run_chc(ts, phi, cfg);
        } else if (cfg.engine == "auto") {
            try {
                res = run_finite(ts, phi, cfg);
            } catch (const std::runtime_error& e) {
                // Typically the state cap; fall back to the symbolic lane.
                res = run_chc(ts, phi, cfg);
                if (res.detail.empty()) res.detail = std::string("finite lane: ") + e.what();
            }
        } else {
            res.verdict = Verdict::TaskError;
            res.detail = "unknown engine: " + cfg.engine;
        }
    } catch (const std::exception& e) {
        res.verdict = Verdict::TaskError;
        res.detail = e.what();
    }
    auto end = std::chrono::steady_clock::now();
    res.time_ms = std::chrono::duration<double, std::milli>(end - start).count();
    return res;
}

RunReport run_verify(const TransitionSystem& ts, const CtlPtr& phi, bool negate,
                     const TaskConfig& cfg) {
    RunReport rep;
    rep.phi = run_task(ts, phi, cfg);
    if (!negate) return rep;

    TaskResult neg;
    try {
        CtlPtr negated = negate_formula(phi);
        neg = run_task(ts, negated, cfg);
    } catch (const NonNegatableUntil& e) {
        neg.verdict = Verdict::TaskError;
        neg.detail = e.what();
    }

    if (rep.phi.verdict == Verdict::Holds && neg.verdict == Verdict::Holds) {
        rep.inconsistent = true;
    } else if (rep.phi.verdict == Verdict::NotProven && neg.verdict == Verdict::Holds) {
        rep.phi.verdict = Verdict::DisprovenByNegation;
    } else if (neg.verdict == Verdict::NotProven && rep.phi.verdict == Verdict::Holds) {
        neg.verdict = Verdict::DisprovenByNegation;
    }
    rep.negated = std::move(neg);
    return rep;
}

std::vector<std::pair<std::string, std::string>> emit_candidates(const TransitionSystem& ts,
                                                                 const CtlPtr& phi,
                                                                 const TaskConfig& cfg) {
    GenResult gen = generate(ts, phi);
    ConstraintSystem grounded = ground_negations(gen.cs);
    NondetReport report = find_nondet(ts);
    std::vector<SkolemChoice> choices = enumerate_choices(ts, report, cfg.skolem_domain);

    std::optional<FiniteInstance> probe;
    try {
        Bounds bounds = effective_bounds(ts, cfg);
        probe = build_instance(ts, bounds, cfg.state_cap);
    } catch (const std::runtime_error&) {
        probe = std::nullopt;
    }

    std::vector<std::pair<std::string, std::string>> out;
    for (const SkolemChoice& choice : choices) {
        if (out.size() >= cfg.max_scripts) break;
        for (const auto& ranks :
             chc_rank_candidates(ts, gen, report, choice, probe, cfg)) {
            if (out.size() >= cfg.max_scripts) break;
            ConstraintSystem discharged =
                apply_ranking(skolemize(grounded, ts, report, choice), ts, ranks);
            out.emplace_back(describe_candidate(ts, report, choice, ranks),
                             emit_chc(discharged, ts));
        }
    }
    return out;
}

}  // namespace ctlhorn
