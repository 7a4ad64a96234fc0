#include "ctlhorn/proofsys.hpp"

#include <cassert>

#include "ctlhorn/normalize.hpp"

namespace ctlhorn {

namespace {

std::vector<LinExpr> state_args(const TransitionSystem& ts) {
    std::vector<LinExpr> args;
    args.reserve(ts.vars.size());
    for (const auto& v : ts.vars) args.push_back(LinExpr::var(v));
    return args;
}

std::vector<LinExpr> primed_args(const TransitionSystem& ts) {
    std::vector<LinExpr> args;
    args.reserve(ts.vars.size());
    for (const auto& v : ts.vars) args.push_back(LinExpr::var(primed(v)));
    return args;
}

std::vector<LinExpr> pair_args(const TransitionSystem& ts) {
    std::vector<LinExpr> args = state_args(ts);
    for (const auto& v : ts.vars) args.push_back(LinExpr::var(primed(v)));
    return args;
}

std::vector<std::string> primed_names(const TransitionSystem& ts) {
    std::vector<std::string> names;
    names.reserve(ts.vars.size());
    for (const auto& v : ts.vars) names.push_back(primed(v));
    return names;
}

std::map<std::string, LinExpr> prime_map(const TransitionSystem& ts) {
    std::map<std::string, LinExpr> m;
    for (const auto& v : ts.vars) m.emplace(v, LinExpr::var(primed(v)));
    return m;
}

PredApp app_over_state(const GenContext& ctx, const std::string& pred) {
    return {pred, state_args(*ctx.ts)};
}

PredApp app_over_primed(const GenContext& ctx, const std::string& pred) {
    return {pred, primed_args(*ctx.ts)};
}

PredApp next_app(const GenContext& ctx) {
    return {"next", pair_args(*ctx.ts)};
}

BodyAtom pre_atom(const GenContext& ctx, const SetRef& pre) {
    return {app_over_state(ctx, pre.pred), false};
}

/// A rule child: either an unknown predicate reference or an inlined assertion.
struct QRef {
    bool is_pred = false;
    std::string pred;
    AssertionPtr assr;

    [[nodiscard]] bool is_trivially_true() const {
        return !is_pred && assr->kind == Assertion::Kind::True;
    }
};

QRef qref_of(const CtlPtr& child) {
    if (child->op == CtlOp::PredLeaf) return {true, child->pred_name, nullptr};
    return {false, "", assertion_of(child)};
}

/// Conjoins q over the unprimed state onto a clause head (schema order: q
/// comes first). q = true contributes nothing.
void head_conjoin_q(ClauseHead& head, const GenContext& ctx, const QRef& q) {
    if (q.is_trivially_true()) return;
    if (q.is_pred) {
        head.preds.insert(head.preds.begin(), app_over_state(ctx, q.pred));
    } else {
        head.constraint = head.constraint ? assr_and({q.assr, head.constraint}) : q.assr;
    }
}

void emit(GenContext& ctx, HornClause clause) {
    // An empty head means false; a fully inlined trivial child leaves an
    // explicit true instead.
    if (clause.head.preds.empty() && !clause.head.constraint &&
        clause.head.exists_vars.empty()) {
        clause.head.constraint = assr_true();
    }
    ctx.cs.clauses.push_back(std::move(clause));
}

}  // namespace

std::string GenContext::fresh_p(const CtlPtr& named_formula) {
    std::string name = "p" + std::to_string(next_p++);
    cs.decls.push_back({name, ts->vars, PredRole::AuxP});
    info.emplace(name, PredInfo{PredRole::AuxP, named_formula});
    return name;
}

std::string GenContext::fresh_inv(const CtlPtr& rule_formula) {
    std::string name = "inv" + std::to_string(next_inv++);
    cs.decls.push_back({name, ts->vars, PredRole::Invariant});
    info.emplace(name, PredInfo{PredRole::Invariant, rule_formula});
    return name;
}

std::string GenContext::fresh_rank(const CtlPtr& rule_formula) {
    std::string name = "rank" + std::to_string(next_rank++);
    std::vector<std::string> params = ts->vars;
    for (const auto& v : ts->vars) params.push_back(primed(v));
    cs.decls.push_back({name, std::move(params), PredRole::Rank});
    info.emplace(name, PredInfo{PredRole::Rank, rule_formula});
    return name;
}

std::string GenContext::fresh_sel(const CtlPtr& left_branch) {
    std::string name = "sel" + std::to_string(next_sel++);
    cs.decls.push_back({name, ts->vars, PredRole::Selector});
    info.emplace(name, PredInfo{PredRole::Selector, left_branch});
    return name;
}

GenContext make_context(const TransitionSystem& ts) {
    GenContext ctx;
    ctx.ts = &ts;
    ctx.cs.decls.push_back({"init", ts.vars, PredRole::Plumbing});
    std::vector<std::string> next_params = ts.vars;
    for (const auto& v : ts.vars) next_params.push_back(primed(v));
    ctx.cs.decls.push_back({"next", std::move(next_params), PredRole::Plumbing});
    return ctx;
}

DecompUniResult decompose_uni(GenContext& ctx, const Satisfaction& sat) {
    const CtlPtr& f = sat.formula;
    const bool eventuality = f->op == CtlOp::AF || f->op == CtlOp::EF;
    const bool unary = eventuality || f->op == CtlOp::AX || f->op == CtlOp::EX ||
                       f->op == CtlOp::AG || f->op == CtlOp::EG;
    if (!unary) throw StructuralError("decompose_uni: not a unary temporal formula");
    if (!eventuality && is_assertion(f->lhs)) {
        throw StructuralError("decompose_uni: assertion child is handled by the basic rule");
    }
    std::string q = ctx.fresh_p(f->lhs);
    DecompUniResult res;
    res.reduced = {sat.pre, mk_unary(f->op, mk_pred_leaf(q))};
    res.nested = {SetRef{q}, f->lhs};
    res.fresh = ctx.cs.decls.back();
    return res;
}

DecompBinResult decompose_bin(GenContext& ctx, const Satisfaction& sat) {
    const CtlPtr& f = sat.formula;
    DecompBinResult res;

    // Resolves one child slot: assertions inline (unless forced), PredLeaf
    // passes through, anything else gets a fresh predicate and a nested
    // satisfaction.
    auto resolve = [&](const CtlPtr& child, bool force_fresh) -> CtlPtr {
        if (child->op == CtlOp::PredLeaf) return child;
        if (!force_fresh && is_assertion(child)) return child;
        std::string q = ctx.fresh_p(child);
        res.fresh.push_back(ctx.cs.decls.back());
        res.nested.push_back({SetRef{q}, child});
        return mk_pred_leaf(q);
    };

    switch (f->op) {
        case CtlOp::AU:
        case CtlOp::EU: {
            // The eventuality target always becomes a fresh predicate: the
            // ranking argument is anchored to the states it names.
            CtlPtr q1 = resolve(f->lhs, /*force_fresh=*/false);
            CtlPtr q2 = resolve(f->rhs, /*force_fresh=*/true);
            res.reduced = Satisfaction{sat.pre, mk_binary(f->op, q1, q2)};
            return res;
        }
        case CtlOp::And: {
            for (const CtlPtr& child : {f->lhs, f->rhs}) {
                CtlPtr q = resolve(child, false);
                HornClause clause;
                clause.body_atoms.push_back(pre_atom(ctx, sat.pre));
                head_conjoin_q(clause.head, ctx, qref_of(q));
                emit(ctx, std::move(clause));
            }
            return res;
        }
        case CtlOp::Or: {
            CtlPtr q1 = resolve(f->lhs, false);
            CtlPtr q2 = resolve(f->rhs, false);
            std::string sel = ctx.fresh_sel(f->lhs);
            res.fresh.push_back(ctx.cs.decls.back());
            bool positive = true;
            for (const CtlPtr& q : {q1, q2}) {
                HornClause clause;
                clause.body_atoms.push_back(pre_atom(ctx, sat.pre));
                clause.body_atoms.push_back({app_over_state(ctx, sel), !positive});
                head_conjoin_q(clause.head, ctx, qref_of(q));
                emit(ctx, std::move(clause));
                positive = false;
            }
            return res;
        }
        default:
            throw StructuralError("decompose_bin: not a binary formula");
    }
}

void gen_basic(GenContext& ctx, const Satisfaction& sat) {
    const CtlPtr& f = sat.formula;
    const TransitionSystem& ts = *ctx.ts;

    // Init rule: the whole formula is an assertion (or a predicate reference).
    if (is_assertion(f) || f->op == CtlOp::PredLeaf) {
        HornClause clause;
        clause.body_atoms.push_back(pre_atom(ctx, sat.pre));
        head_conjoin_q(clause.head, ctx, qref_of(f));
        emit(ctx, std::move(clause));
        return;
    }

    auto primed_q_head = [&](ClauseHead& head, const QRef& q) {
        // q evaluated over the primed tuple.
        if (q.is_pred) {
            head.preds.push_back(app_over_primed(ctx, q.pred));
        } else {
            head.constraint = subst_assertion(q.assr, prime_map(ts));
        }
    };

    switch (f->op) {
        case CtlOp::AX: {
            QRef q = qref_of(f->lhs);
            HornClause clause;
            clause.body_atoms.push_back(pre_atom(ctx, sat.pre));
            clause.body_atoms.push_back({next_app(ctx), false});
            primed_q_head(clause.head, q);
            emit(ctx, std::move(clause));
            return;
        }
        case CtlOp::EX: {
            QRef q = qref_of(f->lhs);
            HornClause clause;
            clause.body_atoms.push_back(pre_atom(ctx, sat.pre));
            clause.head.exists_vars = primed_names(ts);
            clause.head.preds.push_back(next_app(ctx));
            primed_q_head(clause.head, q);
            emit(ctx, std::move(clause));
            return;
        }
        case CtlOp::AG:
        case CtlOp::EG: {
            QRef q = qref_of(f->lhs);
            std::string inv = ctx.fresh_inv(f);

            HornClause c1;
            c1.body_atoms.push_back(pre_atom(ctx, sat.pre));
            c1.head.preds.push_back(app_over_state(ctx, inv));
            emit(ctx, std::move(c1));

            HornClause c2;
            c2.body_atoms.push_back({app_over_state(ctx, inv), false});
            if (f->op == CtlOp::AG) {
                c2.body_atoms.push_back({next_app(ctx), false});
                c2.head.preds.push_back(app_over_primed(ctx, inv));
            } else {
                c2.head.exists_vars = primed_names(ts);
                c2.head.preds.push_back(next_app(ctx));
                c2.head.preds.push_back(app_over_primed(ctx, inv));
            }
            emit(ctx, std::move(c2));

            HornClause c3;
            c3.body_atoms.push_back({app_over_state(ctx, inv), false});
            head_conjoin_q(c3.head, ctx, q);
            emit(ctx, std::move(c3));
            return;
        }
        case CtlOp::AU:
        case CtlOp::EU: {
            QRef q = qref_of(f->lhs);
            QRef r = qref_of(f->rhs);
            std::string inv = ctx.fresh_inv(f);
            std::string rank = ctx.fresh_rank(f);
            ctx.cs.wf_marks.push_back(rank);

            HornClause c1;
            c1.body_atoms.push_back(pre_atom(ctx, sat.pre));
            c1.head.preds.push_back(app_over_state(ctx, inv));
            emit(ctx, std::move(c1));

            HornClause c2;
            c2.body_atoms.push_back({app_over_state(ctx, inv), false});
            if (r.is_pred) {
                c2.body_atoms.push_back({app_over_state(ctx, r.pred), true});
            } else {
                c2.body_constraint = negate_assertion(r.assr);
            }
            if (f->op == CtlOp::AU) {
                c2.body_atoms.push_back({next_app(ctx), false});
                c2.head.preds.push_back(app_over_primed(ctx, inv));
                c2.head.preds.push_back({rank, pair_args(ts)});
            } else {
                c2.head.exists_vars = primed_names(ts);
                c2.head.preds.push_back(next_app(ctx));
                c2.head.preds.push_back(app_over_primed(ctx, inv));
                c2.head.preds.push_back({rank, pair_args(ts)});
            }
            head_conjoin_q(c2.head, ctx, q);
            emit(ctx, std::move(c2));
            return;
        }
        default:
            throw StructuralError("gen_basic: formula is not basic: " + to_infix(f));
    }
}

namespace {

void descend(GenContext& ctx, const Satisfaction& sat) {
    const CtlPtr& f = sat.formula;
    if (is_assertion(f) || f->op == CtlOp::PredLeaf) {
        gen_basic(ctx, sat);
        return;
    }
    switch (f->op) {
        case CtlOp::AX:
        case CtlOp::EX:
        case CtlOp::AG:
        case CtlOp::EG: {
            if (is_assertion(f->lhs) || f->lhs->op == CtlOp::PredLeaf) {
                gen_basic(ctx, sat);
                return;
            }
            DecompUniResult r = decompose_uni(ctx, sat);
            gen_basic(ctx, r.reduced);
            descend(ctx, r.nested);
            return;
        }
        case CtlOp::AU:
        case CtlOp::EU: {
            if ((is_assertion(f->lhs) || f->lhs->op == CtlOp::PredLeaf) &&
                f->rhs->op == CtlOp::PredLeaf) {
                gen_basic(ctx, sat);
                return;
            }
            DecompBinResult r = decompose_bin(ctx, sat);
            gen_basic(ctx, *r.reduced);
            for (const auto& nested : r.nested) descend(ctx, nested);
            return;
        }
        case CtlOp::And:
        case CtlOp::Or: {
            DecompBinResult r = decompose_bin(ctx, sat);
            for (const auto& nested : r.nested) descend(ctx, nested);
            return;
        }
        default:
            throw StructuralError("descend: formula not normalized: " + to_infix(f));
    }
}

}  // namespace

GenResult generate(const TransitionSystem& ts, const CtlPtr& formula) {
    GenContext ctx = make_context(ts);
    descend(ctx, {SetRef{"init"}, normalize(formula)});
    GenResult res;
    res.cs = std::move(ctx.cs);
    res.info = std::move(ctx.info);
    return res;
}

}  // namespace ctlhorn
