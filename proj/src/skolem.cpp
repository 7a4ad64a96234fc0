#include "ctlhorn/skolem.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace ctlhorn {

namespace {

void flatten_conjuncts(const AssertionPtr& a, std::vector<AssertionPtr>& out) {
    if (a->kind == Assertion::Kind::And) {
        for (const auto& c : a->args) flatten_conjuncts(c, out);
    } else {
        out.push_back(a);
    }
}

/// Constant k when the assertion contains a top-level conjunct pc = k.
std::optional<Int> pc_pin(const AssertionPtr& a, const std::string& pc = "pc") {
    std::vector<AssertionPtr> cs;
    flatten_conjuncts(a, cs);
    for (const auto& c : cs) {
        if (c->kind != Assertion::Kind::Atom) continue;
        const LinAtom& atom = c->atom;
        if (atom.op != CmpOp::Eq) continue;
        if (atom.lhs.coeffs.size() == 1 && atom.lhs.constant == 0) {
            auto it = atom.lhs.coeffs.begin();
            if (it->first == pc && it->second == 1) return atom.rhs;
        }
    }
    return std::nullopt;
}

LinExpr affine_of(const TransitionSystem& ts, const std::vector<Int>& coeffs) {
    if (coeffs.size() != ts.vars.size() + 1) {
        throw std::logic_error("affine coefficient vector has wrong arity");
    }
    LinExpr e = LinExpr::lit(coeffs.back());
    for (size_t i = 0; i < ts.vars.size(); ++i) {
        e.add(LinExpr::var(ts.vars[i]), coeffs[i]);
    }
    return e;
}

std::string render_affine(const TransitionSystem& ts, const std::vector<Int>& coeffs) {
    std::ostringstream os;
    bool any = false;
    for (size_t i = 0; i < ts.vars.size(); ++i) {
        if (coeffs[i] == 0) continue;
        if (any) os << " + ";
        if (coeffs[i] != 1) os << coeffs[i] << "*";
        os << ts.vars[i];
        any = true;
    }
    if (coeffs.back() != 0 || !any) {
        if (any) os << " + ";
        os << coeffs.back();
    }
    return os.str();
}

std::map<std::pair<int, std::string>, int> havoc_index(const NondetReport& report) {
    std::map<std::pair<int, std::string>, int> idx;
    for (size_t h = 0; h < report.havocs.size(); ++h) {
        idx.emplace(report.havocs[h], static_cast<int>(h));
    }
    return idx;
}

int member_position(const GuardGroup& g, int site) {
    auto it = std::find(g.members.begin(), g.members.end(), site);
    return static_cast<int>(it - g.members.begin());
}

/// Symbolic retention condition of a command under a choice: nullopt when the
/// command is dropped entirely; an assertion when retention depends on pc;
/// assr_true() when retained unconditionally.
std::optional<AssertionPtr> retention_condition(const NondetReport& report,
                                                const SkolemChoice& choice, int site) {
    auto git = report.group_of.find(site);
    if (git == report.group_of.end()) return assr_true();
    const GuardGroup& g = report.groups[git->second];
    const int m = member_position(g, site);
    const auto& table = choice.selections[git->second];
    if (g.pinned_pc) {
        auto it = table.find(*g.pinned_pc);
        int sel = it == table.end() ? 0 : it->second;
        if (sel == m) return assr_true();
        return std::nullopt;
    }
    std::vector<AssertionPtr> mine, all;
    for (const auto& [loc, sel] : table) {
        AssertionPtr eq = assr_cmp(LinExpr::var("pc"), CmpOp::Eq, LinExpr::lit(loc));
        all.push_back(eq);
        if (sel == m) mine.push_back(eq);
    }
    // Member 0 also covers pc values outside the table.
    if (m == 0) mine.push_back(negate_assertion(assr_or(all)));
    if (mine.empty()) return std::nullopt;
    return assr_or(mine);
}

int retained_member(const GuardGroup& g, const std::map<Int, int>& table, Int state_pc) {
    Int key = g.pinned_pc ? *g.pinned_pc : state_pc;
    auto it = table.find(key);
    return it == table.end() ? 0 : it->second;
}

AssertionPtr conjoin(std::vector<AssertionPtr> parts) {
    std::vector<AssertionPtr> keep;
    for (auto& p : parts) {
        if (p && p->kind != Assertion::Kind::True) keep.push_back(std::move(p));
    }
    if (keep.empty()) return nullptr;
    if (keep.size() == 1) return keep[0];
    return assr_and(keep);
}

}  // namespace

NondetReport find_nondet(const TransitionSystem& ts) {
    NondetReport report;
    std::map<std::string, std::vector<int>> by_guard;
    std::vector<std::string> order;
    for (const auto& cmd : ts.trans) {
        std::string key = to_sexpr(canonical_guard(cmd.guard));
        auto [it, fresh] = by_guard.emplace(key, std::vector<int>{});
        if (fresh) order.push_back(key);
        it->second.push_back(cmd.site_id);
        for (const auto& [var, upd] : cmd.updates) {
            if (upd.havoc) report.havocs.emplace_back(cmd.site_id, var);
        }
    }
    for (const auto& key : order) {
        const auto& members = by_guard.at(key);
        if (members.size() < 2) continue;
        GuardGroup g;
        g.key = key;
        g.guard = ts.trans[members.front()].guard;
        g.members = members;
        g.pinned_pc = pc_pin(g.guard);
        for (int site : members) {
            report.group_of.emplace(site, static_cast<int>(report.groups.size()));
        }
        report.groups.push_back(std::move(g));
    }
    return report;
}

std::vector<Int> known_locations(const TransitionSystem& ts) {
    if (std::find(ts.vars.begin(), ts.vars.end(), "pc") == ts.vars.end()) return {};
    std::vector<Int> locs;
    auto add_pins = [&](const AssertionPtr& a) {
        std::vector<AssertionPtr> cs;
        flatten_conjuncts(a, cs);
        for (const auto& c : cs) {
            if (c->kind != Assertion::Kind::Atom || c->atom.op != CmpOp::Eq) continue;
            const LinAtom& atom = c->atom;
            if (atom.lhs.coeffs.size() == 1 && atom.lhs.constant == 0 &&
                atom.lhs.coeffs.begin()->first == "pc" &&
                atom.lhs.coeffs.begin()->second == 1) {
                locs.push_back(atom.rhs);
            }
        }
    };
    add_pins(ts.init);
    for (const auto& cmd : ts.trans) {
        add_pins(cmd.guard);
        for (const auto& [var, upd] : cmd.updates) {
            if (var == "pc" && !upd.havoc && upd.expr.is_constant()) {
                locs.push_back(upd.expr.constant);
            }
        }
    }
    std::sort(locs.begin(), locs.end());
    locs.erase(std::unique(locs.begin(), locs.end()), locs.end());
    return locs;
}

std::vector<SkolemChoice> enumerate_choices(const TransitionSystem& ts,
                                            const NondetReport& report,
                                            const SkolemDomain& domain) {
    // Selector tables: one cell per (group, table key), cell value = member.
    std::vector<Int> locations = known_locations(ts);
    struct Cell {
        int group;
        Int key;
        int radix;
    };
    std::vector<Cell> cells;
    for (size_t g = 0; g < report.groups.size(); ++g) {
        const GuardGroup& grp = report.groups[g];
        std::vector<Int> keys;
        if (grp.pinned_pc) {
            keys = {*grp.pinned_pc};
        } else if (!locations.empty()) {
            keys = locations;
        } else {
            keys = {0};
        }
        for (Int k : keys) {
            cells.push_back({static_cast<int>(g), k, static_cast<int>(grp.members.size())});
        }
    }

    // Havoc slots: per site a vector [coeff per var..., constant], each slot
    // running through 0, -1, 1, -2, 2, ... within its domain.
    auto ordered_values = [](Int lo, Int hi) {
        std::vector<Int> vals;
        if (lo <= 0 && 0 <= hi) vals.push_back(0);
        for (Int k = 1; k <= std::max(-lo, hi); ++k) {
            if (-k >= lo) vals.push_back(-k);
            if (k <= hi) vals.push_back(k);
        }
        return vals;
    };
    const std::vector<Int> coeff_vals = ordered_values(domain.coeff_lo, domain.coeff_hi);
    const std::vector<Int> const_vals = ordered_values(domain.const_lo, domain.const_hi);
    const size_t slots_per_havoc = ts.vars.size() + 1;

    std::vector<SkolemChoice> out;
    std::vector<int> sel_idx(cells.size(), 0);
    bool sel_done = false;
    while (!sel_done && out.size() < domain.max_candidates) {
        // Materialize the selector tables for this combination.
        std::vector<std::map<Int, int>> selections(report.groups.size());
        for (size_t i = 0; i < cells.size(); ++i) {
            selections[cells[i].group][cells[i].key] = sel_idx[i];
        }

        std::vector<size_t> hav_idx(report.havocs.size() * slots_per_havoc, 0);
        bool hav_done = false;
        while (!hav_done && out.size() < domain.max_candidates) {
            SkolemChoice choice;
            choice.selections = selections;
            for (size_t h = 0; h < report.havocs.size(); ++h) {
                std::vector<Int> vec(slots_per_havoc);
                for (size_t i = 0; i < ts.vars.size(); ++i) {
                    vec[i] = coeff_vals[hav_idx[h * slots_per_havoc + i]];
                }
                vec.back() = const_vals[hav_idx[h * slots_per_havoc + ts.vars.size()]];
                choice.havoc_exprs.push_back(std::move(vec));
            }
            out.push_back(std::move(choice));

            if (hav_idx.empty()) break;
            // Odometer: the constant slot of the first site runs fastest.
            size_t pos = 0;
            for (;; ++pos) {
                if (pos == hav_idx.size()) {
                    hav_done = true;
                    break;
                }
                // Slot order inside a site: constant, then coefficients.
                size_t site = pos / slots_per_havoc;
                size_t inner = pos % slots_per_havoc;
                size_t slot = inner == 0 ? site * slots_per_havoc + ts.vars.size()
                                         : site * slots_per_havoc + inner - 1;
                const auto& vals = inner == 0 ? const_vals : coeff_vals;
                if (++hav_idx[slot] < vals.size()) break;
                hav_idx[slot] = 0;
            }
        }

        if (cells.empty()) break;
        size_t pos = cells.size();
        while (pos > 0) {
            --pos;
            if (++sel_idx[pos] < cells[pos].radix) break;
            sel_idx[pos] = 0;
            if (pos == 0) sel_done = true;
        }
    }
    return out;
}

std::string describe_choice(const TransitionSystem& ts, const NondetReport& report,
                            const SkolemChoice& choice) {
    std::ostringstream os;
    bool first = true;
    auto sep = [&]() {
        if (!first) os << "; ";
        first = false;
    };
    for (size_t g = 0; g < report.groups.size(); ++g) {
        for (const auto& [loc, m] : choice.selections[g]) {
            sep();
            os << "sel" << (g + 1) << "@pc=" << loc << " := " << (m + 1);
        }
    }
    for (size_t h = 0; h < report.havocs.size(); ++h) {
        sep();
        os << "sk" << (h + 1) << "[" << report.havocs[h].second << "@site"
           << report.havocs[h].first << "] := " << render_affine(ts, choice.havoc_exprs[h]);
    }
    if (first) os << "(deterministic)";
    return os.str();
}

ConstraintSystem skolemize(const ConstraintSystem& cs, const TransitionSystem& ts,
                           const NondetReport& report, const SkolemChoice& choice) {
    if (choice.selections.size() != report.groups.size() ||
        choice.havoc_exprs.size() != report.havocs.size()) {
        throw StructuralError("skolem choice does not match the nondeterminism report");
    }
    auto hidx = havoc_index(report);
    ConstraintSystem out;
    out.decls = cs.decls;
    out.wf_marks = cs.wf_marks;

    for (const HornClause& clause : cs.clauses) {
        if (clause.head.exists_vars.empty()) {
            out.clauses.push_back(clause);
            continue;
        }
        // The generated shape: existentials are exactly the primed variables
        // and the head carries one next(v, v') application.
        std::vector<std::string> expect;
        expect.reserve(ts.vars.size());
        for (const auto& v : ts.vars) expect.push_back(primed(v));
        std::vector<std::string> got = clause.head.exists_vars;
        std::sort(got.begin(), got.end());
        std::vector<std::string> want = expect;
        std::sort(want.begin(), want.end());
        if (got != want) {
            throw StructuralError("existential head does not bind the primed state");
        }
        size_t next_count = 0;
        for (const auto& app : clause.head.preds) {
            if (app.pred == "next") ++next_count;
        }
        if (next_count != 1) {
            throw StructuralError("existential head must contain exactly one next application");
        }

        // Totality: whenever the body holds, some command is enabled. The
        // retained set keeps one member per group at every pc, so the union
        // of all guards is exactly the enabledness condition.
        {
            HornClause tc;
            tc.body_atoms = clause.body_atoms;
            tc.body_constraint = clause.body_constraint;
            std::vector<AssertionPtr> guards;
            guards.reserve(ts.trans.size());
            for (const auto& cmd : ts.trans) guards.push_back(cmd.guard);
            tc.head.constraint = guards.empty() ? assr_false() : assr_or(guards);
            out.clauses.push_back(std::move(tc));
        }

        for (const auto& cmd : ts.trans) {
            auto cond = retention_condition(report, choice, cmd.site_id);
            if (!cond) continue;
            std::map<std::string, LinExpr> sub;
            for (const auto& [var, upd] : cmd.updates) {
                if (upd.havoc) {
                    int h = hidx.at({cmd.site_id, var});
                    sub.emplace(primed(var), affine_of(ts, choice.havoc_exprs[h]));
                } else {
                    sub.emplace(primed(var), upd.expr);
                }
            }
            HornClause nc;
            nc.body_atoms = clause.body_atoms;
            nc.body_constraint = conjoin({clause.body_constraint, cmd.guard, *cond});
            for (const auto& app : clause.head.preds) {
                if (app.pred == "next") continue;
                PredApp na;
                na.pred = app.pred;
                na.args.reserve(app.args.size());
                for (const auto& arg : app.args) na.args.push_back(arg.substituted(sub));
                nc.head.preds.push_back(std::move(na));
            }
            if (clause.head.constraint) {
                nc.head.constraint = subst_assertion(clause.head.constraint, sub);
            }
            if (nc.head.preds.empty() && !nc.head.constraint) {
                nc.head.constraint = assr_true();
            }
            out.clauses.push_back(std::move(nc));
        }
    }
    return out;
}

RestrictedRel restrict_instance(const FiniteInstance& inst, const NondetReport& report,
                                const SkolemChoice& choice) {
    const TransitionSystem& ts = inst.ts;
    auto hidx = havoc_index(report);
    auto pc_it = std::find(ts.vars.begin(), ts.vars.end(), "pc");
    const bool has_pc = pc_it != ts.vars.end();
    const size_t pc_pos = has_pc ? static_cast<size_t>(pc_it - ts.vars.begin()) : 0;

    RestrictedRel rel;
    rel.succ.assign(inst.size(), {});
    for (size_t s = 0; s < inst.size(); ++s) {
        auto val = inst.valuation(static_cast<int>(s));
        Int state_pc = has_pc ? inst.states[s][pc_pos] : 0;
        for (size_t c = 0; c < ts.trans.size(); ++c) {
            const GuardedCommand& cmd = ts.trans[c];
            if (!eval_assertion(cmd.guard, val)) continue;
            auto git = report.group_of.find(cmd.site_id);
            if (git != report.group_of.end()) {
                const GuardGroup& g = report.groups[git->second];
                int sel = retained_member(g, choice.selections[git->second], state_pc);
                if (sel != member_position(g, cmd.site_id)) continue;
            }
            bool has_havoc = std::any_of(cmd.updates.begin(), cmd.updates.end(),
                                         [](const auto& u) { return u.second.havoc; });
            if (!has_havoc) {
                for (int t : inst.cmd_succ[c][s]) rel.succ[s].push_back(t);
            } else {
                State st(ts.vars.size());
                for (size_t i = 0; i < cmd.updates.size(); ++i) {
                    const Update& u = cmd.updates[i].second;
                    LinExpr e = u.havoc
                                    ? affine_of(ts, choice.havoc_exprs[hidx.at(
                                                        {cmd.site_id, ts.vars[i]})])
                                    : u.expr;
                    st[i] = inst.bounds.clamp(ts.vars[i], e.eval(val));
                }
                rel.succ[s].push_back(inst.index.at(st));
            }
        }
        auto& out = rel.succ[s];
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    return rel;
}

std::string describe_rank(const std::string& rank_name, const RankChoice& rc) {
    std::ostringstream os;
    std::string label = rank_name;
    if (label.rfind("rank", 0) == 0) label = "delta" + label.substr(4);
    os << label << " := ";
    bool any = false;
    for (size_t i = 0; i < rc.data_vars.size(); ++i) {
        if (rc.coeffs[i] == 0) continue;
        if (any) os << " + ";
        if (rc.coeffs[i] == 1) {
            os << rc.data_vars[i];
        } else {
            os << rc.coeffs[i] << "*" << rc.data_vars[i];
        }
        any = true;
    }
    if (!rc.offsets.empty()) {
        if (any) os << " + ";
        os << "c[pc]";
        any = true;
    }
    if (!any) os << "0";
    if (!rc.offsets.empty()) {
        os << " with";
        bool first = true;
        for (const auto& [loc, off] : rc.offsets) {
            os << (first ? " " : ", ") << "c[" << loc << "]=" << off;
            first = false;
        }
    }
    return os.str();
}

namespace {

struct OffsetCase {
    AssertionPtr cond;  // null = unconditional
    Int offset;
};

std::vector<OffsetCase> offset_cases(const LinExpr& pc_expr, const RankChoice& rc,
                                     const std::vector<Int>& locations,
                                     const std::optional<Int>& body_pinned) {
    auto lookup = [&](Int loc) {
        auto it = rc.offsets.find(loc);
        return it == rc.offsets.end() ? Int{0} : it->second;
    };
    if (rc.offsets.empty()) return {{nullptr, 0}};
    if (pc_expr.is_constant()) return {{nullptr, lookup(pc_expr.constant)}};
    if (body_pinned && pc_expr.is_var() && pc_expr.coeffs.begin()->first == "pc") {
        return {{nullptr, lookup(*body_pinned)}};
    }
    std::vector<OffsetCase> cases;
    std::vector<AssertionPtr> eqs;
    for (Int loc : locations) {
        AssertionPtr eq = assr_cmp(pc_expr, CmpOp::Eq, LinExpr::lit(loc));
        eqs.push_back(eq);
        cases.push_back({eq, lookup(loc)});
    }
    cases.push_back({negate_assertion(assr_or(eqs)), 0});
    return cases;
}

AssertionPtr delta_constraint(const PredApp& app, const RankChoice& rc,
                              const TransitionSystem& ts, const std::vector<Int>& locations,
                              const std::optional<Int>& body_pinned) {
    const size_t n = ts.vars.size();
    if (app.args.size() != 2 * n) {
        throw StructuralError("rank application must take a state pair");
    }
    std::map<std::string, size_t> pos;
    for (size_t i = 0; i < n; ++i) pos.emplace(ts.vars[i], i);
    auto data_sum = [&](size_t base) {
        LinExpr e = LinExpr::lit(0);
        for (size_t i = 0; i < rc.data_vars.size(); ++i) {
            e.add(app.args[base + pos.at(rc.data_vars[i])], rc.coeffs[i]);
        }
        return e;
    };
    LinExpr du = data_sum(0);
    LinExpr dv = data_sum(n);
    auto pc_it = pos.find("pc");
    std::vector<OffsetCase> cu, cv;
    if (pc_it == pos.end()) {
        cu = {{nullptr, 0}};
        cv = {{nullptr, 0}};
    } else {
        cu = offset_cases(app.args[pc_it->second], rc, locations, body_pinned);
        cv = offset_cases(app.args[n + pc_it->second], rc, locations, body_pinned);
    }

    std::vector<AssertionPtr> all;
    for (const auto& u : cu) {
        for (const auto& v : cv) {
            LinExpr lhs_u = du;
            lhs_u.constant += u.offset;
            LinExpr lhs_v = dv;
            lhs_v.constant += v.offset;
            LinExpr diff = lhs_u;
            diff.add(lhs_v, -1);
            AssertionPtr atoms =
                assr_and({assr_cmp(lhs_u, CmpOp::Ge, LinExpr::lit(0)),
                          assr_cmp(diff, CmpOp::Ge, LinExpr::lit(1))});
            std::vector<AssertionPtr> impl;
            if (u.cond) impl.push_back(negate_assertion(u.cond));
            if (v.cond) impl.push_back(negate_assertion(v.cond));
            if (impl.empty()) {
                all.push_back(atoms);
            } else {
                impl.push_back(atoms);
                all.push_back(assr_or(impl));
            }
        }
    }
    return assr_and(all);
}

}  // namespace

ConstraintSystem apply_ranking(const ConstraintSystem& cs, const TransitionSystem& ts,
                               const std::map<std::string, RankChoice>& ranks) {
    std::vector<Int> locations = known_locations(ts);
    ConstraintSystem out;
    for (const auto& d : cs.decls) {
        if (d.role != PredRole::Rank) out.decls.push_back(d);
    }
    for (const HornClause& clause : cs.clauses) {
        for (const auto& atom : clause.body_atoms) {
            if (ranks.count(atom.app.pred)) {
                throw StructuralError("rank application in a clause body is unsupported");
            }
        }
        std::optional<Int> pinned;
        if (clause.body_constraint) pinned = pc_pin(clause.body_constraint);

        HornClause nc = clause;
        nc.head.preds.clear();
        std::vector<AssertionPtr> extra;
        for (const auto& app : clause.head.preds) {
            auto it = ranks.find(app.pred);
            if (it == ranks.end()) {
                nc.head.preds.push_back(app);
            } else {
                extra.push_back(delta_constraint(app, it->second, ts, locations, pinned));
            }
        }
        if (!extra.empty()) {
            if (nc.head.constraint) extra.insert(extra.begin(), nc.head.constraint);
            nc.head.constraint = extra.size() == 1 ? extra[0] : assr_and(extra);
        }
        if (nc.head.preds.empty() && !nc.head.constraint && nc.head.exists_vars.empty()) {
            nc.head.constraint = assr_true();
        }
        out.clauses.push_back(std::move(nc));
    }
    return out;
}

namespace {

/// Feasibility of data coefficients `a` against the obligation pairs; on
/// success returns the per-location offsets (difference-constraint solution).
std::optional<std::map<Int, Int>> solve_offsets(
    const std::vector<Int>& adata, const std::vector<std::pair<int, int>>& pairs,
    const std::vector<int>& lefts, const std::vector<Int>& state_pc, bool has_pc) {
    if (!has_pc) {
        for (const auto& [s, t] : pairs) {
            if (adata[s] - adata[t] < 1) return std::nullopt;
        }
        for (int s : lefts) {
            if (adata[s] < 0) return std::nullopt;
        }
        return std::map<Int, Int>{};
    }
    // Constraints: c[pc(s)] >= -adata(s) for obligation sources, and
    // c[pc(s)] - c[pc(t)] >= 1 - (adata(s) - adata(t)) for pairs.
    std::map<Int, Int> c;
    for (int s : lefts) {
        Int lo = -adata[s];
        auto [it, fresh] = c.emplace(state_pc[s], lo);
        if (!fresh) it->second = std::max(it->second, lo);
    }
    struct Edge {
        Int from, to, w;  // c[to] >= c[from] + w
    };
    std::vector<Edge> edges;
    for (const auto& [s, t] : pairs) {
        Int w = 1 - (adata[s] - adata[t]);
        if (state_pc[s] == state_pc[t]) {
            if (w > 0) return std::nullopt;
            continue;
        }
        edges.push_back({state_pc[t], state_pc[s], w});
        c.emplace(state_pc[t], 0);
        c.emplace(state_pc[s], 0);
    }
    for (int s : lefts) c.emplace(state_pc[s], 0);
    const size_t rounds = c.size() + 1;
    bool changed = true;
    for (size_t r = 0; r < rounds && changed; ++r) {
        changed = false;
        for (const auto& e : edges) {
            Int need = c.at(e.from) + e.w;
            auto it = c.find(e.to);
            if (it->second < need) {
                it->second = need;
                changed = true;
            }
        }
    }
    if (changed) return std::nullopt;  // positive cycle
    return c;
}

}  // namespace

std::optional<std::map<std::string, RankChoice>> synthesize_rankings(
    const FiniteInstance& inst, const GenResult& gen, const NondetReport& report,
    const SkolemChoice& choice, const RankDomain& domain) {
    const TransitionSystem& ts = inst.ts;
    RestrictedRel rel = restrict_instance(inst, report, choice);

    std::vector<std::string> data_vars;
    std::optional<size_t> pc_pos;
    for (size_t i = 0; i < ts.vars.size(); ++i) {
        if (ts.vars[i] == "pc") {
            pc_pos = i;
        } else {
            data_vars.push_back(ts.vars[i]);
        }
    }
    std::vector<size_t> data_pos;
    for (const auto& v : data_vars) {
        data_pos.push_back(std::find(ts.vars.begin(), ts.vars.end(), v) - ts.vars.begin());
    }
    std::vector<Int> state_pc(inst.size(), 0);
    if (pc_pos) {
        for (size_t s = 0; s < inst.size(); ++s) state_pc[s] = inst.states[s][*pc_pos];
    }

    std::vector<Int> coeff_vals;
    {
        Int lo = domain.coeff_lo, hi = domain.coeff_hi;
        if (lo <= 0 && 0 <= hi) coeff_vals.push_back(0);
        for (Int k = 1; k <= std::max(-lo, hi); ++k) {
            if (-k >= lo) coeff_vals.push_back(-k);
            if (k <= hi) coeff_vals.push_back(k);
        }
    }

    std::map<std::string, RankChoice> out;
    for (const auto& decl : gen.cs.decls) {
        if (decl.role != PredRole::Rank) continue;
        const PredInfo& info = gen.info.at(decl.name);
        CtlPtr node = expand_leaves(info.formula, gen.info);
        if (node->op != CtlOp::AU && node->op != CtlOp::EU) {
            throw StructuralError("rank symbol is not attached to an until node");
        }
        const bool universal = node->op == CtlOp::AU;
        StateSet den = eval_formula(inst, node, &rel);
        StateSet rset = eval_formula(inst, node->rhs, &rel);

        std::vector<std::pair<int, int>> pairs;
        std::vector<int> lefts;
        for (size_t s = 0; s < inst.size(); ++s) {
            if (!den[s] || rset[s]) continue;
            const auto& succs = universal ? inst.succ[s] : rel.succ[s];
            if (succs.empty()) continue;
            lefts.push_back(static_cast<int>(s));
            for (int t : succs) pairs.emplace_back(static_cast<int>(s), t);
        }

        RankChoice rc;
        rc.data_vars = data_vars;
        rc.coeffs.assign(data_vars.size(), 0);
        if (pairs.empty()) {
            out.emplace(decl.name, std::move(rc));
            continue;
        }

        bool found = false;
        std::vector<size_t> idx(data_vars.size(), 0);
        size_t tried = 0;
        while (tried++ < domain.max_vectors) {
            std::vector<Int> a(data_vars.size());
            for (size_t i = 0; i < a.size(); ++i) a[i] = coeff_vals[idx[i]];
            std::vector<Int> adata(inst.size(), 0);
            for (size_t s = 0; s < inst.size(); ++s) {
                Int v = 0;
                for (size_t i = 0; i < a.size(); ++i) {
                    v += a[i] * inst.states[s][data_pos[i]];
                }
                adata[s] = v;
            }
            auto offsets = solve_offsets(adata, pairs, lefts, state_pc, pc_pos.has_value());
            if (offsets) {
                rc.coeffs = a;
                rc.offsets = std::move(*offsets);
                found = true;
                break;
            }
            // Odometer over coefficient vectors, last variable fastest.
            size_t p = idx.size();
            bool carried = true;
            while (p > 0 && carried) {
                --p;
                if (++idx[p] < coeff_vals.size()) {
                    carried = false;
                } else {
                    idx[p] = 0;
                }
            }
            if (carried) break;
            if (idx.empty()) break;
        }
        if (!found) return std::nullopt;
        out.emplace(decl.name, std::move(rc));
    }
    return out;
}

}  // namespace ctlhorn
