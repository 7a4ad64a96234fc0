#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <string>
#include <vector>

#include "ctlhorn/ctl_parser.hpp"
#include "ctlhorn/finite_engine.hpp"
#include "ctlhorn/parser.hpp"
#include "ctlhorn/proofsys.hpp"
#include "ctlhorn/skolem.hpp"
#include "test_util.hpp"

using namespace ctlhorn;

namespace {

int clauses_with_head_pred(const ConstraintSystem& cs, const std::string& name) {
    int n = 0;
    for (const auto& cl : cs.clauses) {
        for (const auto& app : cl.head.preds) {
            if (app.pred == name) {
                ++n;
                break;
            }
        }
    }
    return n;
}

bool any_existential(const ConstraintSystem& cs) {
    for (const auto& cl : cs.clauses) {
        if (!cl.head.exists_vars.empty()) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("find_nondet: branch groups need identical guards") {
    TransitionSystem wloop = testutil::load_fixture("wloop.ts");
    NondetReport rep = find_nondet(wloop);
    REQUIRE(rep.groups.size() == 1);
    CHECK(rep.groups[0].members == std::vector<int>{4, 5});
    REQUIRE(rep.groups[0].pinned_pc.has_value());
    CHECK(*rep.groups[0].pinned_pc == 4);
    CHECK(rep.havocs.empty());
    CHECK(rep.group_of.at(4) == 0);
    CHECK(rep.group_of.at(5) == 0);
    // The two pc = 3 commands have different guards (w <= 5 vs w > 5): no group.
    CHECK(rep.group_of.count(2) == 0);
    CHECK(rep.group_of.count(3) == 0);

    // Deterministic system: nothing to resolve.
    NondetReport det = find_nondet(testutil::load_fixture("pingpong.ts"));
    CHECK(det.groups.empty());
    CHECK(det.havocs.empty());

    // Value nondeterminism: the havoc site and variable are reported.
    NondetReport hv = find_nondet(testutil::load_fixture("updates.ts"));
    CHECK(hv.groups.empty());
    REQUIRE(hv.havocs.size() == 1);
    CHECK(hv.havocs[0].first == 0);
    CHECK(hv.havocs[0].second == "u");

    NondetReport dr = find_nondet(testutil::load_fixture("drain.ts"));
    REQUIRE(dr.groups.size() == 1);
    CHECK(dr.groups[0].members == std::vector<int>{0, 1});
    CHECK(*dr.groups[0].pinned_pc == 1);
}

TEST_CASE("known_locations collects pc constants from guards, init, and updates") {
    std::vector<Int> locs = known_locations(testutil::load_fixture("wloop.ts"));
    std::vector<Int> expect;
    for (Int l = 1; l <= 11; ++l) expect.push_back(l);
    CHECK(locs == expect);
}

TEST_CASE("enumerate_choices: selector tables in member order") {
    TransitionSystem ts = testutil::load_fixture("wloop.ts");
    NondetReport rep = find_nondet(ts);
    std::vector<SkolemChoice> choices = enumerate_choices(ts, rep);
    REQUIRE(choices.size() == 2);
    REQUIRE(choices[0].selections.size() == 1);
    CHECK(choices[0].selections[0].at(4) == 0);   // keep ℓ4 -> ℓ5 first
    CHECK(choices[1].selections[0].at(4) == 1);   // then ℓ4 -> ℓ7
    CHECK(choices[0].havoc_exprs.empty());

    CHECK(describe_choice(ts, rep, choices[0]) == "sel1@pc=4 := 1");
    CHECK(describe_choice(ts, rep, choices[1]) == "sel1@pc=4 := 2");

    TransitionSystem det = testutil::load_fixture("pingpong.ts");
    NondetReport detrep = find_nondet(det);
    std::vector<SkolemChoice> one = enumerate_choices(det, detrep);
    REQUIRE(one.size() == 1);
    CHECK(describe_choice(det, detrep, one[0]) == "(deterministic)");
}

TEST_CASE("enumerate_choices: havoc expressions, zero first, capped") {
    TransitionSystem ts = testutil::load_fixture("updates.ts");
    NondetReport rep = find_nondet(ts);
    std::vector<SkolemChoice> choices = enumerate_choices(ts, rep);
    // Full affine space: 5 x 5 coefficient values x 11 constants = 275,
    // truncated at the default cap.
    CHECK(choices.size() == 256);
    REQUIRE(choices[0].havoc_exprs.size() == 1);
    // [coeff(u), coeff(pc), constant]; the zero expression comes first and the
    // constant slot varies fastest through 0, -1, 1, ...
    CHECK(choices[0].havoc_exprs[0] == std::vector<Int>{0, 0, 0});
    CHECK(choices[1].havoc_exprs[0] == std::vector<Int>{0, 0, -1});
    CHECK(choices[2].havoc_exprs[0] == std::vector<Int>{0, 0, 1});

    std::set<std::vector<Int>> seen;
    for (const auto& c : choices) seen.insert(c.havoc_exprs[0]);
    CHECK(seen.size() == choices.size());  // no duplicates

    SkolemDomain tight;
    tight.max_candidates = 7;
    CHECK(enumerate_choices(ts, rep, tight).size() == 7);
}

TEST_CASE("skolemize: existential clause becomes totality plus per-command clauses") {
    TransitionSystem ts = testutil::load_fixture("wloop.ts");
    GenResult gen = generate(ts, parse_ctl("AG(EF(w >= 1))"));
    NondetReport rep = find_nondet(ts);
    std::vector<SkolemChoice> choices = enumerate_choices(ts, rep);
    ConstraintSystem sk = skolemize(gen.cs, ts, rep, choices[0]);

    // 5 universal clauses pass through; the one existential clause becomes
    // 1 totality clause + 13 per-command clauses (site 5 is deselected).
    CHECK(sk.clauses.size() == 19);
    CHECK(!any_existential(sk));
    CHECK(sk.wf_marks == std::vector<std::string>{"rank1"});
    CHECK(find_decl(sk, "rank1") != nullptr);

    // Every discharged command clause keeps its rank application.
    CHECK(clauses_with_head_pred(sk, "rank1") == 13);

    // The totality head covers exactly the states with an enabled retained
    // command: all guards mention pc in 1..11.
    const HornClause* totality = nullptr;
    for (const auto& cl : sk.clauses) {
        if (cl.head.preds.empty() && cl.head.constraint != nullptr &&
            cl.body_atoms.size() == 2) {
            totality = &cl;
            break;
        }
    }
    REQUIRE(totality != nullptr);
    CHECK(eval_assertion(totality->head.constraint, {{"w", 0}, {"pc", 4}}));
    CHECK(eval_assertion(totality->head.constraint, {{"w", 9}, {"pc", 11}}));
    CHECK(!eval_assertion(totality->head.constraint, {{"w", 0}, {"pc", 12}}));
    CHECK(!eval_assertion(totality->head.constraint, {{"w", 0}, {"pc", 0}}));

    // The pump command's clause substitutes w+1 into the primed slots.
    LinExpr w_plus_1 = LinExpr::var("w");
    w_plus_1.add(LinExpr::lit(1));
    bool pump_seen = false;
    for (const auto& cl : sk.clauses) {
        for (const auto& app : cl.head.preds) {
            if (app.pred == "rank1" && app.args.size() == 4 &&
                app.args[2] == w_plus_1 && app.args[3] == LinExpr::lit(6)) {
                pump_seen = true;
            }
        }
    }
    CHECK(pump_seen);

    // Choice 1 retains the other branch member; same shape.
    ConstraintSystem sk2 = skolemize(gen.cs, ts, rep, choices[1]);
    CHECK(sk2.clauses.size() == 19);
    CHECK(to_string(sk) != to_string(sk2));
}

TEST_CASE("restrict_instance: only the chosen branch survives at the group site") {
    TransitionSystem ts = testutil::load_fixture("wloop.ts");
    NondetReport rep = find_nondet(ts);
    std::vector<SkolemChoice> choices = enumerate_choices(ts, rep);
    FiniteInstance inst = build_instance(ts, testutil::parse_bounds("w=-3..8,pc=1..11"));

    RestrictedRel rel = restrict_instance(inst, rep, choices[0]);
    REQUIRE(rel.succ.size() == inst.size());
    for (size_t s = 0; s < inst.size(); ++s) {
        auto val = inst.valuation(static_cast<int>(s));
        // Restriction is always a sub-relation.
        for (int t : rel.succ[s]) {
            bool in_full = false;
            for (int u : inst.succ[s]) in_full = in_full || (u == t);
            CHECK(in_full);
        }
        if (val.at("pc") == 4) {
            // Exactly one retained successor: (w, 5).
            REQUIRE(rel.succ[s].size() == 1);
            CHECK(inst.valuation(rel.succ[s][0]).at("pc") == 5);
        } else {
            CHECK(rel.succ[s] == inst.succ[s]);
        }
    }

    RestrictedRel rel2 = restrict_instance(inst, rep, choices[1]);
    for (size_t s = 0; s < inst.size(); ++s) {
        if (inst.valuation(static_cast<int>(s)).at("pc") == 4) {
            REQUIRE(rel2.succ[s].size() == 1);
            CHECK(inst.valuation(rel2.succ[s][0]).at("pc") == 7);
        }
    }
}

TEST_CASE("synthesize_rankings: the pump loop forces coefficient -4 on w") {
    TransitionSystem ts = testutil::load_fixture("wloop.ts");
    GenResult gen = generate(ts, parse_ctl("AG(EF(w >= 1))"));
    NondetReport rep = find_nondet(ts);
    std::vector<SkolemChoice> choices = enumerate_choices(ts, rep);
    FiniteInstance inst = build_instance(ts, testutil::parse_bounds("w=-3..8,pc=1..11"));

    auto ranks = synthesize_rankings(inst, gen, rep, choices[0]);
    REQUIRE(ranks.has_value());
    REQUIRE(ranks->count("rank1") == 1);
    const RankChoice& rc = ranks->at("rank1");
    REQUIRE(rc.data_vars == std::vector<std::string>{"w"});
    // The pump cycle ℓ3 ℓ4 ℓ5 ℓ6 gains one unit of w per revolution while the
    // measure must drop by at least one per step; location offsets cancel
    // around the cycle, so a * 1 <= -4. Coefficients are enumerated smallest
    // magnitude first, hence exactly -4.
    CHECK(rc.coeffs == std::vector<Int>{-4});
    CHECK(describe_rank("rank1", rc).substr(0, 15) == "delta1 := -4*w ");

    // The measure really decreases along every retained pending edge.
    RestrictedRel rel = restrict_instance(inst, rep, choices[0]);
    CtlPtr eu = expand_leaves(gen.info.at("inv2").formula, gen.info);
    StateSet den = eval_formula(inst, eu, &rel);
    StateSet target = eval_formula(inst, parse_ctl("w >= 1"));
    auto delta = [&](int s) {
        auto val = inst.valuation(s);
        Int d = rc.coeffs[0] * val.at("w");
        auto it = rc.offsets.find(val.at("pc"));
        return d + (it == rc.offsets.end() ? 0 : it->second);
    };
    for (size_t s = 0; s < inst.size(); ++s) {
        if (!den[s] || target[s]) continue;
        for (int t : rel.succ[s]) {
            if (!den[t]) continue;
            CHECK(delta(static_cast<int>(s)) >= 0);
            CHECK(delta(static_cast<int>(s)) - delta(t) >= 1);
        }
    }

    // The wrong branch never reaches the target from the drain side, so its
    // obligations vanish and synthesis trivially succeeds; the candidate is
    // rejected later, at clause-check time.
    auto ranks2 = synthesize_rankings(inst, gen, rep, choices[1]);
    CHECK(ranks2.has_value());
}

TEST_CASE("apply_ranking eliminates rank symbols and validates on the instance") {
    TransitionSystem ts = testutil::load_fixture("wloop.ts");
    GenResult gen = generate(ts, parse_ctl("AG(EF(w >= 1))"));
    NondetReport rep = find_nondet(ts);
    std::vector<SkolemChoice> choices = enumerate_choices(ts, rep);
    FiniteInstance inst = build_instance(ts, testutil::parse_bounds("w=-3..8,pc=1..11"));

    auto ranks = synthesize_rankings(inst, gen, rep, choices[0]);
    REQUIRE(ranks.has_value());
    ConstraintSystem sk = skolemize(gen.cs, ts, rep, choices[0]);
    ConstraintSystem fin = apply_ranking(sk, ts, *ranks);

    CHECK(fin.wf_marks.empty());
    CHECK(find_decl(fin, "rank1") == nullptr);
    CHECK(clauses_with_head_pred(fin, "rank1") == 0);
    CHECK(fin.clauses.size() == sk.clauses.size());

    // Full pipeline check: the discharged system is valid over the instance.
    RestrictedRel rel = restrict_instance(inst, rep, choices[0]);
    CandidateSolution cand = construct_candidate(inst, gen, &rel);
    CheckResult chk = check_clauses(inst, fin, cand);
    CHECK_MESSAGE(chk.valid, chk.detail);

    // The deselected branch fails: its candidate violates some clause.
    RestrictedRel rel2 = restrict_instance(inst, rep, choices[1]);
    CandidateSolution cand2 = construct_candidate(inst, gen, &rel2);
    ConstraintSystem sk2 = skolemize(gen.cs, ts, rep, choices[1]);
    auto ranks2 = synthesize_rankings(inst, gen, rep, choices[1]);
    ConstraintSystem fin2 = ranks2 ? apply_ranking(sk2, ts, *ranks2) : sk2;
    CHECK(!check_clauses(inst, fin2, cand2).valid);
}
