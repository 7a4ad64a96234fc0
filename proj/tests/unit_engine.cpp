#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>
#include <string>
#include <vector>

#include "ctlhorn/ctl_parser.hpp"
#include "ctlhorn/finite_engine.hpp"
#include "ctlhorn/horn.hpp"
#include "ctlhorn/normalize.hpp"
#include "ctlhorn/parser.hpp"
#include "ctlhorn/proofsys.hpp"
#include "test_util.hpp"

using namespace ctlhorn;

namespace {

Bounds single_var_bounds(const std::string& var, Int lo, Int hi) {
    Bounds b;
    b.intervals[var] = {lo, hi};
    return b;
}

StateSet set_of(const FiniteInstance& inst, std::initializer_list<int> members) {
    StateSet s(inst.size(), 0);
    for (int m : members) s[static_cast<size_t>(m)] = 1;
    return s;
}

/// Three-state branch system: 0 -> {1, 2}, 1 -> 1, 2 -> 2. Small enough that
/// every expected set below is derived by hand in the comments.
FiniteInstance branch_instance() {
    TransitionSystem ts = parse_system(R"((system
      (vars (x Int))
      (init (= x 0))
      (trans
        (rule (= x 0) ((x 1)))
        (rule (= x 0) ((x 2)))
        (rule (= x 1) ((x 1)))
        (rule (= x 2) ((x 2))))))");
    return build_instance(ts, single_var_bounds("x", 0, 2));
}

/// One-step-then-stuck system: 0 -> 1, and states 1 and 2 have no enabled
/// command at all.
FiniteInstance stuck_instance() {
    TransitionSystem ts = parse_system(R"((system
      (vars (x Int))
      (init (= x 0))
      (trans
        (rule (<= x 0) ((x (+ x 1)))))))");
    return build_instance(ts, single_var_bounds("x", 0, 2));
}

StateSet eval_str(const FiniteInstance& inst, const std::string& text) {
    return mc_ctl(inst, parse_ctl(text));
}

}  // namespace

TEST_CASE("build_instance: states, successors, init") {
    FiniteInstance inst = branch_instance();
    REQUIRE(inst.size() == 3);
    // Lexicographic state order: [0], [1], [2].
    CHECK(inst.states[0] == State{0});
    CHECK(inst.states[1] == State{1});
    CHECK(inst.states[2] == State{2});
    CHECK(inst.index.at(State{2}) == 2);
    CHECK(inst.succ[0] == std::vector<int>{1, 2});
    CHECK(inst.succ[1] == std::vector<int>{1});
    CHECK(inst.succ[2] == std::vector<int>{2});
    REQUIRE(inst.cmd_succ.size() == 4);       // one row per command
    CHECK(inst.cmd_succ[0][0] == std::vector<int>{1});
    CHECK(inst.cmd_succ[1][0] == std::vector<int>{2});
    CHECK(inst.cmd_succ[2][0].empty());       // guard x = 1 disabled at x = 0
    CHECK(inst.init_list == std::vector<int>{0});
    CHECK(inst.init_mask == set_of(inst, {0}));
    CHECK(inst.valuation(1).at("x") == 1);
}

TEST_CASE("build_instance: saturating updates and clamped lookup") {
    TransitionSystem ts = parse_system(R"((system
      (vars (x Int))
      (init (= x 0))
      (trans (rule true ((x (+ x 1)))))))");
    FiniteInstance inst = build_instance(ts, single_var_bounds("x", 0, 2));
    // x = 2 steps to 3, which saturates back to 2: a self-loop, not a dead end.
    CHECK(inst.succ[2] == std::vector<int>{2});
    CHECK(!inst.is_stuck(2));
    CHECK(inst.bounds.clamp("x", -7) == 0);
    CHECK(inst.bounds.clamp("x", 99) == 2);
    CHECK(inst.bounds.clamp("x", 1) == 1);
    CHECK(inst.index_of_clamped(State{5}) == 2);
    CHECK(inst.index_of_clamped(State{-3}) == 0);
}

TEST_CASE("build_instance: state cap is enforced") {
    TransitionSystem ts = parse_system(R"((system
      (vars (x Int) (y Int))
      (init (= x 0))
      (trans (rule true ((x x) (y y))))))");
    Bounds b;
    b.intervals["x"] = {0, 99};
    b.intervals["y"] = {0, 99};
    CHECK_THROWS_AS(build_instance(ts, b, 100), std::runtime_error);
}

TEST_CASE("mc_ctl on the branch system matches hand-computed sets") {
    FiniteInstance inst = branch_instance();
    // States: s0 = [0] (init), s1 = [1] (left sink), s2 = [2] (right sink).
    CHECK(eval_str(inst, "x = 2") == set_of(inst, {2}));
    CHECK(eval_str(inst, "true") == set_of(inst, {0, 1, 2}));
    CHECK(eval_str(inst, "false") == set_of(inst, {}));
    CHECK(eval_str(inst, "x >= 1 && x <= 1") == set_of(inst, {1}));
    CHECK(eval_str(inst, "x = 0 || x = 2") == set_of(inst, {0, 2}));
    CHECK(eval_str(inst, "!(x = 0)") == set_of(inst, {1, 2}));

    // EX/AX: s0 has successors {1, 2}; the sinks only see themselves.
    CHECK(eval_str(inst, "EX(x = 2)") == set_of(inst, {0, 2}));
    CHECK(eval_str(inst, "AX(x = 2)") == set_of(inst, {2}));
    CHECK(eval_str(inst, "AX(x >= 1)") == set_of(inst, {0, 1, 2}));

    // EF(x = 2): reachable from s0 (via the right branch) and s2 itself.
    CHECK(eval_str(inst, "EF(x = 2)") == set_of(inst, {0, 2}));
    // AF(x = 2): s0 can forever stay left, so only s2.
    CHECK(eval_str(inst, "AF(x = 2)") == set_of(inst, {2}));
    // EG(x <= 1): loop at s1; s0 enters it.
    CHECK(eval_str(inst, "EG(x <= 1)") == set_of(inst, {0, 1}));
    // AG(x <= 1): s0 can escape to s2.
    CHECK(eval_str(inst, "AG(x <= 1)") == set_of(inst, {1}));
    CHECK(eval_str(inst, "AG(x >= 0)") == set_of(inst, {0, 1, 2}));

    // Untils with nontrivial invariant side.
    CHECK(mc_ctl(inst, parse_ctl("EU(x <= 0, x = 2)")) == set_of(inst, {0, 2}));
    CHECK(mc_ctl(inst, parse_ctl("AU(x <= 1, x = 2)")) == set_of(inst, {2}));

    // holds() quantifies over initial states only.
    CHECK(holds(inst, parse_ctl("EF(x = 2)")));
    CHECK(!holds(inst, parse_ctl("AF(x = 2)")));
    CHECK(holds(inst, parse_ctl("AG(x >= 0)")));
}

TEST_CASE("stuck states: universal obligations vacuous, existential ones fail") {
    FiniteInstance inst = stuck_instance();
    REQUIRE(inst.size() == 3);
    CHECK(!inst.is_stuck(0));
    CHECK(inst.is_stuck(1));
    CHECK(inst.is_stuck(2));

    CHECK(eval_str(inst, "AX(x = 99)") == set_of(inst, {1, 2}));   // vacuous at stuck
    CHECK(eval_str(inst, "EX(true)") == set_of(inst, {0}));
    CHECK(eval_str(inst, "EG(x >= 0)") == set_of(inst, {}));       // no infinite path
    CHECK(eval_str(inst, "AG(x >= 0)") == set_of(inst, {0, 1, 2}));
    CHECK(eval_str(inst, "AG(x <= 1)") == set_of(inst, {0, 1}));
    // Every path from every state ends stuck, so AF succeeds vacuously.
    CHECK(eval_str(inst, "AF(x = 5)") == set_of(inst, {0, 1, 2}));
    CHECK(mc_ctl(inst, parse_ctl("AU(x >= 0, x = 5)")) == set_of(inst, {0, 1, 2}));
    // EF still needs to actually reach the target.
    CHECK(eval_str(inst, "EF(x = 2)") == set_of(inst, {2}));
    CHECK(eval_str(inst, "EF(x = 1)") == set_of(inst, {0, 1}));
}

TEST_CASE("eval_formula rejects unresolved predicate leaves") {
    FiniteInstance inst = branch_instance();
    CHECK_THROWS_AS(eval_formula(inst, mk_pred_leaf("p1")), std::runtime_error);
}

TEST_CASE("restricted relation only constrains existential operators") {
    FiniteInstance inst = branch_instance();
    // Keep only the left branch out of s0.
    RestrictedRel rel;
    rel.succ = {{1}, {1}, {2}};
    CtlPtr ef2 = parse_ctl("EF(x = 2)");
    CHECK(eval_formula(inst, ef2, &rel) == set_of(inst, {2}));          // s0 lost its path
    CtlPtr af2 = parse_ctl("AF(x = 2)");
    CHECK(eval_formula(inst, af2, &rel) == set_of(inst, {2}));          // A ignores rel
    CtlPtr ag = parse_ctl("AG(x <= 1)");
    CHECK(eval_formula(inst, ag, &rel) == set_of(inst, {1}));           // still full for A
    CtlPtr eg = parse_ctl("EG(x <= 1)");
    CHECK(eval_formula(inst, eg, &rel) == set_of(inst, {0, 1}));
}

TEST_CASE("until_layers: defined exactly on the until set, decreasing into the target") {
    FiniteInstance inst = branch_instance();
    CtlPtr eu = normalize(parse_ctl("EF(x = 2)"));
    REQUIRE(eu->op == CtlOp::EU);
    std::vector<Int> layer = until_layers(inst, eu);
    REQUIRE(layer.size() == 3);
    CHECK(layer[2] == 0);                  // target states enter at layer 0
    CHECK(layer[0] > 0);                   // s0 enters strictly later
    CHECK(layer[1] == kUnreachedLayer);    // s1 never satisfies EF(x = 2)

    // Progress property: every non-target member has a successor one layer in.
    for (size_t s = 0; s < inst.size(); ++s) {
        if (layer[s] <= 0) continue;
        bool progress = false;
        for (int t : inst.succ[s]) {
            progress = progress || (layer[t] != kUnreachedLayer && layer[t] < layer[s]);
        }
        CHECK_MESSAGE(progress, "state ", s, " has no decreasing edge");
    }

    RankInterp rk;
    rk.by_layers = true;
    rk.layer = layer;
    CHECK(rk.holds_pair(0, 2));
    CHECK(!rk.holds_pair(2, 0));
    CHECK(rk.holds_pair(1, 2));    // unreached states sit above every layer
    CHECK(!rk.holds_pair(0, 1));   // ... so nothing decreases into them
    CHECK(!rk.holds_pair(2, 2));   // strict decrease required

    RankInterp explicit_rk;
    explicit_rk.by_layers = false;
    explicit_rk.pairs = {{0, 2}};
    CHECK(explicit_rk.holds_pair(0, 2));
    CHECK(!explicit_rk.holds_pair(0, 1));
}

TEST_CASE("check_clauses: constraint heads and predicate membership") {
    FiniteInstance inst = branch_instance();
    ConstraintSystem cs;
    cs.decls.push_back({"p", {"x"}, PredRole::Invariant});
    // p(x) -> x <= 1
    HornClause cl;
    cl.body_atoms.push_back({PredApp{"p", {LinExpr::var("x")}}, false});
    cl.head.constraint = assr_cmp(LinExpr::var("x"), CmpOp::Le, LinExpr::lit(1));
    cs.clauses.push_back(cl);

    CandidateSolution good;
    good.sets["p"] = set_of(inst, {0, 1});
    CHECK(check_clauses(inst, cs, good).valid);

    CandidateSolution bad;
    bad.sets["p"] = set_of(inst, {0, 1, 2});
    CheckResult res = check_clauses(inst, cs, bad);
    CHECK(!res.valid);
    CHECK(res.failing_clause == 0);
    CHECK(res.wf_failure.empty());
}

TEST_CASE("check_clauses: well-foundedness marks reject cyclic rank graphs") {
    FiniteInstance inst = branch_instance();
    ConstraintSystem cs;
    cs.decls.push_back({"rank1", {"x", "x'"}, PredRole::Rank});
    cs.wf_marks.push_back("rank1");

    CandidateSolution cyclic;
    RankInterp rk;
    rk.by_layers = false;
    rk.pairs = {{0, 1}, {1, 0}};
    cyclic.ranks["rank1"] = rk;
    CheckResult res = check_clauses(inst, cs, cyclic);
    CHECK(!res.valid);
    CHECK(res.wf_failure == "rank1");

    CandidateSolution acyclic;
    RankInterp ok;
    ok.by_layers = false;
    ok.pairs = {{0, 1}, {1, 2}, {0, 2}};
    acyclic.ranks["rank1"] = ok;
    CHECK(check_clauses(inst, cs, acyclic).valid);

    // Layer-based ranks are well founded by construction.
    CandidateSolution layered;
    RankInterp lk;
    lk.by_layers = true;
    lk.layer = {2, 1, 0};
    layered.ranks["rank1"] = lk;
    CHECK(check_clauses(inst, cs, layered).valid);
}

TEST_CASE("brute_mc agrees with mc_ctl on the hand examples") {
    for (const FiniteInstance& inst : {branch_instance(), stuck_instance()}) {
        for (const char* t : {"EF(x = 2)", "AF(x = 2)", "EG(x <= 1)", "AG(x <= 1)",
                              "EX(x = 1)", "AX(x >= 1)", "AU(x <= 1, x = 2)",
                              "EU(x <= 0, x = 2)", "x = 0 || EF(x = 1)"}) {
            CAPTURE(t);
            CtlPtr f = parse_ctl(t);
            CHECK(brute_mc(inst, f) == mc_ctl(inst, f));
        }
    }
}

TEST_CASE("property: mc_ctl equals the brute-force path oracle on random instances") {
    // Tiny configuration so the exponential oracle stays cheap: at most
    // (data 0..1) x (pc 1..3) = 6 states.
    RandomConfig cfg;
    cfg.max_pc = 3;
    cfg.max_data = 1;
    cfg.max_formula_size = 7;

    std::mt19937_64 rng(20260818);
    int disagreements = 0;
    for (int round = 0; round < 250; ++round) {
        cfg.allow_until = (round % 2 == 1);  // alternate fragment and general untils
        TransitionSystem ts = random_system(rng, cfg);
        FiniteInstance inst = build_instance(ts, random_bounds(cfg));
        CtlPtr f = random_formula(rng, cfg);
        StateSet fast = mc_ctl(inst, f);
        StateSet slow = brute_mc(inst, f);
        if (fast != slow) {
            ++disagreements;
            MESSAGE("disagreement on ", to_infix(f), " over\n", print_system(ts));
        }
    }
    CHECK(disagreements == 0);
}

TEST_CASE("property: solve_finite agrees with holds on random instances") {
    RandomConfig cfg;  // defaults: <= 24 states, formulas of size <= 9
    std::mt19937_64 rng(7);
    int disagreements = 0;
    for (int round = 0; round < 120; ++round) {
        TransitionSystem ts = random_system(rng, cfg);
        FiniteInstance inst = build_instance(ts, random_bounds(cfg));
        CtlPtr f = normalize(random_formula(rng, cfg));
        GenResult gen = generate(ts, f);
        SolveResult res = solve_finite(inst, gen);
        if (res.solvable != holds(inst, f)) {
            ++disagreements;
            MESSAGE("disagreement on ", to_infix(f), " over\n", print_system(ts));
        }
    }
    CHECK(disagreements == 0);
}

TEST_CASE("property: solve_finite handles general untils outside the negatable fragment") {
    RandomConfig cfg;
    cfg.allow_until = true;
    cfg.max_formula_size = 7;
    std::mt19937_64 rng(99);
    int disagreements = 0;
    for (int round = 0; round < 80; ++round) {
        TransitionSystem ts = random_system(rng, cfg);
        FiniteInstance inst = build_instance(ts, random_bounds(cfg));
        CtlPtr f = normalize(random_formula(rng, cfg));
        GenResult gen = generate(ts, f);
        SolveResult res = solve_finite(inst, gen);
        if (res.solvable != holds(inst, f)) {
            ++disagreements;
            MESSAGE("disagreement on ", to_infix(f), " over\n", print_system(ts));
        }
    }
    CHECK(disagreements == 0);
}

TEST_CASE("expand_leaves resolves nested predicate references") {
    TransitionSystem ts = testutil::load_fixture("wloop.ts");
    CtlPtr phi = parse_ctl("AG(EF(w >= 1))");
    GenResult gen = generate(ts, phi);

    // The outer invariant's formula references the inner eventuality by leaf.
    REQUIRE(gen.info.count("inv1") == 1);
    CtlPtr resolved = expand_leaves(gen.info.at("inv1").formula, gen.info);
    CHECK(ctl_eq(resolved, normalize(phi)));

    std::map<std::string, PredInfo> empty;
    CHECK_THROWS_AS(expand_leaves(mk_pred_leaf("nosuch"), empty), StructuralError);
}
