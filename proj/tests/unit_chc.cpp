#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/stat.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "ctlhorn/chc_backend.hpp"
#include "ctlhorn/ctl_parser.hpp"
#include "ctlhorn/finite_engine.hpp"
#include "ctlhorn/parser.hpp"
#include "ctlhorn/proofsys.hpp"
#include "ctlhorn/skolem.hpp"
#include "test_util.hpp"

using namespace ctlhorn;

namespace {

bool has_negated_atom(const ConstraintSystem& cs) {
    for (const auto& cl : cs.clauses) {
        for (const auto& ba : cl.body_atoms) {
            if (ba.negated) return true;
        }
    }
    return false;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("ground_negations: assertion-defined predicate complements inline") {
    TransitionSystem ts = testutil::load_fixture("wloop.ts");
    GenResult gen = generate(ts, parse_ctl("AG(EF(w >= 1))"));
    ConstraintSystem grounded = ground_negations(gen.cs);

    // p2 was defined by the single clause p2 -> w >= 1; its negated occurrence
    // becomes the complement constraint and the defining clause disappears.
    CHECK(grounded.clauses.size() == gen.cs.clauses.size() - 1);
    CHECK(find_decl(grounded, "p2") == nullptr);
    CHECK(!has_negated_atom(grounded));
    CHECK(grounded.wf_marks == std::vector<std::string>{"rank1"});

    const HornClause* eu = nullptr;
    for (const auto& cl : grounded.clauses) {
        if (!cl.head.exists_vars.empty()) eu = &cl;
    }
    REQUIRE(eu != nullptr);
    REQUIRE(eu->body_atoms.size() == 1);
    CHECK(eu->body_atoms[0].app.pred == "inv2");
    REQUIRE(eu->body_constraint != nullptr);
    CHECK(eval_assertion(eu->body_constraint, {{"w", 0}, {"pc", 1}}));    // w < 1
    CHECK(!eval_assertion(eu->body_constraint, {{"w", 1}, {"pc", 1}}));
}

TEST_CASE("ground_negations: selector negations resolve against the chosen branch") {
    TransitionSystem ts = testutil::load_fixture("modes.ts");
    GenResult gen = generate(ts, parse_ctl("(m >= 1) -> EF(pc = 3)"));
    ConstraintSystem grounded = ground_negations(gen.cs);
    CHECK(!has_negated_atom(grounded));
    CHECK(find_decl(grounded, "sel1") == nullptr);
    for (const auto& d : grounded.decls) {
        CHECK(d.role != PredRole::Selector);
    }
}

TEST_CASE("ground_negations: predicate-defined negations are rejected") {
    TransitionSystem ts = testutil::load_fixture("wloop.ts");
    // EF(AF(...)) puts a predicate-defined eventuality under the negation:
    // the inner target is itself defined by further Horn clauses, so its
    // complement has no assertion form.
    GenResult gen = generate(ts, parse_ctl("EF(AF(w >= 1))"));
    CHECK_THROWS_AS(ground_negations(gen.cs), StructuralError);
}

TEST_CASE("emit_chc: discharged worker-loop system renders as pure HORN smt2") {
    TransitionSystem ts = testutil::load_fixture("wloop.ts");
    GenResult gen = generate(ts, parse_ctl("AG(EF(w >= 1))"));
    ConstraintSystem grounded = ground_negations(gen.cs);
    NondetReport rep = find_nondet(ts);
    std::vector<SkolemChoice> choices = enumerate_choices(ts, rep);
    FiniteInstance inst = build_instance(ts, testutil::parse_bounds("w=-3..8,pc=1..11"));
    auto ranks = synthesize_rankings(inst, gen, rep, choices[0]);
    REQUIRE(ranks.has_value());
    ConstraintSystem discharged =
        apply_ranking(skolemize(grounded, ts, rep, choices[0]), ts, *ranks);

    std::string script = emit_chc(discharged, ts);
    CHECK(script.rfind("; ctlhorn chc v1\n", 0) == 0);    // header line
    CHECK(contains(script, "(set-logic HORN)"));
    CHECK(contains(script, "(check-sat)"));
    // init and next are inlined, invariants survive as uninterpreted preds.
    CHECK(!contains(script, "declare-fun init"));
    CHECK(!contains(script, "declare-fun next"));
    CHECK(contains(script, "(declare-fun inv1 (Int Int) Bool)"));
    CHECK(contains(script, "(declare-fun inv2 (Int Int) Bool)"));
    // Primed variables use the smt2-safe suffix.
    CHECK(contains(script, "w!p"));
    CHECK(contains(script, "pc!p"));
    CHECK(!contains(script, "w'"));
    // Rank symbols are gone; the measure appears as plain arithmetic.
    CHECK(!contains(script, "rank1"));
    // Emission is deterministic.
    CHECK(script == emit_chc(discharged, ts));
}

TEST_CASE("emit_chc: structural preconditions") {
    TransitionSystem ts = testutil::load_fixture("wloop.ts");
    GenResult gen = generate(ts, parse_ctl("AG(EF(w >= 1))"));

    // Residual wf marks / existential heads / negated atoms are all rejected.
    CHECK_THROWS_AS(emit_chc(gen.cs, ts), StructuralError);

    NondetReport rep = find_nondet(ts);
    std::vector<SkolemChoice> choices = enumerate_choices(ts, rep);
    ConstraintSystem sk = skolemize(gen.cs, ts, rep, choices[0]);  // still has ¬p2 + wf
    CHECK_THROWS_AS(emit_chc(sk, ts), StructuralError);
}

TEST_CASE("run_solver: verdict parsing, missing binaries, timeouts") {
    const std::string script = "(set-logic HORN)\n(check-sat)\n";
    CHECK(run_solver("/bin/echo sat", script, 10000).verdict == SolverVerdict::Sat);
    CHECK(run_solver("/bin/echo unsat", script, 10000).verdict == SolverVerdict::Unsat);
    CHECK(run_solver("/bin/echo unknown", script, 10000).verdict == SolverVerdict::Unknown);

    SolverResult missing = run_solver("/nonexistent/solver-binary", script, 10000);
    CHECK(missing.verdict == SolverVerdict::Error);

    SolverResult garbage = run_solver("/bin/echo frobnicate", script, 10000);
    CHECK(garbage.verdict == SolverVerdict::Error);

    // The runner appends the script path as an argument, so the slow mock has
    // to be something that ignores it (plain `sleep 5` would reject it).
    const char* slow = "/tmp/ctlhorn_slow_solver.sh";
    {
        std::ofstream f(slow);
        f << "#!/bin/sh\nsleep 5\n";
    }
    ::chmod(slow, 0755);
    SolverResult timeout = run_solver(slow, script, 200);
    CHECK(timeout.verdict == SolverVerdict::Unknown);
    CHECK(contains(timeout.detail, "timeout"));
    std::remove(slow);
}
