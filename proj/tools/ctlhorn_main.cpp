#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ctlhorn/chc_backend.hpp"
#include "ctlhorn/ctl_parser.hpp"
#include "ctlhorn/driver.hpp"
#include "ctlhorn/finite_engine.hpp"
#include "ctlhorn/normalize.hpp"
#include "ctlhorn/parser.hpp"
#include "ctlhorn/proofsys.hpp"

namespace {

using namespace ctlhorn;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Int parse_int(const std::string& s) {
    size_t pos = 0;
    Int v = std::stoll(s, &pos);
    if (pos != s.size()) throw InputError("not an integer: " + s);
    return v;
}

/// "w=-3..8,pc=0..12"
Bounds parse_bounds(const std::string& text) {
    Bounds b;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        auto eq = item.find('=');
        auto dots = item.find("..", eq == std::string::npos ? 0 : eq);
        if (eq == std::string::npos || dots == std::string::npos) {
            throw InputError("bad bounds item (want var=lo..hi): " + item);
        }
        std::string var = item.substr(0, eq);
        Int lo = parse_int(item.substr(eq + 1, dots - eq - 1));
        Int hi = parse_int(item.substr(dots + 2));
        if (lo > hi) throw InputError("empty interval for " + var);
        b.intervals[var] = {lo, hi};
    }
    if (b.intervals.empty()) throw InputError("empty bounds specification");
    return b;
}

/// "-8..8"
std::pair<Int, Int> parse_range(const std::string& text) {
    auto dots = text.find("..");
    if (dots == std::string::npos) throw InputError("bad range (want lo..hi): " + text);
    Int lo = parse_int(text.substr(0, dots));
    Int hi = parse_int(text.substr(dots + 2));
    if (lo > hi) throw InputError("empty range: " + text);
    return {lo, hi};
}

struct CommonArgs {
    std::string program;
    std::string prop;
    bool negate = false;
    std::string engine = "auto";
    std::string bounds;
    std::string solver_cmd = "z3";
    std::string coeff_range;
    int timeout_sec = 60;
    int jobs = 1;
    std::string report = "table";
    std::string emit_chc_path;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_verify_flags) {
    cmd->add_option("--program", args.program, "transition system file")->required();
    cmd->add_option("--prop", args.prop, "temporal property")->required();
    cmd->add_flag("--negate", args.negate, "also run the negated property");
    cmd->add_option("--bounds", args.bounds,
                    "finite instance bounds, e.g. w=-3..8,pc=0..12 (default: derived)");
    cmd->add_option("--solver-cmd", args.solver_cmd,
                    "external CHC solver command (default: z3)");
    cmd->add_option("--coeff-range", args.coeff_range,
                    "ranking coefficient domain, e.g. -8..8");
    cmd->add_option("--timeout", args.timeout_sec, "per-solver-call timeout in seconds")
        ->check(CLI::PositiveNumber);
    if (with_verify_flags) {
        cmd->add_option("--engine", args.engine, "verification engine")
            ->check(CLI::IsMember({"finite", "chc", "auto"}));
        cmd->add_option("--jobs", args.jobs, "worker processes (accepted; single task runs serially)")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--report", args.report, "report format")
            ->check(CLI::IsMember({"table", "json-lines"}));
        cmd->add_option("--emit-chc", args.emit_chc_path,
                        "write the winning (or first) candidate CHC script to this file");
    }
}

TaskConfig make_config(const CommonArgs& args) {
    TaskConfig cfg;
    cfg.engine = args.engine;
    cfg.solver_cmd = args.solver_cmd;
    cfg.solver_timeout_ms = args.timeout_sec * 1000;
    if (!args.bounds.empty()) cfg.bounds = parse_bounds(args.bounds);
    if (!args.coeff_range.empty()) {
        auto [lo, hi] = parse_range(args.coeff_range);
        cfg.rank_domain.coeff_lo = lo;
        cfg.rank_domain.coeff_hi = hi;
    }
    return cfg;
}

void print_task_row(std::ostream& os, const std::string& task, const TaskResult& r) {
    std::ostringstream time;
    time << std::fixed << std::setprecision(1) << r.time_ms;
    std::string note = r.verdict == Verdict::Holds ? r.candidate : r.detail;
    os << "  " << std::left << std::setw(9) << task << std::setw(24)
       << verdict_name(r.verdict) << std::right << std::setw(9) << time.str() << "  "
       << note << "\n";
}

void print_json_row(std::ostream& os, const CommonArgs& args, const std::string& task,
                    const TaskResult& r) {
    nlohmann::json j;
    j["program"] = args.program;
    j["property"] = args.prop;
    j["task"] = task;
    j["verdict"] = verdict_name(r.verdict);
    j["time-ms"] = std::round(r.time_ms * 10.0) / 10.0;
    j["candidate"] = r.candidate;
    if (!r.detail.empty()) j["detail"] = r.detail;
    j["engine"] = r.engine_used;
    os << j.dump() << "\n";
}

int cmd_verify(const CommonArgs& args) {
    TransitionSystem ts = parse_system(read_file(args.program));
    validate(ts);
    CtlPtr phi = parse_ctl(args.prop);
    TaskConfig cfg = make_config(args);

    RunReport rep = run_verify(ts, phi, args.negate, cfg);

    if (args.report == "json-lines") {
        print_json_row(std::cout, args, "phi", rep.phi);
        if (rep.negated) print_json_row(std::cout, args, "neg-phi", *rep.negated);
    } else {
        std::cout << "program:  " << args.program << "\n";
        std::cout << "property: " << args.prop << "\n";
        std::cout << "  " << std::left << std::setw(9) << "task" << std::setw(24)
                  << "verdict" << std::right << std::setw(9) << "time-ms"
                  << "  notes\n";
        print_task_row(std::cout, "phi", rep.phi);
        if (rep.negated) print_task_row(std::cout, "neg-phi", *rep.negated);
    }

    if (!args.emit_chc_path.empty()) {
        auto scripts = emit_candidates(ts, phi, cfg);
        std::string script;
        if (rep.phi.verdict == Verdict::Holds && rep.phi.choice) {
            // Rebuild the winning candidate's script exactly.  A witness
            // ranked only by fixpoint layers has no CHC counterpart, so that
            // case falls back to the first enumerated candidate below.
            GenResult gen = generate(ts, phi);
            if (!rep.phi.rank_choices.empty() || gen.cs.wf_marks.empty()) {
                NondetReport report = find_nondet(ts);
                ConstraintSystem discharged = apply_ranking(
                    skolemize(ground_negations(gen.cs), ts, report, *rep.phi.choice), ts,
                    rep.phi.rank_choices);
                script = emit_chc(discharged, ts);
            }
        }
        if (script.empty() && !scripts.empty()) {
            script = scripts.front().second;
        }
        if (script.empty()) {
            std::cerr << "note: no CHC candidate script available to emit\n";
        } else {
            std::ofstream out(args.emit_chc_path);
            if (!out) throw InputError("cannot write file: " + args.emit_chc_path);
            out << script;
        }
    }

    if (rep.inconsistent) {
        std::cerr << "internal error: both the property and its negation were certified\n";
        return kExitInternal;
    }
    return kExitOk;
}

int cmd_emit(const CommonArgs& args, const std::string& out_path, bool enumerate) {
    TransitionSystem ts = parse_system(read_file(args.program));
    validate(ts);
    CtlPtr phi = parse_ctl(args.prop);
    if (args.negate) phi = negate_formula(phi);
    TaskConfig cfg = make_config(args);

    auto scripts = emit_candidates(ts, phi, cfg);
    if (scripts.empty()) {
        std::cerr << "error: no discharge candidates in the configured domain\n";
        return kExitInput;
    }
    if (enumerate) {
        std::filesystem::create_directories(out_path);
        for (size_t i = 0; i < scripts.size(); ++i) {
            std::ostringstream name;
            name << out_path << "/candidate-" << (i + 1) << ".smt2";
            std::ofstream out(name.str());
            if (!out) throw InputError("cannot write file: " + name.str());
            out << "; candidate: " << scripts[i].first << "\n" << scripts[i].second;
            std::cout << name.str() << "\t" << scripts[i].first << "\n";
        }
    } else {
        std::ofstream out(out_path);
        if (!out) throw InputError("cannot write file: " + out_path);
        out << "; candidate: " << scripts.front().first << "\n" << scripts.front().second;
        std::cout << out_path << "\t" << scripts.front().first << "\n";
    }
    return kExitOk;
}

int cmd_selftest(int cases, unsigned long long seed, bool inject_mutant) {
    if (cases == 0) {
        std::cout << "warning: --cases 0 requested; the selftest is vacuous\n";
        return kExitOk;
    }
    std::mt19937_64 rng(seed);
    RandomConfig rcfg;
    int failures = 0;
    for (int i = 0; i < cases; ++i) {
        TransitionSystem ts = random_system(rng, rcfg);
        Bounds bounds = random_bounds(rcfg);
        FiniteInstance inst = build_instance(ts, bounds);
        CtlPtr phi = random_formula(rng, rcfg);

        bool truth = holds(inst, phi);
        GenResult gen = generate(ts, phi);
        SolveResult sol = solve_finite(inst, gen);
        bool ok = sol.solvable == truth;

        // Negation duality: state sets of the negation are exact complements.
        CtlPtr neg = negate_formula(phi);
        StateSet a = mc_ctl(inst, phi);
        StateSet b = mc_ctl(inst, neg);
        for (size_t s = 0; s < inst.size(); ++s) {
            if (a[s] == b[s]) {
                ok = false;
                break;
            }
        }

        if (inject_mutant && formula_size(phi) % 3 == 0) ok = !ok;

        if (!ok) {
            ++failures;
            if (failures <= 5) {
                std::cerr << "case " << i << " failed: " << to_infix(phi) << "\n";
            }
        }
    }
    if (failures > 0) {
        std::cerr << "selftest: " << failures << "/" << cases << " cases failed\n";
        return 1;
    }
    std::cout << "selftest: " << cases << " cases passed\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CTL verification of integer transition systems via "
                 "forall-exists Horn constraints"};
    app.require_subcommand(1);

    CommonArgs vargs;
    CLI::App* verify = app.add_subcommand("verify", "decide a property and report verdicts");
    add_common(verify, vargs, true);

    CommonArgs eargs;
    std::string out_path;
    bool enumerate = false;
    CLI::App* emit = app.add_subcommand("emit", "write candidate CHC scripts");
    add_common(emit, eargs, false);
    emit->add_option("--out", out_path,
                     "output file (with --enumerate: output directory)")
        ->required();
    emit->add_flag("--enumerate", enumerate,
                   "emit one script per candidate, up to the candidate cap");

    int cases = 200;
    unsigned long long seed = 42;
    bool inject_mutant = false;
    CLI::App* selftest =
        app.add_subcommand("selftest", "randomized engine cross-checks");
    selftest->add_option("--cases", cases, "number of random cases")
        ->check(CLI::NonNegativeNumber);
    selftest->add_option("--seed", seed, "random seed");
    selftest->add_flag("--inject-mutant", inject_mutant)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (verify->parsed()) return cmd_verify(vargs);
        if (emit->parsed()) return cmd_emit(eargs, out_path, enumerate);
        return cmd_selftest(cases, seed, inject_mutant);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what();
        if (e.span().line > 0) {
            std::cerr << " (line " << e.span().line << ", column " << e.span().col << ")";
        }
        std::cerr << "\n";
        return kExitInput;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const NonNegatableUntil& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
