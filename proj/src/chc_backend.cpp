#include "ctlhorn/chc_backend.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

namespace ctlhorn {

namespace {

AssertionPtr conjoin_opt(const AssertionPtr& a, const AssertionPtr& b) {
    if (!a) return b;
    if (!b) return a;
    return assr_and({a, b});
}

/// The argument map of a predicate application whose arguments are required
/// to be plain distinct variables (the canonical generated shape).
std::map<std::string, LinExpr> formal_map(const PredApp& app,
                                          const std::vector<std::string>& params) {
    if (app.args.size() != params.size()) {
        throw StructuralError("arity mismatch on " + app.pred);
    }
    std::map<std::string, LinExpr> m;
    for (size_t i = 0; i < params.size(); ++i) m.emplace(params[i], app.args[i]);
    return m;
}

bool same_atom(const BodyAtom& a, const BodyAtom& b) {
    return a.negated == b.negated && a.app == b.app;
}

}  // namespace

ConstraintSystem ground_negations(const ConstraintSystem& cs) {
    ConstraintSystem out = cs;

    // Predicates with negated body occurrences, in declaration order.
    std::vector<std::string> targets;
    for (const auto& d : out.decls) {
        bool negated = false;
        for (const auto& clause : out.clauses) {
            for (const auto& atom : clause.body_atoms) {
                if (atom.negated && atom.app.pred == d.name) negated = true;
            }
        }
        if (negated) targets.push_back(d.name);
    }

    for (const auto& p : targets) {
        if (p == "init" || p == "next") {
            throw StructuralError("negated occurrence of " + p + " is not groundable");
        }
        // Locate the unique defining clause: P positive in the body, head a
        // pure assertion. Any head occurrence of P blocks grounding.
        std::optional<size_t> defining;
        for (size_t i = 0; i < out.clauses.size(); ++i) {
            const HornClause& c = out.clauses[i];
            for (const auto& happ : c.head.preds) {
                if (happ.pred == p) {
                    throw StructuralError("predicate " + p +
                                          " occurs in a head; negation is not groundable");
                }
            }
            size_t pos = 0;
            for (const auto& atom : c.body_atoms) {
                if (!atom.negated && atom.app.pred == p) ++pos;
            }
            if (pos == 0) continue;
            if (pos > 1 || defining || !c.head.preds.empty() || !c.head.constraint ||
                c.body_constraint) {
                throw StructuralError("positive occurrences of " + p +
                                      " do not form a single assertion bound");
            }
            defining = i;
        }
        if (!defining) {
            throw StructuralError("negated predicate " + p + " has no defining clause");
        }
        const HornClause def = out.clauses[*defining];
        const PredicateSymbol* decl = find_decl(out, p);
        PredApp def_app;
        std::vector<BodyAtom> context;
        for (const auto& atom : def.body_atoms) {
            if (!atom.negated && atom.app.pred == p) {
                def_app = atom.app;
            } else {
                context.push_back(atom);
            }
        }
        for (const auto& arg : def_app.args) {
            if (!arg.is_var()) {
                throw StructuralError("defining clause of " + p +
                                      " must apply it to plain variables");
            }
        }
        // Formal renaming: defining-clause argument names -> declared params.
        std::map<std::string, LinExpr> to_formal;
        for (size_t i = 0; i < def_app.args.size(); ++i) {
            to_formal.emplace(def_app.args[i].coeffs.begin()->first,
                              LinExpr::var(decl->params[i]));
        }
        AssertionPtr bound = subst_assertion(def.head.constraint, to_formal);

        std::vector<HornClause> next_clauses;
        for (size_t i = 0; i < out.clauses.size(); ++i) {
            if (i == *defining) continue;
            HornClause c = out.clauses[i];
            std::vector<BodyAtom> kept;
            for (const auto& atom : c.body_atoms) {
                if (!(atom.negated && atom.app.pred == p)) {
                    kept.push_back(atom);
                    continue;
                }
                // The defining clause's side conditions must already be part
                // of this body, or the substitution would weaken it.
                for (const auto& ctx : context) {
                    bool present = std::any_of(
                        c.body_atoms.begin(), c.body_atoms.end(),
                        [&](const BodyAtom& other) { return same_atom(other, ctx); });
                    if (!present) {
                        throw StructuralError("negated occurrence of " + p +
                                              " lacks the defining clause's context");
                    }
                }
                AssertionPtr inst =
                    subst_assertion(bound, formal_map(atom.app, decl->params));
                c.body_constraint = conjoin_opt(c.body_constraint, negate_assertion(inst));
            }
            c.body_atoms = std::move(kept);
            next_clauses.push_back(std::move(c));
        }
        out.clauses = std::move(next_clauses);
        out.decls.erase(std::remove_if(out.decls.begin(), out.decls.end(),
                                       [&](const PredicateSymbol& d) { return d.name == p; }),
                        out.decls.end());
    }
    return out;
}

namespace {

std::string smt_name(const std::string& v) {
    if (is_primed(v)) return unprimed(v) + "!p";
    return v;
}

std::string smt_int(Int k) {
    if (k < 0) return "(- " + std::to_string(-k) + ")";
    return std::to_string(k);
}

std::string smt_expr(const LinExpr& e) {
    std::vector<std::string> terms;
    for (const auto& [v, c] : e.coeffs) {
        if (c == 1) {
            terms.push_back(smt_name(v));
        } else {
            terms.push_back("(* " + smt_int(c) + " " + smt_name(v) + ")");
        }
    }
    if (e.constant != 0 || terms.empty()) terms.push_back(smt_int(e.constant));
    if (terms.size() == 1) return terms[0];
    std::string out = "(+";
    for (const auto& t : terms) out += " " + t;
    return out + ")";
}

std::string smt_assertion(const AssertionPtr& a) {
    switch (a->kind) {
        case Assertion::Kind::True:
            return "true";
        case Assertion::Kind::False:
            return "false";
        case Assertion::Kind::Atom: {
            static const char* ops[] = {"<", "<=", "=", ">=", ">"};
            const LinAtom& atom = a->atom;
            return std::string("(") + ops[static_cast<int>(atom.op)] + " " +
                   smt_expr(atom.lhs) + " " + smt_int(atom.rhs) + ")";
        }
        case Assertion::Kind::Not:
            return "(not " + smt_assertion(a->args[0]) + ")";
        case Assertion::Kind::And:
        case Assertion::Kind::Or: {
            std::string out = a->kind == Assertion::Kind::And ? "(and" : "(or";
            for (const auto& c : a->args) out += " " + smt_assertion(c);
            return out + ")";
        }
    }
    throw std::logic_error("smt_assertion: unreachable");
}

}  // namespace

std::string emit_chc(const ConstraintSystem& cs, const TransitionSystem& ts) {
    if (!cs.wf_marks.empty()) {
        throw StructuralError("well-foundedness marks remain; apply a ranking first");
    }
    AssertionPtr next_formula = induced_next(ts);
    std::map<std::string, LinExpr> ident;

    std::ostringstream os;
    os << "; ctlhorn chc v1\n";
    os << "(set-logic HORN)\n";
    for (const auto& d : cs.decls) {
        if (d.name == "init" || d.name == "next") continue;
        os << "(declare-fun " << d.name << " (";
        for (size_t i = 0; i < d.params.size(); ++i) os << (i ? " Int" : "Int");
        os << ") Bool)\n";
    }

    auto render_app = [&](const PredApp& app) -> std::string {
        if (app.pred == "init") {
            std::vector<std::string> params = ts.vars;
            return smt_assertion(subst_assertion(ts.init, formal_map(app, params)));
        }
        if (app.pred == "next") {
            std::vector<std::string> params = ts.vars;
            for (const auto& v : ts.vars) params.push_back(primed(v));
            return smt_assertion(subst_assertion(next_formula, formal_map(app, params)));
        }
        if (app.args.empty()) return app.pred;
        std::string out = "(" + app.pred;
        for (const auto& a : app.args) out += " " + smt_expr(a);
        return out + ")";
    };

    for (const HornClause& clause : cs.clauses) {
        if (!clause.head.exists_vars.empty()) {
            throw StructuralError("existential head at emission time; skolemize first");
        }
        std::vector<std::string> body_parts;
        std::set<std::string> vars;
        for (const auto& atom : clause.body_atoms) {
            if (atom.negated) {
                throw StructuralError("negated body atom at emission time; ground first");
            }
            body_parts.push_back(render_app(atom.app));
            for (const auto& arg : atom.app.args) arg.collect_vars(vars);
            if (atom.app.pred == "next") {
                // Inlining introduces nothing new: args already cover v, v'.
            }
        }
        if (clause.body_constraint) {
            body_parts.push_back(smt_assertion(clause.body_constraint));
            collect_vars(clause.body_constraint, vars);
        }
        std::string body;
        if (body_parts.empty()) {
            body = "true";
        } else if (body_parts.size() == 1) {
            body = body_parts[0];
        } else {
            body = "(and";
            for (const auto& p : body_parts) body += " " + p;
            body += ")";
        }

        std::vector<std::string> heads;
        for (const auto& app : clause.head.preds) {
            if (app.pred == "init" || app.pred == "next") {
                throw StructuralError(app.pred + " cannot occur in a clause head");
            }
            heads.push_back(render_app(app));
            for (const auto& arg : app.args) arg.collect_vars(vars);
        }
        if (clause.head.constraint) {
            heads.push_back(smt_assertion(clause.head.constraint));
            collect_vars(clause.head.constraint, vars);
        }
        if (heads.empty()) heads.push_back("false");

        for (const auto& head : heads) {
            std::string rule = "(=> " + body + " " + head + ")";
            if (vars.empty()) {
                os << "(assert " << rule << ")\n";
            } else {
                os << "(assert (forall (";
                bool first = true;
                for (const auto& v : vars) {
                    if (!first) os << " ";
                    os << "(" << smt_name(v) << " Int)";
                    first = false;
                }
                os << ") " << rule << "))\n";
            }
        }
    }
    os << "(check-sat)\n";
    return os.str();
}

SolverResult run_solver(const std::string& cmd, const std::string& script, int timeout_ms) {
    SolverResult result;

    char path[] = "/tmp/ctlhorn-XXXXXX.smt2";
    int fd = mkstemps(path, 5);
    if (fd < 0) {
        result.detail = "cannot create temp file";
        return result;
    }
    {
        size_t off = 0;
        while (off < script.size()) {
            ssize_t n = write(fd, script.data() + off, script.size() - off);
            if (n <= 0) break;
            off += static_cast<size_t>(n);
        }
        close(fd);
    }

    std::vector<std::string> parts;
    {
        std::istringstream is(cmd);
        std::string tok;
        while (is >> tok) parts.push_back(tok);
    }
    if (parts.empty()) {
        unlink(path);
        result.detail = "empty solver command";
        return result;
    }
    parts.push_back(path);

    int pipefd[2];
    if (pipe(pipefd) != 0) {
        unlink(path);
        result.detail = "pipe failed";
        return result;
    }
    pid_t pid = fork();
    if (pid < 0) {
        close(pipefd[0]);
        close(pipefd[1]);
        unlink(path);
        result.detail = "fork failed";
        return result;
    }
    if (pid == 0) {
        dup2(pipefd[1], STDOUT_FILENO);
        dup2(pipefd[1], STDERR_FILENO);
        close(pipefd[0]);
        close(pipefd[1]);
        std::vector<char*> argv;
        argv.reserve(parts.size() + 1);
        for (auto& p : parts) argv.push_back(p.data());
        argv.push_back(nullptr);
        execvp(argv[0], argv.data());
        _exit(127);
    }
    close(pipefd[1]);

    std::string output;
    bool timed_out = false;
    const auto deadline_ms = timeout_ms;
    int waited = 0;
    for (;;) {
        struct pollfd pfd{pipefd[0], POLLIN, 0};
        int step = 50;
        int r = poll(&pfd, 1, step);
        if (r > 0) {
            char buf[4096];
            ssize_t n = read(pipefd[0], buf, sizeof(buf));
            if (n <= 0) break;  // EOF
            output.append(buf, static_cast<size_t>(n));
            continue;
        }
        waited += step;
        if (waited >= deadline_ms) {
            timed_out = true;
            kill(pid, SIGKILL);
            break;
        }
    }
    close(pipefd[0]);
    int status = 0;
    waitpid(pid, &status, 0);
    unlink(path);

    if (timed_out) {
        result.verdict = SolverVerdict::Unknown;
        result.detail = "solver timeout";
        return result;
    }
    std::istringstream is(output);
    std::string token;
    is >> token;
    if (token == "sat") {
        result.verdict = SolverVerdict::Sat;
    } else if (token == "unsat") {
        result.verdict = SolverVerdict::Unsat;
    } else if (token == "unknown") {
        result.verdict = SolverVerdict::Unknown;
    } else {
        result.verdict = SolverVerdict::Error;
        auto nl = output.find('\n');
        result.detail = "solver output: " +
                        (output.empty() ? std::string("(none, exit ") +
                                              std::to_string(WIFEXITED(status)
                                                                 ? WEXITSTATUS(status)
                                                                 : -1) +
                                              ")"
                                        : output.substr(0, nl));
    }
    return result;
}

}  // namespace ctlhorn
