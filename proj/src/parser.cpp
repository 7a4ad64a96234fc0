#include "ctlhorn/parser.hpp"

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace ctlhorn {

namespace {

/// Generic s-expression node: either an atom token or a parenthesized list.
struct SNode {
    bool is_atom = false;
    std::string atom;
    std::vector<SNode> items;
    SourceSpan span;
};

class SReader {
public:
    explicit SReader(const std::string& text) : text_(text) {}

    SNode read_all_single(const char* what) {
        skip_ws();
        if (eof()) fail(std::string("expected ") + what, here());
        SNode node = read_node();
        skip_ws();
        if (!eof()) fail("unexpected trailing input", here());
        return node;
    }

private:
    [[nodiscard]] bool eof() const { return pos_ >= text_.size(); }
    [[nodiscard]] char peek() const { return text_[pos_]; }
    [[nodiscard]] SourceSpan here() const { return {line_, col_}; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_ws() {
        while (!eof()) {
            char c = peek();
            if (c == ';') {
                while (!eof() && peek() != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    [[noreturn]] static void fail(const std::string& msg, SourceSpan span) {
        throw ParseError(msg + " at line " + std::to_string(span.line) + ", column " +
                             std::to_string(span.col),
                         span);
    }

    static bool is_atom_char(char c) {
        return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ';';
    }

    SNode read_node() {
        SourceSpan start = here();
        if (peek() == '(') {
            advance();
            SNode node;
            node.span = start;
            while (true) {
                skip_ws();
                if (eof()) fail("unterminated list", start);
                if (peek() == ')') {
                    advance();
                    return node;
                }
                node.items.push_back(read_node());
            }
        }
        if (peek() == ')') fail("unexpected ')'", start);
        SNode node;
        node.is_atom = true;
        node.span = start;
        while (!eof() && is_atom_char(peek())) {
            node.atom.push_back(peek());
            advance();
        }
        return node;
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

[[noreturn]] void fail_at(const std::string& msg, const SNode& node) {
    throw ParseError(msg + " at line " + std::to_string(node.span.line) + ", column " +
                         std::to_string(node.span.col),
                     node.span);
}

bool is_integer(const std::string& s) {
    if (s.empty()) return false;
    size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    }
    return true;
}

LinExpr parse_expr(const SNode& node) {
    if (node.is_atom) {
        if (is_integer(node.atom)) return LinExpr::lit(std::stoll(node.atom));
        if (is_identifier(node.atom)) return LinExpr::var(node.atom);
        fail_at("expected integer or variable, found '" + node.atom + "'", node);
    }
    if (node.items.empty() || !node.items[0].is_atom) {
        fail_at("expected arithmetic operator", node);
    }
    const std::string& op = node.items[0].atom;
    if (op == "+") {
        LinExpr e;
        for (size_t i = 1; i < node.items.size(); ++i) e.add(parse_expr(node.items[i]));
        return e;
    }
    if (op == "-") {
        if (node.items.size() < 2) fail_at("'-' needs at least one operand", node);
        if (node.items.size() == 2) return parse_expr(node.items[1]).scaled(-1);
        LinExpr e = parse_expr(node.items[1]);
        for (size_t i = 2; i < node.items.size(); ++i) e.add(parse_expr(node.items[i]), -1);
        return e;
    }
    if (op == "*") {
        if (node.items.size() != 3) fail_at("'*' takes exactly two operands", node);
        LinExpr a = parse_expr(node.items[1]);
        LinExpr b = parse_expr(node.items[2]);
        if (a.is_constant()) return b.scaled(a.constant);
        if (b.is_constant()) return a.scaled(b.constant);
        fail_at("'*' requires a constant operand (linear arithmetic)", node);
    }
    fail_at("unknown arithmetic operator '" + op + "'", node.items[0]);
}

std::optional<CmpOp> cmp_of(const std::string& s) {
    if (s == "<") return CmpOp::Lt;
    if (s == "<=") return CmpOp::Le;
    if (s == "=") return CmpOp::Eq;
    if (s == ">=") return CmpOp::Ge;
    if (s == ">") return CmpOp::Gt;
    return std::nullopt;
}

AssertionPtr parse_assertion_node(const SNode& node) {
    if (node.is_atom) {
        if (node.atom == "true") return assr_true();
        if (node.atom == "false") return assr_false();
        fail_at("expected assertion, found '" + node.atom + "'", node);
    }
    if (node.items.empty() || !node.items[0].is_atom) {
        fail_at("expected assertion operator", node);
    }
    const std::string& op = node.items[0].atom;
    if (auto cmp = cmp_of(op)) {
        if (node.items.size() != 3) fail_at("'" + op + "' takes exactly two operands", node);
        return assr_cmp(parse_expr(node.items[1]), *cmp, parse_expr(node.items[2]));
    }
    if (op == "not") {
        if (node.items.size() != 2) fail_at("'not' takes exactly one operand", node);
        return assr_not(parse_assertion_node(node.items[1]));
    }
    if (op == "and" || op == "or") {
        std::vector<AssertionPtr> args;
        for (size_t i = 1; i < node.items.size(); ++i) {
            args.push_back(parse_assertion_node(node.items[i]));
        }
        return op == "and" ? assr_and(std::move(args)) : assr_or(std::move(args));
    }
    fail_at("unknown assertion operator '" + op + "'", node.items[0]);
}

const SNode& expect_keyword_list(const SNode& node, const std::string& keyword) {
    if (node.is_atom || node.items.empty() || !node.items[0].is_atom ||
        node.items[0].atom != keyword) {
        fail_at("expected (" + keyword + " ...)", node);
    }
    return node;
}

}  // namespace

TransitionSystem parse_system(const std::string& text) {
    SReader reader(text);
    SNode root = reader.read_all_single("(system ...)");
    expect_keyword_list(root, "system");
    if (root.items.size() != 4) {
        fail_at("(system ...) takes (vars ...), (init ...), (trans ...)", root);
    }

    TransitionSystem ts;

    const SNode& vars = expect_keyword_list(root.items[1], "vars");
    if (vars.items.size() < 2) fail_at("at least one variable is required", vars);
    for (size_t i = 1; i < vars.items.size(); ++i) {
        const SNode& decl = vars.items[i];
        if (decl.is_atom || decl.items.size() != 2 || !decl.items[0].is_atom ||
            !decl.items[1].is_atom || decl.items[1].atom != "Int") {
            fail_at("variable declaration must be (<name> Int)", decl);
        }
        if (!is_identifier(decl.items[0].atom)) {
            fail_at("invalid variable name '" + decl.items[0].atom + "'", decl.items[0]);
        }
        ts.vars.push_back(decl.items[0].atom);
    }

    const SNode& init = expect_keyword_list(root.items[2], "init");
    if (init.items.size() != 2) fail_at("(init ...) takes exactly one assertion", init);
    ts.init = parse_assertion_node(init.items[1]);

    const SNode& trans = expect_keyword_list(root.items[3], "trans");
    for (size_t i = 1; i < trans.items.size(); ++i) {
        const SNode& rule = expect_keyword_list(trans.items[i], "rule");
        if (rule.items.size() != 3) {
            fail_at("(rule ...) takes a guard and an update list", rule);
        }
        GuardedCommand cmd;
        cmd.site_id = static_cast<int>(ts.trans.size());
        cmd.guard = parse_assertion_node(rule.items[1]);
        const SNode& upds = rule.items[2];
        if (upds.is_atom) fail_at("expected update list", upds);
        std::map<std::string, Update> by_name;
        for (const SNode& upd : upds.items) {
            if (upd.is_atom || upd.items.size() != 2 || !upd.items[0].is_atom) {
                fail_at("update must be (<name> <expr>) or (<name> *)", upd);
            }
            const std::string& name = upd.items[0].atom;
            if (by_name.count(name)) {
                fail_at("variable updated twice in one rule: " + name, upd.items[0]);
            }
            Update u;
            if (upd.items[1].is_atom && upd.items[1].atom == "*") {
                u.havoc = true;
            } else {
                u.expr = parse_expr(upd.items[1]);
            }
            by_name.emplace(name, std::move(u));
        }
        // Updates are stored in declaration order regardless of source order.
        for (const auto& v : ts.vars) {
            auto it = by_name.find(v);
            if (it == by_name.end()) {
                fail_at("rule does not update variable " + v, rule);
            }
            cmd.updates.emplace_back(v, std::move(it->second));
            by_name.erase(it);
        }
        if (!by_name.empty()) {
            fail_at("rule updates undeclared variable " + by_name.begin()->first, rule);
        }
        ts.trans.push_back(std::move(cmd));
    }

    validate(ts);
    return ts;
}

AssertionPtr parse_assertion_sexpr(const std::string& text) {
    SReader reader(text);
    SNode root = reader.read_all_single("assertion");
    return parse_assertion_node(root);
}

}  // namespace ctlhorn
