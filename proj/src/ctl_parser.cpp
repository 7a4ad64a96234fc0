#include "ctlhorn/ctl_parser.hpp"

#include <cctype>
#include <optional>
#include <vector>

#include "ctlhorn/normalize.hpp"

namespace ctlhorn {

namespace {

enum class Tok {
    End,
    LParen,
    RParen,
    Comma,
    Not,
    AndAnd,
    OrOr,
    Arrow,
    Cmp,      // < <= = >= >
    Plus,
    Minus,
    Star,
    Integer,
    Ident,    // variable, true/false, or temporal keyword
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    Int value = 0;
    CmpOp cmp = CmpOp::Eq;
    SourceSpan span;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { next(); }

    [[nodiscard]] const Token& cur() const { return cur_; }

    void next() {
        skip_ws();
        cur_ = Token{};
        cur_.span = {line_, col_};
        if (pos_ >= text_.size()) {
            cur_.kind = Tok::End;
            return;
        }
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                digits.push_back(text_[pos_]);
                advance();
            }
            cur_.kind = Tok::Integer;
            cur_.value = std::stoll(digits);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string ident;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ident.push_back(text_[pos_]);
                advance();
            }
            cur_.kind = Tok::Ident;
            cur_.text = std::move(ident);
            return;
        }
        switch (c) {
            case '(': advance(); cur_.kind = Tok::LParen; return;
            case ')': advance(); cur_.kind = Tok::RParen; return;
            case ',': advance(); cur_.kind = Tok::Comma; return;
            case '+': advance(); cur_.kind = Tok::Plus; return;
            case '*': advance(); cur_.kind = Tok::Star; return;
            case '!': advance(); cur_.kind = Tok::Not; return;
            case '&':
                advance();
                expect_char('&');
                cur_.kind = Tok::AndAnd;
                return;
            case '|':
                advance();
                expect_char('|');
                cur_.kind = Tok::OrOr;
                return;
            case '-':
                advance();
                if (pos_ < text_.size() && text_[pos_] == '>') {
                    advance();
                    cur_.kind = Tok::Arrow;
                } else {
                    cur_.kind = Tok::Minus;
                }
                return;
            case '<':
                advance();
                cur_.kind = Tok::Cmp;
                if (pos_ < text_.size() && text_[pos_] == '=') {
                    advance();
                    cur_.cmp = CmpOp::Le;
                } else {
                    cur_.cmp = CmpOp::Lt;
                }
                return;
            case '>':
                advance();
                cur_.kind = Tok::Cmp;
                if (pos_ < text_.size() && text_[pos_] == '=') {
                    advance();
                    cur_.cmp = CmpOp::Ge;
                } else {
                    cur_.cmp = CmpOp::Gt;
                }
                return;
            case '=':
                advance();
                if (pos_ < text_.size() && text_[pos_] == '=') advance();
                cur_.kind = Tok::Cmp;
                cur_.cmp = CmpOp::Eq;
                return;
            default:
                fail(std::string("unexpected character '") + c + "'", cur_.span);
        }
    }

    [[noreturn]] static void fail(const std::string& msg, SourceSpan span) {
        throw ParseError(msg + " at line " + std::to_string(span.line) + ", column " +
                             std::to_string(span.col),
                         span);
    }

private:
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
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            advance();
        }
    }

    void expect_char(char c) {
        if (pos_ >= text_.size() || text_[pos_] != c) {
            fail(std::string("expected '") + c + "'", {line_, col_});
        }
        advance();
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token cur_;
};

class CtlParser {
public:
    explicit CtlParser(const std::string& text) : lex_(text) {}

    CtlPtr parse() {
        CtlPtr f = parse_imply();
        if (lex_.cur().kind != Tok::End) {
            Lexer::fail("unexpected trailing input", lex_.cur().span);
        }
        return f;
    }

private:
    static std::optional<CtlOp> unary_op(const std::string& s) {
        if (s == "AX") return CtlOp::AX;
        if (s == "EX") return CtlOp::EX;
        if (s == "AG") return CtlOp::AG;
        if (s == "EG") return CtlOp::EG;
        if (s == "AF") return CtlOp::AF;
        if (s == "EF") return CtlOp::EF;
        return std::nullopt;
    }

    CtlPtr parse_imply() {
        CtlPtr lhs = parse_or();
        if (lex_.cur().kind == Tok::Arrow) {
            SourceSpan span = lex_.cur().span;
            lex_.next();
            CtlPtr rhs = parse_imply();
            if (!is_assertion(lhs)) {
                Lexer::fail("antecedent of '->' must be an assertion", span);
            }
            return mk_imply(assertion_of(lhs), rhs);
        }
        return lhs;
    }

    CtlPtr parse_or() {
        CtlPtr f = parse_and();
        while (lex_.cur().kind == Tok::OrOr) {
            lex_.next();
            f = mk_binary(CtlOp::Or, f, parse_and());
        }
        return f;
    }

    CtlPtr parse_and() {
        CtlPtr f = parse_unary();
        while (lex_.cur().kind == Tok::AndAnd) {
            lex_.next();
            f = mk_binary(CtlOp::And, f, parse_unary());
        }
        return f;
    }

    CtlPtr parse_unary() {
        const Token& t = lex_.cur();
        if (t.kind == Tok::Not) {
            lex_.next();
            return negate_formula(parse_unary());
        }
        if (t.kind == Tok::Ident) {
            if (auto op = unary_op(t.text)) {
                lex_.next();
                return mk_unary(*op, parse_unary());
            }
            if (t.text == "AU" || t.text == "EU") {
                CtlOp op = t.text == "AU" ? CtlOp::AU : CtlOp::EU;
                lex_.next();
                expect(Tok::LParen, "'('");
                CtlPtr lhs = parse_imply();
                expect(Tok::Comma, "','");
                CtlPtr rhs = parse_imply();
                expect(Tok::RParen, "')'");
                return mk_binary(op, lhs, rhs);
            }
            if (t.text == "A" || t.text == "E" || t.text == "G" || t.text == "F" ||
                t.text == "X" || t.text == "U") {
                Lexer::fail("'" + t.text + "' is not an operator; use AX/EX/AG/EG/AF/EF/AU/EU",
                            t.span);
            }
            // Fall through: identifier starts a comparison.
        }
        if (t.kind == Tok::LParen) {
            lex_.next();
            CtlPtr f = parse_imply();
            expect(Tok::RParen, "')'");
            return f;
        }
        return parse_comparison();
    }

    CtlPtr parse_comparison() {
        const Token& t = lex_.cur();
        if (t.kind == Tok::Ident && t.text == "true") {
            lex_.next();
            return mk_ctl_atom(assr_true());
        }
        if (t.kind == Tok::Ident && t.text == "false") {
            lex_.next();
            return mk_ctl_atom(assr_false());
        }
        SourceSpan span = t.span;
        LinExpr lhs = parse_sum();
        if (lex_.cur().kind != Tok::Cmp) {
            Lexer::fail("expected comparison operator", lex_.cur().span);
        }
        CmpOp op = lex_.cur().cmp;
        lex_.next();
        LinExpr rhs = parse_sum();
        (void)span;
        return mk_ctl_atom(assr_cmp(std::move(lhs), op, std::move(rhs)));
    }

    // sum := term (('+' | '-') term)*
    LinExpr parse_sum() {
        LinExpr e = parse_term(/*negated=*/false);
        while (lex_.cur().kind == Tok::Plus || lex_.cur().kind == Tok::Minus) {
            bool minus = lex_.cur().kind == Tok::Minus;
            lex_.next();
            e.add(parse_term(minus));
        }
        return e;
    }

    // term := integer ('*' ident)? | ident | '-' term
    LinExpr parse_term(bool negated) {
        const Token& t = lex_.cur();
        Int sign = negated ? -1 : 1;
        if (t.kind == Tok::Minus) {
            lex_.next();
            return parse_term(!negated);
        }
        if (t.kind == Tok::Integer) {
            Int k = t.value;
            lex_.next();
            if (lex_.cur().kind == Tok::Star) {
                lex_.next();
                const Token& v = lex_.cur();
                if (v.kind != Tok::Ident) {
                    Lexer::fail("expected variable after '*'", v.span);
                }
                LinExpr e = LinExpr::var(v.text, sign * k);
                lex_.next();
                return e;
            }
            return LinExpr::lit(sign * k);
        }
        if (t.kind == Tok::Ident) {
            LinExpr e = LinExpr::var(t.text, sign);
            lex_.next();
            return e;
        }
        Lexer::fail("expected arithmetic term", t.span);
    }

    void expect(Tok kind, const char* what) {
        if (lex_.cur().kind != kind) {
            Lexer::fail(std::string("expected ") + what, lex_.cur().span);
        }
        lex_.next();
    }

    Lexer lex_;
};

}  // namespace

CtlPtr parse_ctl(const std::string& text) {
    CtlParser parser(text);
    return parser.parse();
}

}  // namespace ctlhorn
