#include "crosscheck/formula_parse.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

namespace crosscheck::usl {

namespace {

struct Token {
    enum Kind { Ident, Number, Punct, End } kind = End;
    std::string text;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    Lexer(const std::string& src, int base_line) : src_(src), line_(base_line) {
        advance();
    }

    const Token& peek() const { return tok_; }

    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        fail_at(msg, tok_);
    }

    [[noreturn]] static void fail_at(const std::string& msg, const Token& t) {
        throw ParseError(msg, t.line, t.column);
    }

private:
    void advance() {
        while (pos_ < src_.size() &&
               (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                src_[pos_] == '\r')) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_base_ = pos_ + 1;
            }
            ++pos_;
        }
        tok_.line = line_;
        tok_.column = static_cast<int>(pos_ - col_base_) + 1;
        if (pos_ >= src_.size()) {
            tok_ = {Token::End, "", tok_.line, tok_.column};
            return;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                    src_[pos_] == '_'))
                ++pos_;
            tok_.kind = Token::Ident;
            tok_.text = src_.substr(start, pos_ - start);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
                    src_[pos_] == '.'))
                ++pos_;
            tok_.kind = Token::Number;
            tok_.text = src_.substr(start, pos_ - start);
            return;
        }
        // Two-character comparison operators first.
        if ((c == '<' || c == '>') && pos_ + 1 < src_.size() &&
            src_[pos_ + 1] == '=') {
            tok_ = {Token::Punct, src_.substr(pos_, 2), tok_.line, tok_.column};
            pos_ += 2;
            return;
        }
        tok_ = {Token::Punct, std::string(1, c), tok_.line, tok_.column};
        ++pos_;
    }

    const std::string& src_;
    size_t pos_ = 0;
    size_t col_base_ = 0;
    int line_;
    Token tok_;
};

class Parser {
public:
    Parser(const std::string& src, const FormulaLibrary& lib, int base_line)
        : lex_(src, base_line), lib_(lib) {}

    FormulaPtr parse() {
        FormulaPtr f = parse_chop();
        if (lex_.peek().kind != Token::End)
            lex_.fail("unexpected trailing input '" + lex_.peek().text + "'");
        return f;
    }

private:
    FormulaPtr parse_chop() {
        FormulaPtr lhs = parse_or();
        if (accept_punct(";")) return make_chop(lhs, parse_chop());
        return lhs;
    }

    FormulaPtr parse_or() {
        FormulaPtr lhs = parse_and();
        while (accept_punct("|")) lhs = make_or(lhs, parse_and());
        return lhs;
    }

    FormulaPtr parse_and() {
        FormulaPtr lhs = parse_unary();
        while (accept_punct("&")) lhs = make_and(lhs, parse_unary());
        return lhs;
    }

    FormulaPtr parse_unary() {
        if (accept_punct("!")) return make_not(parse_unary());
        return parse_primary();
    }

    FormulaPtr parse_primary() {
        const Token& t = lex_.peek();
        if (t.kind == Token::Punct && t.text == "(") {
            lex_.next();
            FormulaPtr f = parse_chop();
            expect_punct(")");
            return f;
        }
        if (t.kind != Token::Ident)
            lex_.fail(t.kind == Token::End ? "unexpected end of formula"
                                           : "unexpected token '" + t.text + "'");
        Token name = lex_.next();
        if (name.text == "free") return make_free();
        if (name.text == "crossing") return make_crossing();
        if (name.text == "re") {
            expect_punct("(");
            std::string id = expect_ident();
            expect_punct(")");
            return make_re(id);
        }
        if (name.text == "aut") {
            expect_punct("(");
            std::string id = expect_ident();
            expect_punct(")");
            expect_punct("=");
            Token v = lex_.next();
            if (v.kind != Token::Number || (v.text != "0" && v.text != "1"))
                Lexer::fail_at("expected 0 or 1 after aut(..)=", v);
            return make_aut(id, v.text == "1");
        }
        if (name.text == "sign") {
            expect_punct("(");
            std::string kind = expect_ident();
            expect_punct(")");
            if (kind == "stop") return make_sign(traffic::SignKind::Stop);
            if (kind == "give_way") return make_sign(traffic::SignKind::GiveWay);
            Lexer::fail_at("unknown sign kind '" + kind + "'", name);
        }
        if (name.text == "len") {
            Cmp cmp = expect_cmp();
            const Token& v = lex_.peek();
            if (v.kind == Token::Number) {
                double lit = std::strtod(lex_.next().text.c_str(), nullptr);
                return make_len(cmp, lit);
            }
            if (v.kind == Token::Ident && v.text == "size") {
                lex_.next();
                expect_punct("(");
                std::string id = expect_ident();
                expect_punct(")");
                return make_len_size(cmp, id);
            }
            lex_.fail("expected number or size(ID) after len comparison");
        }
        return expand_library(name);
    }

    FormulaPtr expand_library(const Token& name) {
        const auto* def = lib_.lookup(name.text);
        if (!def)
            Lexer::fail_at("unknown atom or formula name '" + name.text + "'",
                           name);
        std::vector<std::string> args;
        if (lex_.peek().kind == Token::Punct && lex_.peek().text == "(") {
            lex_.next();
            args.push_back(expect_ident());
            while (accept_punct(",")) args.push_back(expect_ident());
            expect_punct(")");
        }
        if (args.size() != def->first.size())
            Lexer::fail_at("formula '" + name.text + "' expects " +
                               std::to_string(def->first.size()) + " argument(s)",
                           name);
        FormulaPtr body = def->second;
        for (size_t i = 0; i < args.size(); ++i)
            body = substitute_agent(body, def->first[i], args[i]);
        return body;
    }

    bool accept_punct(const std::string& p) {
        if (lex_.peek().kind == Token::Punct && lex_.peek().text == p) {
            lex_.next();
            return true;
        }
        return false;
    }

    void expect_punct(const std::string& p) {
        if (!accept_punct(p)) lex_.fail("expected '" + p + "'");
    }

    std::string expect_ident() {
        if (lex_.peek().kind != Token::Ident) lex_.fail("expected identifier");
        return lex_.next().text;
    }

    Cmp expect_cmp() {
        const Token& t = lex_.peek();
        if (t.kind == Token::Punct) {
            if (t.text == "<") { lex_.next(); return Cmp::Lt; }
            if (t.text == "<=") { lex_.next(); return Cmp::Le; }
            if (t.text == "=") { lex_.next(); return Cmp::Eq; }
            if (t.text == ">=") { lex_.next(); return Cmp::Ge; }
            if (t.text == ">") { lex_.next(); return Cmp::Gt; }
        }
        lex_.fail("expected comparison operator");
    }

    Lexer lex_;
    const FormulaLibrary& lib_;
};

}  // namespace

FormulaPtr parse_formula(const std::string& text, const FormulaLibrary& lib) {
    return Parser(text, lib, 1).parse();
}

FormulaLibrary parse_library(const std::string& text) {
    FormulaLibrary lib = FormulaLibrary::with_defaults();
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string stripped = line.substr(0, line.find('#'));
        if (stripped.find_first_not_of(" \t\r") == std::string::npos) continue;
        size_t assign = stripped.find(":=");
        if (assign == std::string::npos)
            throw ParseError("expected 'name := formula'", lineno, 1);

        std::string head = stripped.substr(0, assign);
        std::string name;
        std::vector<std::string> params;
        {
            std::istringstream hs(head);
            // head is `name` or `name(P1, P2)`
            size_t paren = head.find('(');
            auto trim = [](std::string s) {
                size_t a = s.find_first_not_of(" \t");
                size_t b = s.find_last_not_of(" \t");
                return a == std::string::npos ? std::string()
                                              : s.substr(a, b - a + 1);
            };
            if (paren == std::string::npos) {
                name = trim(head);
            } else {
                name = trim(head.substr(0, paren));
                size_t close = head.find(')', paren);
                if (close == std::string::npos)
                    throw ParseError("unclosed parameter list", lineno, 1);
                std::string plist = head.substr(paren + 1, close - paren - 1);
                std::istringstream ps(plist);
                std::string p;
                while (std::getline(ps, p, ',')) {
                    p = trim(p);
                    if (!p.empty()) params.push_back(p);
                }
            }
            if (name.empty())
                throw ParseError("missing definition name", lineno, 1);
        }
        // Expansion happens against the library built so far, so definitions
        // cannot be recursive.
        FormulaPtr body =
            Parser(stripped.substr(assign + 2), lib, lineno).parse();
        lib.define(name, std::move(params), std::move(body));
    }
    return lib;
}

}  // namespace crosscheck::usl
