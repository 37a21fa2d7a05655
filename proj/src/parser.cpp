// Copyright (c) 2026 The lagforge authors
// SPDX-License-Identifier: Apache-2.0
#include "lagforge/parser.hpp"

#include <cctype>

#include "lagforge/errors.hpp"

namespace lagforge {
namespace {

enum class Tok : std::uint8_t {
    Ident,      // [a-z0-9][A-Za-z0-9_]*
    Variable,   // [A-Z][A-Za-z0-9_]*
    Quoted,     // '...' with \' and \\ escapes (text holds the unescaped value)
    Underscore, // _
    LParen,
    RParen,
    Comma,
    Period,
    Turnstile, // :-
    End,
};

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_trivia();
        int line = line_, col = col_;
        if (eof())
            return {Tok::End, "", line, col};
        char c = peek();
        if (c == '(') { advance(); return {Tok::LParen, "(", line, col}; }
        if (c == ')') { advance(); return {Tok::RParen, ")", line, col}; }
        if (c == ',') { advance(); return {Tok::Comma, ",", line, col}; }
        if (c == '.') { advance(); return {Tok::Period, ".", line, col}; }
        if (c == ':') {
            advance();
            if (eof() || peek() != '-')
                throw SyntaxError(line, col, "expected ':-'");
            advance();
            return {Tok::Turnstile, ":-", line, col};
        }
        if (c == '\'')
            return quoted(line, col);
        if (c == '_') {
            advance();
            if (!eof() && is_ident_char(peek()))
                throw SyntaxError(line, col,
                                  "'_' must stand alone (variables start with an uppercase letter)");
            return {Tok::Underscore, "_", line, col};
        }
        if (std::isupper(static_cast<unsigned char>(c)))
            return word(Tok::Variable, line, col);
        if (std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)))
            return word(Tok::Ident, line, col);
        throw SyntaxError(line, col, std::string("unexpected character '") + c + "'");
    }

private:
    bool eof() const { return pos_ >= src_.size(); }
    char peek() const { return src_[pos_]; }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_trivia() {
        while (!eof()) {
            char c = peek();
            if (c == '%') {
                while (!eof() && peek() != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    static bool is_ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }

    Token word(Tok kind, int line, int col) {
        std::string text;
        while (!eof() && is_ident_char(peek())) {
            text.push_back(peek());
            advance();
        }
        return {kind, std::move(text), line, col};
    }

    Token quoted(int line, int col) {
        advance(); // opening quote
        std::string text;
        while (true) {
            if (eof())
                throw SyntaxError(line, col, "unterminated quoted constant");
            char c = peek();
            advance();
            if (c == '\\') {
                if (eof())
                    throw SyntaxError(line, col, "unterminated quoted constant");
                char esc = peek();
                advance();
                if (esc == '\'' || esc == '\\')
                    text.push_back(esc);
                else {
                    text.push_back('\\');
                    text.push_back(esc);
                }
            } else if (c == '\'') {
                break;
            } else {
                text.push_back(c);
            }
        }
        return {Tok::Quoted, std::move(text), line, col};
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    Parser(std::string_view src, const ParseOptions& options)
        : lexer_(src), options_(options) {
        cur_ = lexer_.next();
    }

    Program program() {
        Program prog;
        int ordinal = options_.first_rule_ordinal;
        while (cur_.kind != Tok::End) {
            int line = cur_.line;
            wildcard_counter_ = 0;
            Atom head = atom(/*allow_wildcard=*/true);
            if (cur_.kind == Tok::Period) {
                advance();
                fact(prog, head, line);
            } else if (cur_.kind == Tok::Turnstile) {
                advance();
                rule(prog, std::move(head), line, ordinal++);
            } else {
                throw SyntaxError(cur_.line, cur_.column, "expected '.' or ':-'");
            }
        }
        return prog;
    }

    Atom single_atom(bool require_ground) {
        Atom a = atom(/*allow_wildcard=*/!require_ground);
        if (cur_.kind == Tok::Period)
            advance();
        expect(Tok::End, "end of input");
        if (require_ground && !a.ground())
            throw SyntaxError(1, 1, "expected a ground atom: " + render(a));
        return a;
    }

private:
    void advance() { cur_ = lexer_.next(); }

    void expect(Tok kind, const char* what) {
        if (cur_.kind != kind)
            throw SyntaxError(cur_.line, cur_.column,
                              std::string("expected ") + what + ", got '" + cur_.text + "'");
    }

    void fact(Program& prog, Atom& head, int line) {
        for (const Term& t : head.terms) {
            if (t.is_wildcard() || (t.is_variable() && t.is_anonymous()))
                throw WildcardInFactError(line, "wildcard in fact " + head.predicate + "/" +
                                                    std::to_string(head.arity()));
            if (t.is_variable())
                throw UnsafeRuleError("", line, t.text,
                                      "variable " + t.text + " in fact " + render(head) +
                                          " at line " + std::to_string(line) +
                                          " (facts must be ground)");
        }
        prog.add_fact(std::move(head));
    }

    void rule(Program& prog, Atom head, int line, int ordinal) {
        for (const Term& t : head.terms)
            if (t.is_wildcard() || (t.is_variable() && t.is_anonymous()))
                throw WildcardInHeadError(line, "wildcard in head of rule at line " +
                                                    std::to_string(line));
        Rule r;
        r.id = options_.rule_id_prefix + std::to_string(ordinal);
        r.provenance = options_.provenance;
        r.head = std::move(head);
        r.body.push_back(literal());
        while (cur_.kind == Tok::Comma) {
            advance();
            r.body.push_back(literal());
        }
        expect(Tok::Period, "'.'");
        advance();
        validate_rule(r, line);
        prog.rules.push_back(std::move(r));
    }

    Literal literal() {
        // `not` negates only when followed by an atom name; `not(...)` is an
        // ordinary atom with predicate "not".
        if (cur_.kind == Tok::Ident && cur_.text == "not") {
            Token saved = cur_;
            advance();
            if (cur_.kind == Tok::Ident)
                return {atom(/*allow_wildcard=*/true), true};
            if (cur_.kind != Tok::LParen)
                throw SyntaxError(cur_.line, cur_.column, "expected an atom after 'not'");
            return {atom_with_name(saved), false};
        }
        return {atom(/*allow_wildcard=*/true), false};
    }

    Atom atom(bool allow_wildcard) {
        expect(Tok::Ident, "a predicate name");
        Token name = cur_;
        advance();
        return atom_with_name(name, allow_wildcard);
    }

    Atom atom_with_name(const Token& name, bool allow_wildcard = true) {
        Atom a;
        a.predicate = name.text;
        expect(Tok::LParen, "'('");
        advance();
        a.terms.push_back(term(allow_wildcard));
        while (cur_.kind == Tok::Comma) {
            advance();
            a.terms.push_back(term(allow_wildcard));
        }
        expect(Tok::RParen, "')'");
        advance();
        return a;
    }

    Term term(bool allow_wildcard) {
        Token t = cur_;
        switch (t.kind) {
        case Tok::Ident:
        case Tok::Quoted:
            advance();
            return Term::constant(t.text);
        case Tok::Variable:
            advance();
            return Term::variable(t.text);
        case Tok::Underscore:
            advance();
            if (!allow_wildcard)
                return Term::wildcard(); // caught by the fact/head checks
            // Fresh variable per occurrence; the '_' prefix cannot collide
            // with user variables and renders back as '_'.
            return Term::variable("_" + std::to_string(++wildcard_counter_));
        default:
            throw SyntaxError(t.line, t.column, "expected a term, got '" + t.text + "'");
        }
    }

    Lexer lexer_;
    ParseOptions options_;
    Token cur_{Tok::End, "", 0, 0};
    int wildcard_counter_ = 0;
};

} // namespace

Program parse_program(std::string_view source, const ParseOptions& options) {
    return Parser(source, options).program();
}

Atom parse_atom(std::string_view source, bool require_ground) {
    return Parser(source, {}).single_atom(require_ground);
}

} // namespace lagforge
