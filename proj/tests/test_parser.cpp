// Copyright (c) 2026 The lagforge authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "lagforge/errors.hpp"
#include "lagforge/parser.hpp"
#include "test_support.hpp"

using namespace lagforge;

TEST_CASE("single ground fact") {
    Program p = parse_program("attackerLocated(internet).");
    REQUIRE(p.facts.size() == 1);
    CHECK(p.rules.empty());
    CHECK(p.facts[0].predicate == "attackerLocated");
    CHECK(p.facts[0].arity() == 1);
    CHECK(p.facts[0].terms[0] == Term::constant("internet"));
}

TEST_CASE("wildcard desugars to a fresh variable occurring nowhere else") {
    Program p = parse_program("p(X) :- q(X, _).");
    REQUIRE(p.rules.size() == 1);
    const Rule& r = p.rules[0];
    const Term& w = r.body[0].atom.terms[1];
    CHECK(w.is_variable());
    CHECK(w.is_anonymous());
    int occurrences = 0;
    for (const Term& t : r.head.terms)
        occurrences += t == w;
    for (const Literal& l : r.body)
        for (const Term& t : l.atom.terms)
            occurrences += t == w;
    CHECK(occurrences == 1);
    CHECK(render(w) == "_");
}

TEST_CASE("two wildcards get distinct variables") {
    Program p = parse_program("p(X) :- q(X, _, _).");
    const Atom& a = p.rules[0].body[0].atom;
    CHECK(a.terms[1] != a.terms[2]);
}

TEST_CASE("unsafe rule: head variable unbound") {
    CHECK_THROWS_AS(parse_program("p(X) :- q(Y)."), UnsafeRuleError);
    try {
        parse_program("p(X) :- q(Y).");
    } catch (const UnsafeRuleError& e) {
        CHECK(e.variable == "X");
        CHECK(e.line == 1);
    }
}

TEST_CASE("unsafe rule: negated variable unbound") {
    CHECK_THROWS_AS(parse_program("p(X) :- q(X), not r(Y)."), UnsafeRuleError);
    // a wildcard inside a negated literal is a fresh variable, hence unsafe
    CHECK_THROWS_AS(parse_program("p(X) :- q(X), not r(X, _)."), UnsafeRuleError);
}

TEST_CASE("wildcard placement errors") {
    CHECK_THROWS_AS(parse_program("p(_)."), WildcardInFactError);
    CHECK_THROWS_AS(parse_program("p(_) :- q(X)."), WildcardInHeadError);
}

TEST_CASE("non-ground fact is rejected") {
    CHECK_THROWS_AS(parse_program("p(X)."), UnsafeRuleError);
}

TEST_CASE("comments and whitespace are insignificant") {
    Program p = parse_program(
        "% header comment\n"
        "p(a).   % trailing\n"
        "\n"
        "  q ( a ,\n     b ) .\n"
        "r(X):-p(X),q(X,_).");
    CHECK(p.facts.size() == 2);
    CHECK(p.rules.size() == 1);
}

TEST_CASE("quoted constants") {
    Program p = parse_program("vulExists(h1, 'CVE-2021-41773', httpd).");
    CHECK(p.facts[0].terms[1] == Term::constant("CVE-2021-41773"));
    CHECK(render(p.facts[0].terms[1]) == "'CVE-2021-41773'");

    SUBCASE("escape sequences") {
        Program q = parse_program("p('it\\'s', 'a\\\\b').");
        CHECK(q.facts[0].terms[0] == Term::constant("it's"));
        CHECK(q.facts[0].terms[1] == Term::constant("a\\b"));
    }
    SUBCASE("quoting is not part of constant identity") {
        Program q = parse_program("p('abc'). p(abc).");
        CHECK(q.facts.size() == 1); // same constant, deduplicated
    }
    SUBCASE("unterminated quote") {
        CHECK_THROWS_AS(parse_program("p('oops)."), SyntaxError);
    }
}

TEST_CASE("same name different arity predicates coexist") {
    Program p = parse_program("vulExists(h1, v1, sw). "
                              "vulExists(h1, v1, sw, remoteExploit, privEscalation).");
    CHECK(p.facts.size() == 2);
}

TEST_CASE("duplicate facts are deduplicated") {
    Program p = parse_program("p(a). p(b). p(a).");
    CHECK(p.facts.size() == 2);
}

TEST_CASE("negation keyword vs predicate named not") {
    Program p = parse_program("m(X) :- c(X), not v(X).");
    CHECK(p.rules[0].body[1].negated);
    CHECK(p.rules[0].body[1].atom.predicate == "v");

    Program q = parse_program("m(X) :- not(X).");
    CHECK_FALSE(q.rules[0].body[0].negated);
    CHECK(q.rules[0].body[0].atom.predicate == "not");

    Program r = parse_program("m(X) :- c(X), not not(X).");
    CHECK(r.rules[0].body[1].negated);
    CHECK(r.rules[0].body[1].atom.predicate == "not");
}

TEST_CASE("syntax errors carry position") {
    try {
        parse_program("p(a).\nq(b)");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.line == 2);
    }
    CHECK_THROWS_AS(parse_program("p(a"), SyntaxError);
    CHECK_THROWS_AS(parse_program("p()."), SyntaxError);
    CHECK_THROWS_AS(parse_program("p(a) q(b)."), SyntaxError);
    CHECK_THROWS_AS(parse_program("p(a) :- ."), SyntaxError);
    CHECK_THROWS_AS(parse_program("P(a)."), SyntaxError);  // predicate must be ident
    CHECK_THROWS_AS(parse_program("p(_x)."), SyntaxError); // '_' must stand alone
    CHECK_THROWS_AS(parse_program("p(a)? "), SyntaxError);
}

TEST_CASE("identifiers may start with digits") {
    Program p = parse_program("hacl(internet, h1, tcp, 443).");
    CHECK(p.facts[0].terms[3] == Term::constant("443"));
}

TEST_CASE("rule ids and provenance come from options") {
    Program p = parse_program("a(X) :- b(X). c(X) :- b(X).",
                              {.rule_id_prefix = "user.r", .first_rule_ordinal = 3});
    CHECK(p.rules[0].id == "user.r3");
    CHECK(p.rules[1].id == "user.r4");
    CHECK(p.rules[0].provenance == Provenance::User);
}

TEST_CASE("parse_atom") {
    Atom a = parse_atom("maliciousSA(sa5)");
    CHECK(a.ground());
    Atom b = parse_atom("vulExists(H, _, 'CVE-1')");
    CHECK_FALSE(b.ground());
    CHECK_THROWS_AS(parse_atom("maliciousSA(X)", /*require_ground=*/true), SyntaxError);
    CHECK_THROWS_AS(parse_atom("p(a). q(b)."), SyntaxError);
}

TEST_CASE("render/parse round trip on random programs") {
    std::mt19937_64 rng(20260810);
    for (int i = 0; i < 40; ++i) {
        Program p = lagforge::testing::random_program(rng, /*with_negation=*/true);
        std::string text;
        for (const Atom& f : p.facts)
            text += render(f) + ".\n";
        for (const Rule& r : p.rules)
            text += render_clause(r) + "\n";
        Program q = parse_program(text);
        CHECK(lagforge::testing::fact_set(p.facts) == lagforge::testing::fact_set(q.facts));
        REQUIRE(p.rules.size() == q.rules.size());
        for (std::size_t k = 0; k < p.rules.size(); ++k) {
            CHECK(p.rules[k].head == q.rules[k].head);
            CHECK(p.rules[k].body == q.rules[k].body);
        }
    }
}
