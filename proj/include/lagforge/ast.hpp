// Copyright (c) 2026 The lagforge authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace lagforge {

enum class TermKind : std::uint8_t { Constant, Variable, Wildcard };

// A term of the clause language. Constants are stored unquoted; quoting is a
// rendering concern. Variables created by desugaring `_` get names starting
// with '_' (which no user-written variable can have) and render back as `_`.
struct Term {
    TermKind kind = TermKind::Constant;
    std::string text;

    static Term constant(std::string value);
    static Term variable(std::string name);
    static Term wildcard();

    bool is_constant() const { return kind == TermKind::Constant; }
    bool is_variable() const { return kind == TermKind::Variable; }
    bool is_wildcard() const { return kind == TermKind::Wildcard; }
    bool is_anonymous() const { return is_variable() && !text.empty() && text[0] == '_'; }

    bool operator==(const Term&) const = default;
};

struct Atom {
    std::string predicate;
    std::vector<Term> terms;

    int arity() const { return static_cast<int>(terms.size()); }
    bool ground() const;

    bool operator==(const Atom&) const = default;
};

struct Literal {
    Atom atom;
    bool negated = false;

    bool operator==(const Literal&) const = default;
};

enum class Provenance : std::uint8_t { Core, Ssc, User };

std::string to_string(Provenance p);

struct Rule {
    std::string id;
    Atom head;
    std::vector<Literal> body;
    Provenance provenance = Provenance::User;
    std::string label;

    // Variable names in order of first occurrence (head first, then body).
    std::vector<std::string> variables() const;
};

std::size_t atom_hash(const Atom& a);

// Facts are ground and deduplicated; insertion order is preserved. Add facts
// through add_fact so the dedup index stays in sync.
struct Program {
    std::vector<Atom> facts;
    std::vector<Rule> rules;

    void add_fact(Atom fact);
    void merge(const Program& other);

private:
    std::unordered_map<std::size_t, std::vector<std::size_t>> fact_index_;
};

// Rendering. Constants that match the bare-identifier grammar print unquoted,
// everything else single-quoted with \' and \\ escapes.
std::string render(const Term& t);
std::string render(const Atom& a);
std::string render(const Literal& l);
std::string render_clause(const Rule& r); // "head :- b1, b2." or "head." for facts
bool needs_quoting(const std::string& constant);

// Applies a variable binding to an atom. Unbound variables are left in place.
Atom substitute(const Atom& a, const std::map<std::string, std::string>& binding);

// Throws UnsafeRuleError / WildcardInHeadError if the rule violates the safety
// conditions: every head variable and every variable of a negated literal must
// occur in a positive body literal; the head must not contain wildcards.
void validate_rule(const Rule& r, int line = 0);

} // namespace lagforge
