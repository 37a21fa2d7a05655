// Copyright (c) 2026 The lagforge authors
// SPDX-License-Identifier: Apache-2.0
#include "lagforge/ast.hpp"

#include <algorithm>
#include <set>

#include "lagforge/errors.hpp"

namespace lagforge {

Term Term::constant(std::string value) {
    return Term{TermKind::Constant, std::move(value)};
}

Term Term::variable(std::string name) {
    return Term{TermKind::Variable, std::move(name)};
}

Term Term::wildcard() {
    return Term{TermKind::Wildcard, {}};
}

bool Atom::ground() const {
    return std::all_of(terms.begin(), terms.end(),
                       [](const Term& t) { return t.is_constant(); });
}

std::string to_string(Provenance p) {
    switch (p) {
    case Provenance::Core: return "core";
    case Provenance::Ssc: return "ssc";
    case Provenance::User: return "user";
    }
    return "user";
}

std::vector<std::string> Rule::variables() const {
    std::vector<std::string> order;
    std::set<std::string> seen;
    auto visit = [&](const Atom& a) {
        for (const Term& t : a.terms)
            if (t.is_variable() && seen.insert(t.text).second)
                order.push_back(t.text);
    };
    visit(head);
    for (const Literal& l : body)
        visit(l.atom);
    return order;
}

std::size_t atom_hash(const Atom& a) {
    std::size_t h = std::hash<std::string>{}(a.predicate);
    for (const Term& t : a.terms) {
        h ^= std::hash<std::string>{}(t.text) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= static_cast<std::size_t>(t.kind);
    }
    return h;
}

void Program::add_fact(Atom fact) {
    std::size_t h = atom_hash(fact);
    auto& bucket = fact_index_[h];
    for (std::size_t i : bucket)
        if (facts[i] == fact)
            return;
    bucket.push_back(facts.size());
    facts.push_back(std::move(fact));
}

void Program::merge(const Program& other) {
    for (const Atom& f : other.facts)
        add_fact(f);
    rules.insert(rules.end(), other.rules.begin(), other.rules.end());
}

bool needs_quoting(const std::string& constant) {
    if (constant.empty())
        return true;
    char c0 = constant[0];
    if (!(std::islower(static_cast<unsigned char>(c0)) || std::isdigit(static_cast<unsigned char>(c0))))
        return true;
    for (char c : constant)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
            return true;
    return false;
}

std::string render(const Term& t) {
    switch (t.kind) {
    case TermKind::Wildcard:
        return "_";
    case TermKind::Variable:
        return t.is_anonymous() ? "_" : t.text;
    case TermKind::Constant:
        break;
    }
    if (!needs_quoting(t.text))
        return t.text;
    std::string out = "'";
    for (char c : t.text) {
        if (c == '\'' || c == '\\')
            out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('\'');
    return out;
}

std::string render(const Atom& a) {
    std::string out = a.predicate;
    out.push_back('(');
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        if (i)
            out += ", ";
        out += render(a.terms[i]);
    }
    out.push_back(')');
    return out;
}

std::string render(const Literal& l) {
    return l.negated ? "not " + render(l.atom) : render(l.atom);
}

std::string render_clause(const Rule& r) {
    std::string out = render(r.head);
    if (!r.body.empty()) {
        out += " :- ";
        for (std::size_t i = 0; i < r.body.size(); ++i) {
            if (i)
                out += ", ";
            out += render(r.body[i]);
        }
    }
    out.push_back('.');
    return out;
}

Atom substitute(const Atom& a, const std::map<std::string, std::string>& binding) {
    Atom out = a;
    for (Term& t : out.terms) {
        if (!t.is_variable())
            continue;
        auto it = binding.find(t.text);
        if (it != binding.end())
            t = Term::constant(it->second);
    }
    return out;
}

void validate_rule(const Rule& r, int line) {
    for (const Term& t : r.head.terms)
        if (t.is_wildcard())
            throw WildcardInHeadError(line, "wildcard in head of rule " + r.id);

    std::set<std::string> positive_vars;
    for (const Literal& l : r.body)
        if (!l.negated)
            for (const Term& t : l.atom.terms)
                if (t.is_variable())
                    positive_vars.insert(t.text);

    for (const Term& t : r.head.terms)
        if (t.is_variable() && !positive_vars.count(t.text)) {
            std::string what = r.body.empty()
                ? "variable " + t.text + " in fact " + render(r.head) + " (facts must be ground)"
                : "unsafe rule " + r.id + ": head variable " + t.text +
                  " is not bound by a positive body literal";
            throw UnsafeRuleError(r.id, line, t.text, what);
        }

    for (const Literal& l : r.body) {
        if (!l.negated)
            continue;
        for (const Term& t : l.atom.terms) {
            if (t.is_wildcard() || (t.is_variable() && !positive_vars.count(t.text))) {
                std::string name = t.is_wildcard() ? "_" : t.text;
                throw UnsafeRuleError(r.id, line, name,
                                      "unsafe rule " + r.id + ": variable " + name +
                                          " of negated literal " + render(l.atom) +
                                          " is not bound by a positive body literal");
            }
        }
    }
}

} // namespace lagforge
