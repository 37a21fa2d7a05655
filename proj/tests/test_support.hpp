// Copyright (c) 2026 The lagforge authors
// SPDX-License-Identifier: Apache-2.0
//
// Shared test helpers: a generator of random safe, stratifiable programs for
// differential/property tests, and an evaluator-independent proof oracle.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lagforge/ast.hpp"
#include "lagforge/parser.hpp"
#include "lagforge/stratify.hpp"

namespace lagforge::testing {

// Random programs over a small vocabulary: <= 8 predicates, <= 30 facts,
// <= 10 rules. Negated literals only mention extensional predicates, which
// keeps every generated program stratifiable; safety holds by construction.
inline Program random_program(std::mt19937_64& rng, bool with_negation) {
    struct Pred {
        std::string name;
        int arity;
        bool edb;
    };
    const std::vector<Pred> preds = {
        {"e1", 1, true},  {"e2", 2, true},  {"e3", 2, true},  {"e4", 1, true},
        {"q1", 1, false}, {"q2", 2, false}, {"q3", 1, false}, {"q4", 2, false},
    };
    const std::vector<std::string> consts = {"c0", "c1", "c2", "c3", "c4"};
    const std::vector<std::string> vars = {"X", "Y", "Z", "W"};
    auto pick = [&](auto& v) -> decltype(auto) { return v[rng() % v.size()]; };

    Program prog;
    int nfacts = 3 + static_cast<int>(rng() % 28);
    for (int i = 0; i < nfacts; ++i) {
        const Pred& p = preds[rng() % 10 < 8 ? rng() % 4 : 4 + rng() % 4];
        Atom f;
        f.predicate = p.name;
        for (int k = 0; k < p.arity; ++k)
            f.terms.push_back(Term::constant(pick(consts)));
        prog.add_fact(std::move(f));
    }

    int nrules = 1 + static_cast<int>(rng() % 10);
    for (int i = 0; i < nrules; ++i) {
        Rule r;
        r.id = "t.r" + std::to_string(i + 1);
        const Pred& hp = preds[4 + rng() % 4];
        int nbody = 1 + static_cast<int>(rng() % 3);
        std::vector<std::string> body_vars;
        for (int b = 0; b < nbody; ++b) {
            const Pred& bp = pick(preds);
            Atom a;
            a.predicate = bp.name;
            for (int k = 0; k < bp.arity; ++k) {
                if (rng() % 10 < 7) {
                    const std::string& v = pick(vars);
                    a.terms.push_back(Term::variable(v));
                    if (std::find(body_vars.begin(), body_vars.end(), v) == body_vars.end())
                        body_vars.push_back(v);
                } else {
                    a.terms.push_back(Term::constant(pick(consts)));
                }
            }
            r.body.push_back({std::move(a), false});
        }
        if (with_negation && rng() % 10 < 3) {
            const Pred& np = preds[rng() % 4]; // extensional only
            Atom a;
            a.predicate = np.name;
            bool ok = true;
            for (int k = 0; k < np.arity; ++k) {
                if (!body_vars.empty() && rng() % 2)
                    a.terms.push_back(Term::variable(body_vars[rng() % body_vars.size()]));
                else if (rng() % 2)
                    a.terms.push_back(Term::constant(pick(consts)));
                else if (!body_vars.empty())
                    a.terms.push_back(Term::variable(body_vars[rng() % body_vars.size()]));
                else
                    a.terms.push_back(Term::constant(pick(consts)));
                (void)ok;
            }
            r.body.push_back({std::move(a), true});
        }
        r.head.predicate = hp.name;
        for (int k = 0; k < hp.arity; ++k) {
            if (!body_vars.empty())
                r.head.terms.push_back(Term::variable(body_vars[rng() % body_vars.size()]));
            else
                r.head.terms.push_back(Term::constant(pick(consts)));
        }
        validate_rule(r);
        prog.rules.push_back(std::move(r));
    }
    return prog;
}

inline std::set<std::string> fact_set(const std::vector<Atom>& facts) {
    std::set<std::string> out;
    for (const Atom& f : facts)
        out.insert(render(f));
    return out;
}

// ---------------------------------------------------------------------------
// Independent oracle: naive stage-numbered fixpoint plus exhaustive
// enumeration of rule instantiations, used to cross-check the attack graph.
// String-atom based and deliberately simple; fine below ~1e4 facts.

struct OracleFixpoint {
    // stage: (stratum, round) per rendered fact; round 0 = given
    std::map<std::string, std::pair<int, int>> stage;
    std::vector<Atom> facts;

    bool contains(const Atom& a) const { return stage.count(render(a)) > 0; }
};

struct OracleInstantiation {
    std::string rule_id;
    Atom conclusion;
    std::vector<Atom> premises; // positive, rule order
};

namespace oracle_detail {

inline void enumerate_rule(const Rule& rule, const std::vector<Atom>& facts, std::size_t i,
                           std::map<std::string, std::string>& binding,
                           std::vector<Atom>& premises,
                           const std::function<void(const std::map<std::string, std::string>&,
                                                    const std::vector<Atom>&)>& sink) {
    while (i < rule.body.size() && rule.body[i].negated)
        ++i;
    if (i == rule.body.size()) {
        sink(binding, premises);
        return;
    }
    const Atom& pat = rule.body[i].atom;
    for (const Atom& f : facts) {
        if (f.predicate != pat.predicate || f.arity() != pat.arity())
            continue;
        std::vector<std::string> added;
        bool ok = true;
        for (int k = 0; k < pat.arity() && ok; ++k) {
            const Term& t = pat.terms[k];
            if (t.is_constant()) {
                ok = t.text == f.terms[k].text;
            } else {
                auto it = binding.find(t.text);
                if (it == binding.end()) {
                    binding.emplace(t.text, f.terms[k].text);
                    added.push_back(t.text);
                } else {
                    ok = it->second == f.terms[k].text;
                }
            }
        }
        if (ok) {
            premises.push_back(f);
            enumerate_rule(rule, facts, i + 1, binding, premises, sink);
            premises.pop_back();
        }
        for (const std::string& v : added)
            binding.erase(v);
    }
}

} // namespace oracle_detail

// Enumerates every instantiation of `rule` whose positive premises are in
// `facts` and whose negated literals are absent from `facts`.
inline std::vector<OracleInstantiation> oracle_instantiations(const Rule& rule,
                                                              const std::vector<Atom>& facts) {
    std::vector<OracleInstantiation> out;
    std::set<std::string> have = fact_set(facts);
    std::map<std::string, std::string> binding;
    std::vector<Atom> premises;
    oracle_detail::enumerate_rule(
        rule, facts, 0, binding, premises,
        [&](const std::map<std::string, std::string>& b, const std::vector<Atom>& prem) {
            for (const Literal& l : rule.body)
                if (l.negated && have.count(render(substitute(l.atom, b))))
                    return;
            out.push_back({rule.id, substitute(rule.head, b), prem});
        });
    return out;
}

// Naive stage-numbered fixpoint, stratum by stratum.
inline OracleFixpoint oracle_fixpoint(const Program& program) {
    OracleFixpoint fix;
    std::vector<Stratum> strata = stratify(program);
    std::map<PredicateRef, int> pred_stratum;
    for (const Stratum& s : strata)
        for (const PredicateRef& p : s.predicates)
            pred_stratum[p] = s.index;

    for (const Atom& f : program.facts)
        if (fix.stage.emplace(render(f), std::make_pair(pred_stratum.at({f.predicate, f.arity()}), 0)).second)
            fix.facts.push_back(f);

    for (const Stratum& s : strata) {
        int round = 0;
        bool changed = true;
        while (changed) {
            ++round;
            changed = false;
            std::vector<Atom> snapshot = fix.facts;
            for (const Rule& r : program.rules) {
                if (pred_stratum.at({r.head.predicate, r.head.arity()}) != s.index)
                    continue;
                for (const OracleInstantiation& inst : oracle_instantiations(r, snapshot)) {
                    if (fix.stage.emplace(render(inst.conclusion), std::make_pair(s.index, round))
                            .second) {
                        fix.facts.push_back(inst.conclusion);
                        changed = true;
                    }
                }
            }
        }
    }
    return fix;
}

// Facts on which the goals transitively depend through well-founded
// derivations: every premise strictly below its conclusion in (stratum,
// stage) order. Returns rendered facts, goals included.
inline std::set<std::string> oracle_support(const Program& program,
                                            const std::vector<Atom>& goals) {
    OracleFixpoint fix = oracle_fixpoint(program);

    // All well-founded instantiations over the fixpoint, grouped by conclusion.
    std::map<std::string, std::vector<OracleInstantiation>> by_conclusion;
    for (const Rule& r : program.rules)
        for (OracleInstantiation& inst : oracle_instantiations(r, fix.facts)) {
            auto ckey = fix.stage.at(render(inst.conclusion));
            bool wf = true;
            for (const Atom& p : inst.premises)
                if (!(fix.stage.at(render(p)) < ckey))
                    wf = false;
            if (wf)
                by_conclusion[render(inst.conclusion)].push_back(std::move(inst));
        }

    std::set<std::string> closure;
    std::vector<Atom> work;
    for (const Atom& g : goals)
        if (fix.contains(g) && closure.insert(render(g)).second)
            work.push_back(g);
    while (!work.empty()) {
        Atom f = work.back();
        work.pop_back();
        if (fix.stage.at(render(f)).second == 0)
            continue; // given
        for (const OracleInstantiation& inst : by_conclusion[render(f)])
            for (const Atom& p : inst.premises)
                if (closure.insert(render(p)).second)
                    work.push_back(p);
    }
    return closure;
}

} // namespace lagforge::testing
