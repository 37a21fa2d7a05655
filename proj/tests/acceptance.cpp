// Copyright (c) 2026 The lagforge authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. Runs every criterion end to end and prints one PASS/FAIL
// line each; exits nonzero if any fails.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lagforge/errors.hpp"
#include "lagforge/eval.hpp"
#include "lagforge/graph.hpp"
#include "lagforge/parser.hpp"
#include "lagforge/rules.hpp"
#include "lagforge/scenarios.hpp"
#include "lagforge/stratify.hpp"
#include "test_support.hpp"

using namespace lagforge;
using lagforge::testing::fact_set;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void criterion(int number, const std::string& name, const std::function<void()>& body) {
    try {
        body();
        std::cout << "[PASS] criterion " << number << ": " << name << "\n";
    } catch (const std::exception& e) {
        ++failures;
        std::cout << "[FAIL] criterion " << number << ": " << name << " — " << e.what() << "\n";
    }
}

void expect(bool cond, const std::string& what) {
    if (!cond)
        throw std::runtime_error("expected: " + what);
}

Program with_rules(const std::string& facts) {
    Program p = parse_program(facts);
    for (Rule& r : selected_rules("both"))
        p.rules.push_back(std::move(r));
    return p;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string remove_line(std::string text, const std::string& line) {
    auto pos = text.find(line);
    expect(pos != std::string::npos, "line present for ablation: " + line);
    text.erase(pos, line.size());
    return text;
}

} // namespace

int main() {
    // 1. Scenario-1 reproduction: sa5/sa6 malicious, graph mixes provenances,
    //    under one second.
    criterion(1, "scenario-1 reproduction (sa5, sa6; mixed-provenance graph; <1s)", [] {
        auto t0 = Clock::now();
        Program p = with_rules(packaged_scenario("fig1-listing7").text);
        auto [db, log] = evaluate(p);
        expect(db.contains(parse_atom("maliciousSA(sa5)")), "maliciousSA(sa5) derivable");
        expect(db.contains(parse_atom("maliciousSA(sa6)")), "maliciousSA(sa6) derivable");
        AttackGraph g = build_graph(db, log, {parse_atom("maliciousSA(sa5)")});
        GraphStats s = stats(g);
        expect(s.and_by_provenance.count("core") && s.and_by_provenance.at("core") > 0,
               "core-provenance AND nodes present");
        expect(s.and_by_provenance.count("ssc") && s.and_by_provenance.at("ssc") > 0,
               "ssc-provenance AND nodes present");
        expect(seconds_since(t0) < 1.0, "runtime < 1 s");
    });

    // 2. Ablations: either missing fact breaks the only path to sa5.
    criterion(2, "ablations (hacl / polkit vulProperty) block maliciousSA(sa5)", [] {
        const std::string text = packaged_scenario("fig1-listing7").text;
        for (const char* line :
             {"hacl(internet, h1, tcp, 443).\n",
              "vulProperty('CVE-2021-3560', localExploit, privEscalation).\n"}) {
            auto [db, log] = evaluate(with_rules(remove_line(text, line)));
            expect(!db.contains(parse_atom("maliciousSA(sa5)")),
                   "maliciousSA(sa5) underivable without " + std::string(line));
        }
        auto [db, log] = evaluate(with_rules(text));
        expect(db.contains(parse_atom("maliciousSA(sa5)")), "control: derivable with all facts");
    });

    // 3. Naive vs semi-naive fact-set equality.
    criterion(3, "differential oracle (7 scenarios + 200 random programs)", [] {
        for (const PackagedScenario& s : packaged_scenarios()) {
            Program p = with_rules(s.text);
            expect(fact_set(evaluate(p).db.all_facts()) ==
                       fact_set(evaluate_naive(p).all_facts()),
                   "fact sets equal on " + s.name);
        }
        std::mt19937_64 rng(20260810);
        for (int i = 0; i < 200; ++i) {
            Program p = lagforge::testing::random_program(rng, /*with_negation=*/true);
            expect(fact_set(evaluate(p).db.all_facts()) ==
                       fact_set(evaluate_naive(p).all_facts()),
                   "fact sets equal on random program " + std::to_string(i));
        }
    });

    // 4. Chain-length and trust-chain-depth properties.
    criterion(4, "propagation over chains n=1..50 and trust chains d=1..20 (<10s)", [] {
        auto t0 = Clock::now();
        for (int n = 1; n <= 50; ++n) {
            std::string text = "vulExists(h0, 'V-1', sa0).\n";
            for (int i = 0; i < n; ++i) {
                text += "wasInputTo(sa" + std::to_string(i) + ", t" + std::to_string(i + 1) +
                        ").\n";
                text += "generated(t" + std::to_string(i + 1) + ", sa" + std::to_string(i + 1) +
                        ").\n";
            }
            auto [db, log] = evaluate(with_rules(text));
            expect(db.contains(parse_atom("vulnerableSA(sa" + std::to_string(n) + ", 'V-1')")),
                   "vulnerableSA propagates to sa" + std::to_string(n));
        }
        for (int d = 1; d <= 20; ++d) {
            std::string text = "compromisedH(h0).\nwasPresent(k0, h0).\nsignedC(k0, c0).\n";
            for (int i = 0; i + 1 < d; ++i)
                text += "issued(c" + std::to_string(i) + ", c" + std::to_string(i + 1) + ").\n";
            text += "validateSA(c" + std::to_string(d - 1) + ", sa_leaf).\n";
            auto [db, log] = evaluate(with_rules(text));
            expect(db.contains(parse_atom("maliciousSA(sa_leaf)")),
                   "trust chain of depth " + std::to_string(d) + " compromises the leaf");
        }
        expect(seconds_since(t0) < 10.0, "total runtime < 10 s");
    });

    // 5. Isolation pattern pair.
    criterion(5, "isolated build environments block cross-BE compromise unless escape", [] {
        const std::string base = packaged_scenario("isolation-isolated").text;
        auto [db, log] = evaluate(with_rules(base));
        expect(!db.contains(parse_atom("compromisedT(t2, be2)")),
               "no cross-BE compromisedT without an escape vulnerability");
        const std::string escape = base +
                                   "wasPresent(sa_vuln, be1).\n"
                                   "vulExists(be1, 'CVE-2019-5736', sa_vuln).\n"
                                   "vulProperty('CVE-2019-5736', localExploit, isolationEscape).\n";
        auto [db2, log2] = evaluate(with_rules(escape));
        expect(db2.contains(parse_atom("isolationEscapeBE(be1)")), "escape derived");
        expect(db2.contains(parse_atom("compromisedT(t2, be2)")),
               "cross-BE compromisedT with the escape vulnerability");
    });

    // 6. Authenticity guard.
    criterion(6, "validateSA blocks tamper rules until its trust chain is compromised", [] {
        const std::string guarded = "compromisedH(hA).\ntransferred(sa_x, hA).\n"
                                    "validateSA(c_ok, sa_x).\n";
        auto [db, log] = evaluate(with_rules(guarded));
        expect(!db.contains(parse_atom("maliciousSA(sa_x)")), "tamper rule blocked");
        const std::string broken = guarded + "wasPresent(k1, hA).\nsignedC(k1, c_ok).\n";
        auto [db2, log2] = evaluate(with_rules(broken));
        expect(db2.contains(parse_atom("maliciousSA(sa_x)")),
               "compromising the issuing key unblocks the attack");
        auto ds = derivations_of(log2, parse_atom("maliciousSA(sa_x)"));
        expect(ds.size() == 1 && ds[0].rule_id == "ssc.sa-by-cert",
               "derivation goes through the compromised certificate");
    });

    // 7. 3CX double supply-chain attack.
    criterion(7, "3cx: customer host compromised via two transformer compromises", [] {
        auto [db, log] = evaluate(with_rules(packaged_scenario("3cx").text));
        expect(db.contains(parse_atom("compromisedH(h_customer)")),
               "compromisedH(h_customer) derivable");
        AttackGraph g = build_graph(db, log, {parse_atom("compromisedH(h_customer)")});
        int compromised_t = 0;
        for (const GraphNode& n : g.nodes)
            compromised_t += n.kind == NodeKind::Or && n.label.rfind("compromisedT(", 0) == 0;
        expect(compromised_t >= 2, ">= 2 distinct compromisedT OR nodes, got " +
                                       std::to_string(compromised_t));
    });

    // 8. Graph well-formedness on every packaged scenario.
    criterion(8, "graph soundness, acyclicity, pruning, leaves, oracle equivalence", [] {
        for (const PackagedScenario& scenario : packaged_scenarios()) {
            Program p = with_rules(scenario.text);
            auto [db, log] = evaluate(p);
            std::vector<Atom> goals;
            for (const std::string& g : scenario.goals)
                goals.push_back(parse_atom(g));
            AttackGraph g = build_graph(db, log, goals);
            expect(g.missing_goals.empty(), scenario.name + ": all goals derivable");

            // acyclicity: ids are topological
            for (auto [from, to] : g.edges)
                expect(from < to, scenario.name + ": edge respects topological ids");

            // soundness replay: AND nodes match recorded derivations
            std::map<int, const GraphNode*> by_id;
            for (const GraphNode& n : g.nodes)
                by_id[n.id] = &n;
            std::map<int, std::set<std::string>> premises_of;
            std::map<int, int> conclusion_of;
            for (auto [from, to] : g.edges) {
                if (by_id.at(to)->kind == NodeKind::And)
                    premises_of[to].insert(by_id.at(from)->label);
                if (by_id.at(from)->kind == NodeKind::And)
                    conclusion_of[from] = to;
            }
            for (const GraphNode& n : g.nodes) {
                if (n.kind != NodeKind::And)
                    continue;
                const GraphNode* conclusion = by_id.at(conclusion_of.at(n.id));
                bool matched = false;
                for (const DerivationInfo& d :
                     derivations_of(log, parse_atom(conclusion->label))) {
                    if (d.rule_id != n.rule_id)
                        continue;
                    std::set<std::string> prem;
                    for (const Atom& a : d.premises)
                        prem.insert(render(a));
                    matched |= prem == premises_of[n.id];
                }
                expect(matched, scenario.name + ": AND node replays a recorded derivation");
            }

            // leaf soundness
            std::set<std::string> given = fact_set(p.facts);
            for (const GraphNode& n : g.nodes)
                if (n.kind == NodeKind::Leaf)
                    expect(given.count(n.label) == 1,
                           scenario.name + ": leaf is a given fact");

            // prune correctness and idempotence
            std::set<int> reaches(g.goal_ids.begin(), g.goal_ids.end());
            bool grew = true;
            while (grew) {
                grew = false;
                for (auto [from, to] : g.edges)
                    if (reaches.count(to) && reaches.insert(from).second)
                        grew = true;
            }
            for (const GraphNode& n : g.nodes)
                expect(reaches.count(n.id) == 1, scenario.name + ": node reaches a goal");
            expect(build_graph(db, log, goals) == g, scenario.name + ": re-pruning idempotent");

            // completeness against the brute-force proof enumeration
            std::set<std::string> node_facts;
            for (const GraphNode& n : g.nodes)
                if (n.kind != NodeKind::And)
                    node_facts.insert(n.label);
            expect(node_facts == lagforge::testing::oracle_support(p, goals),
                   scenario.name + ": OR/LEAF set equals the proof-enumeration oracle");
        }
    });

    // 9. Scaling runs with exact closed-form derived counts.
    criterion(9, "scaling: 1e4/1e5/1e6 facts, exact derived counts, 1e6 in <=10min", [] {
        for (std::size_t size : {std::size_t{10000}, std::size_t{100000}, std::size_t{1000000}}) {
            auto t0 = Clock::now();
            GeneratedScenario gen = generate(sized_spec(size, 42));
            Program p = parse_program(gen.text);
            expect(p.facts.size() == gen.counts.facts,
                   "clause count self-check at size " + std::to_string(size));
            for (Rule& r : selected_rules("both"))
                p.rules.push_back(std::move(r));
            auto [db, log] = evaluate(p);
            for (const auto& [family, expected] : gen.counts.derived) {
                auto slash = family.find('/');
                std::size_t got = db.count(family.substr(0, slash),
                                           std::stoi(family.substr(slash + 1)));
                expect(got == expected, family + " == " + std::to_string(expected) +
                                            " at size " + std::to_string(size) + ", got " +
                                            std::to_string(got));
            }
            expect(db.derived_count() == gen.counts.total_derived(),
                   "total derived matches the closed form at size " + std::to_string(size));
            double wall = seconds_since(t0);
            if (size == 1000000) {
                expect(gen.counts.facts >= 950000 && gen.counts.facts <= 1050000,
                       "1e6 target within 5%");
                expect(wall <= 600.0, "1e6 run within 10 minutes");
            }
            std::cout << "         size " << size << ": facts=" << gen.counts.facts
                      << " derived=" << db.derived_count() << " wall=" << wall << "s\n";
        }
    });

    // 10. Stratification rejection names the negative cycle.
    criterion(10, "negative cycle in user rules rejected as unstratifiable", [] {
        Program p = parse_program("u(a).\n"
                                  "a(X) :- not b(X), u(X).\n"
                                  "b(X) :- not a(X), u(X).\n");
        for (Rule& r : selected_rules("both"))
            p.rules.push_back(std::move(r));
        try {
            stratify(p);
            expect(false, "stratify must throw");
        } catch (const UnstratifiableError& e) {
            std::string cycle = e.cycle;
            expect(cycle.find("a/1") != std::string::npos &&
                       cycle.find("b/1") != std::string::npos,
                   "cycle names a/1 and b/1, got: " + cycle);
        }
        try {
            evaluate(p);
            expect(false, "evaluate must throw");
        } catch (const UnstratifiableError&) {
        }
    });

    std::cout << (failures == 0 ? "ALL CRITERIA PASSED\n"
                                : std::to_string(failures) + " CRITERIA FAILED\n");
    return failures == 0 ? 0 : 1;
}
