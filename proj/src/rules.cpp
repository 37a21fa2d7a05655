// Copyright (c) 2026 The lagforge authors
// SPDX-License-Identifier: Apache-2.0
#include "lagforge/rules.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "lagforge/errors.hpp"
#include "lagforge/parser.hpp"

namespace lagforge {

namespace {

struct RuleDef {
    const char* id;
    const char* label;
    const char* text;
};

// SSC threat-propagation rules. Rule text follows the published listings;
// heads and bodies are pinned by a golden test against the pretty-printer.
constexpr RuleDef kSscRules[] = {
    {"ssc.exec-batch", "malicious software artifact executes code autonomously",
     "execBatchCode(Host, SA, User) :- wasPresent(SA, Host), maliciousSA(SA), "
     "canAccessFile(Host, User, Access, SA)."},
    {"ssc.isolation-escape-inside",
     "isolation escape via a vulnerable artifact inside the build environment",
     "isolationEscapeBE(BE) :- execBatchCode(BE, SA, User), wasPresent(VulnSA, BE), "
     "vulExists(BE, _, VulnSA, localExploit, isolationEscape)."},
    {"ssc.isolation-escape-host",
     "isolation escape via a vulnerable artifact on the hosting host",
     "isolationEscapeBE(BE) :- execBatchCode(BE, SA, User), hosted(H, BE), "
     "wasPresent(VulnSA, H), vulExists(H, _, VulnSA, localExploit, isolationEscape)."},
    {"ssc.key-on-host", "private key stored on a compromised host",
     "compromisedK(PrivateKey) :- compromisedH(H), wasPresent(PrivateKey, H)."},
    {"ssc.cert-by-key", "certificate signed by a compromised key",
     "compromisedC(Certificate) :- compromisedK(PrivateKey), signedC(PrivateKey, Certificate)."},
    {"ssc.sa-by-cert", "artifact validated by a compromised certificate",
     "maliciousSA(SA) :- compromisedC(Certificate), validateSA(Certificate, SA)."},
    {"ssc.cert-chain", "compromise propagates down an issuance chain",
     "compromisedC(C2) :- compromisedC(C1), issued(C1, C2)."},
    {"ssc.sa-by-key", "artifact signed by a compromised key",
     "maliciousSA(SA) :- compromisedK(K), signedSA(K, SA)."},
    {"ssc.vuln-prop-build", "vulnerability propagates through a build step",
     "vulnerableSA(SA, VulID) :- vulnerableSA(SA_input, VulID), wasInputTo(SA_input, T), "
     "generated(T, SA)."},
    {"ssc.vuln-decl", "declared vulnerability marks an artifact vulnerable",
     "vulnerableSA(SA, VulID) :- vulExists(Host, VulID, SA)."},
    {"ssc.bridge-vulexists", "vulnerable artifact present on a host",
     "vulExists(Host, VulID, SA, Range, Consequence) :- vulnerableSA(SA, VulID), "
     "wasPresent(SA, Host), vulProperty(VulID, Range, Consequence)."},
    {"ssc.bridge-netsvc", "vulnerability turns an artifact into a network service",
     "networkServiceInfo(Host, SA, Protocol, Port, User) :- vulnerableSA(SA, VulID), "
     "vulNetworkProperty(VulID, Protocol, Port, User), wasPresent(SA, Host), "
     "vulProperty(VulID, remoteExploit, privEscalation)."},
    {"ssc.comp-host", "malicious artifact executing on a host",
     "compromisedH(H) :- maliciousSA(SA), wasPresent(SA, H)."},
    {"ssc.comp-be", "build environment on a compromised host",
     "compromisedBE(BE) :- compromisedH(H), hosted(H, BE)."},
    {"ssc.comp-transformer", "transformer run by a compromised build environment",
     "compromisedT(T, BE) :- compromisedBE(BE), executed(BE, T)."},
    {"ssc.sa-by-transformer", "artifact generated by a compromised transformer",
     "maliciousSA(SA) :- compromisedT(T, BE), generated(T, SA)."},
    {"ssc.comp-buildtool", "malicious code overwrites a build tool",
     "compromisedT(T, BE) :- executed(BE, T), execBatchCode(BE, SA, User), "
     "canAccessFile(BE, User, write, SA_build), wasBuildToolTo(SA_build, T)."},
    {"ssc.bridge-principal", "account holder on a compromised host",
     "principalCompromised(Victim) :- hasAccount(Victim, H, User), compromisedH(H)."},
    {"ssc.bridge-execcode", "root code execution compromises the host",
     "compromisedH(H) :- execCode(H, root)."},
    {"ssc.sa-on-comp-host", "unverified artifact on a compromised host",
     "maliciousSA(SA) :- compromisedH(H), wasPresent(SA, H), not validatedSA(SA)."},
    {"ssc.sa-transferred", "unverified artifact transferred from a compromised host",
     "maliciousSA(SA) :- compromisedH(H), transferred(SA, H), not validatedSA(SA)."},
    {"ssc.sa-published", "unverified artifact published to a compromised host",
     "maliciousSA(SA) :- compromisedH(H), wasPublishedTo(SA, H), not validatedSA(SA)."},
    {"ssc.validated", "artifact authenticity is checked against a certificate",
     "validatedSA(SA) :- validateSA(C, SA)."},
    {"ssc.isolation-to-host", "isolation escape compromises the hosting host",
     "compromisedH(H) :- hosted(H, BE), isolationEscapeBE(BE)."},
};

constexpr RuleDef kCoreRules[] = {
    {"core.vulexists-join", "declared vulnerability joined with its properties",
     "vulExists(H, V, Sw, Range, Cons) :- vulExists(H, V, Sw), vulProperty(V, Range, Cons)."},
    {"core.netaccess", "attacker zone reaches a host through an acl",
     "netAccess(H, Proto, Port) :- attackerLocated(Zone), hacl(Zone, H, Proto, Port)."},
    {"core.remote-exploit", "remote exploitation of a reachable network service",
     "execCode(H, User) :- vulExists(H, V, Sw, remoteExploit, privEscalation), "
     "networkServiceInfo(H, Sw, Proto, Port, User), netAccess(H, Proto, Port)."},
    {"core.local-privesc", "local privilege escalation to root",
     "execCode(H, root) :- execCode(H, User), vulExists(H, V, Sw, localExploit, "
     "privEscalation)."},
    {"core.login-with-creds", "login with credentials of a compromised principal",
     "execCode(H, User) :- principalCompromised(V), hasAccount(V, H, User), "
     "netAccess(H, Proto, Port), loginService(H, Proto, Port)."},
    {"core.file-access", "declared file protection grants access",
     "canAccessFile(H, User, Acc, Path) :- localFileProtection(H, User, Acc, Path)."},
    // Root can touch any present artifact. One rule per access mode: the access
    // argument must be bound in the body for the rule to be safe.
    {"core.root-file-access-read", "root reads any present artifact",
     "canAccessFile(H, root, read, Path) :- wasPresent(Path, H)."},
    {"core.root-file-access-write", "root writes any present artifact",
     "canAccessFile(H, root, write, Path) :- wasPresent(Path, H)."},
};

RuleSet build_set(const char* name, std::span<const RuleDef> defs, Provenance prov) {
    RuleSet set;
    set.name = name;
    set.version = "1.0";
    for (const RuleDef& d : defs) {
        Program p = parse_program(d.text, {.rule_id_prefix = "tmp.", .provenance = prov});
        if (p.rules.size() != 1 || !p.facts.empty())
            throw Error(std::string("embedded rule ") + d.id + " did not parse to one rule");
        Rule r = std::move(p.rules[0]);
        r.id = d.id;
        r.label = d.label;
        set.rules.push_back(std::move(r));
    }
    return set;
}

} // namespace

const RuleSet& ssc_rules() {
    static const RuleSet set = build_set("ssc", kSscRules, Provenance::Ssc);
    return set;
}

const RuleSet& core_rules() {
    static const RuleSet set = build_set("core", kCoreRules, Provenance::Core);
    return set;
}

std::vector<Rule> selected_rules(const std::string& selection) {
    std::vector<Rule> out;
    if (selection == "core" || selection == "both")
        out.insert(out.end(), core_rules().rules.begin(), core_rules().rules.end());
    if (selection == "ssc" || selection == "both")
        out.insert(out.end(), ssc_rules().rules.begin(), ssc_rules().rules.end());
    if (out.empty() && selection != "core" && selection != "ssc" && selection != "both")
        throw Error("unknown rule-set selection '" + selection + "' (core, ssc or both)");
    return out;
}

const std::vector<PredicateSchema>& schema_registry() {
    using K = PredicateKind;
    static const std::vector<PredicateSchema> registry = {
        // Network / MulVal-style predicates
        {"attackerLocated", 1, K::InputFact, {"zone"}, "attacker's starting network zone"},
        {"hacl", 4, K::InputFact, {"zone", "host", "protocol", "port"},
         "access-control-list entry permitting network reachability"},
        {"vulExists", 3, K::InputFact, {"host", "vulId", "softwareArtifact"},
         "declared vulnerability of software on a host"},
        {"vulExists", 5, K::Either,
         {"host", "vulId", "softwareArtifact", "range", "consequence"},
         "vulnerability joined with its exploit range and consequence"},
        {"vulProperty", 3, K::InputFact, {"vulId", "range", "consequence"},
         "exploit range (remoteExploit/localExploit) and consequence of a vulnerability"},
        {"networkServiceInfo", 5, K::Either,
         {"host", "softwareArtifact", "protocol", "port", "user"},
         "network service exposed by software under a principal"},
        {"netAccess", 3, K::Derived, {"host", "protocol", "port"},
         "attacker can reach the host on protocol/port"},
        {"execCode", 2, K::Derived, {"host", "user"},
         "attacker can execute code on the host as the principal"},
        {"loginService", 3, K::InputFact, {"host", "protocol", "port"},
         "host offers a credential-based login service"},
        {"hasAccount", 3, K::InputFact, {"principal", "host", "user"},
         "principal owns an account on the host"},
        {"principalCompromised", 1, K::Derived, {"principal"},
         "credentials of the principal are in attacker hands"},
        {"localFileProtection", 4, K::InputFact, {"host", "user", "access", "path"},
         "access-control entry for a file path on a host"},
        {"canAccessFile", 4, K::Derived, {"host", "user", "access", "path"},
         "principal can access the file with the given mode"},
        // SSC graph structure
        {"hosted", 2, K::InputFact, {"host", "buildEnvironment"},
         "host runs the build environment"},
        {"executed", 2, K::InputFact, {"buildEnvironment", "transformer"},
         "build environment executed the transformer"},
        {"wasInputTo", 2, K::InputFact, {"softwareArtifact", "transformer"},
         "artifact was an input of the build step"},
        {"wasBuildToolTo", 2, K::InputFact, {"softwareArtifact", "transformer"},
         "artifact was the build tool of the build step"},
        {"wasPresent", 2, K::InputFact, {"softwareArtifact", "host"},
         "artifact (or key) observed on a host or build environment"},
        {"generated", 2, K::InputFact, {"transformer", "softwareArtifact"},
         "build step generated the artifact"},
        {"wasPublishedTo", 2, K::InputFact, {"softwareArtifact", "host"},
         "artifact published to a distribution host"},
        {"transferred", 2, K::InputFact, {"softwareArtifact", "host"},
         "artifact downloaded from a host"},
        // Signing and authenticity
        {"signedC", 2, K::InputFact, {"key", "certificate"}, "key signed the certificate"},
        {"signedSA", 2, K::InputFact, {"key", "softwareArtifact"}, "key signed the artifact"},
        {"issued", 2, K::InputFact, {"certificate", "certificate"},
         "first certificate issued the second"},
        {"validateSA", 2, K::InputFact, {"certificate", "softwareArtifact"},
         "artifact authenticity is checked against the certificate"},
        {"validatedSA", 1, K::Derived, {"softwareArtifact"},
         "some certificate validates the artifact"},
        {"vulNetworkProperty", 4, K::InputFact, {"vulId", "protocol", "port", "user"},
         "vulnerability exposes an unintended network service"},
        {"vulnerableSA", 2, K::Derived, {"softwareArtifact", "vulId"},
         "artifact carries the vulnerability, declared or inherited through builds"},
        // Threat states
        {"maliciousSA", 1, K::Either, {"softwareArtifact"}, "artifact carries malicious code"},
        {"compromisedH", 1, K::Either, {"host"}, "host is compromised"},
        {"compromisedBE", 1, K::Either, {"buildEnvironment"},
         "build environment is compromised"},
        {"compromisedT", 2, K::Either, {"transformer", "buildEnvironment"},
         "transformer is compromised within the build environment"},
        {"compromisedK", 1, K::Either, {"key"}, "signing key is compromised"},
        {"compromisedC", 1, K::Either, {"certificate"}, "certificate is compromised"},
        {"isolationEscapeBE", 1, K::Derived, {"buildEnvironment"},
         "code can escape the build environment's isolation"},
        {"execBatchCode", 3, K::Derived, {"host", "softwareArtifact", "user"},
         "artifact executes code autonomously on the host as the principal"},
    };
    return registry;
}

namespace {

std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j)
        prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                               prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string normalize_constant(const std::string& c) {
    std::string out;
    for (char ch : c)
        out.push_back(std::isalnum(static_cast<unsigned char>(ch))
                          ? static_cast<char>(std::tolower(static_cast<unsigned char>(ch)))
                          : '_');
    return out;
}

} // namespace

std::vector<Diagnostic> lint_facts(const Program& program,
                                   std::span<const PredicateSchema> schemas) {
    std::vector<Diagnostic> out;
    std::map<std::pair<std::string, int>, const PredicateSchema*> by_key;
    for (const PredicateSchema& s : schemas)
        by_key[{s.name, s.arity}] = &s;

    std::set<std::pair<std::string, int>> reported;
    for (const Atom& f : program.facts) {
        auto key = std::make_pair(f.predicate, f.arity());
        if (!reported.insert(key).second)
            continue;
        auto it = by_key.find(key);
        if (it == by_key.end()) {
            std::string best;
            std::size_t best_dist = 3; // suggest only close names
            for (const PredicateSchema& s : schemas) {
                std::size_t d = edit_distance(f.predicate, s.name) +
                                (s.arity == f.arity() ? 0 : 1);
                if (d < best_dist) {
                    best_dist = d;
                    best = s.name + "/" + std::to_string(s.arity);
                }
            }
            std::string msg = "unknown predicate " + f.predicate + "/" +
                              std::to_string(f.arity());
            if (!best.empty())
                msg += ", nearest: " + best;
            out.push_back({Diagnostic::Severity::Warning, msg});
        } else if (it->second->kind == PredicateKind::Derived) {
            out.push_back({Diagnostic::Severity::Warning,
                           "derived predicate " + f.predicate + "/" +
                               std::to_string(f.arity()) + " asserted as fact"});
        }
    }

    // Quoted-vs-bare drift: two distinct constants that collapse to the same
    // normalized form, where at least one needs quoting, usually mean a CVE id
    // written both ways.
    std::map<std::string, std::set<std::string>> groups;
    for (const Atom& f : program.facts)
        for (const Term& t : f.terms)
            groups[normalize_constant(t.text)].insert(t.text);
    for (const auto& [norm, members] : groups) {
        if (members.size() < 2)
            continue;
        bool any_quoted = std::any_of(members.begin(), members.end(),
                                      [](const std::string& m) { return needs_quoting(m); });
        if (!any_quoted)
            continue;
        std::string msg = "possible quoted/bare constant drift:";
        for (const std::string& m : members)
            msg += " " + render(Term::constant(m));
        out.push_back({Diagnostic::Severity::Warning, msg});
    }
    return out;
}

std::string export_rules(const RuleSet& set) {
    std::string out = "% rule set: " + set.name + " (version " + set.version + ")\n";
    for (const Rule& r : set.rules) {
        out += "\n% id: " + r.id + "\n";
        if (!r.label.empty())
            out += "% " + r.label + "\n";
        out += render(r.head);
        out += " :-\n";
        for (std::size_t i = 0; i < r.body.size(); ++i) {
            out += "    " + render(r.body[i]);
            out += i + 1 < r.body.size() ? ",\n" : ".\n";
        }
    }
    return out;
}

} // namespace lagforge
