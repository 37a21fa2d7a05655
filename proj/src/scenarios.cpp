// Copyright (c) 2026 The lagforge authors
// SPDX-License-Identifier: Apache-2.0
#include "lagforge/scenarios.hpp"

#include <numeric>

#include "lagforge/errors.hpp"

namespace lagforge {

namespace {

// Scenario 1: the Fig. 1 supply chain around sa5/sa6 driven by the published
// network initial state. A remote httpd exploit plus the polkit local
// escalation give root on h1; the artifact sa1 downloaded from h1 carries the
// compromise into the h3 build environment.
const char* const kFig1Listing7 = R"(% scenario: fig1-listing7
% Networked initial state.
attackerLocated(internet).
hacl(internet, h1, tcp, 443).
vulExists(h1, 'CVE-2021-41773', httpd).
vulProperty('CVE-2021-41773', remoteExploit, privEscalation).
networkServiceInfo(h1, httpd, tcp, 443, user_apache).
vulExists(h1, 'CVE-2021-3560', polkit).
vulProperty('CVE-2021-3560', localExploit, privEscalation).
% Supply chain graph.
transferred(sa1, h1).
wasPresent(sa1, h3).
wasPresent(sa4, h3).
hosted(h3, be1).
wasPresent(sa2, be1).
executed(be1, t1).
wasBuildToolTo(sa3, t1).
wasInputTo(sa4, t1).
generated(t1, sa5).
generated(t1, sa6).
)";

// A malicious artifact in the build environment with write access to the
// build tool of t1. Removing the write-access entry blocks the compromise.
const char* const kBuildtoolWrite = R"(% scenario: buildtool-write
maliciousSA(sa2).
wasPresent(sa2, be1).
executed(be1, t1).
wasBuildToolTo(sa3, t1).
wasInputTo(sa4, t1).
generated(t1, sa5).
generated(t1, sa6).
localFileProtection(be1, builder, read, sa2).
localFileProtection(be1, builder, write, sa3).
)";

// Signing-key theft: the key stored on the compromised host anchors an
// issuance chain of depth 3 whose leaf certificate validates sa_app.
const char* const kSigningChain = R"(% scenario: signing-chain
compromisedH(h9).
wasPresent(k_root, h9).
signedC(k_root, c_root).
issued(c_root, c_mid).
issued(c_mid, c_leaf).
validateSA(c_leaf, sa_app).
wasPresent(sa_app, h10).
)";

// Shared build environment: access control alone separates the build runs.
// The malicious artifact's principal has write access to t2's build tool, so
// the compromise crosses into t2's outputs but not t1's.
const char* const kIsolationShared = R"(% scenario: isolation-shared
hosted(h1, be1).
executed(be1, t1).
executed(be1, t2).
wasPresent(sa_mal, be1).
maliciousSA(sa_mal).
localFileProtection(be1, user1, read, sa_mal).
localFileProtection(be1, user1, write, sa_tool2).
wasBuildToolTo(sa_tool2, t2).
generated(t1, sa_out1).
generated(t2, sa_out2).
)";

// Isolated build environments: without an isolation-escape vulnerability the
// malicious artifact in be1 cannot reach be2's transformer.
const char* const kIsolationIsolated = R"(% scenario: isolation-isolated
hosted(h1, be1).
hosted(h1, be2).
executed(be1, t1).
executed(be2, t2).
wasPresent(sa_mal, be1).
maliciousSA(sa_mal).
localFileProtection(be1, user1, read, sa_mal).
generated(t1, sa_out1).
generated(t2, sa_out2).
)";

// Log4Shell-style propagation: the vulnerable library is built into sa_app,
// which then exposes an unintended RMI service on its deployment host.
const char* const kLog4shellNetsvc = R"(% scenario: log4shell-netsvc
attackerLocated(internet).
hacl(internet, h2, rmi, 1099).
vulExists(h_dev, 'CVE-2021-44228', sa_log4j).
vulProperty('CVE-2021-44228', remoteExploit, privEscalation).
vulNetworkProperty('CVE-2021-44228', rmi, 1099, user_app).
wasInputTo(sa_log4j, t_build).
generated(t_build, sa_app).
wasPresent(sa_app, h2).
)";

// The 3CX double supply-chain attack: a compromised vendor build produces the
// trojaned X_Trader installer; running it on an employee workstation yields
// VPN credentials into the 3CX build host, whose compromised build and
// signing chain deliver a malicious signed desktop app to customers.
const char* const k3cx = R"(% scenario: 3cx
% First SSC attack: vendor build service compromised, installer trojaned.
compromisedH(h_tt_build).
hosted(h_tt_build, be_tt).
executed(be_tt, t_tt).
generated(t_tt, sa_xtrader).
wasPublishedTo(sa_xtrader, h_tt_dist).
% Employee workstation runs the trojaned installer.
transferred(sa_xtrader, h_employee).
wasPresent(sa_xtrader, h_employee).
hasAccount(emp1, h_employee, emp_user).
% VPN hop into the 3CX build host with the employee's credentials.
attackerLocated(internet).
hacl(internet, h_3cx_build, tcp, 443).
loginService(h_3cx_build, tcp, 443).
hasAccount(emp1, h_3cx_build, emp_vpn).
% Local privilege escalation on the build host.
wasPresent(sa_polkit, h_3cx_build).
vulExists(h_3cx_build, 'CVE-2021-3560', sa_polkit).
vulProperty('CVE-2021-3560', localExploit, privEscalation).
% Second SSC attack: desktop app built and signed in-house.
hosted(h_3cx_build, be_3cx).
executed(be_3cx, t_3cx).
generated(t_3cx, sa_desktopapp).
wasPresent(k_signing, h_3cx_build).
signedC(k_signing, c_3cx).
validateSA(c_3cx, sa_desktopapp).
% Customer host installs the signed desktop app.
wasPresent(sa_desktopapp, h_customer).
)";

} // namespace

const std::vector<PackagedScenario>& packaged_scenarios() {
    static const std::vector<PackagedScenario> scenarios = {
        {"fig1-listing7", kFig1Listing7,
         {"maliciousSA(sa5)", "maliciousSA(sa6)", "compromisedH(h1)", "compromisedH(h3)",
          "compromisedBE(be1)", "compromisedT(t1, be1)", "maliciousSA(sa1)",
          "maliciousSA(sa4)", "execCode(h1, root)", "execCode(h1, user_apache)"},
         {}},
        {"buildtool-write", kBuildtoolWrite,
         {"maliciousSA(sa5)", "maliciousSA(sa6)", "compromisedT(t1, be1)",
          "execBatchCode(be1, sa2, builder)"},
         {}},
        {"signing-chain", kSigningChain,
         {"compromisedK(k_root)", "compromisedC(c_root)", "compromisedC(c_leaf)",
          "maliciousSA(sa_app)", "compromisedH(h10)"},
         {}},
        {"isolation-shared", kIsolationShared,
         {"compromisedT(t2, be1)", "maliciousSA(sa_out2)"},
         {"maliciousSA(sa_out1)"}},
        {"isolation-isolated", kIsolationIsolated,
         {"execBatchCode(be1, sa_mal, user1)"},
         {"compromisedT(t2, be2)", "compromisedH(h1)", "maliciousSA(sa_out2)"}},
        {"log4shell-netsvc", kLog4shellNetsvc,
         {"vulnerableSA(sa_app, 'CVE-2021-44228')",
          "networkServiceInfo(h2, sa_app, rmi, 1099, user_app)", "execCode(h2, user_app)"},
         {}},
        {"3cx", k3cx,
         {"maliciousSA(sa_xtrader)", "compromisedH(h_employee)",
          "execCode(h_3cx_build, emp_vpn)", "execCode(h_3cx_build, root)",
          "compromisedT(t_3cx, be_3cx)", "compromisedC(c_3cx)",
          "maliciousSA(sa_desktopapp)", "compromisedH(h_customer)"},
         {}},
    };
    return scenarios;
}

const PackagedScenario& packaged_scenario(const std::string& name) {
    for (const PackagedScenario& s : packaged_scenarios())
        if (s.name == name)
            return s;
    throw Error("unknown packaged scenario '" + name + "'");
}

std::size_t ExpectedCounts::total_derived() const {
    return std::accumulate(derived.begin(), derived.end(), std::size_t{0},
                           [](std::size_t acc, const auto& kv) { return acc + kv.second; });
}

GeneratedScenario generate(const ScenarioSpec& spec) {
    if (spec.sas_min > spec.sas_max)
        throw InvalidSpecError("sas_min must not exceed sas_max");

    GeneratedScenario out;
    std::string& text = out.text;
    ExpectedCounts& counts = out.counts;
    std::size_t clauses = 0;
    auto emit = [&](const std::string& clause) {
        text += clause;
        text += '\n';
        ++clauses;
    };

    text += "% scenario: generated seed=" + std::to_string(spec.seed) +
            " hosts=" + std::to_string(spec.hosts) + " sas=[" + std::to_string(spec.sas_min) +
            "," + std::to_string(spec.sas_max) + "] chains=" +
            std::to_string(spec.build_chains) + " depth=" + std::to_string(spec.chain_depth) +
            " entries=" + std::to_string(spec.attacker_entries) + "\n";

    if (spec.hosts == 0) {
        counts.facts = 0;
        return out;
    }

    SplitMix64 rng{spec.seed};

    // Host inventories: disjoint artifact sets, sa_<host>_<k>.
    std::vector<std::uint32_t> inventory(spec.hosts);
    std::size_t present = 0;
    for (std::uint32_t h = 0; h < spec.hosts; ++h) {
        inventory[h] = spec.sas_max == 0 ? 0 : rng.bounded(spec.sas_min, spec.sas_max);
        for (std::uint32_t k = 0; k < inventory[h]; ++k)
            emit("wasPresent(sa_" + std::to_string(h) + "_" + std::to_string(k) + ", h" +
                 std::to_string(h) + ").");
        present += inventory[h];
    }

    // Build chains: chain c runs on host c % hosts, takes the host's first
    // artifact as input and deploys its final output to the next host.
    // Chains on host 0 propagate the declared vulnerability below.
    for (std::uint32_t c = 0; c < spec.build_chains; ++c) {
        std::uint32_t host = c % spec.hosts;
        std::string be = "be_c" + std::to_string(c);
        emit("hosted(h" + std::to_string(host) + ", " + be + ").");
        std::string input = "sa_" + std::to_string(host) + "_0";
        for (std::uint32_t d = 0; d < spec.chain_depth; ++d) {
            std::string t = "t_c" + std::to_string(c) + "_d" + std::to_string(d);
            std::string output = "sa_c" + std::to_string(c) + "_d" + std::to_string(d);
            emit("executed(" + be + ", " + t + ").");
            emit("wasInputTo(" + input + ", " + t + ").");
            emit("generated(" + t + ", " + output + ").");
            input = output;
        }
        if (spec.chain_depth > 0) {
            emit("wasPresent(" + input + ", h" + std::to_string((c + 1) % spec.hosts) + ").");
            ++present;
        }
    }

    // One declared vulnerability on host 0's first artifact. Its consequence
    // (infoLeak) feeds no escalation rule, so propagation stays on the
    // vulnerability side of the rule set.
    bool have_vuln = inventory[0] > 0;
    if (have_vuln) {
        emit("vulExists(h0, 'GEN-0001', sa_0_0).");
        emit("vulProperty('GEN-0001', localExploit, infoLeak).");
    }

    // Attacker entries: one remotely exploitable service per entry host, each
    // on its own port, exposing the host's second artifact. privEscalation is
    // remote-only; no local escalation exists, so no host reaches root.
    emit("attackerLocated(internet).");
    std::uint32_t entries = 0;
    std::uint32_t want = std::min(spec.attacker_entries, spec.hosts);
    for (std::uint32_t a = 0; a < want; ++a) {
        if (inventory[a] < 2)
            continue;
        std::string host = "h" + std::to_string(a);
        std::string svc = "sa_" + std::to_string(a) + "_1";
        std::string vul = "'GEN-RCE-" + std::to_string(a) + "'";
        std::string port = std::to_string(10000 + a);
        emit("hacl(internet, " + host + ", tcp, " + port + ").");
        emit("networkServiceInfo(" + host + ", " + svc + ", tcp, " + port + ", u_web_" +
             std::to_string(a) + ").");
        emit("vulExists(" + host + ", " + vul + ", " + svc + ").");
        emit("vulProperty(" + vul + ", remoteExploit, privEscalation).");
        ++entries;
    }

    // Closed-form expected derived counts, from the structure above:
    //  - root can read and write every present artifact,
    //  - the declared vulnerability walks down every chain rooted at host 0,
    //  - a vulnerable artifact yields vulExists/5 wherever it is present,
    //  - each entry gives one netAccess and one (non-root) execCode.
    std::uint64_t vulnerable_chains =
        spec.chain_depth > 0 && have_vuln
            ? (spec.build_chains + spec.hosts - 1) / spec.hosts
            : 0;
    counts.facts = clauses;
    counts.derived["canAccessFile/4"] = 2 * present;
    counts.derived["vulnerableSA/2"] =
        (have_vuln ? 1 + vulnerable_chains * spec.chain_depth : 0) + entries;
    counts.derived["vulExists/5"] = (have_vuln ? 1 + vulnerable_chains : 0) + entries;
    counts.derived["netAccess/3"] = entries;
    counts.derived["execCode/2"] = entries;
    return out;
}

ScenarioSpec sized_spec(std::size_t target_facts, std::uint64_t seed) {
    ScenarioSpec spec;
    spec.seed = seed;
    if (target_facts == 0)
        return spec;
    // Each host contributes ~3000 inventory facts plus ~14 chain facts.
    spec.hosts = static_cast<std::uint32_t>(std::max<std::size_t>(1, target_facts / 3015));
    spec.sas_min = 1000;
    spec.sas_max = 5000;
    spec.build_chains = spec.hosts;
    spec.chain_depth = 4;
    spec.attacker_entries = std::min<std::uint32_t>(4, spec.hosts);
    return spec;
}

} // namespace lagforge
