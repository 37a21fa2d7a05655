// Copyright (c) 2026 The lagforge authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include "lagforge/ast.hpp"

namespace lagforge {

// A named, versioned collection of rules. The embedded sets are immutable
// process-wide constants.
struct RuleSet {
    std::string name;    // "core" | "ssc"
    std::string version;
    std::vector<Rule> rules;
};

/// SSC threat-propagation rules: malicious-code execution, build-environment
/// isolation escape, signing/trust chains, vulnerability propagation and the
/// bridges into the networked-attack rules.
const RuleSet& ssc_rules();

/// Minimal networked-attack rule subset: network access, remote exploitation,
/// local privilege escalation, credential-based login and file access.
const RuleSet& core_rules();

enum class PredicateKind : std::uint8_t { InputFact, Derived, Either };

struct PredicateSchema {
    std::string name;
    int arity = 0;
    PredicateKind kind = PredicateKind::InputFact;
    std::vector<std::string> roles; // one per argument
    std::string doc;
};

/// Schema entries for every predicate used by the embedded rule sets.
const std::vector<PredicateSchema>& schema_registry();

struct Diagnostic {
    enum class Severity : std::uint8_t { Warning, Error };
    Severity severity = Severity::Warning;
    std::string message;
};

/// Fact-file linting: unknown (name, arity) pairs with nearest-name hints,
/// derived-only predicates asserted as input facts, and quoted-vs-bare
/// constant drift (e.g. 'CVE-2021-41773' next to cve_2021_41773).
std::vector<Diagnostic> lint_facts(const Program& program,
                                   std::span<const PredicateSchema> schemas);

/// Renders a rule set in the input grammar with `% id:` comment headers;
/// the output round-trips through parse_program.
std::string export_rules(const RuleSet& set);

/// Convenience: rules of the selected sets ("core", "ssc" or "both").
std::vector<Rule> selected_rules(const std::string& selection);

} // namespace lagforge
