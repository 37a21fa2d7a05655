// Copyright (c) 2026 The lagforge authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lagforge {

// A worked scenario shipped with the engine: input-grammar text plus the goal
// facts it is expected to (or must not) derive under core+ssc rules.
struct PackagedScenario {
    std::string name;
    std::string text;
    std::vector<std::string> goals;        // derivable, rendered atoms
    std::vector<std::string> absent_goals; // must not be derivable
};

const std::vector<PackagedScenario>& packaged_scenarios();
const PackagedScenario& packaged_scenario(const std::string& name); // throws Error

// Parameters for deterministic synthetic scenario generation.
struct ScenarioSpec {
    std::uint32_t hosts = 0;
    std::uint32_t sas_min = 0; // per-host software artifact inventory range
    std::uint32_t sas_max = 0;
    std::uint32_t build_chains = 0;
    std::uint32_t chain_depth = 0;
    std::uint32_t attacker_entries = 0;
    std::uint64_t seed = 0;
};

// Clause count and exact expected derived counts per predicate family,
// computed from the generator's own structure.
struct ExpectedCounts {
    std::size_t facts = 0;
    std::map<std::string, std::size_t> derived; // "pred/arity" -> count

    std::size_t total_derived() const;
};

struct GeneratedScenario {
    std::string text;
    ExpectedCounts counts;
};

/// Deterministic synthetic scenario: per-host artifact inventories, build
/// chains propagating one declared vulnerability, and remotely exploitable
/// attacker entry services. Same spec (including seed) gives byte-identical
/// output. Throws InvalidSpecError when sas_min > sas_max.
GeneratedScenario generate(const ScenarioSpec& spec);

/// Spec sized to approximately `target_facts` clauses (hosts of 1000..5000
/// artifacts, one chain per host, depth 4, up to 4 attacker entries).
ScenarioSpec sized_spec(std::size_t target_facts, std::uint64_t seed);

// SplitMix64; bounded draws use lo + next() % span. Documented in the README
// so generated corpora are reproducible.
struct SplitMix64 {
    std::uint64_t state = 0;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    std::uint32_t bounded(std::uint32_t lo, std::uint32_t hi) {
        return lo + static_cast<std::uint32_t>(next() % (static_cast<std::uint64_t>(hi) - lo + 1));
    }
};

} // namespace lagforge
