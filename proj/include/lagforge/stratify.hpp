// Copyright (c) 2026 The lagforge authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "lagforge/ast.hpp"

namespace lagforge {

// Predicates are identified by (name, arity); p/2 and p/3 are unrelated.
struct PredicateRef {
    std::string name;
    int arity = 0;

    auto operator<=>(const PredicateRef&) const = default;
};

std::string to_string(const PredicateRef& p); // "name/arity"

struct Stratum {
    int index = 0;
    std::vector<PredicateRef> predicates; // sorted
};

// Computes a stratification of every predicate occurring in the program
// (rule heads, rule bodies and facts). A program without negation yields a
// single stratum. Throws UnstratifiableError naming a negative cycle.
std::vector<Stratum> stratify(const Program& program);

} // namespace lagforge
