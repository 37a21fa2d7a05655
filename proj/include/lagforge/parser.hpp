// Copyright (c) 2026 The lagforge authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "lagforge/ast.hpp"

namespace lagforge {

struct ParseOptions {
    // Rules parsed from source get ids "<rule_id_prefix><ordinal>".
    std::string rule_id_prefix = "user.r";
    int first_rule_ordinal = 1;
    Provenance provenance = Provenance::User;
};

// Parses a program in the clause grammar:
//   program := clause* ; clause := atom '.' | atom ':-' literal (',' literal)* '.'
//   literal := 'not'? atom ; atom := ident '(' term (',' term)* ')'
//   term := ident | quoted | VARIABLE | '_'
// `%` starts a line comment. Wildcards desugar to fresh variables, one per
// occurrence. Facts must be ground. Throws SyntaxError, UnsafeRuleError,
// WildcardInHeadError or WildcardInFactError.
Program parse_program(std::string_view source, const ParseOptions& options = {});

// Parses a single atom (used for goals and query patterns). Variables and
// wildcards are allowed; `require_ground` rejects them.
Atom parse_atom(std::string_view source, bool require_ground = false);

} // namespace lagforge
