// Copyright (c) 2026 The lagforge authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lagforge/ast.hpp"

namespace lagforge {

namespace detail {
struct EvalCore;
}

struct EvalOptions {
    // Cap on semi-naive rounds per stratum; 0 means unlimited. Evaluation over
    // finite constants always terminates, the cap guards against generator bugs.
    std::uint32_t max_rounds = 0;
};

struct FactInfo {
    int stratum = 0;
    int round = 0; // 0 for given facts, otherwise first semi-naive round in the stratum
    bool given() const { return round == 0; }
};

/// Immutable fact store produced by evaluation. Cheap to copy, safe to share
/// across threads.
class Database {
public:
    Database() = default;
    explicit Database(std::shared_ptr<const detail::EvalCore> core) : core_(std::move(core)) {}

    bool contains(const Atom& ground_fact) const;
    std::optional<FactInfo> info(const Atom& ground_fact) const;

    std::size_t size() const;
    std::size_t given_count() const;
    std::size_t derived_count() const;
    std::size_t count(const std::string& predicate, int arity) const;

    std::vector<Atom> all_facts() const;     // insertion (derivation) order
    std::vector<Atom> derived_facts() const; // facts with round > 0

    const std::shared_ptr<const detail::EvalCore>& impl() const { return core_; }

private:
    std::shared_ptr<const detail::EvalCore> core_;
};

/// Every rule instantiation recorded during evaluation. Shares storage with
/// the Database it was produced with.
class DerivationLog {
public:
    DerivationLog() = default;
    explicit DerivationLog(std::shared_ptr<const detail::EvalCore> core)
        : core_(std::move(core)) {}

    std::size_t size() const;

    const std::shared_ptr<const detail::EvalCore>& impl() const { return core_; }

private:
    std::shared_ptr<const detail::EvalCore> core_;
};

// Variable bindings sorted by variable name.
using Substitution = std::vector<std::pair<std::string, std::string>>;

struct DerivationInfo {
    Atom conclusion;
    std::string rule_id;
    Substitution substitution;
    std::vector<Atom> premises;       // positive body atoms in rule order, grounded
    std::vector<Atom> negated_absent; // negated body atoms, grounded (absent from the db)
    int stratum = 0;
    int round = 0;
};

struct EvalResult {
    Database db;
    DerivationLog log;
};

/// Least fixpoint under stratified semantics, computed with per-stratum
/// semi-naive iteration. Records every distinct (rule, substitution)
/// instantiation once, except instantiations concluding a given fact.
EvalResult evaluate(const Program& program, const EvalOptions& options = {});

/// Same fixpoint computed by naive iteration (everything re-joined each
/// round). Differential oracle for evaluate(); no derivations recorded.
Database evaluate_naive(const Program& program, const EvalOptions& options = {});

/// All substitutions of the pattern's variables that make it a fact of db.
/// A ground pattern yields one empty substitution iff the fact holds.
/// Anonymous variables (parsed from `_`) match without being reported.
std::vector<Substitution> query(const Database& db, const Atom& pattern);

/// Recorded derivations concluding `fact`, in discovery order. Empty for
/// given facts and for facts not in the database.
std::vector<DerivationInfo> derivations_of(const DerivationLog& log, const Atom& fact);

} // namespace lagforge
