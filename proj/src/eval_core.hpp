// Copyright (c) 2026 The lagforge authors
// SPDX-License-Identifier: Apache-2.0
//
// Internal storage shared by the evaluator and the graph builder. Facts are
// interned tuples of interned constants; everything downstream works with
// dense 32-bit ids.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lagforge/ast.hpp"
#include "lagforge/stratify.hpp"

namespace lagforge::detail {

using Sym = std::uint32_t;
using PredId = std::uint32_t;
using FactId = std::uint32_t;
constexpr std::uint32_t kNone = 0xFFFFFFFFu;

struct SymbolTable {
    std::vector<std::string> names;
    std::unordered_map<std::string, Sym> index;

    Sym intern(const std::string& s) {
        auto it = index.find(s);
        if (it != index.end())
            return it->second;
        Sym id = static_cast<Sym>(names.size());
        names.push_back(s);
        index.emplace(names.back(), id);
        return id;
    }
    std::optional<Sym> find(const std::string& s) const {
        auto it = index.find(s);
        if (it == index.end())
            return std::nullopt;
        return it->second;
    }
    const std::string& name(Sym s) const { return names[s]; }
};

// (stratum, round) in lexicographic order; round 0 marks given facts.
struct FactKey {
    std::uint32_t stratum = 0;
    std::uint32_t round = 0;

    friend bool operator<(const FactKey& a, const FactKey& b) {
        return a.stratum != b.stratum ? a.stratum < b.stratum : a.round < b.round;
    }
    friend bool operator==(const FactKey& a, const FactKey& b) = default;
};

// Open-addressing u32 -> u32 map; value 0 doubles as "absent" so callers
// store row+1. Keys must not be kNone.
class U32Map {
public:
    U32Map() { reset(16); }

    std::uint32_t get(std::uint32_t key) const {
        std::size_t i = probe(key);
        return keys_[i] == key ? vals_[i] : 0;
    }

    void put(std::uint32_t key, std::uint32_t val) {
        std::size_t i = probe(key);
        if (keys_[i] != key) {
            keys_[i] = key;
            ++count_;
            if (count_ * 4 > keys_.size() * 3) {
                grow();
                i = probe(key);
                keys_[i] = key;
            }
        }
        vals_[i] = val;
    }

private:
    static std::uint32_t hash(std::uint32_t x) {
        x ^= x >> 16;
        x *= 0x7feb352dU;
        x ^= x >> 15;
        x *= 0x846ca68bU;
        x ^= x >> 16;
        return x;
    }

    std::size_t probe(std::uint32_t key) const {
        std::size_t i = hash(key) & mask_;
        while (keys_[i] != kNone && keys_[i] != key)
            i = (i + 1) & mask_;
        return i;
    }

    void reset(std::size_t cap) {
        keys_.assign(cap, kNone);
        vals_.assign(cap, 0);
        mask_ = cap - 1;
        count_ = 0;
    }

    void grow() {
        std::vector<std::uint32_t> ok = std::move(keys_), ov = std::move(vals_);
        reset(ok.size() * 2);
        for (std::size_t i = 0; i < ok.size(); ++i)
            if (ok[i] != kNone)
                put(ok[i], ov[i]);
    }

    std::vector<std::uint32_t> keys_, vals_;
    std::size_t mask_ = 0, count_ = 0;
};

// Per-(predicate, position) index: constant -> chain of rows, newest first.
struct PosIndex {
    int position = 0;
    U32Map head;               // constant -> row+1
    std::vector<std::uint32_t> next; // row -> next older row+1 (0 = end)
};

struct PredStore {
    std::string name;
    std::uint32_t arity = 0;
    std::uint32_t stratum = 0;
    std::vector<Sym> tuples;          // row-major, stride = arity
    std::vector<FactId> row_fact;     // row -> global fact id
    std::vector<PosIndex> indexes;
    // frontier[k] = number of rows with in-stratum round <= k; rebuilt while
    // the predicate's stratum is being evaluated.
    std::vector<std::uint32_t> frontier;

    std::uint32_t rows() const { return static_cast<std::uint32_t>(row_fact.size()); }
    const Sym* row(std::uint32_t r) const { return tuples.data() + static_cast<std::size_t>(r) * arity; }

    PosIndex* index_at(int pos) {
        for (PosIndex& ix : indexes)
            if (ix.position == pos)
                return &ix;
        return nullptr;
    }
    const PosIndex* index_at(int pos) const {
        for (const PosIndex& ix : indexes)
            if (ix.position == pos)
                return &ix;
        return nullptr;
    }
};

// One recorded rule instantiation. Premises and bindings live in shared pools.
struct DerivRec {
    FactId conclusion = 0;
    std::uint32_t rule_index = 0;
    std::uint32_t stratum = 0;
    std::uint32_t round = 0;
    std::uint32_t premise_offset = 0;
    std::uint16_t premise_count = 0;
    std::uint16_t binding_count = 0;
    std::uint32_t binding_offset = 0;
};

struct EvalCore {
    SymbolTable syms;
    std::vector<PredStore> preds;
    std::map<std::pair<std::string, int>, PredId> pred_ids;

    std::vector<std::pair<PredId, std::uint32_t>> fact_loc; // fact -> (pred, row)
    std::vector<FactKey> fact_key;

    std::vector<Rule> rules; // merged program rules, by rule_index
    std::vector<std::vector<std::string>> rule_vars;

    std::vector<DerivRec> derivs;
    std::vector<FactId> premise_pool;
    std::vector<Sym> binding_pool;

    // CSR of derivation indices grouped by conclusion, built by finalize().
    std::vector<std::uint32_t> deriv_offsets;
    std::vector<std::uint32_t> deriv_by_fact;

    std::vector<Stratum> strata;

    // --- fact interning ---------------------------------------------------
    std::vector<FactId> slots; // fact id + 1, 0 = empty
    std::size_t slot_mask = 0;
    std::size_t fact_count = 0;
    std::size_t given_facts = 0;

    EvalCore() {
        slots.assign(1024, 0);
        slot_mask = 1023;
    }

    static std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }

    // The combine step alone is affine in the last argument, which clusters
    // dense symbol ids under linear probing; the avalanche breaks that up.
    static std::uint64_t avalanche(std::uint64_t x) {
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ULL;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebULL;
        x ^= x >> 31;
        return x;
    }

    std::uint64_t tuple_hash(PredId p, const Sym* args, std::uint32_t n) const {
        std::uint64_t h = mix(0x243f6a8885a308d3ULL, p);
        for (std::uint32_t i = 0; i < n; ++i)
            h = mix(h, args[i]);
        return avalanche(h);
    }

    bool tuple_equals(FactId id, PredId p, const Sym* args, std::uint32_t n) const {
        auto [fp, row] = fact_loc[id];
        if (fp != p)
            return false;
        const Sym* t = preds[fp].row(row);
        for (std::uint32_t i = 0; i < n; ++i)
            if (t[i] != args[i])
                return false;
        return true;
    }

    FactId find_fact(PredId p, const Sym* args) const {
        std::uint32_t n = preds[p].arity;
        std::size_t i = tuple_hash(p, args, n) & slot_mask;
        while (slots[i]) {
            FactId id = slots[i] - 1;
            if (tuple_equals(id, p, args, n))
                return id;
            i = (i + 1) & slot_mask;
        }
        return kNone;
    }

    // Caller must have checked absence. Updates the predicate's indexes.
    FactId append_fact(PredId p, const Sym* args, FactKey key) {
        PredStore& ps = preds[p];
        std::uint32_t row = ps.rows();
        ps.tuples.insert(ps.tuples.end(), args, args + ps.arity);
        FactId id = static_cast<FactId>(fact_loc.size());
        ps.row_fact.push_back(id);
        fact_loc.emplace_back(p, row);
        fact_key.push_back(key);
        if (key.round == 0)
            ++given_facts;
        for (PosIndex& ix : ps.indexes) {
            Sym k = args[ix.position];
            ix.next.push_back(ix.head.get(k));
            ix.head.put(k, row + 1);
        }
        std::size_t i = tuple_hash(p, args, ps.arity) & slot_mask;
        while (slots[i])
            i = (i + 1) & slot_mask;
        slots[i] = id + 1;
        if (++fact_count * 4 > slots.size() * 3)
            grow_slots();
        return id;
    }

    void grow_slots() {
        std::vector<FactId> old = std::move(slots);
        slots.assign(old.size() * 2, 0);
        slot_mask = slots.size() - 1;
        for (FactId v : old) {
            if (!v)
                continue;
            auto [p, row] = fact_loc[v - 1];
            std::size_t i = tuple_hash(p, preds[p].row(row), preds[p].arity) & slot_mask;
            while (slots[i])
                i = (i + 1) & slot_mask;
            slots[i] = v;
        }
    }

    PredId intern_pred(const std::string& name, int arity) {
        auto key = std::make_pair(name, arity);
        auto it = pred_ids.find(key);
        if (it != pred_ids.end())
            return it->second;
        PredId id = static_cast<PredId>(preds.size());
        PredStore ps;
        ps.name = name;
        ps.arity = static_cast<std::uint32_t>(arity);
        preds.push_back(std::move(ps));
        pred_ids.emplace(std::move(key), id);
        return id;
    }

    std::optional<PredId> find_pred(const std::string& name, int arity) const {
        auto it = pred_ids.find({name, arity});
        if (it == pred_ids.end())
            return std::nullopt;
        return it->second;
    }

    Atom atom_of(FactId id) const {
        auto [p, row] = fact_loc[id];
        const PredStore& ps = preds[p];
        Atom a;
        a.predicate = ps.name;
        a.terms.reserve(ps.arity);
        const Sym* t = ps.row(row);
        for (std::uint32_t i = 0; i < ps.arity; ++i)
            a.terms.push_back(Term::constant(syms.name(t[i])));
        return a;
    }

    std::optional<FactId> resolve(const Atom& ground) const {
        auto p = find_pred(ground.predicate, ground.arity());
        if (!p)
            return std::nullopt;
        std::vector<Sym> args;
        args.reserve(ground.terms.size());
        for (const Term& t : ground.terms) {
            if (!t.is_constant())
                return std::nullopt;
            auto s = syms.find(t.text);
            if (!s)
                return std::nullopt;
            args.push_back(*s);
        }
        FactId id = find_fact(*p, args.data());
        if (id == kNone)
            return std::nullopt;
        return id;
    }

    // Groups derivation indices by conclusion fact.
    void finalize() {
        deriv_offsets.assign(fact_loc.size() + 1, 0);
        for (const DerivRec& d : derivs)
            ++deriv_offsets[d.conclusion + 1];
        for (std::size_t i = 1; i < deriv_offsets.size(); ++i)
            deriv_offsets[i] += deriv_offsets[i - 1];
        deriv_by_fact.resize(derivs.size());
        std::vector<std::uint32_t> cursor(deriv_offsets.begin(), deriv_offsets.end() - 1);
        for (std::uint32_t i = 0; i < derivs.size(); ++i)
            deriv_by_fact[cursor[derivs[i].conclusion]++] = i;
    }

    // True iff every premise was established strictly before the conclusion
    // first appeared; such derivations ground out in round-0 facts and are the
    // ones the attack graph keeps.
    bool well_founded(const DerivRec& d) const {
        FactKey ck = fact_key[d.conclusion];
        for (std::uint32_t i = 0; i < d.premise_count; ++i) {
            FactId p = premise_pool[d.premise_offset + i];
            if (!(fact_key[p] < ck))
                return false;
        }
        return true;
    }
};

} // namespace lagforge::detail
