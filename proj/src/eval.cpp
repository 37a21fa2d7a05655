// Copyright (c) 2026 The lagforge authors
// SPDX-License-Identifier: Apache-2.0
#include "lagforge/eval.hpp"

#include <algorithm>
#include <set>

#include "eval_core.hpp"
#include "lagforge/errors.hpp"
#include "lagforge/stratify.hpp"

namespace lagforge {

using detail::EvalCore;
using detail::FactId;
using detail::FactKey;
using detail::kNone;
using detail::PosIndex;
using detail::PredId;
using detail::PredStore;
using detail::Sym;

namespace {

struct ArgSpec {
    bool is_const = false;
    Sym sym = 0;           // constant symbol
    std::uint16_t var = 0; // variable slot
};

struct CAtom {
    PredId pred = 0;
    bool in_stratum = false; // predicate belongs to the rule's stratum
    std::vector<ArgSpec> args;
};

enum class Access : std::uint8_t { Ground, Index, Scan };

struct AtomPlan {
    std::uint16_t atom = 0; // index into CRule::pos
    Access access = Access::Scan;
    std::uint16_t index_pos = 0;
};

// One pre-planned evaluation order: the delta atom (if any) first, the other
// positive atoms in written order.
struct Mode {
    int delta_atom = -1; // written position of the delta atom, -1 for round 1
    std::vector<AtomPlan> plan;
};

struct CRule {
    std::uint32_t rule_index = 0;
    std::uint32_t stratum = 0;
    CAtom head;
    std::vector<CAtom> pos;
    std::vector<CAtom> neg;
    std::uint16_t nvars = 0;
    Mode round1;
    std::vector<Mode> deltas; // one per positive atom with an in-stratum predicate
};

class Engine {
public:
    Engine(const Program& program, EvalOptions options)
        : options_(options) {
        core_.strata = stratify(program);
        for (std::size_t s = 0; s < core_.strata.size(); ++s)
            for (const PredicateRef& p : core_.strata[s].predicates) {
                PredId id = core_.intern_pred(p.name, p.arity);
                core_.preds[id].stratum = static_cast<std::uint32_t>(s);
            }
        load_facts(program);
        compile(program);
    }

    EvalCore take() && {
        core_.finalize();
        return std::move(core_);
    }

    void run() {
        for (std::uint32_t s = 0; s < core_.strata.size(); ++s)
            eval_stratum(s);
    }

private:
    void load_facts(const Program& program) {
        std::vector<Sym> args;
        for (const Atom& f : program.facts) {
            if (!f.ground())
                throw UnsafeRuleError("", 0, "",
                                      "non-ground fact " + render(f) + " (facts must be ground)");
            PredId p = core_.intern_pred(f.predicate, f.arity());
            args.clear();
            for (const Term& t : f.terms)
                args.push_back(core_.syms.intern(t.text));
            if (core_.find_fact(p, args.data()) == kNone)
                core_.append_fact(p, args.data(), FactKey{core_.preds[p].stratum, 0});
        }
    }

    CAtom compile_atom(const Atom& a, std::uint32_t rule_stratum,
                       std::vector<std::string>& vars) {
        CAtom c;
        c.pred = core_.intern_pred(a.predicate, a.arity());
        c.in_stratum = core_.preds[c.pred].stratum == rule_stratum;
        for (const Term& t : a.terms) {
            ArgSpec spec;
            if (t.is_constant()) {
                spec.is_const = true;
                spec.sym = core_.syms.intern(t.text);
            } else {
                auto it = std::find(vars.begin(), vars.end(), t.text);
                if (it == vars.end()) {
                    vars.push_back(t.text);
                    it = vars.end() - 1;
                }
                spec.var = static_cast<std::uint16_t>(it - vars.begin());
            }
            c.args.push_back(spec);
        }
        return c;
    }

    // Plans the access path for each atom of the given evaluation order and
    // registers the indexes it needs. Boundness is static: a variable is bound
    // iff it occurred in an earlier atom of the order.
    Mode plan_mode(CRule& cr, int delta_atom) {
        Mode m;
        m.delta_atom = delta_atom;
        std::vector<bool> bound(cr.nvars, false);
        auto bind_all = [&](const CAtom& a) {
            for (const ArgSpec& s : a.args)
                if (!s.is_const)
                    bound[s.var] = true;
        };
        if (delta_atom >= 0)
            bind_all(cr.pos[delta_atom]);
        for (std::uint16_t i = 0; i < cr.pos.size(); ++i) {
            if (static_cast<int>(i) == delta_atom)
                continue;
            const CAtom& a = cr.pos[i];
            AtomPlan p;
            p.atom = i;
            int first_bound = -1;
            bool all_bound = true;
            for (std::size_t k = 0; k < a.args.size(); ++k) {
                bool b = a.args[k].is_const || bound[a.args[k].var];
                if (b && first_bound < 0)
                    first_bound = static_cast<int>(k);
                if (!b)
                    all_bound = false;
            }
            if (all_bound) {
                p.access = Access::Ground;
            } else if (first_bound >= 0) {
                p.access = Access::Index;
                p.index_pos = static_cast<std::uint16_t>(first_bound);
                ensure_index(a.pred, first_bound);
            } else {
                p.access = Access::Scan;
            }
            m.plan.push_back(p);
            bind_all(a);
        }
        return m;
    }

    void ensure_index(PredId pred, int pos) {
        PredStore& ps = core_.preds[pred];
        if (ps.index_at(pos))
            return;
        PosIndex ix;
        ix.position = pos;
        ix.next.reserve(ps.rows());
        for (std::uint32_t r = 0; r < ps.rows(); ++r) {
            Sym k = ps.row(r)[pos];
            ix.next.push_back(ix.head.get(k));
            ix.head.put(k, r + 1);
        }
        ps.indexes.push_back(std::move(ix));
    }

    void compile(const Program& program) {
        std::map<PredicateRef, std::uint32_t> pred_stratum;
        for (const Stratum& s : core_.strata)
            for (const PredicateRef& p : s.predicates)
                pred_stratum[p] = static_cast<std::uint32_t>(s.index);

        for (const Rule& r : program.rules) {
            validate_rule(r);
            CRule cr;
            cr.rule_index = static_cast<std::uint32_t>(core_.rules.size());
            cr.stratum = pred_stratum.at({r.head.predicate, r.head.arity()});
            std::vector<std::string> vars;
            cr.head = compile_atom(r.head, cr.stratum, vars);
            for (const Literal& l : r.body)
                (l.negated ? cr.neg : cr.pos).push_back(compile_atom(l.atom, cr.stratum, vars));
            cr.nvars = static_cast<std::uint16_t>(vars.size());
            cr.round1 = plan_mode(cr, -1);
            for (std::uint16_t i = 0; i < cr.pos.size(); ++i)
                if (cr.pos[i].in_stratum)
                    cr.deltas.push_back(plan_mode(cr, i));
            core_.rules.push_back(r);
            core_.rule_vars.push_back(std::move(vars));
            crules_.push_back(std::move(cr));
        }
        // Order of first occurrence in compile_atom matches Rule::variables():
        // head first, then body literals in written order.
    }

    // --- evaluation ---------------------------------------------------------

    void eval_stratum(std::uint32_t s) {
        stratum_ = s;
        std::vector<CRule*> rules;
        for (CRule& cr : crules_)
            if (cr.stratum == s)
                rules.push_back(&cr);
        std::vector<PredId> local;
        for (PredId p = 0; p < core_.preds.size(); ++p)
            if (core_.preds[p].stratum == s) {
                core_.preds[p].frontier.assign(1, core_.preds[p].rows());
                local.push_back(p);
            }
        if (rules.empty())
            return;

        round_ = 1;
        for (CRule* cr : rules)
            run_mode(*cr, cr->round1);
        bool grew = false;
        for (PredId p : local) {
            core_.preds[p].frontier.push_back(core_.preds[p].rows());
            grew |= core_.preds[p].frontier[1] > core_.preds[p].frontier[0];
        }

        while (grew) {
            ++round_;
            if (options_.max_rounds && round_ > options_.max_rounds)
                throw IterationLimitError("iteration cap of " +
                                          std::to_string(options_.max_rounds) +
                                          " rounds exceeded in stratum " + std::to_string(s));
            for (CRule* cr : rules)
                for (const Mode& m : cr->deltas)
                    run_mode(*cr, m);
            grew = false;
            for (PredId p : local) {
                core_.preds[p].frontier.push_back(core_.preds[p].rows());
                auto& f = core_.preds[p].frontier;
                grew |= f[round_] > f[round_ - 1];
            }
        }
    }

    // Row visibility for a non-delta atom at written position `pos`.
    std::uint32_t row_limit(const Mode& m, const CAtom& a, int pos) const {
        const PredStore& ps = core_.preds[a.pred];
        if (!a.in_stratum)
            return ps.rows();
        if (m.delta_atom < 0) // round 1: given facts of this stratum only
            return ps.frontier[0];
        // Atoms before the delta position see rounds <= r-1, atoms after see
        // rounds <= r-2; together with the delta slice this enumerates every
        // new instantiation exactly once.
        return pos < m.delta_atom ? ps.frontier[round_ - 1] : ps.frontier[round_ - 2];
    }

    void run_mode(CRule& cr, const Mode& m) {
        binds_.assign(cr.nvars, kNone);
        premise_ids_.resize(cr.pos.size());
        if (m.delta_atom >= 0) {
            const CAtom& d = cr.pos[m.delta_atom];
            const PredStore& ps = core_.preds[d.pred];
            std::uint32_t lo = ps.frontier[round_ - 2];
            std::uint32_t hi = ps.frontier[round_ - 1];
            for (std::uint32_t r = lo; r < hi; ++r) {
                int n = match_row(d, ps, r);
                if (n >= 0) {
                    premise_ids_[m.delta_atom] = ps.row_fact[r];
                    descend(cr, m, 0);
                    unbind(n);
                }
            }
        } else {
            if (cr.pos.empty()) {
                emit(cr, m);
                return;
            }
            descend(cr, m, 0);
        }
    }

    // Binds unbound variables of `a` against the row; returns the number of
    // bindings pushed onto the trail, or -1 on mismatch.
    int match_row(const CAtom& a, const PredStore& ps, std::uint32_t row) {
        const Sym* t = ps.row(row);
        int pushed = 0;
        for (std::size_t k = 0; k < a.args.size(); ++k) {
            const ArgSpec& s = a.args[k];
            if (s.is_const) {
                if (t[k] != s.sym)
                    return fail(pushed);
            } else if (binds_[s.var] == kNone) {
                binds_[s.var] = t[k];
                trail_.push_back(s.var);
                ++pushed;
            } else if (binds_[s.var] != t[k]) {
                return fail(pushed);
            }
        }
        return pushed;
    }

    int fail(int pushed) {
        unbind(pushed);
        return -1;
    }

    void unbind(int n) {
        while (n-- > 0) {
            binds_[trail_.back()] = kNone;
            trail_.pop_back();
        }
    }

    void descend(CRule& cr, const Mode& m, std::size_t step) {
        if (step == m.plan.size()) {
            emit(cr, m);
            return;
        }
        const AtomPlan& plan = m.plan[step];
        const CAtom& a = cr.pos[plan.atom];
        const PredStore& ps = core_.preds[a.pred];
        std::uint32_t limit = row_limit(m, a, plan.atom);

        switch (plan.access) {
        case Access::Ground: {
            scratch_.clear();
            for (const ArgSpec& s : a.args)
                scratch_.push_back(s.is_const ? s.sym : binds_[s.var]);
            FactId id = core_.find_fact(a.pred, scratch_.data());
            if (id != kNone && core_.fact_loc[id].second < limit) {
                premise_ids_[plan.atom] = id;
                descend(cr, m, step + 1);
            }
            return;
        }
        case Access::Index: {
            const ArgSpec& key = a.args[plan.index_pos];
            Sym k = key.is_const ? key.sym : binds_[key.var];
            const PosIndex* ix = ps.index_at(plan.index_pos);
            for (std::uint32_t r1 = ix->head.get(k); r1; r1 = ix->next[r1 - 1]) {
                std::uint32_t row = r1 - 1;
                if (row >= limit)
                    continue; // chains are newest-first
                int n = match_row(a, ps, row);
                if (n >= 0) {
                    premise_ids_[plan.atom] = ps.row_fact[row];
                    descend(cr, m, step + 1);
                    unbind(n);
                }
            }
            return;
        }
        case Access::Scan:
            for (std::uint32_t row = 0; row < limit; ++row) {
                int n = match_row(a, ps, row);
                if (n >= 0) {
                    premise_ids_[plan.atom] = ps.row_fact[row];
                    descend(cr, m, step + 1);
                    unbind(n);
                }
            }
            return;
        }
    }

    void emit(CRule& cr, const Mode&) {
        // Negated literals check the final fixpoint of strictly lower strata.
        for (const CAtom& a : cr.neg) {
            scratch_.clear();
            for (const ArgSpec& s : a.args)
                scratch_.push_back(s.is_const ? s.sym : binds_[s.var]);
            if (core_.find_fact(a.pred, scratch_.data()) != kNone)
                return;
        }
        scratch_.clear();
        for (const ArgSpec& s : cr.head.args)
            scratch_.push_back(s.is_const ? s.sym : binds_[s.var]);
        FactId id = core_.find_fact(cr.head.pred, scratch_.data());
        if (id == kNone)
            id = core_.append_fact(cr.head.pred, scratch_.data(), FactKey{stratum_, round_});
        else if (core_.fact_key[id].round == 0)
            return; // given facts stay leaves; their re-derivations are not recorded

        detail::DerivRec d;
        d.conclusion = id;
        d.rule_index = cr.rule_index;
        d.stratum = stratum_;
        d.round = round_;
        d.premise_offset = static_cast<std::uint32_t>(core_.premise_pool.size());
        d.premise_count = static_cast<std::uint16_t>(cr.pos.size());
        core_.premise_pool.insert(core_.premise_pool.end(), premise_ids_.begin(),
                                  premise_ids_.begin() + cr.pos.size());
        d.binding_offset = static_cast<std::uint32_t>(core_.binding_pool.size());
        d.binding_count = cr.nvars;
        core_.binding_pool.insert(core_.binding_pool.end(), binds_.begin(),
                                  binds_.begin() + cr.nvars);
        core_.derivs.push_back(d);
    }

    EvalOptions options_;
    EvalCore core_;
    std::vector<CRule> crules_;
    std::uint32_t stratum_ = 0;
    std::uint32_t round_ = 0;
    std::vector<Sym> binds_;
    std::vector<std::uint16_t> trail_;
    std::vector<FactId> premise_ids_;
    std::vector<Sym> scratch_;
};

// Naive evaluator: joins every rule against the full snapshot each round until
// nothing changes. No indexes, no deltas, no derivations. Kept separate from
// the semi-naive engine so the two can check each other.
class NaiveEngine {
public:
    NaiveEngine(const Program& program, EvalOptions options) : options_(options) {
        core_.strata = stratify(program);
        for (std::size_t s = 0; s < core_.strata.size(); ++s)
            for (const PredicateRef& p : core_.strata[s].predicates) {
                PredId id = core_.intern_pred(p.name, p.arity);
                core_.preds[id].stratum = static_cast<std::uint32_t>(s);
            }
        std::vector<Sym> args;
        for (const Atom& f : program.facts) {
            if (!f.ground())
                throw UnsafeRuleError("", 0, "",
                                      "non-ground fact " + render(f) + " (facts must be ground)");
            PredId p = core_.intern_pred(f.predicate, f.arity());
            args.clear();
            for (const Term& t : f.terms)
                args.push_back(core_.syms.intern(t.text));
            if (core_.find_fact(p, args.data()) == kNone)
                core_.append_fact(p, args.data(), FactKey{core_.preds[p].stratum, 0});
        }
        for (const Rule& r : program.rules)
            validate_rule(r);
        rules_ = program.rules;
    }

    EvalCore take() && {
        core_.finalize();
        return std::move(core_);
    }

    void run() {
        for (std::uint32_t s = 0; s < core_.strata.size(); ++s) {
            std::uint32_t round = 0;
            bool changed = true;
            while (changed) {
                ++round;
                if (options_.max_rounds && round > options_.max_rounds)
                    throw IterationLimitError("iteration cap of " +
                                              std::to_string(options_.max_rounds) +
                                              " rounds exceeded in stratum " + std::to_string(s));
                changed = false;
                snapshot_.assign(core_.preds.size(), 0);
                for (PredId p = 0; p < core_.preds.size(); ++p)
                    snapshot_[p] = core_.preds[p].rows();
                for (const Rule& r : rules_) {
                    PredId head = *core_.find_pred(r.head.predicate, r.head.arity());
                    if (core_.preds[head].stratum != s)
                        continue;
                    std::map<std::string, Sym> binding;
                    changed |= fire_all(r, 0, binding, s, round);
                }
            }
        }
    }

private:
    bool fire_all(const Rule& r, std::size_t i, std::map<std::string, Sym>& binding,
                  std::uint32_t s, std::uint32_t round) {
        while (i < r.body.size() && r.body[i].negated)
            ++i; // negated literals handled once all positives are bound
        if (i == r.body.size())
            return conclude(r, binding, s, round);

        const Atom& a = r.body[i].atom;
        PredId p = *core_.find_pred(a.predicate, a.arity());
        const PredStore& ps = core_.preds[p];
        bool changed = false;
        for (std::uint32_t row = 0; row < snapshot_[p]; ++row) {
            const Sym* t = ps.row(row);
            std::vector<std::string> bound_here;
            bool ok = true;
            for (std::size_t k = 0; k < a.terms.size() && ok; ++k) {
                const Term& term = a.terms[k];
                if (term.is_constant()) {
                    auto sid = core_.syms.find(term.text);
                    ok = sid && *sid == t[k];
                } else {
                    auto it = binding.find(term.text);
                    if (it == binding.end()) {
                        binding.emplace(term.text, t[k]);
                        bound_here.push_back(term.text);
                    } else {
                        ok = it->second == t[k];
                    }
                }
            }
            if (ok)
                changed |= fire_all(r, i + 1, binding, s, round);
            for (const std::string& v : bound_here)
                binding.erase(v);
        }
        return changed;
    }

    bool conclude(const Rule& r, std::map<std::string, Sym>& binding, std::uint32_t s,
                  std::uint32_t round) {
        std::vector<Sym> args;
        for (const Literal& l : r.body) {
            if (!l.negated)
                continue;
            args.clear();
            auto pid = core_.find_pred(l.atom.predicate, l.atom.arity());
            if (!pid)
                continue; // predicate has no facts at all
            for (const Term& t : l.atom.terms)
                args.push_back(t.is_constant() ? core_.syms.intern(t.text)
                                               : binding.at(t.text));
            if (core_.find_fact(*pid, args.data()) != kNone)
                return false;
        }
        args.clear();
        for (const Term& t : r.head.terms)
            args.push_back(t.is_constant() ? core_.syms.intern(t.text) : binding.at(t.text));
        PredId head = *core_.find_pred(r.head.predicate, r.head.arity());
        if (core_.find_fact(head, args.data()) != kNone)
            return false;
        core_.append_fact(head, args.data(), FactKey{s, round});
        return true;
    }

    EvalOptions options_;
    EvalCore core_;
    std::vector<Rule> rules_;
    std::vector<std::uint32_t> snapshot_;
};

} // namespace

EvalResult evaluate(const Program& program, const EvalOptions& options) {
    Engine engine(program, options);
    engine.run();
    auto core = std::make_shared<const EvalCore>(std::move(engine).take());
    return {Database(core), DerivationLog(core)};
}

Database evaluate_naive(const Program& program, const EvalOptions& options) {
    NaiveEngine engine(program, options);
    engine.run();
    return Database(std::make_shared<const EvalCore>(std::move(engine).take()));
}

// --- Database ---------------------------------------------------------------

bool Database::contains(const Atom& ground_fact) const {
    return core_ && core_->resolve(ground_fact).has_value();
}

std::optional<FactInfo> Database::info(const Atom& ground_fact) const {
    if (!core_)
        return std::nullopt;
    auto id = core_->resolve(ground_fact);
    if (!id)
        return std::nullopt;
    FactKey k = core_->fact_key[*id];
    return FactInfo{static_cast<int>(k.stratum), static_cast<int>(k.round)};
}

std::size_t Database::size() const {
    return core_ ? core_->fact_loc.size() : 0;
}

std::size_t Database::given_count() const {
    return core_ ? core_->given_facts : 0;
}

std::size_t Database::derived_count() const {
    return size() - given_count();
}

std::size_t Database::count(const std::string& predicate, int arity) const {
    if (!core_)
        return 0;
    auto p = core_->find_pred(predicate, arity);
    return p ? core_->preds[*p].rows() : 0;
}

std::vector<Atom> Database::all_facts() const {
    std::vector<Atom> out;
    if (!core_)
        return out;
    out.reserve(core_->fact_loc.size());
    for (FactId id = 0; id < core_->fact_loc.size(); ++id)
        out.push_back(core_->atom_of(id));
    return out;
}

std::vector<Atom> Database::derived_facts() const {
    std::vector<Atom> out;
    if (!core_)
        return out;
    for (FactId id = 0; id < core_->fact_loc.size(); ++id)
        if (core_->fact_key[id].round > 0)
            out.push_back(core_->atom_of(id));
    return out;
}

// --- DerivationLog ------------------------------------------------------------

std::size_t DerivationLog::size() const {
    return core_ ? core_->derivs.size() : 0;
}

// --- query --------------------------------------------------------------------

std::vector<Substitution> query(const Database& db, const Atom& pattern) {
    std::vector<Substitution> out;
    if (!db.impl())
        return out;
    const EvalCore& core = *db.impl();
    auto pid = core.find_pred(pattern.predicate, pattern.arity());
    if (!pid)
        return out;
    const PredStore& ps = core.preds[*pid];

    // Constant pattern positions resolve to symbols up front; an unknown
    // constant cannot match anything.
    std::vector<std::optional<Sym>> consts(pattern.terms.size());
    for (std::size_t k = 0; k < pattern.terms.size(); ++k)
        if (pattern.terms[k].is_constant()) {
            auto s = core.syms.find(pattern.terms[k].text);
            if (!s)
                return out;
            consts[k] = *s;
        }

    std::set<Substitution> seen;
    for (std::uint32_t row = 0; row < ps.rows(); ++row) {
        const Sym* t = ps.row(row);
        std::map<std::string, Sym> binding;
        bool ok = true;
        for (std::size_t k = 0; k < pattern.terms.size() && ok; ++k) {
            const Term& term = pattern.terms[k];
            if (term.is_constant()) {
                ok = t[k] == *consts[k];
            } else if (term.is_wildcard()) {
                // matches anything, unreported
            } else {
                auto [it, inserted] = binding.emplace(term.text, t[k]);
                ok = inserted || it->second == t[k];
            }
        }
        if (!ok)
            continue;
        Substitution sub;
        for (auto& [var, sym] : binding)
            if (var[0] != '_')
                sub.emplace_back(var, core.syms.name(sym));
        if (seen.insert(sub).second)
            out.push_back(std::move(sub));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// --- derivations_of -------------------------------------------------------------

namespace {

DerivationInfo materialize(const EvalCore& core, const detail::DerivRec& d) {
    DerivationInfo info;
    info.conclusion = core.atom_of(d.conclusion);
    const Rule& rule = core.rules[d.rule_index];
    info.rule_id = rule.id;
    info.stratum = static_cast<int>(d.stratum);
    info.round = static_cast<int>(d.round);
    const auto& vars = core.rule_vars[d.rule_index];
    std::map<std::string, std::string> binding;
    for (std::uint16_t i = 0; i < d.binding_count; ++i) {
        Sym s = core.binding_pool[d.binding_offset + i];
        if (s != kNone)
            binding.emplace(vars[i], core.syms.name(s));
    }
    info.substitution.assign(binding.begin(), binding.end());
    for (std::uint16_t i = 0; i < d.premise_count; ++i)
        info.premises.push_back(core.atom_of(core.premise_pool[d.premise_offset + i]));
    for (const Literal& l : rule.body)
        if (l.negated)
            info.negated_absent.push_back(substitute(l.atom, binding));
    return info;
}

} // namespace

std::vector<DerivationInfo> derivations_of(const DerivationLog& log, const Atom& fact) {
    std::vector<DerivationInfo> out;
    if (!log.impl())
        return out;
    const EvalCore& core = *log.impl();
    auto id = core.resolve(fact);
    if (!id)
        return out;
    for (std::uint32_t i = core.deriv_offsets[*id]; i < core.deriv_offsets[*id + 1]; ++i)
        out.push_back(materialize(core, core.derivs[core.deriv_by_fact[i]]));
    return out;
}

} // namespace lagforge
