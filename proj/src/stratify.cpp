// Copyright (c) 2026 The lagforge authors
// SPDX-License-Identifier: Apache-2.0
#include "lagforge/stratify.hpp"

#include <algorithm>
#include <map>
#include <queue>

#include "lagforge/errors.hpp"

namespace lagforge {

std::string to_string(const PredicateRef& p) {
    return p.name + "/" + std::to_string(p.arity);
}

namespace {

struct DepGraph {
    std::vector<PredicateRef> preds;
    std::map<PredicateRef, int> ids;
    // edges[head] = {(body_pred, negated)}: head depends on body_pred
    std::vector<std::vector<std::pair<int, bool>>> deps;

    int intern(const PredicateRef& p) {
        auto [it, inserted] = ids.emplace(p, static_cast<int>(preds.size()));
        if (inserted) {
            preds.push_back(p);
            deps.emplace_back();
        }
        return it->second;
    }
};

// Tarjan SCC over the dependency graph, iterative to be safe on deep inputs.
std::vector<int> scc_of(const DepGraph& g, int& scc_count) {
    int n = static_cast<int>(g.preds.size());
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    int next_index = 0;
    scc_count = 0;

    struct Frame { int v; std::size_t edge; };
    for (int start = 0; start < n; ++start) {
        if (index[start] != -1)
            continue;
        std::vector<Frame> frames{{start, 0}};
        index[start] = low[start] = next_index++;
        stack.push_back(start);
        on_stack[start] = true;
        while (!frames.empty()) {
            auto& [v, edge] = frames.back();
            if (edge < g.deps[v].size()) {
                int w = g.deps[v][edge++].first;
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
            } else {
                if (low[v] == index[v]) {
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp[w] = scc_count;
                        if (w == v)
                            break;
                    }
                    ++scc_count;
                }
                int done = v;
                frames.pop_back();
                if (!frames.empty())
                    low[frames.back().v] = std::min(low[frames.back().v], low[done]);
            }
        }
    }
    return comp;
}

// Renders a negative cycle through `from` and `to` (both in the same SCC).
std::string cycle_text(const DepGraph& g, const std::vector<int>& comp, int from, int to) {
    // BFS from `to` back to `from` staying inside the SCC.
    std::vector<int> parent(g.preds.size(), -1);
    std::vector<bool> negated_step(g.preds.size(), false);
    std::queue<int> q;
    q.push(to);
    std::vector<bool> seen(g.preds.size(), false);
    seen[to] = true;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        if (v == from)
            break;
        for (auto [w, neg] : g.deps[v]) {
            if (comp[w] != comp[v] || seen[w])
                continue;
            seen[w] = true;
            parent[w] = v;
            negated_step[w] = neg;
            q.push(w);
        }
    }
    std::vector<std::pair<int, bool>> path; // node, negated edge into it
    for (int v = from; v != -1 && v != to; v = parent[v])
        path.emplace_back(v, negated_step[v]);
    std::string out = to_string(g.preds[from]) + " -> not " + to_string(g.preds[to]);
    for (auto it = path.rbegin(); it != path.rend(); ++it)
        out += std::string(" -> ") + (it->second ? "not " : "") + to_string(g.preds[it->first]);
    return out;
}

} // namespace

std::vector<Stratum> stratify(const Program& program) {
    DepGraph g;
    for (const Atom& f : program.facts)
        g.intern({f.predicate, f.arity()});
    for (const Rule& r : program.rules) {
        int head = g.intern({r.head.predicate, r.head.arity()});
        for (const Literal& l : r.body) {
            int dep = g.intern({l.atom.predicate, l.atom.arity()});
            g.deps[head].emplace_back(dep, l.negated);
        }
    }

    int scc_count = 0;
    std::vector<int> comp = scc_of(g, scc_count);

    // A negative edge inside one SCC means negation through recursion.
    for (std::size_t v = 0; v < g.preds.size(); ++v)
        for (auto [w, neg] : g.deps[v])
            if (neg && comp[v] == comp[static_cast<std::size_t>(w)]) {
                std::string cycle = cycle_text(g, comp, static_cast<int>(v), w);
                throw UnstratifiableError(
                    cycle, "program is not stratifiable: negative cycle " + cycle);
            }

    // Longest-path style stratum assignment over the SCC condensation:
    // stratum(p) = max over dependencies (stratum(dep) + negated).
    // Iterate to fixpoint; bounded because there is no negative cycle.
    int n = static_cast<int>(g.preds.size());
    std::vector<int> level(static_cast<std::size_t>(scc_count), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = 0; v < n; ++v) {
            for (auto [w, neg] : g.deps[v]) {
                int need = level[comp[w]] + (neg ? 1 : 0);
                if (comp[v] != comp[w] || neg) {
                    if (need > level[comp[v]]) {
                        level[comp[v]] = need;
                        changed = true;
                    }
                }
            }
        }
    }

    int max_level = 0;
    for (int v = 0; v < n; ++v)
        max_level = std::max(max_level, level[comp[v]]);

    std::vector<Stratum> strata(static_cast<std::size_t>(n == 0 ? 1 : max_level + 1));
    for (std::size_t i = 0; i < strata.size(); ++i)
        strata[i].index = static_cast<int>(i);
    for (int v = 0; v < n; ++v)
        strata[level[comp[v]]].predicates.push_back(g.preds[v]);
    for (Stratum& s : strata)
        std::sort(s.predicates.begin(), s.predicates.end());
    return strata;
}

} // namespace lagforge
