// Copyright (c) 2026 The lagforge authors
// SPDX-License-Identifier: Apache-2.0
#include "lagforge/graph.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "eval_core.hpp"
#include "lagforge/errors.hpp"

namespace lagforge {

using detail::EvalCore;
using detail::FactId;
using detail::kNone;

std::string to_string(NodeKind k) {
    switch (k) {
    case NodeKind::Leaf: return "LEAF";
    case NodeKind::And: return "AND";
    case NodeKind::Or: return "OR";
    }
    return "LEAF";
}

namespace {

struct Builder {
    explicit Builder(const EvalCore& c) : core(c) {}

    const EvalCore& core;

    // temporary node table: facts and derivations mapped to dense temp ids
    struct TmpNode {
        NodeKind kind;
        FactId fact = 0;       // LEAF/OR
        std::uint32_t deriv = 0; // AND
    };
    std::vector<TmpNode> tmp;
    std::map<FactId, int> fact_node;
    std::set<FactId> expanded;
    std::vector<std::pair<int, int>> edges; // temp ids

    int fact_to_node(FactId f) {
        auto it = fact_node.find(f);
        if (it != fact_node.end())
            return it->second;
        bool given = core.fact_key[f].round == 0;
        int id = static_cast<int>(tmp.size());
        tmp.push_back({given ? NodeKind::Leaf : NodeKind::Or, f, 0});
        fact_node.emplace(f, id);
        return id;
    }

    // Expands the fact and everything supporting it through well-founded
    // derivations. Iterative worklist; facts are expanded once.
    void expand(FactId goal) {
        std::vector<FactId> work{goal};
        while (!work.empty()) {
            FactId f = work.back();
            work.pop_back();
            if (!expanded.insert(f).second)
                continue;
            int fnode = fact_to_node(f);
            if (tmp[fnode].kind == NodeKind::Leaf)
                continue;
            for (std::uint32_t i = core.deriv_offsets[f]; i < core.deriv_offsets[f + 1]; ++i) {
                const detail::DerivRec& d = core.derivs[core.deriv_by_fact[i]];
                if (!core.well_founded(d))
                    continue;
                int anode = static_cast<int>(tmp.size());
                tmp.push_back({NodeKind::And, 0, core.deriv_by_fact[i]});
                edges.emplace_back(anode, fnode);
                for (std::uint32_t k = 0; k < d.premise_count; ++k) {
                    FactId p = core.premise_pool[d.premise_offset + k];
                    if (!expanded.count(p))
                        work.push_back(p);
                    edges.emplace_back(fact_to_node(p), anode);
                }
            }
        }
    }

    std::string sort_key(const TmpNode& n) const {
        if (n.kind != NodeKind::And)
            return "F|" + render(core.atom_of(n.fact));
        const detail::DerivRec& d = core.derivs[n.deriv];
        std::string key = "R|" + core.rules[d.rule_index].id + "|" +
                          render(core.atom_of(d.conclusion)) + "|";
        for (std::uint32_t i = 0; i < d.premise_count; ++i)
            key += render(core.atom_of(core.premise_pool[d.premise_offset + i])) + ";";
        return key;
    }

    AttackGraph finish(const std::vector<FactId>& goal_facts,
                       std::vector<std::string> missing) {
        // Deterministic topological numbering: Kahn's algorithm, always taking
        // the ready node with the smallest sort key.
        std::size_t n = tmp.size();
        std::vector<int> indegree(n, 0);
        std::vector<std::vector<int>> out(n);
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        for (auto [a, b] : edges) {
            out[a].push_back(b);
            ++indegree[b];
        }
        std::set<std::pair<std::string, int>> ready;
        for (std::size_t i = 0; i < n; ++i)
            if (indegree[i] == 0)
                ready.emplace(sort_key(tmp[i]), static_cast<int>(i));
        std::vector<int> final_id(n, -1);
        int next = 0;
        while (!ready.empty()) {
            auto [key, v] = *ready.begin();
            ready.erase(ready.begin());
            final_id[v] = next++;
            for (int w : out[v])
                if (--indegree[w] == 0)
                    ready.emplace(sort_key(tmp[w]), w);
        }
        if (next != static_cast<int>(n))
            throw Error("proof graph is cyclic; well-founded filter violated");

        AttackGraph g;
        g.missing_goals = std::move(missing);
        g.nodes.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            GraphNode node;
            node.id = final_id[i];
            node.kind = tmp[i].kind;
            if (tmp[i].kind == NodeKind::And) {
                const Rule& r = core.rules[core.derivs[tmp[i].deriv].rule_index];
                node.label = r.id + ": " + r.label;
                node.provenance = to_string(r.provenance);
                node.rule_id = r.id;
            } else {
                node.label = render(core.atom_of(tmp[i].fact));
                node.provenance = tmp[i].kind == NodeKind::Leaf ? "given" : "";
            }
            g.nodes[final_id[i]] = std::move(node);
        }
        for (auto [a, b] : edges)
            g.edges.emplace_back(final_id[a], final_id[b]);
        std::sort(g.edges.begin(), g.edges.end());
        for (FactId f : goal_facts)
            g.goal_ids.push_back(final_id[fact_node.at(f)]);
        std::sort(g.goal_ids.begin(), g.goal_ids.end());
        return g;
    }
};

} // namespace

AttackGraph build_graph(const Database& db, const DerivationLog& log,
                        const std::vector<Atom>& goals) {
    if (!db.impl())
        return {};
    if (db.impl() != log.impl())
        throw Error("build_graph: database and derivation log come from different evaluations");
    const EvalCore& core = *db.impl();

    std::vector<FactId> goal_facts;
    std::vector<std::string> missing;
    for (const Atom& g : goals) {
        if (!g.ground())
            throw Error("goal must be ground: " + render(g));
        auto id = core.resolve(g);
        if (id) {
            if (std::find(goal_facts.begin(), goal_facts.end(), *id) == goal_facts.end())
                goal_facts.push_back(*id);
        } else {
            missing.push_back(render(g));
        }
    }

    Builder b(core);
    for (FactId f : goal_facts)
        b.expand(f);
    return b.finish(goal_facts, std::move(missing));
}

std::string to_dot(const AttackGraph& graph, const DotStyle& style) {
    auto escape = [](const std::string& s) {
        std::string out;
        for (char c : s) {
            if (c == '"' || c == '\\')
                out.push_back('\\');
            out.push_back(c);
        }
        return out;
    };
    std::string out = "digraph G {\n";
    for (const GraphNode& n : graph.nodes) {
        out += "  n" + std::to_string(n.id) + " [shape=";
        switch (n.kind) {
        case NodeKind::Leaf: out += style.leaf_shape; break;
        case NodeKind::And: out += style.and_shape; break;
        case NodeKind::Or: out += style.or_shape; break;
        }
        if (style.color && n.kind == NodeKind::And) {
            std::string fill;
            if (n.provenance == "ssc")
                fill = style.ssc_fill;
            else if (n.provenance == "core")
                fill = style.core_fill;
            else
                fill = style.user_fill;
            out += ", style=filled, fillcolor=" + fill;
        }
        out += ", label=\"" + escape(n.label) + "\"];\n";
    }
    for (auto [a, b] : graph.edges)
        out += "  n" + std::to_string(a) + " -> n" + std::to_string(b) + ";\n";
    out += "}\n";
    return out;
}

std::string to_json(const AttackGraph& graph) {
    nlohmann::json j;
    j["nodes"] = nlohmann::json::array();
    for (const GraphNode& n : graph.nodes)
        j["nodes"].push_back({{"id", n.id},
                              {"kind", to_string(n.kind)},
                              {"label", n.label},
                              {"provenance", n.provenance}});
    j["edges"] = nlohmann::json::array();
    for (auto [a, b] : graph.edges)
        j["edges"].push_back({{"from", a}, {"to", b}});
    j["goals"] = graph.goal_ids;
    return j.dump(2) + "\n";
}

GraphStats stats(const AttackGraph& graph) {
    GraphStats s;
    for (const GraphNode& n : graph.nodes) {
        switch (n.kind) {
        case NodeKind::Leaf: ++s.leaf_count; break;
        case NodeKind::Or: ++s.or_count; break;
        case NodeKind::And:
            ++s.and_count;
            ++s.and_by_provenance[n.provenance];
            break;
        }
    }
    s.edge_count = graph.edges.size();
    // Longest path by DP over ids: ids are topologically ordered, so a single
    // ascending pass suffices.
    std::vector<std::size_t> dist(graph.nodes.size(), 0);
    for (auto [a, b] : graph.edges)
        dist[b] = std::max(dist[b], dist[a] + 1);
    for (std::size_t d : dist)
        s.depth = std::max(s.depth, d);
    return s;
}

std::string GraphStats::to_text() const {
    std::string out = "nodes: " + std::to_string(leaf_count + and_count + or_count) +
                      " (leaf " + std::to_string(leaf_count) + ", and " +
                      std::to_string(and_count) + ", or " + std::to_string(or_count) + ")\n";
    out += "and nodes by provenance:";
    if (and_by_provenance.empty())
        out += " none";
    for (const auto& [prov, count] : and_by_provenance)
        out += " " + prov + "=" + std::to_string(count);
    out += "\nedges: " + std::to_string(edge_count) + "\ndepth: " + std::to_string(depth) + "\n";
    return out;
}

namespace {

void proof_tree(const EvalCore& core, FactId fact, bool all, int depth, std::string& out) {
    std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    out += pad + render(core.atom_of(fact));
    if (core.fact_key[fact].round == 0) {
        out += "  [given]\n";
        return;
    }
    out += "\n";
    for (std::uint32_t i = core.deriv_offsets[fact]; i < core.deriv_offsets[fact + 1]; ++i) {
        const detail::DerivRec& d = core.derivs[core.deriv_by_fact[i]];
        if (!core.well_founded(d))
            continue;
        out += pad + "  via " + core.rules[d.rule_index].id + "\n";
        for (std::uint32_t k = 0; k < d.premise_count; ++k)
            proof_tree(core, core.premise_pool[d.premise_offset + k], all, depth + 2, out);
        if (!all)
            return;
    }
}

} // namespace

std::string render_proof_tree(const Database& db, const DerivationLog& log, const Atom& fact,
                              bool all) {
    if (!db.impl() || db.impl() != log.impl())
        return {};
    auto id = db.impl()->resolve(fact);
    if (!id)
        return {};
    std::string out;
    proof_tree(*db.impl(), *id, all, 0, out);
    return out;
}

} // namespace lagforge
