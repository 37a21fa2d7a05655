// Copyright (c) 2026 The lagforge authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lagforge/ast.hpp"
#include "lagforge/eval.hpp"

namespace lagforge {

enum class NodeKind : std::uint8_t { Leaf, And, Or };

std::string to_string(NodeKind k); // "LEAF" | "AND" | "OR"

struct GraphNode {
    int id = 0;
    NodeKind kind = NodeKind::Leaf;
    std::string label;      // rendered fact, or "<rule id>: <rule label>" for AND nodes
    std::string provenance; // "given" for LEAF, rule provenance for AND, "" for OR
    std::string rule_id;    // AND nodes only

    bool operator==(const GraphNode&) const = default;
};

// Tri-kind proof graph pruned to the goals. Edges run premise -> AND ->
// conclusion; the well-founded derivation filter keeps it acyclic.
struct AttackGraph {
    std::vector<GraphNode> nodes;              // sorted by id (dense, 0-based)
    std::vector<std::pair<int, int>> edges;    // sorted
    std::vector<int> goal_ids;                 // derivable goals only
    std::vector<std::string> missing_goals;    // rendered goals absent from the db

    bool empty() const { return nodes.empty(); }
    bool operator==(const AttackGraph&) const = default;
};

/// Builds the pruned attack graph for the goals: exactly the well-founded
/// derivations transitively supporting them, with all alternative derivations
/// of each OR node retained. Node ids follow a deterministic topological
/// order with ties broken by label.
AttackGraph build_graph(const Database& db, const DerivationLog& log,
                        const std::vector<Atom>& goals);

struct DotStyle {
    bool color = true;
    std::string leaf_shape = "box";
    std::string and_shape = "ellipse";
    std::string or_shape = "diamond";
    std::string ssc_fill = "purple";
    std::string core_fill = "orange";
    std::string user_fill = "gray";
};

/// Graphviz rendering; byte-deterministic for a given graph. AND nodes are
/// filled by rule provenance unless style.color is off.
std::string to_dot(const AttackGraph& graph, const DotStyle& style = {});

/// JSON rendering with the stable schema
/// {nodes:[{id,kind,label,provenance}], edges:[{from,to}], goals:[ids]}.
std::string to_json(const AttackGraph& graph);

struct GraphStats {
    std::size_t leaf_count = 0;
    std::size_t and_count = 0;
    std::size_t or_count = 0;
    std::map<std::string, std::size_t> and_by_provenance;
    std::size_t edge_count = 0;
    std::size_t depth = 0; // longest directed path, in edges

    std::string to_text() const;
};

GraphStats stats(const AttackGraph& graph);

/// Indented proof tree of one (or, with `all`, every) well-founded derivation
/// of the fact. Given facts render as a single "[given]" line. Returns empty
/// when the fact is not in the database.
std::string render_proof_tree(const Database& db, const DerivationLog& log, const Atom& fact,
                              bool all = false);

} // namespace lagforge
