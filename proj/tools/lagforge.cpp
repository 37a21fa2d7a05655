// Copyright (c) 2026 The lagforge authors
// SPDX-License-Identifier: Apache-2.0
//
// lagforge — logical attack graph engine with software supply chain threat
// propagation. Subcommands: check, solve, graph, explain, bench, gen, rules,
// scenarios. Exit codes: 0 success, 1 input error, 2 goal not derivable.
#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lagforge/errors.hpp"
#include "lagforge/eval.hpp"
#include "lagforge/graph.hpp"
#include "lagforge/parser.hpp"
#include "lagforge/rules.hpp"
#include "lagforge/scenarios.hpp"
#include "lagforge/stratify.hpp"

namespace {

using namespace lagforge;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitGoalNotDerivable = 2;

struct CommonOpts {
    std::vector<std::string> fact_files;
    std::vector<std::string> rule_files;
    std::string rule_set = "both";
    std::uint32_t max_iter = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool facts_required) {
    auto* f = cmd->add_option("-f,--facts", opts.fact_files, "fact file(s)");
    if (facts_required)
        f->required();
    cmd->add_option("--rules-file", opts.rule_files, "extra rule file(s), provenance 'user'");
    cmd->add_option("--rule-set", opts.rule_set, "embedded rule sets to load")
        ->check(CLI::IsMember({"core", "ssc", "both"}))
        ->capture_default_str();
    cmd->add_option("--max-iter", opts.max_iter, "cap on evaluation rounds per stratum")
        ->envname("LAGFORGE_MAX_ITER");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path);
    out << content;
}

// Parses fact and rule files and appends the selected embedded rule sets.
Program load_program(const CommonOpts& opts) {
    Program prog;
    int ordinal = 1;
    for (const std::string& path : opts.fact_files) {
        Program p = parse_program(read_file(path),
                                  {.rule_id_prefix = "user.r", .first_rule_ordinal = ordinal});
        ordinal += static_cast<int>(p.rules.size());
        prog.merge(p);
    }
    for (const std::string& path : opts.rule_files) {
        Program p = parse_program(read_file(path),
                                  {.rule_id_prefix = "user.r", .first_rule_ordinal = ordinal});
        ordinal += static_cast<int>(p.rules.size());
        prog.merge(p);
    }
    for (Rule& r : selected_rules(opts.rule_set))
        prog.rules.push_back(std::move(r));
    return prog;
}

int cmd_check(const CommonOpts& opts) {
    Program prog;
    try {
        prog = load_program(opts);
        stratify(prog);
    } catch (const Error& e) {
        std::cout << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    for (const Diagnostic& d : lint_facts(prog, schema_registry()))
        std::cout << (d.severity == Diagnostic::Severity::Error ? "error: " : "warning: ")
                  << d.message << "\n";
    std::cout << "ok: " << prog.facts.size() << " facts, " << prog.rules.size() << " rules\n";
    return kExitOk;
}

struct SolveOpts {
    std::vector<std::string> goals;
    std::string query_pattern;
    bool all = false;
};

int cmd_solve(const CommonOpts& opts, const SolveOpts& solve) {
    EvalResult result = evaluate(load_program(opts), {.max_rounds = opts.max_iter});

    if (!solve.query_pattern.empty()) {
        Atom pattern = parse_atom(solve.query_pattern);
        for (const Substitution& sub : query(result.db, pattern)) {
            if (sub.empty()) {
                std::cout << "true\n";
                continue;
            }
            for (std::size_t i = 0; i < sub.size(); ++i)
                std::cout << (i ? ", " : "") << sub[i].first << "=" << sub[i].second;
            std::cout << "\n";
        }
    }
    if (solve.all) {
        std::vector<std::string> lines;
        for (const Atom& f : result.db.derived_facts())
            lines.push_back(render(f));
        std::sort(lines.begin(), lines.end());
        for (const std::string& l : lines)
            std::cout << l << "\n";
    }
    bool all_derivable = true;
    for (const std::string& g : solve.goals) {
        bool ok = result.db.contains(parse_atom(g, /*require_ground=*/true));
        std::cout << "goal " << g << ": " << (ok ? "derivable" : "not derivable") << "\n";
        all_derivable &= ok;
    }
    return all_derivable ? kExitOk : kExitGoalNotDerivable;
}

struct GraphOpts {
    std::vector<std::string> goals;
    std::string dot_path;
    std::string json_path;
    bool no_color = false;
};

int cmd_graph(const CommonOpts& opts, const GraphOpts& gopts) {
    EvalResult result = evaluate(load_program(opts), {.max_rounds = opts.max_iter});
    std::vector<Atom> goals;
    for (const std::string& g : gopts.goals)
        goals.push_back(parse_atom(g, /*require_ground=*/true));
    AttackGraph graph = build_graph(result.db, result.log, goals);
    for (const std::string& missing : graph.missing_goals)
        std::cout << "goal not derivable: " << missing << "\n";
    if (!gopts.dot_path.empty()) {
        DotStyle style;
        style.color = !gopts.no_color;
        write_file(gopts.dot_path, to_dot(graph, style));
    }
    if (!gopts.json_path.empty())
        write_file(gopts.json_path, to_json(graph));
    std::cout << stats(graph).to_text();
    return graph.missing_goals.empty() ? kExitOk : kExitGoalNotDerivable;
}

int cmd_explain(const CommonOpts& opts, const std::string& fact_text, bool all) {
    EvalResult result = evaluate(load_program(opts), {.max_rounds = opts.max_iter});
    Atom fact = parse_atom(fact_text, /*require_ground=*/true);
    std::string tree = render_proof_tree(result.db, result.log, fact, all);
    if (tree.empty()) {
        std::cout << "not derivable: " << render(fact) << "\n";
        return kExitGoalNotDerivable;
    }
    std::cout << tree;
    return kExitOk;
}

struct BenchOpts {
    std::vector<std::size_t> sizes;
    ScenarioSpec spec;
};

nlohmann::json bench_one(const ScenarioSpec& spec, std::size_t size_label) {
    GeneratedScenario gen = generate(spec);
    auto t0 = std::chrono::steady_clock::now();
    Program prog = parse_program(gen.text);
    for (Rule& r : selected_rules("both"))
        prog.rules.push_back(std::move(r));
    EvalResult result = evaluate(prog);
    auto t1 = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    nlohmann::json j;
    if (size_label)
        j["size"] = size_label;
    j["seed"] = spec.seed;
    j["facts"] = gen.counts.facts;
    j["derived"] = result.db.derived_count();
    j["wall_ms"] = ms;
    return j;
}

int cmd_bench(const BenchOpts& opts) {
    if (!opts.sizes.empty()) {
        for (std::size_t size : opts.sizes)
            std::cout << bench_one(sized_spec(size, opts.spec.seed), size).dump() << "\n";
    } else {
        std::cout << bench_one(opts.spec, 0).dump() << "\n";
    }
    return kExitOk;
}

int cmd_gen(const ScenarioSpec& spec, const std::string& out_path) {
    GeneratedScenario gen = generate(spec);
    write_file(out_path, gen.text);
    nlohmann::json j;
    j["facts"] = gen.counts.facts;
    j["derived"] = gen.counts.derived;
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_rules_export(const std::string& set_name) {
    if (set_name == "core" || set_name == "both")
        std::cout << export_rules(core_rules());
    if (set_name == "ssc" || set_name == "both")
        std::cout << export_rules(ssc_rules());
    return kExitOk;
}

int cmd_scenarios(bool list, const std::string& show, const std::string& export_dir) {
    if (list) {
        for (const PackagedScenario& s : packaged_scenarios())
            std::cout << s.name << "\n";
    }
    if (!show.empty())
        std::cout << packaged_scenario(show).text;
    if (!export_dir.empty()) {
        std::filesystem::create_directories(export_dir);
        for (const PackagedScenario& s : packaged_scenarios())
            write_file((std::filesystem::path(export_dir) / (s.name + ".P")).string(), s.text);
        std::cout << "wrote " << packaged_scenarios().size() << " scenario files to "
                  << export_dir << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"logical attack graph engine with SSC threat propagation"};
    app.require_subcommand(1);

    CommonOpts common;
    SolveOpts solve;
    GraphOpts gopts;
    BenchOpts bench;
    ScenarioSpec gen_spec;
    std::string explain_fact, gen_out, rules_set = "both", scen_show, scen_export;
    bool explain_all = false, scen_list = false;

    auto* check = app.add_subcommand("check", "parse, safety, stratification and lint");
    add_common(check, common, true);

    auto* solve_cmd = app.add_subcommand("solve", "evaluate and answer queries/goals");
    add_common(solve_cmd, common, true);
    solve_cmd->add_option("--goal", solve.goals, "ground atom(s) that must be derivable");
    solve_cmd->add_option("--query", solve.query_pattern, "pattern; prints one binding per line");
    solve_cmd->add_flag("--all", solve.all, "dump all derived facts");

    auto* graph_cmd = app.add_subcommand("graph", "build and export the pruned attack graph");
    add_common(graph_cmd, common, true);
    graph_cmd->add_option("--goal", gopts.goals, "goal atom(s)")->required();
    graph_cmd->add_option("--dot", gopts.dot_path, "write Graphviz DOT here");
    graph_cmd->add_option("--json", gopts.json_path, "write JSON here");
    graph_cmd->add_flag("--no-color", gopts.no_color, "omit fill colors in DOT");

    auto* explain_cmd = app.add_subcommand("explain", "print a proof tree for a fact");
    add_common(explain_cmd, common, true);
    explain_cmd->add_option("fact", explain_fact, "ground atom to explain")->required();
    explain_cmd->add_flag("--all", explain_all, "print every well-founded derivation");

    auto* bench_cmd = app.add_subcommand("bench", "generate, evaluate and time scenarios");
    bench_cmd->add_option("--sizes", bench.sizes, "sweep of target fact counts")->delimiter(',');
    bench_cmd->add_option("--seed", bench.spec.seed, "generator seed");
    bench_cmd->add_option("--hosts", bench.spec.hosts, "host count");
    bench_cmd->add_option("--sas-min", bench.spec.sas_min, "min artifacts per host");
    bench_cmd->add_option("--sas-max", bench.spec.sas_max, "max artifacts per host");
    bench_cmd->add_option("--chains", bench.spec.build_chains, "build chain count");
    bench_cmd->add_option("--depth", bench.spec.chain_depth, "build chain depth");
    bench_cmd->add_option("--entries", bench.spec.attacker_entries, "attacker entry count");

    auto* gen_cmd = app.add_subcommand("gen", "write a generated scenario to a file");
    gen_cmd->add_option("--out", gen_out, "output path")->required();
    gen_cmd->add_option("--seed", gen_spec.seed, "generator seed");
    gen_cmd->add_option("--hosts", gen_spec.hosts, "host count");
    gen_cmd->add_option("--sas-min", gen_spec.sas_min, "min artifacts per host");
    gen_cmd->add_option("--sas-max", gen_spec.sas_max, "max artifacts per host");
    gen_cmd->add_option("--chains", gen_spec.build_chains, "build chain count");
    gen_cmd->add_option("--depth", gen_spec.chain_depth, "build chain depth");
    gen_cmd->add_option("--entries", gen_spec.attacker_entries, "attacker entry count");

    auto* rules_cmd = app.add_subcommand("rules", "embedded rule set utilities");
    auto* export_cmd = rules_cmd->add_subcommand("export", "print rule sets as input text");
    export_cmd->add_option("--set", rules_set, "core, ssc or both")
        ->check(CLI::IsMember({"core", "ssc", "both"}))
        ->capture_default_str();

    auto* scen_cmd = app.add_subcommand("scenarios", "packaged scenario utilities");
    scen_cmd->add_flag("--list", scen_list, "list scenario names");
    scen_cmd->add_option("--show", scen_show, "print a scenario file");
    scen_cmd->add_option("--export-dir", scen_export, "write all scenarios as .P files");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed())
            return cmd_check(common);
        if (solve_cmd->parsed())
            return cmd_solve(common, solve);
        if (graph_cmd->parsed())
            return cmd_graph(common, gopts);
        if (explain_cmd->parsed())
            return cmd_explain(common, explain_fact, explain_all);
        if (bench_cmd->parsed())
            return cmd_bench(bench);
        if (gen_cmd->parsed())
            return cmd_gen(gen_spec, gen_out);
        if (rules_cmd->parsed())
            return cmd_rules_export(rules_set);
        if (scen_cmd->parsed())
            return cmd_scenarios(scen_list, scen_show, scen_export);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}
