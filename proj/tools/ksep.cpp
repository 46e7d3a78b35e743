// ksep - command line front end: solve, verify, gen, bench.
//
// Exit codes: 0 success (verify: feasible), 1 verify found the solution
// infeasible, 2 parse error, 3 guard violation, 4 LP non-convergence,
// 5 internal verification failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ksep/cleanup.hpp"
#include "ksep/graph.hpp"
#include "ksep/reductions.hpp"
#include "ksep/solver.hpp"

using nlohmann::json;

namespace {

ksep::Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ksep::parse_error("cannot open graph file: " + path);
    return ksep::parse_graph(in);
}

std::vector<int> load_id_file(const std::string& path, int n, const char* what) {
    std::ifstream in(path);
    if (!in) throw ksep::parse_error(std::string("cannot open ") + what + " file: " + path);
    std::vector<int> ids;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok[0] == '#') continue;
        long long v;
        std::istringstream vs(line);
        std::string extra;
        if (!(vs >> v) || (vs >> extra) || v < 0 || v >= n)
            throw ksep::parse_error(std::string(what) + " file, line " +
                                    std::to_string(line_no) + ": expected one vertex id");
        ids.push_back(static_cast<int>(v));
    }
    return ids;
}

std::vector<ksep::Edge> load_edge_file(const std::string& path, const ksep::Graph& g) {
    std::ifstream in(path);
    if (!in) throw ksep::parse_error("cannot open solution file: " + path);
    std::vector<ksep::Edge> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok[0] == '#') continue;
        long long u, v;
        std::istringstream es(line);
        std::string extra;
        if (!(es >> u >> v) || (es >> extra) || u < 0 || v < 0 || u >= g.n || v >= g.n)
            throw ksep::parse_error("solution file, line " + std::to_string(line_no) +
                                    ": expected 'u v'");
        if (g.edge_id(static_cast<int>(u), static_cast<int>(v)) < 0)
            throw ksep::parse_error("solution file, line " + std::to_string(line_no) +
                                    ": not an edge of the graph");
        out.push_back({static_cast<int>(std::min(u, v)), static_cast<int>(std::max(u, v))});
    }
    return out;
}

ksep::Problem parse_problem(const std::string& s) {
    if (s == "vsep") return ksep::Problem::vsep;
    if (s == "esep") return ksep::Problem::esep;
    if (s == "ssep") return ksep::Problem::ssep;
    if (s == "ptrans") return ksep::Problem::ptrans;
    throw ksep::parse_error("unknown problem: " + s);
}

json report_to_json(const ksep::SolveReport& rep, bool with_times) {
    json removed = json::array();
    if (rep.problem == ksep::Problem::esep) {
        for (auto [u, v] : rep.solution.removed_edges) removed.push_back({u, v});
    } else {
        for (int v : rep.solution.removed_vertices) removed.push_back(v);
    }
    json j{
        {"schema", 1},
        {"problem", ksep::to_string(rep.problem)},
        {"k", rep.k},
        {"n", rep.n},
        {"m", rep.m},
        {"frac", rep.frac},
        {"costs",
         {{"heavy", rep.heavy_cost},
          {"rounding", rep.rounding_cost},
          {"cleanup", rep.cleanup_cost},
          {"total", rep.total_cost}}},
        {"certificate", rep.certificate},
        {"removed", removed},
        {"times_ms",
         {{"lp", with_times ? rep.lp_ms : 0.0},
          {"rounding", with_times ? rep.rounding_ms : 0.0},
          {"cleanup", with_times ? rep.cleanup_ms : 0.0}}},
        {"seed", rep.seed},
    };
    return j;
}

void print_report_text(const ksep::SolveReport& rep, std::ostream& out) {
    out << "problem    " << ksep::to_string(rep.problem) << "  k=" << rep.k << "  n=" << rep.n
        << "  m=" << rep.m << "  seed=" << rep.seed << '\n';
    out << "frac       " << rep.frac << '\n';
    out << "costs      heavy=" << rep.heavy_cost << " rounding=" << rep.rounding_cost
        << " cleanup=" << rep.cleanup_cost << " total=" << rep.total_cost << '\n';
    if (!rep.per_trial_cost.empty()) {
        out << "trials    ";
        for (long c : rep.per_trial_cost) out << ' ' << c;
        out << "  (chosen " << rep.chosen_trial << ")\n";
    }
    out << "certificate " << rep.certificate
        << (rep.certificate_exact ? "" : " (color-coding check)") << '\n';
    out << "times_ms   lp=" << rep.lp_ms << " rounding=" << rep.rounding_ms
        << " cleanup=" << rep.cleanup_ms << '\n';
    out << "removed   ";
    if (rep.problem == ksep::Problem::esep) {
        for (auto [u, v] : rep.solution.removed_edges) out << ' ' << u << '-' << v;
    } else {
        for (int v : rep.solution.removed_vertices) out << ' ' << v;
    }
    out << '\n';
}

int run_solve(const std::string& input, ksep::SolveOptions opts,
              const std::string& red_path, const std::string& format, bool no_times) {
    ksep::Graph g = load_graph(input);
    if (!red_path.empty()) opts.red = load_id_file(red_path, g.n, "red-vertex");
    if (opts.problem == ksep::Problem::ssep && red_path.empty())
        throw ksep::parse_error("ssep requires --red-file");
    ksep::SolveReport rep = ksep::solve_separator(g, opts);
    if (format == "json")
        std::cout << report_to_json(rep, !no_times).dump(2) << '\n';
    else
        print_report_text(rep, std::cout);
    return 0;
}

int run_verify(const std::string& input, const std::string& solution_path,
               const std::string& problem, int k, const std::string& red_path) {
    ksep::Graph g = load_graph(input);
    ksep::SeparatorSolution sol;
    sol.problem = parse_problem(problem);
    sol.k = k;
    if (sol.problem == ksep::Problem::esep) {
        sol.removed_edges = load_edge_file(solution_path, g);
        sol.cost = static_cast<long>(sol.removed_edges.size());
    } else {
        sol.removed_vertices = load_id_file(solution_path, g.n, "solution");
        sol.cost = static_cast<long>(sol.removed_vertices.size());
    }
    if (sol.problem == ksep::Problem::ssep) {
        if (red_path.empty()) throw ksep::parse_error("ssep requires --red-file");
        sol.red = load_id_file(red_path, g.n, "red-vertex");
    }
    ksep::VerifyReport rep = ksep::verify_solution(g, sol);
    if (rep.ok) {
        std::cout << "feasible (certificate " << rep.certificate << ")\n";
        return 0;
    }
    std::cout << "infeasible: " << rep.detail << '\n';
    return 1;
}

int run_bench(const std::string& problem, int k, int n, double p, int num_seeds,
              std::uint64_t seed_base, int trials, const std::string& format) {
    ksep::SolveOptions opts;
    opts.problem = parse_problem(problem);
    opts.k = k;
    opts.trials = trials;
    json rows = json::array();
    double sum_cost = 0.0, sum_frac = 0.0, sum_ratio = 0.0;
    int ratio_count = 0, failures = 0;
    std::cout << "problem=" << problem << " k=" << k << " gen=G(" << n << "," << p << ")\n";
    std::cout << "seed    n   m   frac        opt  cost  ratio   lp_ms   round_ms\n";
    for (int s = 0; s < num_seeds; ++s) {
        const std::uint64_t seed = seed_base + s;
        ksep::Graph g = ksep::gen_gnp(n, p, seed);
        opts.seed = seed;
        try {
            ksep::SolveReport rep = ksep::solve_separator(g, opts);
            std::optional<long> opt;
            try {
                if (opts.problem == ksep::Problem::vsep && g.n <= 14)
                    opt = static_cast<long>(ksep::brute_vsep(g, k).size());
                else if (opts.problem == ksep::Problem::esep && g.m() <= 18)
                    opt = static_cast<long>(ksep::brute_esep(g, k).size());
                else if (opts.problem == ksep::Problem::ptrans && g.n <= 12)
                    opt = static_cast<long>(ksep::brute_ptrans(g, k).size());
            } catch (const ksep::guard_error&) {
            }
            sum_cost += rep.total_cost;
            sum_frac += rep.frac;
            char line[160];
            if (opt) {
                const double ratio =
                    *opt > 0 ? static_cast<double>(rep.total_cost) / *opt : 1.0;
                sum_ratio += ratio;
                ++ratio_count;
                std::snprintf(line, sizeof line, "%-6llu %3d %3d %-11.6g %4ld %5ld %6.3f %8.1f %8.1f",
                              static_cast<unsigned long long>(seed), g.n, g.m(), rep.frac,
                              *opt, rep.total_cost, ratio, rep.lp_ms, rep.rounding_ms);
            } else {
                std::snprintf(line, sizeof line, "%-6llu %3d %3d %-11.6g    - %5ld      - %8.1f %8.1f",
                              static_cast<unsigned long long>(seed), g.n, g.m(), rep.frac,
                              rep.total_cost, rep.lp_ms, rep.rounding_ms);
            }
            std::cout << line << '\n';
            rows.push_back({{"seed", seed},
                            {"n", g.n},
                            {"m", g.m()},
                            {"frac", rep.frac},
                            {"cost", rep.total_cost}});
        } catch (const std::exception& e) {
            ++failures;
            std::cout << seed << "  FAILED: " << e.what() << '\n';
        }
    }
    if (num_seeds > 0) {
        std::cout << "mean frac " << sum_frac / num_seeds << ", mean cost "
                  << sum_cost / num_seeds;
        if (ratio_count > 0) std::cout << ", mean ratio " << sum_ratio / ratio_count;
        std::cout << ", failures " << failures << '\n';
    }
    if (format == "json") std::cout << rows.dump(2) << '\n';
    return 0;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ksep::parse_error("cannot open output file: " + path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spreading-metric graph partitioning solver"};
    app.require_subcommand(1);

    // solve
    std::string in_path, red_path, format = "json", problem = "vsep";
    int k = 1, trials = 10, max_rounds = 0;
    double epsilon = 0.0, delta = 1e-3;
    std::uint64_t seed = 0;
    bool no_times = false;
    auto* solve = app.add_subcommand("solve", "solve an instance end to end");
    solve->add_option("input", in_path, "edge-list graph file")->required();
    solve->add_option("--problem", problem, "vsep | esep | ssep | ptrans");
    solve->add_option("--k", k, "component bound / path length")->required();
    solve->add_option("--epsilon", epsilon, "rounding radius parameter (default per problem)");
    solve->add_option("--seed", seed, "random seed");
    solve->add_option("--trials", trials, "rounding trials (best kept)");
    solve->add_option("--red-file", red_path, "red vertex file (ssep)");
    solve->add_option("--format", format, "json | text");
    solve->add_option("--max-rounds", max_rounds, "LP separation round cap");
    solve->add_option("--delta", delta, "k-path oracle failure budget");
    solve->add_flag("--no-times", no_times, "zero the times_ms block (determinism runs)");

    // verify
    std::string v_in, v_sol, v_problem = "vsep", v_red;
    int v_k = 1;
    auto* verify = app.add_subcommand("verify", "check a solution file");
    verify->add_option("input", v_in, "edge-list graph file")->required();
    verify->add_option("solution", v_sol, "removed vertices (one id per line) or edges (u v)")
        ->required();
    verify->add_option("--problem", v_problem, "vsep | esep | ssep | ptrans");
    verify->add_option("--k", v_k, "bound")->required();
    verify->add_option("--red-file", v_red, "red vertex file (ssep)");

    // gen
    std::string g_kind = "random", g_out, g_roles, g_in;
    int g_n = 10, g_k = 1;
    double g_p = 0.1;
    std::uint64_t g_seed = 0;
    auto* gen = app.add_subcommand("gen", "generate instances");
    gen->add_option("kind", g_kind, "random | clique | cycle | path | star | reduce")
        ->required();
    gen->add_option("--n", g_n, "vertex count");
    gen->add_option("--p", g_p, "edge probability (random)");
    gen->add_option("--seed", g_seed, "seed (random)");
    gen->add_option("--input", g_in, "source graph (reduce)");
    gen->add_option("--k", g_k, "coverage parameter (reduce)");
    gen->add_option("-o,--output", g_out, "output file (default stdout)");
    gen->add_option("--role-map", g_roles, "side-car role map file (reduce)");

    // bench
    std::string b_problem = "vsep", b_format = "text";
    int b_k = 3, b_n = 20, b_seeds = 10, b_trials = 10;
    double b_p = 0.15;
    std::uint64_t b_seed_base = 0;
    auto* bench = app.add_subcommand("bench", "run a generated suite and tabulate");
    bench->add_option("--problem", b_problem, "vsep | esep | ssep | ptrans");
    bench->add_option("--k", b_k, "bound");
    bench->add_option("--n", b_n, "instance size");
    bench->add_option("--p", b_p, "edge probability");
    bench->add_option("--seeds", b_seeds, "number of seeds");
    bench->add_option("--seed-base", b_seed_base, "first seed");
    bench->add_option("--trials", b_trials, "rounding trials");
    bench->add_option("--format", b_format, "text | json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*solve) {
            ksep::SolveOptions opts;
            opts.problem = parse_problem(problem);
            opts.k = k;
            opts.epsilon = epsilon;
            opts.seed = seed;
            opts.trials = trials;
            opts.delta = delta;
            opts.max_rounds = max_rounds;
            return run_solve(in_path, opts, red_path, format, no_times);
        }
        if (*verify) return run_verify(v_in, v_sol, v_problem, v_k, v_red);
        if (*gen) {
            if (g_kind == "reduce") {
                if (g_in.empty()) throw ksep::parse_error("gen reduce requires --input");
                ksep::Graph src = load_graph(g_in);
                auto art = ksep::reduce_coverage_to_vsep(src, g_k);
                std::ostringstream roles;
                roles << "# role map: <target id> orig <u> | copy <edge index> <i>\n";
                roles << "# k' = " << art.k_target << " (M = " << art.M << ")\n";
                for (int v = 0; v < art.target.n; ++v) {
                    if (art.is_copy(v))
                        roles << v << " copy " << art.role[v].first << ' '
                              << art.role[v].second << '\n';
                    else
                        roles << v << " orig " << art.role[v].second << '\n';
                }
                const std::string listing = ksep::format_graph(art.target);
                if (g_out.empty())
                    std::cout << listing;
                else
                    write_text(g_out, listing);
                const std::string role_path =
                    !g_roles.empty() ? g_roles : (g_out.empty() ? "" : g_out + ".roles");
                if (!role_path.empty())
                    write_text(role_path, roles.str());
                else
                    std::cout << roles.str();
                return 0;
            }
            ksep::Graph g;
            if (g_kind == "random") g = ksep::gen_gnp(g_n, g_p, g_seed);
            else if (g_kind == "clique") g = ksep::gen_clique(g_n);
            else if (g_kind == "cycle") g = ksep::gen_cycle(g_n);
            else if (g_kind == "path") g = ksep::gen_path(g_n);
            else if (g_kind == "star") g = ksep::gen_star(g_n);
            else throw ksep::parse_error("unknown generator kind: " + g_kind);
            const std::string listing = ksep::format_graph(g);
            if (g_out.empty())
                std::cout << listing;
            else
                write_text(g_out, listing);
            return 0;
        }
        if (*bench)
            return run_bench(b_problem, b_k, b_n, b_p, b_seeds, b_seed_base, b_trials,
                             b_format);
    } catch (const ksep::parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ksep::guard_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const ksep::convergence_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const ksep::internal_error& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 5;
    }
    return 0;
}
