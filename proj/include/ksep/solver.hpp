// solver.hpp - end-to-end pipelines for the three separator problems:
// spreading LP -> normalization -> best-of-trials low-diameter decomposition
// -> exact per-component cleanup -> verified solution. The path-transversal
// pipeline lives in path_transversal.hpp; this header re-exports it behind
// the same report type used by the CLI and the acceptance suite.

#ifndef KSEP_SOLVER_HPP
#define KSEP_SOLVER_HPP

#include <chrono>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "ksep/cleanup.hpp"
#include "ksep/errors.hpp"
#include "ksep/graph.hpp"
#include "ksep/ldd.hpp"
#include "ksep/path_transversal.hpp"
#include "ksep/spreading.hpp"

namespace ksep {

struct SolveOptions {
    Problem problem = Problem::vsep;
    int k = 1;
    double epsilon = 0.0;  // 0 = per-problem default (1/4 vertex/subset, 1/3 edge)
    std::uint64_t seed = 0;
    int trials = 10;
    double delta = 1e-3;   // ptrans oracle budget
    int max_rounds = 0;
    std::vector<int> red;  // ssep

    double effective_epsilon() const {
        if (epsilon > 0.0) return epsilon;
        return problem == Problem::esep ? 1.0 / 3.0 : 0.25;
    }
};

struct SolveReport {
    Problem problem = Problem::vsep;
    int k = 0;
    int n = 0, m = 0;
    double frac = 0.0;
    long heavy_cost = 0;
    long rounding_cost = 0;  // chosen trial's scan removals (without heavy)
    long cleanup_cost = 0;
    long total_cost = 0;
    std::vector<long> per_trial_cost;
    int chosen_trial = 0;
    SeparatorSolution solution;
    int certificate = 0;
    bool certificate_exact = true;
    double lp_ms = 0.0, rounding_ms = 0.0, cleanup_ms = 0.0;
    std::uint64_t seed = 0;
};

namespace solver_detail {

inline double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

}  // namespace solver_detail

inline SolveReport solve_separator(const Graph& g, const SolveOptions& opts) {
    SolveReport rep;
    rep.problem = opts.problem;
    rep.k = opts.k;
    rep.n = g.n;
    rep.m = g.m();
    rep.seed = opts.seed;
    if (opts.k < 1) throw guard_error("solve: k < 1");

    if (opts.problem == Problem::ptrans) {
        PtransParams pp;
        pp.seed = opts.seed;
        pp.trials = opts.trials;
        pp.delta = opts.delta;
        pp.max_rounds = opts.max_rounds;
        const auto t0 = std::chrono::steady_clock::now();
        PtransReport pr = solve_ptrans(g, opts.k, pp);
        rep.frac = pr.frac;
        rep.heavy_cost = pr.heavy_cost;
        rep.rounding_cost = pr.subset_cost - pr.heavy_cost;
        rep.cleanup_cost = pr.branch_cost;
        rep.per_trial_cost = pr.per_trial_cost;
        rep.chosen_trial = pr.chosen_trial;
        rep.solution = std::move(pr.solution);
        rep.total_cost = rep.solution.cost;
        rep.certificate = rep.solution.certificate;
        rep.certificate_exact = rep.solution.certificate_exact;
        rep.rounding_ms = solver_detail::ms_since(t0);
        return rep;
    }

    const SepMode mode = opts.problem == Problem::vsep   ? SepMode::vertex
                         : opts.problem == Problem::esep ? SepMode::edge
                                                         : SepMode::subset;
    DecompositionParams dp;
    dp.epsilon = opts.effective_epsilon();
    dp.seed = opts.seed;
    dp.trials = opts.trials;
    dp.validate(mode);

    // degenerate instances solved by the empty set, no LP
    const bool trivial = opts.k >= g.n;
    if (trivial) {
        rep.solution.problem = opts.problem;
        rep.solution.k = opts.k;
        rep.solution.red = opts.red;
        auto lab = connected_components(g);
        if (opts.problem == Problem::ssep) {
            count_reds(lab, opts.red);
            rep.certificate = lab.max_red();
        } else {
            rep.certificate = lab.max_size();
        }
        rep.solution.certificate = rep.certificate;
        return rep;
    }

    auto t0 = std::chrono::steady_clock::now();
    SpreadingSolveOptions so;
    if (opts.max_rounds > 0) so.max_rounds = opts.max_rounds;
    SpreadingSolution sol = solve_spreading_lp(g, mode, opts.k, opts.red, so);
    rep.frac = sol.frac;
    rep.lp_ms = solver_detail::ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    TrialsResult trials = best_of_trials(
        [&](std::uint64_t s) {
            DecompositionParams one = dp;
            one.seed = s;
            one.trials = 1;
            switch (mode) {
                case SepMode::vertex: return ldd_vertex(g, sol, one);
                case SepMode::edge: return ldd_edge(g, sol, one);
                case SepMode::subset: return ldd_subset(g, sol, one);
            }
            throw internal_error("unreachable");
        },
        dp);
    rep.per_trial_cost = trials.per_trial_cost;
    rep.chosen_trial = trials.chosen_trial;
    rep.heavy_cost = static_cast<long>(trials.best.heavy_removed.size());
    rep.rounding_cost = trials.best.cost - rep.heavy_cost;
    rep.rounding_ms = solver_detail::ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    switch (opts.problem) {
        case Problem::vsep: rep.solution = vsep_cleanup(g, trials.best, opts.k); break;
        case Problem::esep: rep.solution = esep_cleanup(g, trials.best, opts.k); break;
        case Problem::ssep: rep.solution = ssep_cleanup(g, trials.best, opts.red, opts.k); break;
        case Problem::ptrans: throw internal_error("unreachable");
    }
    rep.cleanup_cost = rep.solution.cost - trials.best.cost;
    rep.cleanup_ms = solver_detail::ms_since(t0);
    rep.total_cost = rep.solution.cost;
    rep.certificate = rep.solution.certificate;

    VerifyReport vr = verify_solution(g, rep.solution);
    if (!vr.ok) throw internal_error("pipeline verification failed: " + vr.detail);
    return rep;
}

}  // namespace ksep

#endif  // KSEP_SOLVER_HPP
