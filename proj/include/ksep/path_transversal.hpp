// path_transversal.hpp - the full k-path transversal pipeline: path LP via
// row generation with the k-path separation oracle, red-vertex extraction,
// a k^3-Subset Vertex Separator call at eps = 1/4, and per-component
// branch-and-bound to exact optimality.

#ifndef KSEP_PATH_TRANSVERSAL_HPP
#define KSEP_PATH_TRANSVERSAL_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ksep/cleanup.hpp"
#include "ksep/errors.hpp"
#include "ksep/graph.hpp"
#include "ksep/kpath.hpp"
#include "ksep/ldd.hpp"
#include "ksep/lp.hpp"
#include "ksep/rng.hpp"
#include "ksep/spreading.hpp"

namespace ksep {

struct PathLpOptions {
    double delta = 1e-3;   // per-oracle-call failure budget
    double sep_tol = 1e-6; // a path row counts as violated below 1 - sep_tol
    int max_rounds = 0;    // 0 = 50 n
};

struct PathLpResult {
    std::vector<double> x;
    double frac = 0.0;
    int rounds = 0;
    LinearProgram lp;  // with all generated path rows
};

// Solve the path LP by cutting planes. A round's cut is the minimum-weight
// k-path when its weight is below 1 - sep_tol. Before accepting convergence
// the oracle re-runs twice with fresh seed streams; a missed cut would
// silently lower the LP value.
inline PathLpResult solve_path_lp(const Graph& g, int k, std::uint64_t seed,
                                  const PathLpOptions& opts = {}) {
    LinearProgram lp = build_path_lp_initial(g, k);
    PathLpResult out;
    if (k > g.n) {
        out.x.assign(g.n, 0.0);
        out.lp = std::move(lp);
        return out;
    }
    std::uint64_t call_counter = 0;
    auto oracle = [&](const std::vector<double>& x) -> std::optional<LpRow> {
        for (int attempt = 0; attempt < 3; ++attempt) {
            auto params =
                ColorCodingParams::make(k, derive_seed(seed, call_counter++), opts.delta);
            KPathResult r = min_weight_kpath(g, x, k, params);
            if (r.found && r.weight < 1.0 - opts.sep_tol) {
                LpRow row;
                for (int v : r.path) row.coeffs.push_back({v, 1.0});
                std::sort(row.coeffs.begin(), row.coeffs.end());
                row.sense = RowSense::ge;
                row.rhs = 1.0;
                return row;
            }
        }
        return std::nullopt;
    };
    const int max_rounds = opts.max_rounds > 0 ? opts.max_rounds : 50 * std::max(g.n, 1);
    SeparationResult sep = lp_solve_with_separation(std::move(lp), oracle, opts.sep_tol,
                                                    max_rounds);
    if (sep.solution.status != LpStatus::optimal)
        throw internal_error("path LP terminated non-optimal");
    out.x = sep.solution.values;
    for (double& v : out.x) v = std::max(v, 0.0);
    out.frac = sep.solution.objective;
    out.rounds = sep.rounds;
    out.lp = std::move(sep.lp);
    return out;
}

// Red vertices: x_v >= 1/k, with 1e-9 slack so clique-symmetric optima that
// sit exactly at 1/k classify red.
inline std::vector<int> extract_red(const std::vector<double>& x, int k) {
    std::vector<int> red;
    const double threshold = 1.0 / k - 1e-9;
    double frac = 0.0;
    for (std::size_t v = 0; v < x.size(); ++v) {
        frac += x[v];
        if (x[v] >= threshold) red.push_back(static_cast<int>(v));
    }
    if (static_cast<double>(red.size()) > k * frac * (1.0 + 1e-6) + 1e-9)
        throw internal_error("extract_red: red count exceeds k * frac");
    return red;
}

// ---------------------------------------------------------------------------
// Per-component branch and bound

namespace ptrans_detail {

struct BranchState {
    const Graph& g;
    int k;
    int depth_limit;
    std::uint64_t seed;
    double delta;
    std::uint64_t call_counter = 0;
    std::vector<char> alive;
    std::vector<int> current;
    std::optional<std::vector<int>> best;

    // one-sided k-path probe with two confirmation re-runs on "not found"
    std::optional<KPathResult> probe() {
        for (int attempt = 0; attempt < 3; ++attempt) {
            auto params = ColorCodingParams::make(k, derive_seed(seed, call_counter++), delta);
            KPathResult r = find_kpath(g, k, params, alive);
            if (r.found) return r;
        }
        return std::nullopt;
    }

    void recurse(int depth) {
        if (best && current.size() >= best->size()) return;  // incumbent prune
        auto found = probe();
        if (!found) {
            best = current;
            return;
        }
        if (depth >= depth_limit) return;
        for (int v : found->path) {
            alive[v] = 0;
            current.push_back(v);
            recurse(depth + 1);
            current.pop_back();
            alive[v] = 1;
        }
    }
};

}  // namespace ptrans_detail

// Minimum transversal of one component, exhaustive over the branching tree
// of found k-paths with depth limit 2k^3. Exact up to the (astronomically
// unlikely, verified downstream) event of a k-path probe false negative.
inline std::optional<std::vector<int>> branch_component(const Graph& gc, int k,
                                                        int depth_limit,
                                                        std::uint64_t seed,
                                                        double delta = 1e-3) {
    if (k < 2) throw guard_error("branch_component: k < 2");
    ptrans_detail::BranchState st{gc, k, depth_limit, seed, delta, 0, {}, {}, {}};
    st.alive.assign(gc.n, 1);
    if (k > gc.n) return std::vector<int>{};
    st.recurse(0);
    return st.best;
}

// ---------------------------------------------------------------------------
// Full pipeline

struct PtransParams {
    std::uint64_t seed = 0;
    int trials = 10;
    double delta = 1e-3;
    int max_rounds = 0;
};

struct PtransReport {
    double frac = 0.0;
    int lp_rounds = 0;
    std::vector<int> red;
    long subset_cost = 0;       // heavy + scan removals of the k^3 call
    long heavy_cost = 0;
    std::vector<long> per_trial_cost;
    int chosen_trial = 0;
    long branch_cost = 0;
    SeparatorSolution solution;
};

inline PtransReport solve_ptrans(const Graph& g, int k, const PtransParams& params = {}) {
    if (k < 2) throw guard_error("solve_ptrans: k < 2");
    if (k > 5) throw guard_error("solve_ptrans: k > 5 (runtime grows as 2^{O(k^3 log k)})");
    PtransReport rep;
    rep.solution.problem = Problem::ptrans;
    rep.solution.k = k;
    if (k > g.n) {  // no k-path can exist
        rep.solution.certificate = g.n == 0 ? 0 : longest_path_exact(g).length;
        return rep;
    }

    PathLpOptions lp_opts;
    lp_opts.delta = params.delta;
    lp_opts.max_rounds = params.max_rounds;
    PathLpResult lp = solve_path_lp(g, k, derive_seed(params.seed, 0), lp_opts);
    rep.frac = lp.frac;
    rep.lp_rounds = lp.rounds;
    rep.red = extract_red(lp.x, k);

    const int k3 = k * k * k;
    SpreadingSolution sub = solve_spreading_lp(g, SepMode::subset, k3, rep.red);
    DecompositionParams dp;
    dp.epsilon = 0.25;
    dp.seed = derive_seed(params.seed, 1);
    dp.trials = params.trials;
    TrialsResult trials = best_of_trials(
        [&](std::uint64_t s) {
            DecompositionParams one = dp;
            one.seed = s;
            one.trials = 1;
            return ldd_subset(g, sub, one);
        },
        dp);
    rep.per_trial_cost = trials.per_trial_cost;
    rep.chosen_trial = trials.chosen_trial;
    rep.heavy_cost = static_cast<long>(trials.best.heavy_removed.size());
    rep.subset_cost = trials.best.cost;

    std::vector<int> removed = trials.best.heavy_removed;
    removed.insert(removed.end(), trials.best.removed_vertices.begin(),
                   trials.best.removed_vertices.end());

    // every residual component must hold at most 2k^3 red vertices
    auto lab = connected_components(g, vertex_mask(g, removed));
    count_reds(lab, rep.red);
    if (lab.max_red() > 2 * k3)
        throw internal_error("solve_ptrans: residual red count exceeds 2k^3");

    std::uint64_t comp_stream = 2;
    for (int c = 0; c < lab.num_components(); ++c) {
        if (lab.sizes[c] < k) continue;  // too small for any k-path
        std::vector<int> comp;
        for (int v = 0; v < g.n; ++v)
            if (lab.label[v] == c) comp.push_back(v);
        auto [gc, ids] = induced_subgraph(g, comp);
        auto part = branch_component(gc, k, 2 * k3, derive_seed(params.seed, comp_stream++),
                                     params.delta);
        if (!part)
            throw internal_error("solve_ptrans: branching found no solution within depth");
        rep.branch_cost += static_cast<long>(part->size());
        for (int local : *part) removed.push_back(ids[local]);
    }

    std::sort(removed.begin(), removed.end());
    rep.solution.removed_vertices = std::move(removed);
    rep.solution.cost = static_cast<long>(rep.solution.removed_vertices.size());
    VerifyReport vr = verify_solution(g, rep.solution);
    if (!vr.ok)
        throw internal_error("solve_ptrans: final verification failed: " + vr.detail);
    rep.solution.certificate = vr.certificate;
    rep.solution.certificate_exact = vr.certificate_exact;
    return rep;
}

}  // namespace ksep

#endif  // KSEP_PATH_TRANSVERSAL_HPP
