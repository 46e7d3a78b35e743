// spreading.hpp - spreading-metric relaxations for the three separator
// problems, the initial path-transversal LP, and solution normalization.
//
// Two solve routes produce the same optimum:
//
//   compact:  the polynomial-size LP with explicit x, d, f variables
//             (build_*_separator_lp), solved directly. Variable layout:
//             x block first (n vertex vars or m edge vars), then d for all
//             unordered pairs incl. diagonal, then f likewise.
//
//   cuts:     a master LP over the x block only. For any lengths x the best
//             choice of the d and f variables is d = shortest-path metric,
//             f = max(1 - d, 0), so the relaxation projects onto
//                 { x >= 0 : sum_u max(1 - dist_x(v,u), 0) <= k  for all v }
//             whose violated constraints linearize along shortest-path trees.
//             This is the row-generation form solved here; it is the route
//             the pipelines use, and tests cross-check it against the
//             compact route.
//
// Normalization recomputes d from x alone and re-verifies the radius
// constraints; a violation beyond tolerance signals a solver bug upstream.

#ifndef KSEP_SPREADING_HPP
#define KSEP_SPREADING_HPP

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <string>
#include <vector>

#include "ksep/errors.hpp"
#include "ksep/graph.hpp"
#include "ksep/lp.hpp"

namespace ksep {

enum class SepMode { vertex, edge, subset };

inline const char* to_string(SepMode m) {
    switch (m) {
        case SepMode::vertex: return "vertex";
        case SepMode::edge: return "edge";
        case SepMode::subset: return "subset";
    }
    return "?";
}

constexpr double kRadiusTol = 1e-6;  // 10x solver feasibility tolerance

struct SpreadingSolution {
    SepMode mode = SepMode::vertex;
    int k = 0;
    std::vector<double> x;     // lengths: per vertex (vertex/subset) or per edge
    DistMatrix d;              // shortest-path matrix under x
    std::vector<double> f;     // n*n proximity, f = max(1 - d, 0)
    double frac = 0.0;         // sum of x
    std::vector<int> red;      // subset mode only, sorted

    double f_at(int u, int v) const { return f[static_cast<std::size_t>(u) * d.n + v]; }
};

namespace spreading_detail {

inline int pair_index(int n, int u, int v) {
    if (u > v) std::swap(u, v);
    return u * n - u * (u + 1) / 2 + v;
}

inline int num_pairs(int n) { return n * (n + 1) / 2; }

}  // namespace spreading_detail

// ---------------------------------------------------------------------------
// Compact LP builders

namespace spreading_detail {

// Shared skeleton: d-metric rows + f rows + radius rows. vertex_lengths
// selects whether x lives on vertices (diagonal d(u,u) = x_u, triangle
// relaxation pays x_w) or on edges (d(u,u) = 0, relaxation pays x_vw).
// radius_scope lists the vertices each radius row sums f over.
inline LinearProgram build_metric_lp(const Graph& g, int k, bool vertex_lengths,
                                     const std::vector<int>& radius_scope) {
    const int n = g.n;
    const int nx = vertex_lengths ? n : g.m();
    const int P = num_pairs(n);
    LinearProgram lp;
    lp.num_vars = nx + 2 * P;
    auto dvar = [&](int u, int v) { return nx + pair_index(n, u, v); };
    auto fvar = [&](int u, int v) { return nx + P + pair_index(n, u, v); };
    for (int j = 0; j < nx; ++j) lp.objective.push_back({j, 1.0});
    // d(u,u) = x_u (vertex lengths) or 0 (edge lengths)
    for (int u = 0; u < n; ++u) {
        if (vertex_lengths)
            lp.add_row({{dvar(u, u), 1.0}, {u, -1.0}}, RowSense::eq, 0.0);
        else
            lp.add_row({{dvar(u, u), 1.0}}, RowSense::eq, 0.0);
    }
    // d(u,w) <= d(u,v) + length(v,w) for every u and directed edge (v,w)
    for (int u = 0; u < n; ++u) {
        for (int ei = 0; ei < g.m(); ++ei) {
            auto [a, b] = g.edges[ei];
            for (int dir = 0; dir < 2; ++dir) {
                const int v = dir ? b : a;
                const int w = dir ? a : b;
                std::vector<std::pair<int, double>> coeffs;
                coeffs.push_back({dvar(u, w), 1.0});
                coeffs.push_back({dvar(u, v), -1.0});
                coeffs.push_back({vertex_lengths ? w : ei, -1.0});
                lp.add_row(std::move(coeffs), RowSense::le, 0.0);
            }
        }
    }
    // f >= 1 - d
    for (int u = 0; u < n; ++u)
        for (int v = u; v < n; ++v)
            lp.add_row({{fvar(u, v), 1.0}, {dvar(u, v), 1.0}}, RowSense::ge, 1.0);
    // radius: sum of f over the scope, for every center v
    for (int v = 0; v < n; ++v) {
        std::vector<std::pair<int, double>> coeffs;
        for (int u : radius_scope) coeffs.push_back({fvar(v, u), 1.0});
        lp.add_row(std::move(coeffs), RowSense::le, static_cast<double>(k));
    }
    return lp;
}

}  // namespace spreading_detail

inline LinearProgram build_vertex_separator_lp(const Graph& g, int k) {
    if (k < 1) throw guard_error("vertex separator LP: k < 1");
    std::vector<int> all(g.n);
    std::iota(all.begin(), all.end(), 0);
    return spreading_detail::build_metric_lp(g, k, true, all);
}

inline LinearProgram build_edge_separator_lp(const Graph& g, int k) {
    if (k < 1) throw guard_error("edge separator LP: k < 1");
    std::vector<int> all(g.n);
    std::iota(all.begin(), all.end(), 0);
    return spreading_detail::build_metric_lp(g, k, false, all);
}

inline LinearProgram build_subset_separator_lp(const Graph& g, const std::vector<int>& red,
                                               int k) {
    if (k < 1) throw guard_error("subset separator LP: k < 1");
    for (int v : red)
        if (v < 0 || v >= g.n) throw guard_error("subset separator LP: red vertex out of range");
    std::vector<int> scope = red;
    std::sort(scope.begin(), scope.end());
    scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
    return spreading_detail::build_metric_lp(g, k, true, scope);
}

// Path-transversal LP before any separation: n variables, objective sum x,
// path rows arrive lazily from the k-path oracle.
inline LinearProgram build_path_lp_initial(const Graph& g, int k) {
    if (k < 2) throw guard_error("path LP: k < 2");
    LinearProgram lp;
    lp.num_vars = g.n;
    for (int j = 0; j < g.n; ++j) lp.objective.push_back({j, 1.0});
    return lp;
}

// ---------------------------------------------------------------------------
// Normalization

// Rebuild the canonical (x, d, f) form from lengths alone and re-verify the
// radius constraints. Any violation beyond kRadiusTol is an internal error:
// recomputing d as the true shortest-path metric can only shrink f.
inline SpreadingSolution normalize_from_lengths(const Graph& g, SepMode mode, int k,
                                                std::vector<double> x,
                                                std::vector<int> red = {}) {
    SpreadingSolution sol;
    sol.mode = mode;
    sol.k = k;
    std::sort(red.begin(), red.end());
    red.erase(std::unique(red.begin(), red.end()), red.end());
    sol.red = std::move(red);
    sol.x = std::move(x);
    sol.d = (mode == SepMode::edge) ? edge_weighted_apsp(g, sol.x)
                                    : vertex_weighted_apsp(g, sol.x);
    const int n = g.n;
    sol.f.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            const double d = sol.d.at(u, v);
            sol.f[static_cast<std::size_t>(u) * n + v] = std::isinf(d) ? 0.0 : std::max(1.0 - d, 0.0);
        }
    sol.frac = std::accumulate(sol.x.begin(), sol.x.end(), 0.0);
    const std::vector<int>* scope = nullptr;
    std::vector<int> all;
    if (mode == SepMode::subset) {
        scope = &sol.red;
    } else {
        all.resize(n);
        std::iota(all.begin(), all.end(), 0);
        scope = &all;
    }
    for (int v = 0; v < n; ++v) {
        double s = 0.0;
        for (int u : *scope) s += sol.f_at(v, u);
        if (s > k + kRadiusTol)
            throw internal_error("normalize: radius constraint violated at vertex " +
                                 std::to_string(v) + " (" + std::to_string(s) + " > " +
                                 std::to_string(k) + ")");
    }
    return sol;
}

// Spec form: extract the x block from a raw LP solution of the matching
// compact LP (x variables come first in the builders' layout).
inline SpreadingSolution normalize_solution(const Graph& g, const LpSolution& raw,
                                            SepMode mode, int k,
                                            std::vector<int> red = {}) {
    if (raw.status != LpStatus::optimal)
        throw internal_error("normalize_solution: raw solution not optimal");
    const int nx = (mode == SepMode::edge) ? g.m() : g.n;
    std::vector<double> x(raw.values.begin(), raw.values.begin() + nx);
    for (double& xv : x) xv = std::max(xv, 0.0);  // clamp solver noise
    return normalize_from_lengths(g, mode, k, std::move(x), std::move(red));
}

// ---------------------------------------------------------------------------
// Row-generation solve route

struct SpreadingSolveOptions {
    double sep_tol = 1e-7;
    int max_rounds = 0;       // 0 = 50 n + 500
    bool compact = false;     // solve the full compact LP instead
};

struct SpreadingStats {
    int rounds = 0;
    int cuts_added = 0;
};

namespace spreading_detail {

// Linearized radius cut for center v: over U = {u in scope : dist(v,u) < 1},
//   sum_{u in U} (1 - sum_{elements on path v->u} x) <= k
// rewritten as  sum(path element multiplicities) * x >= |U| - k.
inline LpRow radius_cut(const Graph& g, const DistMatrix& dm, int v,
                        const std::vector<int>& scope, int k, bool vertex_lengths) {
    const int nx = vertex_lengths ? g.n : g.m();
    std::vector<double> coef(nx, 0.0);
    int in_ball = 0;
    for (int u : scope) {
        const double duv = dm.at(v, u);
        if (std::isinf(duv) || duv >= 1.0) continue;
        ++in_ball;
        int w = u;
        if (vertex_lengths) coef[w] += 1.0;
        while (w != v) {
            const int p = dm.parent_of(v, w);
            if (p < 0) throw internal_error("radius_cut: broken shortest-path tree");
            if (vertex_lengths)
                coef[p] += 1.0;
            else
                coef[g.edge_id(p, w)] += 1.0;
            w = p;
        }
    }
    // scale to rhs 1: improves the conditioning of the cut master
    LpRow row;
    const double rhs = in_ball - k;
    const double scale = rhs > 0.0 ? 1.0 / rhs : 1.0;
    for (int j = 0; j < nx; ++j)
        if (coef[j] != 0.0) row.coeffs.push_back({j, coef[j] * scale});
    row.sense = RowSense::ge;
    row.rhs = rhs * scale;
    return row;
}

}  // namespace spreading_detail

inline SpreadingSolution solve_spreading_lp(const Graph& g, SepMode mode, int k,
                                            std::vector<int> red = {},
                                            const SpreadingSolveOptions& opts = {},
                                            SpreadingStats* stats = nullptr) {
    if (k < 1) throw guard_error("spreading LP: k < 1");
    std::sort(red.begin(), red.end());
    red.erase(std::unique(red.begin(), red.end()), red.end());

    if (opts.compact) {
        LinearProgram lp;
        switch (mode) {
            case SepMode::vertex: lp = build_vertex_separator_lp(g, k); break;
            case SepMode::edge: lp = build_edge_separator_lp(g, k); break;
            case SepMode::subset: lp = build_subset_separator_lp(g, red, k); break;
        }
        LpSolution raw = lp_solve(lp);
        if (raw.status != LpStatus::optimal)
            throw internal_error("compact spreading LP not optimal");
        return normalize_solution(g, raw, mode, k, std::move(red));
    }

    const bool vertex_lengths = (mode != SepMode::edge);
    const int nx = vertex_lengths ? g.n : g.m();
    std::vector<int> scope;
    if (mode == SepMode::subset) {
        scope = red;
    } else {
        scope.resize(g.n);
        std::iota(scope.begin(), scope.end(), 0);
    }

    // The master min{ 1'x : A x >= b, x >= 0 } is a covering LP (A >= 0, b > 0),
    // so each round solves its dual max{ b'y : A'y <= 1, y >= 0 } instead: the
    // all-slack basis is feasible (no artificials) and the basis size stays nx
    // however many cuts accumulate. The primal lengths are the row duals.
    //
    // Pure Kelley iterations tail off badly on the edge metric, so the loop
    // uses in-out separation: x_in stays feasible (all-ones to start), x_out
    // is the master optimum (a lower bound), and cuts are generated both at
    // the midpoint and at x_out. The returned lengths are the feasible
    // in-point once its objective is within gap tolerance of the bound.
    std::vector<LpRow> cuts;
    std::vector<int> cut_idle;       // rounds since the cut's dual was nonzero
    std::vector<std::uint64_t> cut_hash;
    std::vector<long long> cut_id;   // stable ids, for warm-start basis tokens
    long long next_cut_id = 0;
    const int max_rounds = opts.max_rounds > 0 ? opts.max_rounds : 50 * std::max(g.n, 1) + 500;
    const std::size_t pool_cap = static_cast<std::size_t>(std::max(8 * nx, 400));

    std::vector<double> x_in(nx, 1.0);
    std::vector<double> x_out(nx, 0.0);

    // violation scan; returns violated centers and fills the radius sums
    auto scan = [&](const std::vector<double>& x, DistMatrix& dm) {
        dm = vertex_lengths ? vertex_weighted_apsp(g, x) : edge_weighted_apsp(g, x);
        std::vector<int> violated;
        for (int v = 0; v < g.n; ++v) {
            double s = 0.0;
            for (int u : scope) {
                const double d = dm.at(v, u);
                if (!std::isinf(d)) s += std::max(1.0 - d, 0.0);
            }
            if (s - k > opts.sep_tol) violated.push_back(v);
        }
        return violated;
    };
    auto bits = [](double v) {
        std::uint64_t b;
        std::memcpy(&b, &v, sizeof b);
        return b;
    };
    auto add_cuts = [&](const std::vector<int>& violated, const DistMatrix& dm) {
        for (int v : violated) {
            LpRow cut = spreading_detail::radius_cut(g, dm, v, scope, k, vertex_lengths);
            std::uint64_t h = mix64(bits(cut.rhs) + 0x51ed);
            for (auto [j, a] : cut.coeffs)
                h = mix64(h ^ (static_cast<std::uint64_t>(j) << 20) ^ bits(a));
            bool dup = false;
            for (std::uint64_t prev : cut_hash) dup = dup || (prev == h);
            if (dup) continue;
            cuts.push_back(std::move(cut));
            cut_idle.push_back(0);
            cut_hash.push_back(h);
            cut_id.push_back(next_cut_id++);
            if (stats) ++stats->cuts_added;
        }
    };

    {  // the all-ones point can be infeasible only through solver-tolerance dust
        DistMatrix dm;
        if (!scan(x_in, dm).empty())
            throw internal_error("spreading LP: unit lengths scanned as infeasible");
    }

    // warm-start tokens: cut id, or -(row + 1) for the slack of master row `row`
    std::vector<long long> basis_tokens;
    std::vector<char> token_is_basic_cut;

    double lower_bound = 0.0;
    int round = 0;
    while (true) {
        token_is_basic_cut.assign(cuts.size(), 0);
        if (!cuts.empty()) {
            LinearProgram dual;
            dual.num_vars = static_cast<int>(cuts.size());
            std::vector<std::vector<std::pair<int, double>>> col(nx);
            for (std::size_t i = 0; i < cuts.size(); ++i) {
                // nonnegative cost perturbation breaks the heavy degeneracy of
                // the covering dual; the recovered primal point stays feasible
                // and the unperturbed objective below remains a valid bound
                const double jitter =
                    1e-6 * (static_cast<double>(mix64(cut_id[i] + 1) >> 11) * 0x1.0p-53);
                dual.objective.push_back({static_cast<int>(i), -cuts[i].rhs - jitter});
                for (auto [j, a] : cuts[i].coeffs) col[j].push_back({static_cast<int>(i), a});
            }
            for (int j = 0; j < nx; ++j) dual.add_row(std::move(col[j]), RowSense::le, 1.0);

            std::vector<int> all_rows(nx);
            std::iota(all_rows.begin(), all_rows.end(), 0);
            lpdetail::Simplex simplex(dual, all_rows);
            long iters = 0;
            LpStatus status;
            if (basis_tokens.empty()) {
                status = simplex.solve(iters);
            } else {
                std::vector<int> warm(nx, -1);
                bool ok = true;
                for (int j = 0; j < nx && ok; ++j) {
                    const long long tok = basis_tokens[j];
                    if (tok < 0) {
                        warm[j] = static_cast<int>(cuts.size()) + static_cast<int>(-tok - 1);
                    } else {
                        const auto it = std::find(cut_id.begin(), cut_id.end(), tok);
                        ok = it != cut_id.end();
                        if (ok) warm[j] = static_cast<int>(it - cut_id.begin());
                    }
                }
                status = ok ? simplex.solve_from_basis(warm, iters) : simplex.solve(iters);
            }
            if (status != LpStatus::optimal)
                throw internal_error("spreading master (dual form) not optimal");
            const std::vector<double> y = simplex.values();
            const std::vector<double> duals = simplex.duals();
            for (int j = 0; j < nx; ++j) x_out[j] = std::max(0.0, -duals[j]);
            double unperturbed = 0.0;
            for (std::size_t i = 0; i < cuts.size(); ++i) unperturbed += cuts[i].rhs * y[i];
            lower_bound = std::max(lower_bound, unperturbed);
            basis_tokens.assign(nx, 0);
            for (int j = 0; j < nx; ++j) {
                const int b = simplex.basis()[j];
                if (b < static_cast<int>(cuts.size())) {
                    basis_tokens[j] = cut_id[b];
                    token_is_basic_cut[b] = 1;
                } else {
                    basis_tokens[j] = -(static_cast<long long>(b - cuts.size()) + 1);
                }
            }
            for (std::size_t i = 0; i < cuts.size(); ++i)
                cut_idle[i] = (y[i] > 1e-9 || token_is_basic_cut[i]) ? 0 : cut_idle[i] + 1;
        }
        const double in_obj = std::accumulate(x_in.begin(), x_in.end(), 0.0);
        if (in_obj - lower_bound <= 1e-7 * (1.0 + in_obj)) break;

        DistMatrix dm;
        std::vector<int> violated = scan(x_out, dm);
        if (violated.empty()) {
            x_in = x_out;  // bound point itself is feasible: done
            break;
        }
        if (round >= max_rounds)
            throw convergence_error("spreading LP row generation: max rounds (" +
                                        std::to_string(max_rounds) + ") exhausted",
                                    x_out);
        add_cuts(violated, dm);

        std::vector<double> mid(nx);
        for (int j = 0; j < nx; ++j) mid[j] = 0.5 * (x_in[j] + x_out[j]);
        std::vector<int> mid_violated = scan(mid, dm);
        if (mid_violated.empty())
            x_in = std::move(mid);
        else
            add_cuts(mid_violated, dm);

        // retire long-idle nonbasic cuts once the pool is oversized; the
        // master over a subset of valid cuts still yields a valid lower bound
        if (cuts.size() > pool_cap) {
            std::vector<LpRow> kept;
            std::vector<int> kept_idle;
            std::vector<std::uint64_t> kept_hash;
            std::vector<long long> kept_id;
            for (std::size_t i = 0; i < cuts.size(); ++i) {
                const bool basic = i < token_is_basic_cut.size() && token_is_basic_cut[i];
                if (basic || cut_idle[i] < 6 || cuts.size() - i <= pool_cap / 2) {
                    kept.push_back(std::move(cuts[i]));
                    kept_idle.push_back(cut_idle[i]);
                    kept_hash.push_back(cut_hash[i]);
                    kept_id.push_back(cut_id[i]);
                }
            }
            cuts = std::move(kept);
            cut_idle = std::move(kept_idle);
            cut_hash = std::move(kept_hash);
            cut_id = std::move(kept_id);
        }
        ++round;
    }
    if (stats) stats->rounds = round;
    return normalize_from_lengths(g, mode, k, std::move(x_in), std::move(red));
}

// Radius sums of a normalized solution (per center), for tests and checks.
inline std::vector<double> radius_sums(const SpreadingSolution& sol) {
    const int n = sol.d.n;
    std::vector<double> out(n, 0.0);
    for (int v = 0; v < n; ++v) {
        if (sol.mode == SepMode::subset) {
            for (int u : sol.red) out[v] += sol.f_at(v, u);
        } else {
            for (int u = 0; u < n; ++u) out[v] += sol.f_at(v, u);
        }
    }
    return out;
}

}  // namespace ksep

#endif  // KSEP_SPREADING_HPP
