// cleanup.hpp - turning bicriteria decompositions into feasible solutions:
// exhaustive per-component vertex separators, exact balanced b-cuts for the
// edge version, and independent verification of final solutions.

#ifndef KSEP_CLEANUP_HPP
#define KSEP_CLEANUP_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ksep/errors.hpp"
#include "ksep/graph.hpp"
#include "ksep/kpath.hpp"
#include "ksep/ldd.hpp"

namespace ksep {

enum class Problem { vsep, esep, ssep, ptrans };

inline const char* to_string(Problem p) {
    switch (p) {
        case Problem::vsep: return "vsep";
        case Problem::esep: return "esep";
        case Problem::ssep: return "ssep";
        case Problem::ptrans: return "ptrans";
    }
    return "?";
}

struct SeparatorSolution {
    Problem problem = Problem::vsep;
    int k = 0;
    std::vector<int> removed_vertices;  // vsep / ssep / ptrans
    std::vector<Edge> removed_edges;    // esep
    std::vector<int> red;               // ssep
    long cost = 0;
    int certificate = 0;       // max component size / max red count / max path length
    bool certificate_exact = true;  // ptrans only: certificate measured exactly
};

namespace cleanup_detail {

// Enumerate subsets of {0..n-1} of a fixed size in lexicographic order.
template <typename F>
bool for_each_subset_of_size(int n, int size, F&& fn) {
    std::vector<int> pick(size);
    std::iota(pick.begin(), pick.end(), 0);
    if (size > n) return false;
    while (true) {
        if (fn(pick)) return true;
        int i = size - 1;
        while (i >= 0 && pick[i] == n - size + i) --i;
        if (i < 0) return false;
        ++pick[i];
        for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
}

}  // namespace cleanup_detail

// Minimum-cardinality vertex set whose removal leaves every component of gc
// with at most k vertices. Enumeration by increasing cardinality, so the
// first feasible set is optimal.
inline std::vector<int> exact_component_vsep(const Graph& gc, int k) {
    if (gc.n > 4 * k) throw guard_error("exact_component_vsep: component larger than 4k");
    if (gc.n > 30) throw guard_error("exact_component_vsep: component larger than 30");
    for (int size = 0; size <= gc.n; ++size) {
        std::vector<int> found;
        const bool hit = cleanup_detail::for_each_subset_of_size(
            gc.n, size, [&](const std::vector<int>& pick) {
                auto lab = connected_components(gc, vertex_mask(gc, pick));
                if (lab.max_size() <= k) {
                    found = pick;
                    return true;
                }
                return false;
            });
        if (hit) return found;
    }
    throw internal_error("exact_component_vsep: no feasible set (unreachable)");
}

// Red-count variant used by the subset pipeline's cleanup.
inline std::vector<int> exact_component_ssep(const Graph& gc, const std::vector<int>& red,
                                             int k) {
    if (gc.n > 26) throw guard_error("exact_component_ssep: component larger than 26");
    for (int size = 0; size <= gc.n; ++size) {
        std::vector<int> found;
        const bool hit = cleanup_detail::for_each_subset_of_size(
            gc.n, size, [&](const std::vector<int>& pick) {
                auto lab = connected_components(gc, vertex_mask(gc, pick));
                count_reds(lab, red);
                if (lab.max_red() <= k) {
                    found = pick;
                    return true;
                }
                return false;
            });
        if (hit) return found;
    }
    throw internal_error("exact_component_ssep: no feasible set (unreachable)");
}

// Exact minimum cut over all S with ceil(b n) <= |S| <= floor((1-b) n).
struct BalancedCut {
    std::vector<Edge> cut;
    int side_small = 0;
    int side_large = 0;
};

inline BalancedCut exact_balanced_bcut(const Graph& gc, double b) {
    if (b <= 0.0 || b > 0.5) throw guard_error("balanced bcut: b outside (0, 1/2]");
    if (gc.n > 24) throw guard_error("balanced bcut: enumeration cap n <= 24");
    const int n = gc.n;
    const int lo = static_cast<int>(std::ceil(b * n - 1e-9));
    const int hi = static_cast<int>(std::floor((1.0 - b) * n + 1e-9));
    if (lo > hi || hi < 1 || lo > n - 1)
        throw guard_error("balanced bcut: no feasible side size for n=" + std::to_string(n));
    BalancedCut best;
    long best_cost = -1;
    const std::uint32_t masks = 1u << n;
    for (std::uint32_t mask = 1; mask + 1 < masks; ++mask) {
        const int size = __builtin_popcount(mask);
        if (size < lo || size > hi) continue;
        long cost = 0;
        for (auto [u, v] : gc.edges)
            cost += ((mask >> u & 1) != (mask >> v & 1));
        if (best_cost < 0 || cost < best_cost) {
            best_cost = cost;
            best.cut.clear();
            for (auto [u, v] : gc.edges)
                if ((mask >> u & 1) != (mask >> v & 1)) best.cut.push_back({u, v});
            best.side_small = std::min(size, n - size);
            best.side_large = std::max(size, n - size);
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Pipeline cleanups

inline SeparatorSolution vsep_cleanup(const Graph& g, const DecompositionResult& partial,
                                      int k) {
    SeparatorSolution sol;
    sol.problem = Problem::vsep;
    sol.k = k;
    sol.removed_vertices = partial.heavy_removed;
    sol.removed_vertices.insert(sol.removed_vertices.end(),
                                partial.removed_vertices.begin(),
                                partial.removed_vertices.end());
    auto lab = connected_components(g, vertex_mask(g, sol.removed_vertices));
    for (int c = 0; c < lab.num_components(); ++c) {
        if (lab.sizes[c] <= k) continue;
        std::vector<int> comp;
        for (int v = 0; v < g.n; ++v)
            if (lab.label[v] == c) comp.push_back(v);
        auto [gc, ids] = induced_subgraph(g, comp);
        for (int local : exact_component_vsep(gc, k))
            sol.removed_vertices.push_back(ids[local]);
    }
    std::sort(sol.removed_vertices.begin(), sol.removed_vertices.end());
    sol.cost = static_cast<long>(sol.removed_vertices.size());
    sol.certificate = connected_components(g, vertex_mask(g, sol.removed_vertices)).max_size();
    if (sol.certificate > k) throw internal_error("vsep_cleanup: infeasible result");
    return sol;
}

inline SeparatorSolution ssep_cleanup(const Graph& g, const DecompositionResult& partial,
                                      const std::vector<int>& red, int k) {
    SeparatorSolution sol;
    sol.problem = Problem::ssep;
    sol.k = k;
    sol.red = red;
    std::sort(sol.red.begin(), sol.red.end());
    sol.removed_vertices = partial.heavy_removed;
    sol.removed_vertices.insert(sol.removed_vertices.end(),
                                partial.removed_vertices.begin(),
                                partial.removed_vertices.end());
    auto lab = connected_components(g, vertex_mask(g, sol.removed_vertices));
    count_reds(lab, sol.red);
    for (int c = 0; c < lab.num_components(); ++c) {
        if (lab.red_counts[c] <= k) continue;
        std::vector<int> comp;
        for (int v = 0; v < g.n; ++v)
            if (lab.label[v] == c) comp.push_back(v);
        auto [gc, ids] = induced_subgraph(g, comp);
        std::vector<int> red_local;
        for (std::size_t i = 0; i < ids.size(); ++i)
            if (std::binary_search(sol.red.begin(), sol.red.end(), ids[i]))
                red_local.push_back(static_cast<int>(i));
        if (gc.n <= 26) {
            for (int local : exact_component_ssep(gc, red_local, k))
                sol.removed_vertices.push_back(ids[local]);
        } else {
            // component too large for exhaustive search: removing all its red
            // vertices is always feasible
            for (int local : red_local) sol.removed_vertices.push_back(ids[local]);
        }
    }
    std::sort(sol.removed_vertices.begin(), sol.removed_vertices.end());
    sol.cost = static_cast<long>(sol.removed_vertices.size());
    auto final_lab = connected_components(g, vertex_mask(g, sol.removed_vertices));
    count_reds(final_lab, sol.red);
    sol.certificate = final_lab.max_red();
    if (sol.certificate > k) throw internal_error("ssep_cleanup: infeasible result");
    return sol;
}

inline SeparatorSolution esep_cleanup(const Graph& g, const DecompositionResult& partial,
                                      int k) {
    SeparatorSolution sol;
    sol.problem = Problem::esep;
    sol.k = k;
    sol.removed_edges = partial.removed_edges;

    // Balanced-cut splitting of each over-sized component. With
    // b = (k'-k)/k' the feasible side sizes are [ceil(b k'), k], so one cut
    // suffices; the recursion is a safety net with a depth-2 assertion.
    std::vector<std::pair<std::vector<int>, int>> work;  // (component vertices, depth)
    {
        auto lab = connected_components(g, {}, edge_mask(g, sol.removed_edges));
        for (int c = 0; c < lab.num_components(); ++c) {
            if (lab.sizes[c] <= k) continue;
            std::vector<int> comp;
            for (int v = 0; v < g.n; ++v)
                if (lab.label[v] == c) comp.push_back(v);
            work.push_back({std::move(comp), 0});
        }
    }
    while (!work.empty()) {
        auto [comp, depth] = std::move(work.back());
        work.pop_back();
        const int kp = static_cast<int>(comp.size());
        if (kp <= k) continue;
        if (depth > 2) throw internal_error("esep_cleanup: recursion deeper than 2");
        if (2 * kp > 3 * k) throw guard_error("esep_cleanup: component exceeds 3k/2");
        auto [gc, ids] = induced_subgraph(g, comp);
        const double b = static_cast<double>(kp - k) / kp;
        BalancedCut bc = exact_balanced_bcut(gc, b);
        for (auto [u, v] : bc.cut) sol.removed_edges.push_back({std::min(ids[u], ids[v]),
                                                                std::max(ids[u], ids[v])});
        // re-examine the two sides through a local labeling
        auto lab = connected_components(gc, {}, edge_mask(gc, bc.cut));
        for (int c = 0; c < lab.num_components(); ++c) {
            if (lab.sizes[c] <= k) continue;
            std::vector<int> side;
            for (int v = 0; v < gc.n; ++v)
                if (lab.label[v] == c) side.push_back(ids[v]);
            work.push_back({std::move(side), depth + 1});
        }
    }
    std::sort(sol.removed_edges.begin(), sol.removed_edges.end());
    sol.removed_edges.erase(std::unique(sol.removed_edges.begin(), sol.removed_edges.end()),
                            sol.removed_edges.end());
    sol.cost = static_cast<long>(sol.removed_edges.size());
    sol.certificate =
        connected_components(g, {}, edge_mask(g, sol.removed_edges)).max_size();
    if (sol.certificate > k) throw internal_error("esep_cleanup: infeasible result");
    return sol;
}

// ---------------------------------------------------------------------------
// Verification

struct VerifyReport {
    bool ok = false;
    int certificate = 0;
    bool certificate_exact = true;
    std::string detail;
};

inline VerifyReport verify_solution(const Graph& g, const SeparatorSolution& sol) {
    VerifyReport rep;
    std::ostringstream bad;
    if (sol.problem == Problem::esep) {
        auto lab = connected_components(g, {}, edge_mask(g, sol.removed_edges));
        rep.certificate = lab.max_size();
        rep.ok = rep.certificate <= sol.k;
        if (!rep.ok)
            for (int c = 0; c < lab.num_components(); ++c)
                if (lab.sizes[c] > sol.k)
                    bad << "component " << c << " has " << lab.sizes[c] << " vertices; ";
    } else if (sol.problem == Problem::vsep || sol.problem == Problem::ssep) {
        auto lab = connected_components(g, vertex_mask(g, sol.removed_vertices));
        if (sol.problem == Problem::ssep) {
            count_reds(lab, sol.red);
            rep.certificate = lab.max_red();
            if (rep.certificate > sol.k)
                for (int c = 0; c < lab.num_components(); ++c)
                    if (lab.red_counts[c] > sol.k)
                        bad << "component " << c << " has " << lab.red_counts[c]
                            << " red vertices; ";
        } else {
            rep.certificate = lab.max_size();
            if (rep.certificate > sol.k)
                for (int c = 0; c < lab.num_components(); ++c)
                    if (lab.sizes[c] > sol.k)
                        bad << "component " << c << " has " << lab.sizes[c] << " vertices; ";
        }
        rep.ok = rep.certificate <= sol.k;
    } else {  // ptrans: no simple path on k vertices may survive
        auto lab = connected_components(g, vertex_mask(g, sol.removed_vertices));
        rep.ok = true;
        rep.certificate = 0;
        for (int c = 0; c < lab.num_components(); ++c) {
            if (lab.sizes[c] < sol.k) {
                rep.certificate = std::max(rep.certificate, std::min(lab.sizes[c], sol.k - 1));
                continue;
            }
            std::vector<int> comp;
            for (int v = 0; v < g.n; ++v)
                if (lab.label[v] == c) comp.push_back(v);
            auto [gc, ids] = induced_subgraph(g, comp);
            (void)ids;
            if (gc.n <= 16) {
                const int len = longest_path_exact(gc).length;
                rep.certificate = std::max(rep.certificate, len);
                if (len >= sol.k) {
                    rep.ok = false;
                    bad << "component " << c << " has a path on " << len << " vertices; ";
                }
            } else {
                // three independent color-coding sweeps; one-sided check
                bool found = false;
                for (int rep_i = 0; rep_i < 3 && !found; ++rep_i) {
                    auto params = ColorCodingParams::make(
                        sol.k, derive_seed(0xC0FFEEull, rep_i), 1e-3);
                    found = find_kpath(gc, sol.k, params).found;
                }
                rep.certificate_exact = false;
                rep.certificate = std::max(rep.certificate, found ? sol.k : sol.k - 1);
                if (found) {
                    rep.ok = false;
                    bad << "component " << c << " contains a " << sol.k << "-path; ";
                }
            }
        }
    }
    rep.detail = bad.str();
    return rep;
}

}  // namespace ksep

#endif  // KSEP_CLEANUP_HPP
