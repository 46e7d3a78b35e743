// reductions.hpp - the Minimum k-Edge Coverage -> k-Vertex Separator
// reduction (adversarial instance generator), its solution normalization,
// and brute-force exact solvers used as oracles throughout the test suites.

#ifndef KSEP_REDUCTIONS_HPP
#define KSEP_REDUCTIONS_HPP

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ksep/errors.hpp"
#include "ksep/graph.hpp"

namespace ksep {

// Reduced instance: original vertices keep ids 0..n-1 and induce a clique;
// edge e gets M = n+1 copies e_0..e_{M-1}, each adjacent to e's endpoints.
struct ReductionArtifact {
    Graph source;
    Graph target;
    int M = 0;
    int k_source = 0;
    int k_target = 0;
    // role per target vertex: (-1, u) = original vertex u, (e, i) = copy i of edge e
    std::vector<std::pair<int, int>> role;

    bool is_copy(int v) const { return role[v].first >= 0; }
};

inline ReductionArtifact reduce_coverage_to_vsep(const Graph& g, int k) {
    if (k > g.m()) throw guard_error("reduction: k exceeds edge count");
    ReductionArtifact art;
    art.source = g;
    art.k_source = k;
    art.M = g.n + 1;
    const int n_target = g.n + art.M * g.m();
    std::vector<Edge> edges;
    for (int u = 0; u < g.n; ++u)
        for (int v = u + 1; v < g.n; ++v) edges.push_back({u, v});
    art.role.assign(n_target, {-1, -1});
    for (int u = 0; u < g.n; ++u) art.role[u] = {-1, u};
    int next = g.n;
    for (int e = 0; e < g.m(); ++e) {
        auto [u, v] = g.edges[e];
        for (int i = 0; i < art.M; ++i) {
            art.role[next] = {e, i};
            edges.push_back({u, next});
            edges.push_back({v, next});
            ++next;
        }
    }
    art.target = make_graph(n_target, std::move(edges));
    art.k_target = n_target - art.M * k;
    return art;
}

// Feasibility of a vertex set for k-Vertex Separator on a given graph.
inline bool vsep_feasible(const Graph& g, const std::vector<int>& removed, int k) {
    return connected_components(g, vertex_mask(g, removed)).max_size() <= k;
}

// Push a feasible separator of the reduced instance into the original vertex
// part without increasing its size: drop a copy whose endpoints are both
// removed, otherwise swap it for a missing endpoint.
inline std::vector<int> normalize_vsep_solution(const ReductionArtifact& art,
                                                std::vector<int> s) {
    if (!vsep_feasible(art.target, s, art.k_target))
        throw guard_error("normalize_vsep_solution: input set infeasible");
    std::vector<char> in_s(art.target.n, 0);
    for (int v : s) in_s[v] = 1;
    while (true) {
        int copy = -1;
        for (int v = 0; v < art.target.n; ++v)
            if (in_s[v] && art.is_copy(v)) {
                copy = v;
                break;
            }
        if (copy < 0) break;
        auto [u, v] = art.source.edges[art.role[copy].first];
        in_s[copy] = 0;
        if (in_s[u] && in_s[v]) {
            // both endpoints removed: dropping the copy strictly improves
        } else if (!in_s[u]) {
            in_s[u] = 1;
        } else {
            in_s[v] = 1;
        }
    }
    std::vector<int> out;
    for (int v = 0; v < art.target.n; ++v)
        if (in_s[v]) out.push_back(v);
    if (out.size() > s.size())
        throw internal_error("normalize_vsep_solution: size increased");
    if (!vsep_feasible(art.target, out, art.k_target))
        throw internal_error("normalize_vsep_solution: feasibility lost");
    return out;
}

// ---------------------------------------------------------------------------
// Brute-force oracles (increasing-cardinality enumeration, early exit)

namespace brute_detail {

template <typename Feasible>
std::vector<int> min_subset(int universe, Feasible&& feasible, int max_size = -1) {
    if (max_size < 0) max_size = universe;
    std::vector<int> pick;
    for (int size = 0; size <= max_size; ++size) {
        pick.assign(size, 0);
        std::iota(pick.begin(), pick.end(), 0);
        if (size > universe) break;
        while (true) {
            if (feasible(pick)) return pick;
            int i = size - 1;
            while (i >= 0 && pick[i] == universe - size + i) --i;
            if (i < 0) break;
            ++pick[i];
            for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    throw internal_error("min_subset: no feasible subset");
}

}  // namespace brute_detail

inline std::vector<int> brute_vsep(const Graph& g, int k) {
    if (g.n > 14) throw guard_error("brute_vsep: n > 14");
    return brute_detail::min_subset(g.n, [&](const std::vector<int>& pick) {
        return vsep_feasible(g, pick, k);
    });
}

// Separate entry point for reduction targets: the clique part forces tiny
// optima and lexicographic enumeration visits original-vertex subsets first,
// so the search stays shallow even at ~60 vertices.
inline std::vector<int> brute_vsep_reduction(const Graph& g, int k) {
    if (g.n > 60) throw guard_error("brute_vsep_reduction: n > 60");
    return brute_detail::min_subset(g.n, [&](const std::vector<int>& pick) {
        return vsep_feasible(g, pick, k);
    });
}

inline std::vector<Edge> brute_esep(const Graph& g, int k) {
    if (g.m() > 18) throw guard_error("brute_esep: m > 18");
    auto pick_ids = brute_detail::min_subset(g.m(), [&](const std::vector<int>& pick) {
        std::vector<char> emask(g.edges.size(), 0);
        for (int id : pick) emask[id] = 1;
        return connected_components(g, {}, emask).max_size() <= k;
    });
    std::vector<Edge> out;
    for (int id : pick_ids) out.push_back(g.edges[id]);
    return out;
}

inline std::vector<int> brute_ssep(const Graph& g, const std::vector<int>& red, int k) {
    if (g.n > 14) throw guard_error("brute_ssep: n > 14");
    return brute_detail::min_subset(g.n, [&](const std::vector<int>& pick) {
        auto lab = connected_components(g, vertex_mask(g, pick));
        count_reds(lab, red);
        return lab.max_red() <= k;
    });
}

inline std::vector<int> brute_ptrans(const Graph& g, int k) {
    if (g.n > 12) throw guard_error("brute_ptrans: n > 12");
    return brute_detail::min_subset(g.n, [&](const std::vector<int>& pick) {
        std::vector<int> keep;
        std::vector<char> gone = vertex_mask(g, pick);
        for (int v = 0; v < g.n; ++v)
            if (!gone[v]) keep.push_back(v);
        auto [gc, ids] = induced_subgraph(g, keep);
        (void)ids;
        return longest_path_exact(gc).length < k;
    });
}

// Minimum vertex set whose induced subgraph has at least k edges; nullopt
// when no set of vertices can cover k edges (k > m).
inline std::optional<std::vector<int>> brute_min_edge_coverage(const Graph& g, int k) {
    if (g.n > 12) throw guard_error("brute_min_edge_coverage: n > 12");
    if (k > g.m()) return std::nullopt;
    if (k <= 0) return std::vector<int>{};
    return brute_detail::min_subset(g.n, [&](const std::vector<int>& pick) {
        std::vector<char> in(g.n, 0);
        for (int v : pick) in[v] = 1;
        int covered = 0;
        for (auto [u, v] : g.edges) covered += (in[u] && in[v]);
        return covered >= k;
    });
}

}  // namespace ksep

#endif  // KSEP_REDUCTIONS_HPP
