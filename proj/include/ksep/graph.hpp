// graph.hpp - undirected simple graphs: construction, parsing, generators,
// connectivity with removal overlays, and the weighted shortest-path
// primitives used by the metric relaxations.
//
// Graphs are immutable after construction. Removals never mutate a graph;
// they are passed to queries as overlay masks, so many randomized rounding
// trials can share one base graph and one base metric.

#ifndef KSEP_GRAPH_HPP
#define KSEP_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ksep/errors.hpp"
#include "ksep/rng.hpp"

namespace ksep {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Edge = std::pair<int, int>;  // canonical: first < second

struct Graph {
    int n = 0;
    std::vector<Edge> edges;           // sorted lexicographically
    std::vector<std::vector<int>> adj; // per-vertex sorted neighbor lists

    int m() const { return static_cast<int>(edges.size()); }

    bool has_edge(int u, int v) const {
        if (u > v) std::swap(u, v);
        return std::binary_search(edges.begin(), edges.end(), Edge{u, v});
    }

    // Index of canonical edge (u,v) in `edges`, or -1.
    int edge_id(int u, int v) const {
        if (u > v) std::swap(u, v);
        auto it = std::lower_bound(edges.begin(), edges.end(), Edge{u, v});
        if (it == edges.end() || *it != Edge{u, v}) return -1;
        return static_cast<int>(it - edges.begin());
    }
};

// Validating constructor: rejects out-of-range ids, self-loops, duplicates.
inline Graph make_graph(int n, std::vector<Edge> edge_list) {
    if (n < 0) throw parse_error("negative vertex count");
    for (auto& [u, v] : edge_list) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw parse_error("edge endpoint out of range");
        if (u == v) throw parse_error("self-loop rejected");
        if (u > v) std::swap(u, v);
    }
    std::sort(edge_list.begin(), edge_list.end());
    if (std::adjacent_find(edge_list.begin(), edge_list.end()) != edge_list.end())
        throw parse_error("duplicate edge rejected");
    Graph g;
    g.n = n;
    g.edges = std::move(edge_list);
    g.adj.assign(n, {});
    for (auto [u, v] : g.edges) {
        g.adj[u].push_back(v);
        g.adj[v].push_back(u);
    }
    for (auto& nb : g.adj) std::sort(nb.begin(), nb.end());
    return g;
}

// Edge-list text format: first non-comment line "n m", then m lines "u v".
// Lines starting with '#' (after optional whitespace) are comments. Errors
// name the 1-based line number.
inline Graph parse_graph(std::istream& in) {
    auto fail = [](int line, const std::string& what) {
        throw parse_error("parse error at line " + std::to_string(line) + ": " + what);
    };
    int line_no = 0;
    int n = -1;
    long long m = -1;
    std::vector<Edge> edge_list;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;  // blank
        if (first[0] == '#') continue; // comment
        if (n < 0) {
            std::istringstream hs(line);
            long long hn, hm;
            std::string extra;
            if (!(hs >> hn >> hm) || (hs >> extra))
                fail(line_no, "expected header 'n m'");
            if (hn < 0 || hm < 0) fail(line_no, "negative header value");
            n = static_cast<int>(hn);
            m = hm;
            continue;
        }
        if (static_cast<long long>(edge_list.size()) >= m)
            fail(line_no, "more edges than declared");
        std::istringstream es(line);
        long long u, v;
        std::string extra;
        if (!(es >> u >> v) || (es >> extra)) fail(line_no, "expected 'u v'");
        if (u < 0 || v < 0 || u >= n || v >= n)
            fail(line_no, "vertex id out of range");
        if (u == v) fail(line_no, "self-loop");
        Edge e{static_cast<int>(std::min(u, v)), static_cast<int>(std::max(u, v))};
        for (const auto& prev : edge_list)
            if (prev == e) fail(line_no, "duplicate edge");
        edge_list.push_back(e);
    }
    if (n < 0) throw parse_error("parse error at line " + std::to_string(line_no) + ": missing header");
    if (static_cast<long long>(edge_list.size()) != m)
        throw parse_error("parse error at line " + std::to_string(line_no) +
                          ": declared " + std::to_string(m) + " edges, found " +
                          std::to_string(edge_list.size()));
    return make_graph(n, std::move(edge_list));
}

inline Graph parse_graph(const std::string& text) {
    std::istringstream in(text);
    return parse_graph(in);
}

inline std::string format_graph(const Graph& g) {
    std::ostringstream out;
    out << g.n << ' ' << g.m() << '\n';
    for (auto [u, v] : g.edges) out << u << ' ' << v << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// Connectivity with removal overlays

constexpr int kRemovedLabel = -1;

struct ComponentLabeling {
    std::vector<int> label;           // component id per vertex, -1 if removed
    std::vector<int> sizes;           // vertex count per component id
    std::vector<int> red_counts;      // optional, filled by count_reds

    int num_components() const { return static_cast<int>(sizes.size()); }
    int max_size() const {
        int best = 0;
        for (int s : sizes) best = std::max(best, s);
        return best;
    }
    int max_red() const {
        int best = 0;
        for (int r : red_counts) best = std::max(best, r);
        return best;
    }
};

// BFS labeling of the graph with `removed_v[v]` vertices and `removed_e[id]`
// edges masked out. Either mask may be empty (treated as all-false).
inline ComponentLabeling connected_components(const Graph& g,
                                              const std::vector<char>& removed_v = {},
                                              const std::vector<char>& removed_e = {}) {
    auto vgone = [&](int v) { return !removed_v.empty() && removed_v[v]; };
    auto egone = [&](int id) { return !removed_e.empty() && removed_e[id]; };
    ComponentLabeling out;
    out.label.assign(g.n, kRemovedLabel);
    std::vector<int> queue;
    for (int s = 0; s < g.n; ++s) {
        if (vgone(s) || out.label[s] != kRemovedLabel) continue;
        const int comp = out.num_components();
        out.sizes.push_back(0);
        queue.assign(1, s);
        out.label[s] = comp;
        while (!queue.empty()) {
            const int u = queue.back();
            queue.pop_back();
            ++out.sizes[comp];
            for (int v : g.adj[u]) {
                if (vgone(v) || out.label[v] != kRemovedLabel) continue;
                if (egone(g.edge_id(u, v))) continue;
                out.label[v] = comp;
                queue.push_back(v);
            }
        }
    }
    return out;
}

inline std::vector<char> vertex_mask(const Graph& g, const std::vector<int>& removed) {
    std::vector<char> mask(g.n, 0);
    for (int v : removed) mask[v] = 1;
    return mask;
}

inline std::vector<char> edge_mask(const Graph& g, const std::vector<Edge>& removed) {
    std::vector<char> mask(g.edges.size(), 0);
    for (auto [u, v] : removed) {
        const int id = g.edge_id(u, v);
        if (id >= 0) mask[id] = 1;
    }
    return mask;
}

inline void count_reds(ComponentLabeling& lab, const std::vector<int>& red) {
    lab.red_counts.assign(lab.sizes.size(), 0);
    for (int v : red)
        if (lab.label[v] != kRemovedLabel) ++lab.red_counts[lab.label[v]];
}

// Induced subgraph on `keep` (must be distinct ids). Returns the subgraph and
// the map from new ids to original ids.
inline std::pair<Graph, std::vector<int>> induced_subgraph(const Graph& g,
                                                           const std::vector<int>& keep) {
    std::vector<int> order = keep;
    std::sort(order.begin(), order.end());
    std::vector<int> to_new(g.n, -1);
    for (std::size_t i = 0; i < order.size(); ++i) to_new[order[i]] = static_cast<int>(i);
    std::vector<Edge> sub_edges;
    for (auto [u, v] : g.edges)
        if (to_new[u] >= 0 && to_new[v] >= 0)
            sub_edges.push_back({to_new[u], to_new[v]});
    return {make_graph(static_cast<int>(order.size()), std::move(sub_edges)), order};
}

// ---------------------------------------------------------------------------
// Weighted shortest paths
//
// Vertex-weighted distances follow the convention that a path pays for every
// vertex on it, both endpoints included, so dist(s,s) = x_s. Edge-weighted
// distances are the standard ones with dist(s,s) = 0. Unreachable pairs are
// +infinity.

struct SsspResult {
    std::vector<double> dist;
    std::vector<int> parent;  // -1 at sources and unreachable vertices
};

namespace detail {

// Dijkstra; `alive` masks vertices out of the graph entirely (empty = all).
// vertex_mode: seed dist = x[s], relax with x[target]; else x indexes edges.
inline SsspResult dijkstra(const Graph& g, const std::vector<double>& x, int s,
                           bool vertex_mode, const std::vector<char>& alive) {
    auto ok = [&](int v) { return alive.empty() || alive[v]; };
    SsspResult r;
    r.dist.assign(g.n, kInf);
    r.parent.assign(g.n, -1);
    if (!ok(s)) return r;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    r.dist[s] = vertex_mode ? x[s] : 0.0;
    heap.push({r.dist[s], s});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > r.dist[u]) continue;
        for (int v : g.adj[u]) {
            if (!ok(v)) continue;
            const double w = vertex_mode ? x[v] : x[g.edge_id(u, v)];
            const double nd = d + w;
            if (nd < r.dist[v]) {
                r.dist[v] = nd;
                r.parent[v] = u;
                heap.push({nd, v});
            }
        }
    }
    return r;
}

}  // namespace detail

struct DistMatrix {
    int n = 0;
    std::vector<double> d;            // row-major n*n
    std::vector<int> parent;          // parent[u*n+v]: predecessor of v on a shortest u-v path

    double at(int u, int v) const { return d[static_cast<std::size_t>(u) * n + v]; }
    int parent_of(int u, int v) const { return parent[static_cast<std::size_t>(u) * n + v]; }
};

inline SsspResult vertex_weighted_sssp(const Graph& g, const std::vector<double>& x,
                                       int source, const std::vector<char>& alive = {}) {
    return detail::dijkstra(g, x, source, true, alive);
}

inline SsspResult edge_weighted_sssp(const Graph& g, const std::vector<double>& x,
                                     int source, const std::vector<char>& alive = {}) {
    return detail::dijkstra(g, x, source, false, alive);
}

inline DistMatrix vertex_weighted_apsp(const Graph& g, const std::vector<double>& x,
                                       const std::vector<char>& alive = {}) {
    DistMatrix m;
    m.n = g.n;
    m.d.assign(static_cast<std::size_t>(g.n) * g.n, kInf);
    m.parent.assign(static_cast<std::size_t>(g.n) * g.n, -1);
    for (int s = 0; s < g.n; ++s) {
        auto r = detail::dijkstra(g, x, s, true, alive);
        std::copy(r.dist.begin(), r.dist.end(), m.d.begin() + static_cast<std::size_t>(s) * g.n);
        std::copy(r.parent.begin(), r.parent.end(),
                  m.parent.begin() + static_cast<std::size_t>(s) * g.n);
    }
    return m;
}

inline DistMatrix edge_weighted_apsp(const Graph& g, const std::vector<double>& x,
                                     const std::vector<char>& alive = {}) {
    DistMatrix m;
    m.n = g.n;
    m.d.assign(static_cast<std::size_t>(g.n) * g.n, kInf);
    m.parent.assign(static_cast<std::size_t>(g.n) * g.n, -1);
    for (int s = 0; s < g.n; ++s) {
        auto r = detail::dijkstra(g, x, s, false, alive);
        std::copy(r.dist.begin(), r.dist.end(), m.d.begin() + static_cast<std::size_t>(s) * g.n);
        std::copy(r.parent.begin(), r.parent.end(),
                  m.parent.begin() + static_cast<std::size_t>(s) * g.n);
    }
    return m;
}

// ---------------------------------------------------------------------------
// Exact longest simple path (vertex count), DP over vertex subsets.

struct LongestPathResult {
    int length = 0;              // vertices on the best path (0 for empty graph)
    std::vector<int> path;
};

inline LongestPathResult longest_path_exact(const Graph& g) {
    if (g.n > 20) throw guard_error("longest_path_exact: n > 20");
    LongestPathResult best;
    if (g.n == 0) return best;
    const std::size_t masks = std::size_t{1} << g.n;
    // ends[mask] = bitset of vertices that can end a simple path visiting exactly `mask`
    std::vector<std::uint32_t> ends(masks, 0);
    for (int v = 0; v < g.n; ++v) ends[std::size_t{1} << v] = 1u << v;
    best.length = 1;
    std::size_t best_mask = 1;
    int best_end = 0;
    for (std::size_t mask = 1; mask < masks; ++mask) {
        const std::uint32_t e = ends[mask];
        if (!e) continue;
        const int pc = __builtin_popcountll(mask);
        if (pc > best.length) {
            best.length = pc;
            best_mask = mask;
            best_end = __builtin_ctz(e);
        }
        for (int v = 0; v < g.n; ++v) {
            if (!(e >> v & 1)) continue;
            for (int w : g.adj[v]) {
                if (mask >> w & 1) continue;
                ends[mask | (std::size_t{1} << w)] |= 1u << w;
            }
        }
    }
    // reconstruct one witness by peeling the end vertex
    std::size_t mask = best_mask;
    int v = best_end;
    best.path.push_back(v);
    while (__builtin_popcountll(mask) > 1) {
        const std::size_t pmask = mask ^ (std::size_t{1} << v);
        int prev = -1;
        for (int u : g.adj[v]) {
            if ((pmask >> u & 1) && (ends[pmask] >> u & 1)) {
                prev = u;
                break;
            }
        }
        if (prev < 0) throw internal_error("longest_path_exact: broken witness chain");
        mask = pmask;
        v = prev;
        best.path.push_back(v);
    }
    std::reverse(best.path.begin(), best.path.end());
    return best;
}

// ---------------------------------------------------------------------------
// Generators (deterministic given seed)

inline Graph gen_clique(int n) {
    std::vector<Edge> e;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) e.push_back({u, v});
    return make_graph(n, std::move(e));
}

inline Graph gen_path(int n) {
    std::vector<Edge> e;
    for (int u = 0; u + 1 < n; ++u) e.push_back({u, u + 1});
    return make_graph(n, std::move(e));
}

inline Graph gen_cycle(int n) {
    if (n > 0 && n < 3) throw guard_error("gen_cycle: n must be 0 or >= 3");
    std::vector<Edge> e;
    for (int u = 0; u + 1 < n; ++u) e.push_back({u, u + 1});
    if (n >= 3) e.push_back({0, n - 1});
    return make_graph(n, std::move(e));
}

// Star with n vertices total: center 0, leaves 1..n-1.
inline Graph gen_star(int n) {
    std::vector<Edge> e;
    for (int v = 1; v < n; ++v) e.push_back({0, v});
    return make_graph(n, std::move(e));
}

inline Graph gen_gnp(int n, double p, std::uint64_t seed) {
    if (p < 0.0 || p > 1.0) throw guard_error("gen_gnp: p outside [0,1]");
    if (n < 0) throw guard_error("gen_gnp: n < 0");
    Rng rng(seed);
    std::vector<Edge> e;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.uniform53() < p) e.push_back({u, v});
    return make_graph(n, std::move(e));
}

enum class GraphKind { random_gnp, clique, cycle, path, star };

struct GenParams {
    int n = 0;
    double p = 0.0;
};

inline Graph gen_graph(GraphKind kind, const GenParams& params, std::uint64_t seed) {
    switch (kind) {
        case GraphKind::random_gnp: return gen_gnp(params.n, params.p, seed);
        case GraphKind::clique: return gen_clique(params.n);
        case GraphKind::cycle: return gen_cycle(params.n);
        case GraphKind::path: return gen_path(params.n);
        case GraphKind::star: return gen_star(params.n);
    }
    throw guard_error("gen_graph: unknown kind");
}

}  // namespace ksep

#endif  // KSEP_GRAPH_HPP
