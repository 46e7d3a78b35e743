// kpath.hpp - minimum-weight k-path via randomized color coding, plus an
// exact subset-DP oracle for cross-validation.
//
// Each trial colors vertices uniformly with k colors and runs the colorful
// DP over (vertex, used-color subset) states. A fixed optimal path becomes
// colorful with probability k!/k^k >= e^-k, so ceil(e^k ln(1/delta)) trials
// find an optimum with probability >= 1 - delta. Negative answers are
// one-sided: a returned path is always real (re-verified before return),
// only "not found" can be wrong.

#ifndef KSEP_KPATH_HPP
#define KSEP_KPATH_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ksep/errors.hpp"
#include "ksep/graph.hpp"
#include "ksep/rng.hpp"

namespace ksep {

struct ColorCodingParams {
    int k = 2;
    int trials = 0;
    std::uint64_t seed = 0;
    double delta = 1e-3;

    static int min_trials(int k, double delta) {
        return static_cast<int>(std::ceil(std::exp(k) * std::log(1.0 / delta)));
    }

    static ColorCodingParams make(int k, std::uint64_t seed, double delta = 1e-3,
                                  int trials = 0) {
        ColorCodingParams p;
        p.k = k;
        p.seed = seed;
        p.delta = delta;
        p.trials = trials > 0 ? trials : min_trials(k, delta);
        p.validate();
        return p;
    }

    void validate() const {
        if (k < 2) throw guard_error("color coding: k < 2");
        if (delta <= 0.0 || delta >= 1.0) throw guard_error("color coding: delta outside (0,1)");
        if (trials < min_trials(k, delta))
            throw guard_error("color coding: trials below e^k ln(1/delta)");
    }
};

struct KPathResult {
    bool found = false;
    double weight = 0.0;
    std::vector<int> path;  // k vertices when found
};

namespace kpath_detail {

inline void verify_witness(const Graph& g, const std::vector<double>& x, int k,
                           const KPathResult& r) {
    if (!r.found) return;
    if (static_cast<int>(r.path.size()) != k)
        throw internal_error("k-path witness has wrong length");
    std::vector<char> seen(g.n, 0);
    double w = 0.0;
    for (std::size_t i = 0; i < r.path.size(); ++i) {
        const int v = r.path[i];
        if (seen[v]) throw internal_error("k-path witness not simple");
        seen[v] = 1;
        w += x.empty() ? 0.0 : x[v];
        if (i > 0 && !g.has_edge(r.path[i - 1], v))
            throw internal_error("k-path witness not a path");
    }
    if (std::fabs(w - r.weight) > 1e-12 * (1.0 + std::fabs(w)))
        throw internal_error("k-path witness weight mismatch");
}

}  // namespace kpath_detail

// Minimum-weight path on exactly k vertices, restricted to vertices with
// alive[v] (empty mask = all alive). Deterministic given params.seed.
inline KPathResult min_weight_kpath(const Graph& g, const std::vector<double>& x, int k,
                                    const ColorCodingParams& params,
                                    const std::vector<char>& alive = {}) {
    params.validate();
    if (k != params.k) throw guard_error("min_weight_kpath: k mismatch with params");
    KPathResult best;
    if (k > g.n) return best;
    auto ok = [&](int v) { return alive.empty() || alive[v]; };
    const int full = (1 << k) - 1;
    const std::size_t states = static_cast<std::size_t>(g.n) << k;
    std::vector<double> dp(states);
    std::vector<int> pred(states);
    std::vector<int> color(g.n);
    auto idx = [&](int v, int mask) { return (static_cast<std::size_t>(v) << k) | mask; };

    for (int t = 0; t < params.trials; ++t) {
        Rng rng(derive_seed(params.seed, t));
        for (int v = 0; v < g.n; ++v) color[v] = static_cast<int>(rng.below(k));
        std::fill(dp.begin(), dp.end(), kInf);
        std::fill(pred.begin(), pred.end(), -1);
        for (int v = 0; v < g.n; ++v)
            if (ok(v)) dp[idx(v, 1 << color[v])] = x.empty() ? 0.0 : x[v];
        for (int mask = 1; mask <= full; ++mask) {
            for (int v = 0; v < g.n; ++v) {
                const double cur = dp[idx(v, mask)];
                if (std::isinf(cur)) continue;
                for (int nb : g.adj[v]) {
                    if (!ok(nb) || (mask >> color[nb] & 1)) continue;
                    const int nmask = mask | (1 << color[nb]);
                    const double cand = cur + (x.empty() ? 0.0 : x[nb]);
                    const std::size_t ni = idx(nb, nmask);
                    if (cand < dp[ni] || (cand == dp[ni] && v < pred[ni])) {
                        dp[ni] = cand;
                        pred[ni] = v;
                    }
                }
            }
        }
        int arg = -1;
        double w = kInf;
        for (int v = 0; v < g.n; ++v) {
            const double c = dp[idx(v, full)];
            if (c < w) {
                w = c;
                arg = v;
            }
        }
        if (arg >= 0 && (!best.found || w < best.weight)) {
            best.found = true;
            best.weight = w;
            best.path.clear();
            int v = arg, mask = full;
            while (v >= 0) {
                best.path.push_back(v);
                const int p = pred[idx(v, mask)];
                mask ^= 1 << color[v];
                v = p;
            }
            std::reverse(best.path.begin(), best.path.end());
        }
    }
    kpath_detail::verify_witness(g, x, k, best);
    return best;
}

// Existence specialization (all lengths zero). "found = false" is one-sided.
inline KPathResult find_kpath(const Graph& g, int k, const ColorCodingParams& params,
                              const std::vector<char>& alive = {}) {
    return min_weight_kpath(g, {}, k, params, alive);
}

// Exact oracle: Held-Karp style DP over (vertex subset, last vertex),
// restricted to subsets of size <= k.
inline KPathResult exact_min_weight_kpath(const Graph& g, const std::vector<double>& x,
                                          int k) {
    if (g.n > 16) throw guard_error("exact_min_weight_kpath: n > 16");
    if (k < 1) throw guard_error("exact_min_weight_kpath: k < 1");
    KPathResult best;
    if (k > g.n) return best;
    const std::size_t masks = std::size_t{1} << g.n;
    std::vector<double> dp(masks * g.n, kInf);
    std::vector<int> pred(masks * g.n, -1);
    auto idx = [&](std::size_t mask, int v) { return mask * g.n + v; };
    for (int v = 0; v < g.n; ++v)
        dp[idx(std::size_t{1} << v, v)] = x.empty() ? 0.0 : x[v];
    double w = kInf;
    int arg_v = -1;
    std::size_t arg_mask = 0;
    for (std::size_t mask = 1; mask < masks; ++mask) {
        const int pc = __builtin_popcountll(mask);
        if (pc > k) continue;
        for (int v = 0; v < g.n; ++v) {
            if (!(mask >> v & 1)) continue;
            const double cur = dp[idx(mask, v)];
            if (std::isinf(cur)) continue;
            if (pc == k) {
                if (cur < w) {
                    w = cur;
                    arg_v = v;
                    arg_mask = mask;
                }
                continue;
            }
            for (int nb : g.adj[v]) {
                if (mask >> nb & 1) continue;
                const std::size_t nmask = mask | (std::size_t{1} << nb);
                const double cand = cur + (x.empty() ? 0.0 : x[nb]);
                if (cand < dp[idx(nmask, nb)]) {
                    dp[idx(nmask, nb)] = cand;
                    pred[idx(nmask, nb)] = v;
                }
            }
        }
    }
    if (arg_v >= 0) {
        best.found = true;
        best.weight = w;
        std::size_t mask = arg_mask;
        int v = arg_v;
        while (v >= 0) {
            best.path.push_back(v);
            const int p = pred[idx(mask, v)];
            mask ^= std::size_t{1} << v;
            v = p;
        }
        std::reverse(best.path.begin(), best.path.end());
    }
    kpath_detail::verify_witness(g, x, k, best);
    return best;
}

}  // namespace ksep

#endif  // KSEP_KPATH_HPP
