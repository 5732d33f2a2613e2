#pragma once

// Shared builders and independent oracles. The oracles recompute distances
// from the cut definition alone (direct subset enumeration over cut_size),
// with no reliance on the incremental evaluators they are used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "graphon/cut_distance.hpp"
#include "graphon/graph.hpp"
#include "graphon/rng.hpp"

namespace testutil {

inline graphon::WeightedGraph uniform_graph(int n, const std::vector<double>& upper,
                                            bool symmetric = true) {
    graphon::Matrix beta(n, n, 0.0);
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            beta(i, j) = upper[idx];
            if (symmetric) beta(j, i) = upper[idx];
            ++idx;
        }
    return graphon::WeightedGraph::uniform(std::move(beta), symmetric);
}

inline graphon::WeightedGraph random_uniform_graph(int n, std::uint64_t seed,
                                                   bool symmetric = true) {
    graphon::Rng rng = graphon::make_rng(seed);
    std::vector<double> upper;
    for (int i = 0; i < n * (n - 1) / 2; ++i) upper.push_back(graphon::uniform01(rng));
    return uniform_graph(n, upper, symmetric);
}

inline graphon::DagGraph random_dag(int n, double density, std::uint64_t seed) {
    graphon::Rng rng = graphon::make_rng(seed);
    graphon::Matrix adj(n, n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (graphon::uniform01(rng) < density) adj(i, j) = 1.0;
    return graphon::DagGraph{std::move(adj)};
}

/// Brute-force fixed-correspondence cut metric straight from the definition.
inline double oracle_cut_distance(const graphon::WeightedGraph& a,
                                  const graphon::WeightedGraph& b) {
    const int n = a.size();
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        std::vector<int> s, t;
        for (int u = 0; u < n; ++u) ((mask >> u) & 1 ? s : t).push_back(u);
        best = std::max(best,
                        std::fabs(graphon::cut_size(s, t, a) - graphon::cut_size(s, t, b)));
    }
    return best;
}

/// Brute-force relabeling minimum over all permutations (tiny n only).
inline double oracle_iso_distance(const graphon::WeightedGraph& a,
                                  const graphon::WeightedGraph& b) {
    const int n = a.size();
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    double best = -1.0;
    do {
        graphon::WeightedGraph pa;
        pa.symmetric = a.symmetric;
        pa.alpha.resize(static_cast<std::size_t>(n));
        pa.beta = graphon::Matrix(n, n, 0.0);
        for (int i = 0; i < n; ++i) {
            pa.alpha[static_cast<std::size_t>(i)] = a.alpha[perm[static_cast<std::size_t>(i)]];
            for (int j = 0; j < n; ++j)
                pa.beta(i, j) = a.beta(perm[static_cast<std::size_t>(i)],
                                       perm[static_cast<std::size_t>(j)]);
        }
        const double v = oracle_cut_distance(pa, b);
        if (best < 0.0 || v < best) best = v;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace testutil
