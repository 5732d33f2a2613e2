#pragma once

#include <cstdint>
#include <vector>

#include "graphon/graph.hpp"

namespace graphon {

struct CutConfig {
    int exact_limit = 20;      // max n for exhaustive subset enumeration
    int iso_exact_limit = 8;   // max n for exhaustive permutation enumeration
    int fallback_restarts = 24;  // local-search restarts when exact is out of reach
    int iso_swap_sweeps = 8;   // pairwise-swap descent sweeps in heuristic mode
};

struct CutResult {
    double value = 0.0;
    bool exact = true;
    std::vector<int> subset;       // maximizing S (complement is T)
    std::vector<int> permutation;  // minimizing node relabeling, when applicable

    bool improves_on(const CutResult& other) const { return value < other.value; }
};

/// cut(S,T,G) = sum over i in S, j in T of alpha_i * alpha_j * beta_ij.
/// S and T must be disjoint; they need not cover V.
double cut_size(const std::vector<int>& s, const std::vector<int>& t, const WeightedGraph& g);

/// |cut(S,T,g) - cut(S,T,h)| for T = complement of S. Used to re-check
/// witnesses; callers guarantee matching node sets.
double cut_difference_at(const std::vector<int>& s, const WeightedGraph& g,
                         const WeightedGraph& h);

/// Fixed-correspondence cut metric: max over S of |cut(S,~S,g)-cut(S,~S,h)|,
/// by full enumeration (half of it when both graphs are symmetric). Requires
/// equal node counts and equal nodeweights.
CutResult cut_distance_exact(const WeightedGraph& g, const WeightedGraph& h,
                             const CutConfig& cfg = {});

/// Lower bound on the above via best-improvement single-node flips from
/// seeded random subsets. Ties break toward the lowest node index.
CutResult cut_distance_local_search(const WeightedGraph& g, const WeightedGraph& h, int restarts,
                                    std::uint64_t seed, const CutConfig& cfg = {});

enum class IsoMode { exact, heuristic };

/// Cut metric minimized over node relabelings of g. Exact mode enumerates
/// all permutations (n <= iso_exact_limit); heuristic mode seeds from sorted
/// degree profiles and descends by pairwise swaps, returning an upper bound.
CutResult isomorphism_distance(const WeightedGraph& g, const WeightedGraph& h, IsoMode mode,
                               const CutConfig& cfg = {}, std::uint64_t seed = 0);

/// (iso_value/32)^67 <= overlay_value + 1e-15, evaluated in log space.
bool borgs_inequality_holds(double iso_value, double overlay_value);

/// For an upper-triangular graph, the cut difference between the k-fold
/// blow-up and the 1-D interpolation at the partition that keeps the first
/// k*m expanded nodes: (1/(k^2 n^2)) * (k(k-1)/2) * |sum_{i<m} beta(i,m)|.
/// Evaluated both in closed form and by direct cut evaluation; the two must
/// agree to 1e-12. Requires the boundary column m (0-based) to have a
/// non-zero sum above the diagonal.
double interpolation_partition_bound(const WeightedGraph& g, int k, int m);

}  // namespace graphon
