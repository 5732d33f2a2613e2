#pragma once

#include <cstdint>

#include "graphon/cut_distance.hpp"
#include "graphon/graph.hpp"

namespace graphon {

/// Fractional node correspondence between two weighted graphs: nonnegative
/// entries with row sums equal to the first graph's nodeweights and column
/// sums equal to the second's (both to 1e-10).
struct OverlayMatrix {
    Matrix entries;
};

ValidationReport validate_overlay(const WeightedGraph& g, const WeightedGraph& h,
                                  const OverlayMatrix& overlay, double tol = 1e-10);

/// Alignment between a uniform n-node graph and its k-fold blow-up:
/// L(i, i*k+p) = 1/(k*n).
OverlayMatrix blowup_alignment(int n, int k);

/// Monotone interval coupling: lay both graphs out as step functions on
/// [0,1] and give each node pair the length of their interval intersection.
/// For blow-ups and fractional blow-ups this recovers the natural alignment.
OverlayMatrix interval_overlay(const WeightedGraph& g, const WeightedGraph& h);

/// Same-size coupling that keeps min(alpha_i, alpha'_i) on the diagonal and
/// completes the off-diagonal residual mass by iterative proportional
/// fitting.
OverlayMatrix diag_min_overlay(const WeightedGraph& g, const WeightedGraph& h);

/// Scale `init` (nonnegative, zero pattern respected) until its row sums
/// match `row_targets` and column sums match `col_targets`. Throws when the
/// pattern cannot carry the requested marginals.
Matrix ipf_fit(Matrix init, const std::vector<double>& row_targets,
               const std::vector<double>& col_targets, int max_sweeps = 500,
               double tol = 1e-13);

struct OverlayEval {
    CutResult cut;
    int support = 0;  // product nodes kept after dropping zero-weight cells
};

/// Evaluate the cut metric between the two overlay products G[L] and
/// G'[L^T] on the support of L. Any feasible L makes this an upper bound on
/// the cut distance; the result is exact when the support is small enough to
/// enumerate, otherwise a local-search estimate flagged exact=false.
OverlayEval overlay_distance(const WeightedGraph& g, const WeightedGraph& h,
                             const OverlayMatrix& overlay, const CutConfig& cfg = {},
                             std::uint64_t seed = 0);

struct OverlayOptimizeOptions {
    int iterations = 40;     // subgradient steps per starting point
    int random_starts = 3;   // permuted-interval starting points
    std::uint64_t seed = 0;
};

struct OverlayOptimizeResult {
    CutResult cut;
    OverlayMatrix overlay;
    int support = 0;
};

/// Minimize the overlay evaluation over feasible couplings: several seeded
/// starting points (interval coupling, product coupling, diagonal-min when
/// sizes match, permuted intervals), each refined by subgradient steps on
/// the worst cut with projection back onto the marginal polytope. Returns
/// the best upper bound seen and the coupling that achieved it.
OverlayOptimizeResult optimize_overlay(const WeightedGraph& g, const WeightedGraph& h,
                                       const OverlayOptimizeOptions& options = {},
                                       const CutConfig& cfg = {});

}  // namespace graphon
