#pragma once

#include <utility>
#include <vector>

#include "graphon/graph.hpp"

namespace graphon {

/// Decomposition of a target size N = k*n + m (0 <= m < n) together with the
/// cut-distance bound beta_spread * (kn-m)*m / (kn*(kn+m)) incurred by the
/// fractional blow-up that reaches N. bound = 0 exactly when m = 0.
struct ScalePlan {
    int source_n = 0;
    int target_n = 0;
    int k = 0;
    int m = 0;
    double bound = 0.0;
};

ScalePlan make_scale_plan(const WeightedGraph& g, int target_n);

/// k-fold blow-up: every node becomes k copies (contiguous, in node order);
/// copies of different nodes connect with the original edgeweight, copies of
/// the same node stay unconnected. Nodeweights divide by k.
WeightedGraph blowup_k(const WeightedGraph& g, int k);

/// Replace node `node` with k copies of weight alpha/k each, every copy
/// keeping the node's edges; copies mutually unconnected. Copies take the
/// node's position, so upper-triangular graphs stay upper-triangular.
WeightedGraph split_node(const WeightedGraph& g, int node, int k);

/// On a uniform-weight graph, give the first m nodes weight 2/(n+m) and the
/// rest 1/(n+m); edges untouched.
WeightedGraph shift_weights(const WeightedGraph& g, int m);

/// Blow up to k*n nodes, shift weights for the remainder m, then 2-way split
/// the first m nodes: a uniform graph on target_n = k*n + m nodes. The plan
/// carries the cut-distance bound for the move.
std::pair<WeightedGraph, ScalePlan> fractional_blowup(const WeightedGraph& g, int target_n);

/// 1-D linear interpolation baseline: every row repeated k times, then
/// expanded horizontally with value anchors at columns j*k and a linear ramp
/// to zero past the last column. Any mass the ramps leave on the diagonal is
/// cleared (cut values never read the diagonal). Upper-triangular input only.
WeightedGraph interpolate_1d(const WeightedGraph& g, int k);

/// Row expansion used by interpolate_1d; row [a,b,c] expands to length 3k
/// with sum (k+1)/2*a + k*b + k*c.
std::vector<double> expand_row_linear(const std::vector<double>& row, int k);

}  // namespace graphon
