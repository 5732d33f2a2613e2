#pragma once

#include <cstdint>
#include <functional>

#include "graphon/graph.hpp"

namespace graphon {

struct ErParams {
    double p = 0.5;  // edge probability
};

struct WsParams {
    double kappa = 0.4;  // initial neighborhood width as a fraction k/n
    double p = 0.75;     // replacement probability
};

struct BaParams {
    int m0 = 10;  // seed graph size (complete graph)
    int m = 10;   // edges added per new node
    int n = 100;  // final node count
};

/// Constant step function: p off the diagonal, 0 on it.
StepGraphon er_graphon(const ErParams& params, int resolution);

/// Ring-band step function. Pairs within ring distance kappa*n/2 get 1-p;
/// all other pairs get p*kappa/(1-kappa), the unique constant that preserves
/// the expected edge count under uniform rewiring. Diagonal 0.
StepGraphon ws_graphon(const WsParams& params, int resolution);

/// Preferential attachment. Nodes ordered by insertion time, seed nodes
/// first with a complete graph among them; every new node attaches m
/// distinct edges with probabilities proportional to degrees frozen at the
/// start of its insertion step. Undirected edges are oriented low -> high.
DagGraph ba_sample(const BaParams& params, std::uint64_t seed);

/// Average `trials` sampled 0/1 adjacency matrices (n x n) from the
/// generator, then block-average into an r x r step function. r must divide
/// n. Generators receive per-trial seeds from the split rule.
StepGraphon empirical_graphon(const std::function<Matrix(std::uint64_t)>& generator, int n,
                              int trials, int resolution, std::uint64_t seed, int threads = 1);

}  // namespace graphon
