#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "graphon/cut_distance.hpp"
#include "graphon/graph.hpp"
#include "graphon/scaling.hpp"

namespace graphon {

struct SampleReport {
    int n = 0;
    int trials = 0;
    std::vector<double> distances;  // one cut distance per trial, by trial index
    double threshold = 0.0;         // 4/sqrt(n)
    int violations = 0;             // distances >= threshold
    bool exact = true;              // false when distances are local-search lower bounds
};

std::string report_to_json(const SampleReport& report);
std::string report_to_csv(const SampleReport& report);

/// Bernoulli sample of a weighted graph: each pair i<j independently becomes
/// a 0/1 edge with probability beta_ij, drawn in row-major order so the seed
/// pins the sample. Symmetric inputs yield mirrored samples; DAG-oriented
/// inputs stay upper-triangular. Nodeweights carry over.
WeightedGraph sample_simple(const WeightedGraph& g, std::uint64_t seed);

/// Strict view of an upper-triangular 0/1 sample as a DAG.
DagGraph as_dag(const WeightedGraph& sample);

/// Fractional blow-up to target_n followed by a Bernoulli sample.
std::pair<WeightedGraph, ScalePlan> scale_and_sample(const WeightedGraph& g, int target_n,
                                                     std::uint64_t seed);

/// Sample `trials` graphs from g and measure the cut distance back to g per
/// trial: exact when n is within the enumeration limit, otherwise a
/// local-search lower bound (a detected violation is then still a genuine
/// one). Trials run under per-index seeds and may be spread over threads.
SampleReport concentration_experiment(const WeightedGraph& g, int trials, std::uint64_t seed,
                                      const CutConfig& cfg = {}, int restarts = 50,
                                      int threads = 1);

/// Draw a directed graph from a digraphon: per unordered pair one draw among
/// {none, i->j, j->i, both} with the four direction probabilities, plus a
/// Bernoulli self-loop per node. Returns the full 0/1 adjacency.
Matrix sample_digraph(const Digraphon& d, std::uint64_t seed);

}  // namespace graphon
