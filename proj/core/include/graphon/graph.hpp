#pragma once

#include <string>
#include <vector>

#include "graphon/matrix.hpp"

namespace graphon {

/// Weighted graph: nodeweights alpha (summing to 1) and edgeweights beta in
/// [0,1] with a zero diagonal. This is the finite step-function form of a
/// graphon; DAG-oriented graphs store beta strictly above the diagonal and
/// carry symmetric=false.
struct WeightedGraph {
    std::vector<double> alpha;
    Matrix beta;
    bool symmetric = true;

    int size() const { return static_cast<int>(alpha.size()); }

    /// Uniform nodeweights 1/n over the given edgeweights.
    static WeightedGraph uniform(Matrix beta, bool symmetric);
};

/// Step-function graphon on an n x n grid; each cell is the mean of the
/// underlying graphon over a 1/n x 1/n square. Interchangeable with a
/// uniform-nodeweight WeightedGraph, losslessly in both directions.
struct StepGraphon {
    Matrix values;

    int resolution() const { return values.rows(); }
};

/// Stage-wise DAG: strictly upper-triangular 0/1 adjacency under the total
/// node order (edge i -> j requires i < j).
struct DagGraph {
    Matrix adj;

    int size() const { return adj.rows(); }
};

/// Directed graph limit: per-pair probabilities of {no edge, i->j, j->i,
/// both} plus per-node self-loop probabilities.
struct Digraphon {
    Matrix w00, w01, w10, w11;
    std::vector<double> self_loop;

    int resolution() const { return w00.rows(); }
};

struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

ValidationReport validate(const WeightedGraph& g);
ValidationReport validate(const DagGraph& d);
ValidationReport validate(const Digraphon& d);

/// Throwing forms of the above, for call sites that need a hard precondition.
void require_valid(const WeightedGraph& g);
void require_valid(const DagGraph& d);
void require_valid(const Digraphon& d);

/// DAG as a weighted graph with uniform nodeweights. By default the 0/1
/// adjacency is kept upper-triangular (symmetric=false); pass
/// symmetrize=true to mirror it into an undirected graph.
WeightedGraph dag_to_weighted(const DagGraph& d, bool symmetrize = false);

StepGraphon to_step(const WeightedGraph& g);
WeightedGraph to_weighted(const StepGraphon& s);

/// Threshold a step graphon into a DAG: cell (i,j), i<j, becomes an edge when
/// its value is >= thr. Entries at or below the diagonal are ignored.
DagGraph threshold_to_dag(const StepGraphon& s, double thr = 0.5);

/// Maximum difference between any two edgeweights (beta_Delta). Off-diagonal
/// entries only; absent edges count as weight 0, so for DAG-oriented graphs
/// the zero lower triangle participates.
double edge_weight_spread(const WeightedGraph& g);

}  // namespace graphon
