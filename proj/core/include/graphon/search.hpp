#pragma once

#include <cstdint>
#include <vector>

#include "graphon/graph.hpp"
#include "graphon/rng.hpp"

namespace graphon {

struct GumbelConfig {
    double tau0 = 1.0;
    double tau_min = 0.1;
    double anneal_rate = 0.03;  // per-epoch exponential decay
};

/// max(tau_min, tau0 * exp(-anneal_rate * epoch)); non-increasing in epoch.
double tau_at_epoch(const GumbelConfig& cfg, int epoch);

/// Candidate input subsets for node v: the start set plus every set reachable
/// by adding or removing one incoming edge. When more than K exist, the start
/// set is kept and K-1 others are sampled without replacement. A node without
/// predecessors gets the single empty subset (it reads the stage input).
std::vector<std::vector<int>> enumerate_subsets(const DagGraph& start, int v, int K,
                                                std::uint64_t seed);

/// Gumbel-softmax coefficients over positive weights pi at temperature tau,
/// stabilized by max-subtraction; coefficients sum to 1.
std::vector<double> gumbel_softmax(const std::vector<double>& pi, double tau, Rng& rng);

/// Same with the Gumbel noise supplied explicitly (gamma = 0 recovers a plain
/// softmax of log pi / tau).
std::vector<double> gumbel_softmax_with_noise(const std::vector<double>& pi,
                                              const std::vector<double>& gamma, double tau);

struct ToyTaskSpec {
    int n_nodes = 6;
    int input_dim = 12;
    int classes = 3;
    int train_count = 768;
    int val_count = 384;
    double noise = 0.02;  // label corruption probability; 1.0 makes labels pure noise
    std::uint64_t seed = 1;
};

/// Synthetic classification task whose labels are quantile bins of a score
/// computed by a randomly initialized teacher network wired exactly along the
/// planted DAG. The planted DAG is the start DAG (a Watts-Strogatz sample)
/// with one extra incoming edge per node wherever one fits, which keeps every
/// planted subset inside the one-edge candidate neighbourhood of the start
/// and leaves no candidate superset of it.
struct ToyTask {
    ToyTaskSpec spec;
    DagGraph start;
    DagGraph planted;
    Matrix train_x;
    std::vector<int> train_y;
    Matrix val_x;
    std::vector<int> val_y;
};

ToyTask make_planted_task(const ToyTaskSpec& spec);

struct SubsetChoice {
    int node = 0;
    std::vector<std::vector<int>> subsets;
    std::vector<double> pi;  // positive structural weights, exp of the stored logits
};

/// Stage network of subset competition: each node carries K candidate input
/// subsets with per-(subset, member) affine+rectifier blocks; subset outputs
/// aggregate by zero-padded concatenation (or summation) and mix through
/// Gumbel-softmax coefficients. The output dummy consumes every node (each
/// through its own parameter block, like any other consumer) and a linear
/// classifier reads the concatenation, mirroring a stage whose output
/// collects all cells. All parameters, including the structural logits, live
/// in one flat vector.
class StageNet {
public:
    static StageNet searchable(const DagGraph& start, int K, int input_dim, int classes,
                               int width, bool sum_aggregate, std::uint64_t seed);
    static StageNet fixed(const DagGraph& arch, int input_dim, int classes, int width,
                          bool sum_aggregate, std::uint64_t seed);

    int node_count() const { return n_nodes_; }
    int input_dim() const { return input_dim_; }
    int classes() const { return classes_; }
    int param_count() const { return static_cast<int>(params_.size()); }
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    /// Identity activation instead of the rectifier (used by linearity checks).
    void set_linear(bool linear) { linear_ = linear; }

    std::vector<SubsetChoice> choices() const;
    std::vector<double> structural_logits(int v) const;

    /// Mean cross-entropy over the selected rows under per-node Gumbel noise.
    double loss(const Matrix& x, const std::vector<int>& y, const std::vector<int>& rows,
                const std::vector<std::vector<double>>& gamma, double tau) const;

    /// Same, accumulating d(loss)/d(params) into grad (resized and zeroed).
    double loss_and_grad(const Matrix& x, const std::vector<int>& y,
                         const std::vector<int>& rows,
                         const std::vector<std::vector<double>>& gamma, double tau,
                         std::vector<double>& grad) const;

    /// Logits for one example under explicit mixing coefficients.
    std::vector<double> logits_single(const std::vector<double>& x,
                                      const std::vector<std::vector<double>>& coeffs) const;

    /// Logits for one example with every node running its argmax subset.
    std::vector<double> discrete_logits(const std::vector<double>& x) const;

    double accuracy(const Matrix& x, const std::vector<int>& y) const;

    /// 0/1 upper-triangular adjacency of the argmax subsets.
    Matrix argmax_adjacency() const;

    std::vector<std::vector<double>> argmax_coeffs() const;

private:
    StageNet() = default;
    void build(const std::vector<std::vector<std::vector<int>>>& subsets, int input_dim,
               int classes, int width, bool sum_aggregate, std::uint64_t seed);

    struct MemberBlock {
        int weight_off = 0;  // width x in_dim
        int bias_off = 0;    // width
        int in_dim = 0;
        int source = 0;  // the member node
    };

    int branch_width(int v, int k) const;
    struct Workspace;
    void forward(const Matrix& x, const std::vector<int>& rows,
                 const std::vector<std::vector<double>>& coeffs, Workspace& ws) const;

    int n_nodes_ = 0;
    int input_dim_ = 0;
    int classes_ = 0;
    int width_ = 0;
    bool sum_aggregate_ = false;
    bool linear_ = false;
    std::vector<std::vector<std::vector<int>>> subsets_;           // [v][k] -> member nodes
    std::vector<std::vector<std::vector<MemberBlock>>> blocks_;    // [v][k][member]
    std::vector<int> node_dim_;                                    // input dim per node
    std::vector<MemberBlock> head_blocks_;                         // one per node
    int cls_weight_off_ = 0, cls_bias_off_ = 0;
    std::vector<int> rho_off_;
    std::vector<double> params_;
};

struct EpochStats {
    int epoch = 0;
    double loss = 0.0;
    double val_accuracy = 0.0;
    double tau = 0.0;
};

struct SearchTrace {
    int epochs_recorded = 0;
    std::vector<Matrix> matrices;  // argmax adjacencies from the last phase
    StepGraphon average;
    std::vector<EpochStats> history;
};

struct SearchConfig {
    int K = 6;
    int epochs = 60;
    int batch = 32;
    double lr = 0.1;
    double momentum = 0.9;
    int width = 8;
    bool sum_aggregate = false;
    GumbelConfig gumbel;
    std::uint64_t seed = 0;
};

struct SearchResult {
    SearchTrace trace;
    DagGraph final_dag;
    double final_val_accuracy = 0.0;
};

/// Joint SGD-with-momentum training of model parameters and structural
/// logits. The learning rate drops by 10x at 50% and 75% of the epochs; every
/// epoch after the final drop records the argmax adjacency. Throws
/// DivergenceError when the loss stops being finite.
SearchResult train_search(const ToyTask& task, const DagGraph& start,
                          const SearchConfig& config);

/// Train a fixed architecture (one subset per node) on the task and return
/// its final validation accuracy.
double retrain_fixed(const ToyTask& task, const DagGraph& arch, const SearchConfig& config);

/// Entrywise mean of the recorded argmax adjacencies.
StepGraphon estimate_graphon(const SearchTrace& trace);

/// Fraction of nodes whose incoming edge set matches the planted one exactly.
double planted_recovery(const DagGraph& found, const DagGraph& planted);

}  // namespace graphon
