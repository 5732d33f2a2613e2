#include "graphon/scaling.hpp"

#include <cmath>

#include "graphon/errors.hpp"

namespace graphon {

namespace {

void require_uniform(const WeightedGraph& g, const char* op) {
    const double u = 1.0 / g.size();
    for (double a : g.alpha)
        if (std::fabs(a - u) > 1e-12)
            throw InfeasibleError(std::string(op) + " requires uniform nodeweights");
}

bool lower_triangle_zero(const Matrix& beta) {
    for (int i = 0; i < beta.rows(); ++i)
        for (int j = 0; j <= i; ++j)
            if (beta(i, j) != 0.0) return false;
    return true;
}

}  // namespace

ScalePlan make_scale_plan(const WeightedGraph& g, int target_n) {
    const int n = g.size();
    if (target_n < n) throw InfeasibleError("scale plan: target size below source size");
    ScalePlan plan;
    plan.source_n = n;
    plan.target_n = target_n;
    plan.k = target_n / n;
    plan.m = target_n - plan.k * n;
    const double kn = static_cast<double>(plan.k) * n;
    plan.bound = plan.m == 0
                     ? 0.0
                     : edge_weight_spread(g) * (kn - plan.m) * plan.m / (kn * (kn + plan.m));
    return plan;
}

WeightedGraph blowup_k(const WeightedGraph& g, int k) {
    if (k < 1) throw ValidationError("blow-up factor must be >= 1");
    if (k == 1) return g;
    const int n = g.size();
    const int nn = n * k;
    WeightedGraph out;
    out.symmetric = g.symmetric;
    out.alpha.resize(static_cast<std::size_t>(nn));
    for (int i = 0; i < n; ++i)
        for (int p = 0; p < k; ++p) out.alpha[static_cast<std::size_t>(i * k + p)] = g.alpha[i] / k;
    out.beta = Matrix(nn, nn, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double b = g.beta(i, j);
            if (b == 0.0) continue;
            for (int p = 0; p < k; ++p)
                for (int q = 0; q < k; ++q) out.beta(i * k + p, j * k + q) = b;
        }
    return out;
}

WeightedGraph split_node(const WeightedGraph& g, int node, int k) {
    const int n = g.size();
    if (node < 0 || node >= n) throw ValidationError("split: node index out of range");
    if (k < 2) throw ValidationError("split: k must be >= 2");
    const int nn = n + k - 1;
    auto map_old = [&](int idx) { return idx < node ? idx : idx + k - 1; };
    WeightedGraph out;
    out.symmetric = g.symmetric;
    out.alpha.resize(static_cast<std::size_t>(nn));
    for (int i = 0; i < n; ++i) {
        if (i == node) continue;
        out.alpha[static_cast<std::size_t>(map_old(i))] = g.alpha[i];
    }
    for (int c = 0; c < k; ++c) out.alpha[static_cast<std::size_t>(node + c)] = g.alpha[node] / k;
    out.beta = Matrix(nn, nn, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double b = g.beta(i, j);
            if (b == 0.0) continue;
            const bool i_split = i == node, j_split = j == node;
            for (int ci = 0; ci < (i_split ? k : 1); ++ci)
                for (int cj = 0; cj < (j_split ? k : 1); ++cj) {
                    const int ni = i_split ? node + ci : map_old(i);
                    const int nj = j_split ? node + cj : map_old(j);
                    out.beta(ni, nj) = b;
                }
        }
    return out;
}

WeightedGraph shift_weights(const WeightedGraph& g, int m) {
    require_uniform(g, "weight shift");
    const int n = g.size();
    if (m <= 0 || m >= n) throw InfeasibleError("weight shift: m must satisfy 0 < m < n");
    WeightedGraph out = g;
    const double heavy = 2.0 / (n + m);
    const double light = 1.0 / (n + m);
    for (int i = 0; i < n; ++i) out.alpha[static_cast<std::size_t>(i)] = i < m ? heavy : light;
    return out;
}

std::pair<WeightedGraph, ScalePlan> fractional_blowup(const WeightedGraph& g, int target_n) {
    require_uniform(g, "fractional blow-up");
    const ScalePlan plan = make_scale_plan(g, target_n);
    WeightedGraph scaled = blowup_k(g, plan.k);
    if (plan.m > 0) {
        scaled = shift_weights(scaled, plan.m);
        // descending order keeps the indices of the not-yet-split nodes stable
        for (int i = plan.m - 1; i >= 0; --i) scaled = split_node(scaled, i, 2);
    }
    return {std::move(scaled), plan};
}

std::vector<double> expand_row_linear(const std::vector<double>& row, int k) {
    const int n = static_cast<int>(row.size());
    std::vector<double> out(static_cast<std::size_t>(n) * k, 0.0);
    for (int j = 0; j < n; ++j) {
        const double lo = row[static_cast<std::size_t>(j)];
        const double hi = j + 1 < n ? row[static_cast<std::size_t>(j + 1)] : 0.0;
        for (int t = 0; t < k; ++t)
            out[static_cast<std::size_t>(j * k + t)] = ((k - t) * lo + t * hi) / k;
    }
    return out;
}

WeightedGraph interpolate_1d(const WeightedGraph& g, int k) {
    if (k < 1) throw ValidationError("interpolation factor must be >= 1");
    if (g.symmetric || !lower_triangle_zero(g.beta))
        throw ValidationError("1-D interpolation requires an upper-triangular graph");
    require_uniform(g, "1-D interpolation");
    const int n = g.size();
    const int nn = n * k;
    Matrix beta(nn, nn, 0.0);
    std::vector<double> row(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) {
        for (int j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = g.beta(r, j);
        const std::vector<double> expanded = expand_row_linear(row, k);
        for (int copy = 0; copy < k; ++copy) {
            const int i = r * k + copy;
            for (int j = 0; j < nn; ++j) beta(i, j) = expanded[static_cast<std::size_t>(j)];
        }
    }
    for (int i = 0; i < nn; ++i) beta(i, i) = 0.0;
    return WeightedGraph::uniform(std::move(beta), /*symmetric=*/false);
}

}  // namespace graphon
