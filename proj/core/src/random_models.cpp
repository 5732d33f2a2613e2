#include "graphon/random_models.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "graphon/errors.hpp"
#include "graphon/parallel.hpp"
#include "graphon/rng.hpp"

namespace graphon {

StepGraphon er_graphon(const ErParams& params, int resolution) {
    if (params.p < 0.0 || params.p > 1.0)
        throw ValidationError("er: p must lie in [0,1]");
    if (resolution < 1) throw ValidationError("er: resolution must be positive");
    Matrix values(resolution, resolution, params.p);
    for (int i = 0; i < resolution; ++i) values(i, i) = 0.0;
    return StepGraphon{std::move(values)};
}

StepGraphon ws_graphon(const WsParams& params, int resolution) {
    const int n = resolution;
    if (params.kappa <= 0.0 || params.kappa >= 1.0)
        throw ValidationError("ws: kappa must lie in (0,1)");
    if (params.p < 0.0 || params.p > 1.0)
        throw ValidationError("ws: p must lie in [0,1]");
    if (n < 1 || params.kappa * n < 1.0)
        throw InfeasibleError("ws: kappa*n must be at least 1");
    const double off_band = params.p * params.kappa / (1.0 - params.kappa);
    if (off_band > 1.0)
        throw InfeasibleError("ws: rewired density p*kappa/(1-kappa) exceeds 1");
    Matrix values(n, n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const int d = std::min(std::abs(i - j), n - std::abs(i - j));
            const bool in_band = static_cast<double>(d) / n <= params.kappa / 2.0;
            values(i, j) = in_band ? 1.0 - params.p : off_band;
        }
    return StepGraphon{std::move(values)};
}

DagGraph ba_sample(const BaParams& params, std::uint64_t seed) {
    const int n = params.n, m0 = params.m0, m = params.m;
    if (!(1 <= m && m <= m0 && m0 < n))
        throw ValidationError("ba: parameters must satisfy 1 <= m <= m0 < n");
    Rng rng = make_rng(seed);
    Matrix adj(n, n, 0.0);
    std::vector<double> degree(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < m0; ++i)
        for (int j = i + 1; j < m0; ++j) {
            adj(i, j) = 1.0;
            degree[i] += 1.0;
            degree[j] += 1.0;
        }
    std::vector<double> weight(static_cast<std::size_t>(n), 0.0);
    for (int t = m0; t < n; ++t) {
        // degrees frozen at the start of this insertion step
        std::copy(degree.begin(), degree.begin() + t, weight.begin());
        for (int e = 0; e < m; ++e) {
            double total = std::accumulate(weight.begin(), weight.begin() + t, 0.0);
            int pick = -1;
            if (total <= 0.0) {
                // all-zero degrees (tiny seed graphs): fall back to uniform
                int avail = 0;
                for (int j = 0; j < t; ++j) avail += weight[j] >= 0.0 ? 1 : 0;
                int idx = uniform_below(rng, avail);
                for (int j = 0; j < t; ++j) {
                    if (weight[j] < 0.0) continue;
                    if (idx-- == 0) {
                        pick = j;
                        break;
                    }
                }
            } else {
                double r = uniform01(rng) * total;
                for (int j = 0; j < t; ++j) {
                    if (weight[j] < 0.0) continue;
                    r -= weight[j];
                    if (r <= 0.0) {
                        pick = j;
                        break;
                    }
                }
                if (pick < 0) {  // rounding spill
                    for (int j = t - 1; j >= 0; --j)
                        if (weight[j] >= 0.0) {
                            pick = j;
                            break;
                        }
                }
            }
            adj(pick, t) = 1.0;
            degree[pick] += 1.0;
            degree[t] += 1.0;
            weight[pick] = -1.0;  // without replacement within this step
        }
    }
    return DagGraph{std::move(adj)};
}

StepGraphon empirical_graphon(const std::function<Matrix(std::uint64_t)>& generator, int n,
                              int trials, int resolution, std::uint64_t seed, int threads) {
    if (trials < 1) throw ValidationError("empirical: trials must be >= 1");
    if (resolution < 1 || n % resolution != 0)
        throw InfeasibleError("empirical: resolution must divide n");
    std::vector<Matrix> samples(static_cast<std::size_t>(trials));
    parallel_for(trials, threads, [&](int t) {
        samples[static_cast<std::size_t>(t)] = generator(derive_seed(seed, static_cast<std::uint64_t>(t)));
    });
    Matrix mean(n, n, 0.0);
    for (const Matrix& s : samples) {
        if (s.rows() != n || s.cols() != n)
            throw ValidationError("empirical: generator returned wrong shape");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) mean(i, j) += s(i, j);
    }
    const int block = n / resolution;
    Matrix values(resolution, resolution, 0.0);
    for (int a = 0; a < resolution; ++a)
        for (int b = 0; b < resolution; ++b) {
            double acc = 0.0;
            for (int i = a * block; i < (a + 1) * block; ++i)
                for (int j = b * block; j < (b + 1) * block; ++j) acc += mean(i, j);
            values(a, b) = acc / (static_cast<double>(trials) * block * block);
        }
    return StepGraphon{std::move(values)};
}

}  // namespace graphon
