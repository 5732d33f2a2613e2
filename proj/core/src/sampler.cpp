#include "graphon/sampler.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "graphon/errors.hpp"
#include "graphon/parallel.hpp"
#include "graphon/rng.hpp"

namespace graphon {

std::string report_to_json(const SampleReport& report) {
    nlohmann::json j;
    j["n"] = report.n;
    j["trials"] = report.trials;
    j["distances"] = report.distances;
    j["threshold"] = report.threshold;
    j["violations"] = report.violations;
    j["exact"] = report.exact;
    return j.dump(2);
}

std::string report_to_csv(const SampleReport& report) {
    std::ostringstream os;
    os << "trial,distance,threshold\n";
    os.precision(17);
    for (std::size_t t = 0; t < report.distances.size(); ++t)
        os << t << ',' << report.distances[t] << ',' << report.threshold << '\n';
    return os.str();
}

WeightedGraph sample_simple(const WeightedGraph& g, std::uint64_t seed) {
    require_valid(g);
    const int n = g.size();
    Rng rng = make_rng(seed);
    WeightedGraph out;
    out.alpha = g.alpha;
    out.symmetric = g.symmetric;
    out.beta = Matrix(n, n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const bool edge = bernoulli(rng, g.beta(i, j));
            if (!edge) continue;
            out.beta(i, j) = 1.0;
            if (g.symmetric) out.beta(j, i) = 1.0;
        }
    return out;
}

DagGraph as_dag(const WeightedGraph& sample) {
    const int n = sample.size();
    Matrix adj(n, n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double b = sample.beta(i, j);
            if (b == 0.0) continue;
            if (b != 1.0 || i >= j)
                throw ValidationError("dag view requires an upper-triangular 0/1 graph");
            adj(i, j) = 1.0;
        }
    return DagGraph{std::move(adj)};
}

std::pair<WeightedGraph, ScalePlan> scale_and_sample(const WeightedGraph& g, int target_n,
                                                     std::uint64_t seed) {
    auto [scaled, plan] = fractional_blowup(g, target_n);
    return {sample_simple(scaled, seed), plan};
}

SampleReport concentration_experiment(const WeightedGraph& g, int trials, std::uint64_t seed,
                                      const CutConfig& cfg, int restarts, int threads) {
    require_valid(g);
    SampleReport report;
    report.n = g.size();
    report.trials = trials;
    report.threshold = 4.0 / std::sqrt(static_cast<double>(g.size()));
    report.exact = g.size() <= cfg.exact_limit;
    if (trials <= 0) return report;
    report.distances.assign(static_cast<std::size_t>(trials), 0.0);
    parallel_for(trials, threads, [&](int t) {
        const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(t));
        const WeightedGraph sample = sample_simple(g, s);
        const CutResult r = report.exact
                                ? cut_distance_exact(g, sample, cfg)
                                : cut_distance_local_search(g, sample, restarts,
                                                            derive_seed(s, 1), cfg);
        report.distances[static_cast<std::size_t>(t)] = r.value;
    });
    for (double d : report.distances)
        if (d >= report.threshold) ++report.violations;
    return report;
}

Matrix sample_digraph(const Digraphon& d, std::uint64_t seed) {
    require_valid(d);
    const int n = d.resolution();
    Rng rng = make_rng(seed);
    Matrix adj(n, n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double u = uniform01(rng);
            const double none = d.w00(i, j);
            const double fwd = d.w01(i, j);
            const double back = d.w10(i, j);
            if (u < none) {
                // no edge
            } else if (u < none + fwd) {
                adj(i, j) = 1.0;
            } else if (u < none + fwd + back) {
                adj(j, i) = 1.0;
            } else {
                adj(i, j) = 1.0;
                adj(j, i) = 1.0;
            }
        }
    for (int i = 0; i < n; ++i)
        if (bernoulli(rng, d.self_loop[static_cast<std::size_t>(i)])) adj(i, i) = 1.0;
    return adj;
}

}  // namespace graphon
