#include <doctest.h>

#include <cmath>

#include "graphon/errors.hpp"
#include "graphon/random_models.hpp"
#include "graphon/sampler.hpp"
#include "test_helpers.hpp"

using namespace graphon;

TEST_CASE("degenerate edge probabilities") {
    Matrix ones(4, 4, 1.0);
    for (int i = 0; i < 4; ++i) ones(i, i) = 0.0;
    const WeightedGraph complete = sample_simple(WeightedGraph::uniform(ones, true), 3);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(complete.beta(i, j) == (i == j ? 0.0 : 1.0));

    const WeightedGraph empty =
        sample_simple(WeightedGraph::uniform(Matrix(4, 4, 0.0), true), 3);
    for (double v : empty.beta.data()) CHECK(v == 0.0);

    // upper-triangular input gives an upper-triangular (DAG) sample
    Matrix tri(3, 3, 0.0);
    tri(0, 1) = tri(0, 2) = tri(1, 2) = 1.0;
    const WeightedGraph dag = sample_simple(WeightedGraph::uniform(tri, false), 3);
    CHECK(validate(as_dag(dag)).ok());
}

TEST_CASE("sampling is deterministic in the seed") {
    const WeightedGraph g = testutil::random_uniform_graph(10, 4);
    CHECK(sample_simple(g, 42).beta == sample_simple(g, 42).beta);
    CHECK(sample_simple(g, 42).beta != sample_simple(g, 43).beta);
}

TEST_CASE("edge counts follow the binomial mean") {
    const WeightedGraph g = to_weighted(er_graphon({0.5}, 16));
    const int trials = 1000;
    double edges = 0.0;
    for (int t = 0; t < trials; ++t) {
        const WeightedGraph s = sample_simple(g, derive_seed(9, t));
        for (int i = 0; i < 16; ++i)
            for (int j = i + 1; j < 16; ++j) edges += s.beta(i, j);
    }
    const double mean = edges / trials;
    const double want = 0.5 * 120.0;               // p * C(16,2)
    const double sigma = std::sqrt(120.0 * 0.25);  // per-trial binomial sigma ~ 5.5
    CHECK(std::fabs(mean - want) < 3.0 * sigma);
}

TEST_CASE("mean sampled adjacency converges entrywise") {
    const WeightedGraph g = testutil::random_uniform_graph(8, 12);
    const int trials = 1000;
    Matrix mean(8, 8, 0.0);
    for (int t = 0; t < trials; ++t) {
        const WeightedGraph s = sample_simple(g, derive_seed(21, t));
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) mean(i, j) += s.beta(i, j) / trials;
    }
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            if (i == j) continue;
            const double p = g.beta(i, j);
            const double sigma = std::sqrt(std::max(p * (1 - p), 1e-4) / trials);
            CHECK(std::fabs(mean(i, j) - p) < 5.0 * sigma);
        }
}

TEST_CASE("scale and sample") {
    const WeightedGraph g = testutil::random_uniform_graph(4, 5);
    const auto [sample, plan] = scale_and_sample(g, 11, 77);
    CHECK(sample.size() == 11);
    CHECK(plan.k == 2);
    CHECK(plan.m == 3);
    for (double v : sample.beta.data()) CHECK((v == 0.0 || v == 1.0));

    // N = n is a plain Bernoulli sample of g
    const auto [plain, plan0] = scale_and_sample(g, 4, 77);
    CHECK(plain.beta == sample_simple(g, 77).beta);
    CHECK(plan0.bound == 0.0);
}

TEST_CASE("blow-up doubles expected edge count per dimension") {
    const WeightedGraph ws = to_weighted(ws_graphon({0.4, 0.75}, 32));
    double base_expected = 0.0;
    for (int i = 0; i < 32; ++i)
        for (int j = i + 1; j < 32; ++j) base_expected += ws.beta(i, j);
    const int trials = 200;
    double edges = 0.0;
    double variance = 0.0;
    const WeightedGraph doubled = blowup_k(ws, 2);
    for (int i = 0; i < 64; ++i)
        for (int j = i + 1; j < 64; ++j)
            variance += doubled.beta(i, j) * (1.0 - doubled.beta(i, j));
    for (int t = 0; t < trials; ++t) {
        const auto [s, plan] = scale_and_sample(ws, 64, derive_seed(3, t));
        for (int i = 0; i < 64; ++i)
            for (int j = i + 1; j < 64; ++j) edges += s.beta(i, j);
    }
    const double mean = edges / trials;
    // 64 = 2n: expected edges scale by ~4x (minus the vanished within-copy pairs)
    double scaled_expected = 0.0;
    for (int i = 0; i < 64; ++i)
        for (int j = i + 1; j < 64; ++j) scaled_expected += doubled.beta(i, j);
    CHECK(std::fabs(mean - scaled_expected) < 3.0 * std::sqrt(variance / trials));
    CHECK(scaled_expected > 3.5 * base_expected);
}

TEST_CASE("concentration: exact mode sees no threshold violations") {
    const WeightedGraph g = to_weighted(er_graphon({0.5}, 16));
    const SampleReport report = concentration_experiment(g, 200, 5);
    CHECK(report.trials == 200);
    CHECK(report.exact);
    CHECK(report.threshold == doctest::Approx(1.0));
    CHECK(report.violations == 0);
    CHECK(report.distances.size() == 200);

    const SampleReport empty = concentration_experiment(g, 0, 5);
    CHECK(empty.violations == 0);
    CHECK(empty.distances.empty());
}

TEST_CASE("concentration: heuristic mode for large graphs") {
    const WeightedGraph g = to_weighted(er_graphon({0.5}, 64));
    const SampleReport report = concentration_experiment(g, 10, 5, {}, 10);
    CHECK_FALSE(report.exact);
    CHECK(report.violations == 0);  // threshold 0.5 is far above any cut difference
}

TEST_CASE("concentration report is independent of the worker count") {
    const WeightedGraph g = to_weighted(er_graphon({0.5}, 12));
    const SampleReport serial = concentration_experiment(g, 40, 9, {}, 50, 1);
    const SampleReport threaded = concentration_experiment(g, 40, 9, {}, 50, 4);
    CHECK(serial.distances == threaded.distances);
}

TEST_CASE("concentration means shrink with n") {
    auto mean_at = [](int n) {
        const WeightedGraph g = to_weighted(er_graphon({0.5}, n));
        const SampleReport r = concentration_experiment(g, 200, 13);
        double sum = 0.0;
        for (double d : r.distances) sum += d;
        return sum / r.distances.size();
    };
    const double at8 = mean_at(8);
    const double at12 = mean_at(12);
    const double at16 = mean_at(16);
    CHECK(at8 > at12);
    CHECK(at12 > at16);
}

TEST_CASE("report serialization") {
    const WeightedGraph g = to_weighted(er_graphon({0.5}, 8));
    const SampleReport r = concentration_experiment(g, 3, 1);
    const std::string json = report_to_json(r);
    CHECK(json.find("\"violations\"") != std::string::npos);
    const std::string csv = report_to_csv(r);
    CHECK(csv.rfind("trial,distance,threshold\n", 0) == 0);
    int lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 4);  // header + 3 trials
}

TEST_CASE("digraphon sampling") {
    const int n = 4;
    Digraphon d;
    d.w00 = Matrix(n, n, 0.0);
    d.w01 = Matrix(n, n, 0.0);
    d.w10 = Matrix(n, n, 0.0);
    d.w11 = Matrix(n, n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i < j) d.w01(i, j) = 1.0;
            if (i > j) d.w10(i, j) = 1.0;
            if (i == j) d.w00(i, j) = 1.0;
        }
    d.self_loop = {1.0, 0.0, 0.0, 1.0};
    const Matrix adj = sample_digraph(d, 3);
    // w01 = 1 for i<j forces every forward edge and no backward ones
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i < j) CHECK(adj(i, j) == 1.0);
            if (i > j) CHECK(adj(i, j) == 0.0);
        }
    CHECK(adj(0, 0) == 1.0);
    CHECK(adj(1, 1) == 0.0);
    CHECK(adj(3, 3) == 1.0);

    // frequencies: a both-ways pair appears with probability w11
    Digraphon both;
    both.w00 = Matrix(2, 2, 0.25);
    both.w01 = Matrix(2, 2, 0.25);
    both.w10 = Matrix(2, 2, 0.25);
    both.w11 = Matrix(2, 2, 0.25);
    both.self_loop = {0.0, 0.0};
    int fwd = 0, back = 0, twin = 0;
    const int trials = 4000;
    for (int t = 0; t < trials; ++t) {
        const Matrix a = sample_digraph(both, derive_seed(8, t));
        if (a(0, 1) == 1.0 && a(1, 0) == 1.0)
            ++twin;
        else if (a(0, 1) == 1.0)
            ++fwd;
        else if (a(1, 0) == 1.0)
            ++back;
    }
    CHECK(std::fabs(fwd / double(trials) - 0.25) < 0.03);
    CHECK(std::fabs(back / double(trials) - 0.25) < 0.03);
    CHECK(std::fabs(twin / double(trials) - 0.25) < 0.03);
}
