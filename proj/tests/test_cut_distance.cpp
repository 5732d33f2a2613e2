#include <doctest.h>

#include <cmath>

#include "graphon/cut_distance.hpp"
#include "graphon/errors.hpp"
#include "graphon/overlay.hpp"
#include "graphon/random_models.hpp"
#include "graphon/sampler.hpp"
#include "graphon/scaling.hpp"
#include "test_helpers.hpp"

using namespace graphon;

TEST_CASE("cut size basics") {
    const WeightedGraph two = testutil::uniform_graph(2, {1.0});
    CHECK(cut_size({0}, {1}, two) == doctest::Approx(0.25));
    CHECK(cut_size({}, {1}, two) == 0.0);

    const WeightedGraph four = testutil::uniform_graph(4, {1, 1, 1, 1, 1, 1});
    CHECK(cut_size({0, 1}, {2, 3}, four) == doctest::Approx(0.25));

    CHECK_THROWS_AS(cut_size({0, 1}, {1, 2}, four), ValidationError);
    CHECK_THROWS_AS(cut_size({0}, {9}, four), ValidationError);
}

TEST_CASE("exact cut distance on hand cases") {
    const WeightedGraph a = testutil::uniform_graph(2, {1.0});
    const WeightedGraph b = testutil::uniform_graph(2, {0.0});

    const CutResult same = cut_distance_exact(a, a);
    CHECK(same.value == 0.0);
    CHECK(same.exact);

    const CutResult r = cut_distance_exact(a, b);
    CHECK(r.value == doctest::Approx(0.25));
    REQUIRE(r.subset.size() == 1);
    CHECK(cut_difference_at(r.subset, a, b) == doctest::Approx(r.value));
}

TEST_CASE("exact cut distance matches the brute-force oracle") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const int n = 3 + static_cast<int>(seed % 6);
        const bool symmetric = seed % 3 != 0;
        const WeightedGraph a = testutil::random_uniform_graph(n, seed, symmetric);
        const WeightedGraph b = testutil::random_uniform_graph(n, seed + 1000, symmetric);
        const CutResult r = cut_distance_exact(a, b);
        CHECK(r.value == doctest::Approx(testutil::oracle_cut_distance(a, b)).epsilon(1e-12));
        CHECK(cut_difference_at(r.subset, a, b) == doctest::Approx(r.value).epsilon(1e-12));
    }
}

TEST_CASE("exact cut distance rejects infeasible inputs") {
    const WeightedGraph a = testutil::random_uniform_graph(3, 1);
    const WeightedGraph b = testutil::random_uniform_graph(4, 2);
    CHECK_THROWS_AS(cut_distance_exact(a, b), ValidationError);

    WeightedGraph c = testutil::random_uniform_graph(3, 3);
    c.alpha = {0.5, 0.25, 0.25};
    CHECK_THROWS_AS(cut_distance_exact(a, c), ValidationError);

    CutConfig tiny;
    tiny.exact_limit = 2;
    CHECK_THROWS_AS(cut_distance_exact(a, testutil::random_uniform_graph(3, 4), tiny),
                    InfeasibleError);
}

TEST_CASE("local search never exceeds exact and usually matches it") {
    int matches = 0;
    const int cases = 60;
    for (std::uint64_t seed = 0; seed < cases; ++seed) {
        const int n = 4 + static_cast<int>(seed % 9);  // up to 12
        const WeightedGraph a = testutil::random_uniform_graph(n, seed);
        const WeightedGraph b = testutil::random_uniform_graph(n, seed + 5000);
        const CutResult exact = cut_distance_exact(a, b);
        const CutResult heur = cut_distance_local_search(a, b, 20, seed);
        CHECK(heur.value <= exact.value + 1e-12);
        CHECK_FALSE(heur.exact);
        CHECK(cut_difference_at(heur.subset, a, b) == doctest::Approx(heur.value).epsilon(1e-12));
        if (heur.value >= exact.value - 1e-9) ++matches;
    }
    CHECK(matches >= cases * 9 / 10);
    CHECK(cut_distance_local_search(testutil::random_uniform_graph(5, 1),
                                    testutil::random_uniform_graph(5, 1), 8, 0)
              .value == 0.0);
}

TEST_CASE("metric axioms hold for the exact distance") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const int n = 4 + static_cast<int>(seed % 7);  // up to 10
        const WeightedGraph a = testutil::random_uniform_graph(n, 3 * seed);
        const WeightedGraph b = testutil::random_uniform_graph(n, 3 * seed + 1);
        const WeightedGraph c = testutil::random_uniform_graph(n, 3 * seed + 2);
        const double ab = cut_distance_exact(a, b).value;
        const double ba = cut_distance_exact(b, a).value;
        const double ac = cut_distance_exact(a, c).value;
        const double cb = cut_distance_exact(c, b).value;
        CHECK(cut_distance_exact(a, a).value == 0.0);
        CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
        CHECK(ab <= ac + cb + 1e-12);
    }
}

TEST_CASE("distance between independent half-density samples shrinks with n") {
    auto median_distance = [](int n) {
        std::vector<double> values;
        const WeightedGraph model = to_weighted(er_graphon({0.5}, n));
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const WeightedGraph a = sample_simple(model, derive_seed(seed, 1));
            const WeightedGraph b = sample_simple(model, derive_seed(seed, 2));
            values.push_back(cut_distance_exact(a, b).value);
        }
        std::sort(values.begin(), values.end());
        return values[values.size() / 2];
    };
    const double at8 = median_distance(8);
    const double at16 = median_distance(16);
    CHECK(at8 > at16);
    CHECK(at16 < 4.0 / std::sqrt(16.0));
}

TEST_CASE("relabeling distance, exact mode") {
    // permuting a graph's nodes keeps the relabeling distance at zero
    const WeightedGraph g = testutil::random_uniform_graph(5, 11);
    WeightedGraph permuted;
    permuted.symmetric = g.symmetric;
    permuted.alpha = g.alpha;
    permuted.beta = Matrix(5, 5, 0.0);
    const int perm[5] = {3, 1, 4, 0, 2};
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) permuted.beta(i, j) = g.beta(perm[i], perm[j]);
    const CutResult r = isomorphism_distance(g, permuted, IsoMode::exact);
    CHECK(r.value == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.exact);

    const WeightedGraph a = testutil::uniform_graph(2, {1.0});
    const WeightedGraph b = testutil::uniform_graph(2, {0.0});
    CHECK(isomorphism_distance(a, b, IsoMode::exact).value == doctest::Approx(0.25));

    CutConfig cfg;
    cfg.iso_exact_limit = 4;
    CHECK_THROWS_AS(isomorphism_distance(testutil::random_uniform_graph(5, 1),
                                         testutil::random_uniform_graph(5, 2), IsoMode::exact,
                                         cfg),
                    InfeasibleError);
}

TEST_CASE("relabeling distance matches the permutation oracle") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const int n = 3 + static_cast<int>(seed % 3);
        const WeightedGraph a = testutil::random_uniform_graph(n, seed + 40);
        const WeightedGraph b = testutil::random_uniform_graph(n, seed + 90);
        const double oracle = testutil::oracle_iso_distance(a, b);
        CHECK(isomorphism_distance(a, b, IsoMode::exact).value ==
              doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("heuristic relabeling distance upper-bounds the exact one") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const int n = 4 + static_cast<int>(seed % 4);  // up to 7
        const WeightedGraph a = testutil::random_uniform_graph(n, seed + 17);
        const WeightedGraph b = testutil::random_uniform_graph(n, seed + 117);
        const double exact = isomorphism_distance(a, b, IsoMode::exact).value;
        const CutResult heur = isomorphism_distance(a, b, IsoMode::heuristic, {}, seed);
        CHECK(heur.value >= exact - 1e-12);
        CHECK_FALSE(heur.exact);
    }
}

TEST_CASE("overlay distance: identity coupling, blow-up alignment, weight shift") {
    const WeightedGraph g = testutil::random_uniform_graph(5, 23);

    const OverlayEval self = overlay_distance(g, g, diag_min_overlay(g, g));
    CHECK(self.cut.value == 0.0);
    CHECK(self.support == 5);

    for (int k = 2; k <= 4; ++k) {
        const WeightedGraph blown = blowup_k(g, k);
        const OverlayEval eval = overlay_distance(g, blown, blowup_alignment(5, k));
        CHECK(eval.cut.value == 0.0);
        CHECK(eval.support == 5 * k);
    }

    // diagonal-min coupling against the weight-shifted graph stays within
    // twice the stated bound
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const int n = 4 + static_cast<int>(seed % 4);
        const int m = 1 + static_cast<int>(seed % (n - 1));
        const WeightedGraph base = testutil::random_uniform_graph(n, seed + 300);
        const WeightedGraph shifted = shift_weights(base, m);
        const OverlayEval eval = overlay_distance(base, shifted, diag_min_overlay(base, shifted));
        const double spread = edge_weight_spread(base);
        const double bound = 2.0 * spread * m * (n - m) / (static_cast<double>(n) * (n + m));
        CHECK(eval.cut.value <= bound + 1e-9);
    }
}

TEST_CASE("overlay validation rejects broken couplings") {
    const WeightedGraph a = testutil::random_uniform_graph(3, 1);
    const WeightedGraph b = testutil::random_uniform_graph(3, 2);
    Matrix bad(3, 3, 0.0);
    bad(0, 0) = 1.0;  // row sums way off
    CHECK_FALSE(validate_overlay(a, b, {bad}).ok());
    CHECK_THROWS_AS(overlay_distance(a, b, {bad}), ValidationError);
    CHECK(validate_overlay(a, b, interval_overlay(a, b)).ok());
}

TEST_CASE("optimized overlay bound") {
    const WeightedGraph g = testutil::random_uniform_graph(5, 77);
    CHECK(optimize_overlay(g, g).cut.value <= 1e-9);

    const WeightedGraph blown = blowup_k(g, 3);
    CHECK(optimize_overlay(g, blown).cut.value <= 1e-9);

    // never worse than the diagonal-min construction on the same pair
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const WeightedGraph a = testutil::random_uniform_graph(4, seed + 500);
        const WeightedGraph b = testutil::random_uniform_graph(4, seed + 600);
        const double diag = overlay_distance(a, b, diag_min_overlay(a, b)).cut.value;
        OverlayOptimizeOptions opt;
        opt.seed = seed;
        CHECK(optimize_overlay(a, b, opt).cut.value <= diag + 1e-12);
    }
}

TEST_CASE("optimized bound never exceeds the interval coupling evaluation") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const int n = 3 + static_cast<int>(seed % 3);
        const int target = n + 1 + static_cast<int>(seed % n);
        const WeightedGraph a = testutil::random_uniform_graph(n, seed + 800);
        const auto [b, plan] = fractional_blowup(a, target);
        const double interval = overlay_distance(a, b, interval_overlay(a, b)).cut.value;
        OverlayOptimizeOptions opt;
        opt.iterations = 10;
        opt.seed = seed;
        const double optimized = optimize_overlay(a, b, opt, {}).cut.value;
        CHECK(optimized <= interval + 1e-12);
    }
}

TEST_CASE("borgs inequality check") {
    CHECK(borgs_inequality_holds(0.0, 0.0));
    CHECK(borgs_inequality_holds(0.5, 1e-10));  // (0.5/32)^67 is astronomically small
    CHECK_FALSE(borgs_inequality_holds(32.0, 0.0));
    CHECK_THROWS_AS(borgs_inequality_holds(-1.0, 0.0), ValidationError);
}

TEST_CASE("interpolation partition bound: closed form equals the direct cut") {
    // beta(0,1)=0.9, beta(0,2)=0.3, beta(1,2)=0.5
    const WeightedGraph g = testutil::uniform_graph(3, {0.9, 0.3, 0.5}, /*symmetric=*/false);

    const double m1 = interpolation_partition_bound(g, 2, 1);
    CHECK(m1 == doctest::Approx(0.9 / 36.0).epsilon(1e-12));
    const double m2 = interpolation_partition_bound(g, 2, 2);
    CHECK(m2 == doctest::Approx(0.8 / 36.0).epsilon(1e-12));

    // independent direct evaluation through cut_size on the two scaled graphs
    for (int m = 1; m <= 2; ++m) {
        const int k = 2, n = 3;
        const WeightedGraph blown = blowup_k(g, k);
        const WeightedGraph interp = interpolate_1d(g, k);
        std::vector<int> s, t;
        for (int i = 0; i < k * m; ++i) s.push_back(i);
        for (int i = k * m; i < k * n; ++i) t.push_back(i);
        const double direct =
            std::fabs(cut_size(s, t, blown) + cut_size(t, s, blown) - cut_size(s, t, interp) -
                      cut_size(t, s, interp));
        CHECK(interpolation_partition_bound(g, k, m) ==
              doctest::Approx(direct).epsilon(1e-12));
    }

    CHECK(interpolation_partition_bound(g, 1, 1) == 0.0);

    const WeightedGraph zero = testutil::uniform_graph(3, {0.0, 0.0, 0.0}, false);
    CHECK_THROWS_AS(interpolation_partition_bound(zero, 2, 1), InfeasibleError);
}
