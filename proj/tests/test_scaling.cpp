#include <doctest.h>

#include <cmath>

#include "graphon/cut_distance.hpp"
#include "graphon/errors.hpp"
#include "graphon/overlay.hpp"
#include "graphon/scaling.hpp"
#include "test_helpers.hpp"

using namespace graphon;

TEST_CASE("blow-up by one is the identity") {
    const WeightedGraph g = testutil::random_uniform_graph(4, 9);
    const WeightedGraph same = blowup_k(g, 1);
    CHECK(same.beta == g.beta);
    CHECK(same.alpha == g.alpha);
}

TEST_CASE("two-node blow-up pattern") {
    const WeightedGraph g = testutil::uniform_graph(2, {0.7});
    const WeightedGraph b = blowup_k(g, 2);
    REQUIRE(b.size() == 4);
    for (double a : b.alpha) CHECK(a == doctest::Approx(0.25));
    // copies 0,1 come from node 0; copies 2,3 from node 1
    CHECK(b.beta(0, 1) == 0.0);
    CHECK(b.beta(2, 3) == 0.0);
    for (int p = 0; p < 2; ++p)
        for (int q = 2; q < 4; ++q) {
            CHECK(b.beta(p, q) == doctest::Approx(0.7));
            CHECK(b.beta(q, p) == doctest::Approx(0.7));
        }
    CHECK(validate(b).ok());
}

TEST_CASE("repeated blow-up composes multiplicatively") {
    const WeightedGraph g = testutil::random_uniform_graph(3, 21);
    const WeightedGraph ab = blowup_k(blowup_k(g, 2), 3);
    const WeightedGraph direct = blowup_k(g, 6);
    CHECK(ab.beta == direct.beta);
    CHECK(ab.alpha == direct.alpha);
}

TEST_CASE("split preserves weight and coarse cuts") {
    const WeightedGraph g = testutil::random_uniform_graph(5, 33);
    const WeightedGraph s = split_node(g, 2, 3);
    REQUIRE(s.size() == 7);
    double sum = 0.0;
    for (double a : s.alpha) sum += a;
    CHECK(sum == doctest::Approx(1.0));
    CHECK(validate(s).ok());

    // a cut that keeps all copies together evaluates identically
    // original S={0,2}, T={1,3,4} -> copies of 2 are nodes 2,3,4
    const double before = cut_size({0, 2}, {1, 3, 4}, g);
    const double after = cut_size({0, 2, 3, 4}, {1, 5, 6}, s);
    CHECK(after == doctest::Approx(before).epsilon(1e-12));

    CHECK_THROWS_AS(split_node(g, 9, 2), ValidationError);
    CHECK_THROWS_AS(split_node(g, 0, 1), ValidationError);
}

TEST_CASE("splitting every node equals the blow-up") {
    const WeightedGraph g = testutil::random_uniform_graph(4, 55);
    WeightedGraph all_split = g;
    for (int i = 3; i >= 0; --i) all_split = split_node(all_split, i, 3);
    const WeightedGraph blown = blowup_k(g, 3);
    CHECK(all_split.beta == blown.beta);
    for (int i = 0; i < all_split.size(); ++i)
        CHECK(all_split.alpha[i] == doctest::Approx(blown.alpha[i]).epsilon(1e-15));
}

TEST_CASE("weight shifting") {
    const WeightedGraph g = testutil::random_uniform_graph(4, 3);
    const WeightedGraph s = shift_weights(g, 2);
    CHECK(s.alpha[0] == doctest::Approx(1.0 / 3));
    CHECK(s.alpha[1] == doctest::Approx(1.0 / 3));
    CHECK(s.alpha[2] == doctest::Approx(1.0 / 6));
    CHECK(s.alpha[3] == doctest::Approx(1.0 / 6));
    double sum = 0.0;
    for (double a : s.alpha) sum += a;
    CHECK(sum == doctest::Approx(1.0));
    CHECK(s.beta == g.beta);

    CHECK_THROWS_AS(shift_weights(g, 0), InfeasibleError);
    CHECK_THROWS_AS(shift_weights(g, 4), InfeasibleError);
    CHECK_THROWS_AS(shift_weights(s, 1), InfeasibleError);  // no longer uniform
}

TEST_CASE("fractional blow-up composition and plan") {
    const WeightedGraph g = testutil::random_uniform_graph(4, 77);

    // exact multiple: pure blow-up, zero bound
    const auto [pure, pure_plan] = fractional_blowup(g, 8);
    CHECK(pure.beta == blowup_k(g, 2).beta);
    CHECK(pure_plan.bound == 0.0);
    CHECK(pure_plan.m == 0);

    // n=4 -> N=6: k=1, m=2, bound = spread * (2*2)/(4*6) = spread/6
    const auto [six, plan6] = fractional_blowup(g, 6);
    REQUIRE(six.size() == 6);
    for (double a : six.alpha) CHECK(a == doctest::Approx(1.0 / 6).epsilon(1e-14));
    CHECK(plan6.k == 1);
    CHECK(plan6.m == 2);
    CHECK(plan6.bound == doctest::Approx(edge_weight_spread(g) / 6.0).epsilon(1e-15));
    CHECK(validate(six).ok());

    // n=4 -> N=5: bound = spread * 3/20
    const auto [five, plan5] = fractional_blowup(g, 5);
    REQUIRE(five.size() == 5);
    CHECK(plan5.bound == doctest::Approx(edge_weight_spread(g) * 3.0 / 20.0).epsilon(1e-15));

    // spread=1 gives the bound 1/6 at n=4, m=2, bit-exactly
    const WeightedGraph unit = testutil::uniform_graph(4, {0, 1, 0, 1, 0, 1});
    CHECK(fractional_blowup(unit, 6).second.bound == 1.0 / 6.0);

    CHECK_THROWS_AS(fractional_blowup(g, 3), InfeasibleError);
}

TEST_CASE("fractional blow-up keeps DAG orientation") {
    const DagGraph d = testutil::random_dag(5, 0.5, 8);
    const WeightedGraph g = dag_to_weighted(d);
    const auto [scaled, plan] = fractional_blowup(g, 8);
    CHECK(validate(scaled).ok());
    for (int i = 0; i < scaled.size(); ++i)
        for (int j = 0; j <= i; ++j) CHECK(scaled.beta(i, j) == 0.0);
}

TEST_CASE("row expansion carries the pinned row sum") {
    // row [a,b,c] expands so the sum is (k+1)/2*a + k*b + k*c
    const std::vector<double> row{0.9, 0.3, 0.6};
    for (int k = 1; k <= 5; ++k) {
        const std::vector<double> expanded = expand_row_linear(row, k);
        REQUIRE(expanded.size() == row.size() * static_cast<std::size_t>(k));
        double sum = 0.0;
        for (double v : expanded) sum += v;
        const double want = (k + 1) / 2.0 * 0.9 + k * 0.3 + k * 0.6;
        CHECK(sum == doctest::Approx(want).epsilon(1e-12));
    }
    // k=2 spelled out: [a, (a+b)/2, b, (b+c)/2, c, c/2]
    const std::vector<double> two = expand_row_linear(row, 2);
    const std::vector<double> want{0.9, 0.6, 0.3, 0.45, 0.6, 0.3};
    REQUIRE(two.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i)
        CHECK(two[i] == doctest::Approx(want[i]).epsilon(1e-15));
}

TEST_CASE("interpolation identity and validity") {
    const WeightedGraph g = testutil::uniform_graph(3, {0.9, 0.3, 0.6}, /*symmetric=*/false);
    const WeightedGraph same = interpolate_1d(g, 1);
    CHECK(same.beta == g.beta);

    const WeightedGraph up = interpolate_1d(g, 3);
    CHECK(up.size() == 9);
    CHECK(validate(up).ok());
    CHECK_FALSE(up.symmetric);

    CHECK_THROWS_AS(interpolate_1d(testutil::uniform_graph(3, {0.5, 0.5, 0.5}), 2),
                    ValidationError);
}

TEST_CASE("blow-up dominates interpolation under the partition bound") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const int n = 3 + static_cast<int>(seed % 3);
        const int k = 2 + static_cast<int>(seed % 2);
        const WeightedGraph g = testutil::random_uniform_graph(n, seed + 70, false);
        // pick an m satisfying the non-zero boundary column hypothesis
        int m = -1;
        for (int cand = 1; cand < n; ++cand) {
            double colsum = 0.0;
            for (int i = 0; i < cand; ++i) colsum += g.beta(i, cand);
            if (colsum > 1e-9) {
                m = cand;
                break;
            }
        }
        REQUIRE(m > 0);
        const double interp_bound = interpolation_partition_bound(g, k, m);
        CHECK(interp_bound > 0.0);
        const OverlayEval blow =
            overlay_distance(g, blowup_k(g, k), blowup_alignment(n, k));
        CHECK(blow.cut.value == 0.0);
    }
}

TEST_CASE("scaled graphs stay valid") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const int n = 3 + static_cast<int>(seed % 4);
        const WeightedGraph g = testutil::random_uniform_graph(n, seed);
        const int target = n + 1 + static_cast<int>(seed % (2 * n));
        const auto [scaled, plan] = fractional_blowup(g, target);
        CHECK(validate(scaled).ok());
        CHECK(scaled.size() == target);
        CHECK(plan.target_n == target);
        CHECK((plan.bound == 0.0) == (plan.m == 0));
        for (double a : scaled.alpha) CHECK(a == doctest::Approx(1.0 / target).epsilon(1e-12));
    }
}
