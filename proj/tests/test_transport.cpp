#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gbsm/transport.hpp"

using namespace gbsm;

namespace {

Distribution random_dist(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.01, 1.0);
    std::vector<double> v(n);
    double sum = 0.0;
    for (double& x : v) sum += (x = u(rng));
    for (double& x : v) x /= sum;
    return Distribution::from(std::move(v));
}

std::vector<double> random_cost(std::mt19937_64& rng, int n, int m, double lo = 0.0,
                                double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> c(static_cast<size_t>(n) * m);
    for (double& x : c) x = u(rng);
    return c;
}

} // namespace

TEST_CASE("identity transport costs nothing and uses the diagonal plan") {
    const auto p = Distribution::from({0.2, 0.3, 0.5});
    std::vector<double> cost(9, 1.0);
    cost[0] = cost[4] = cost[8] = 0.0;
    const TransportSolution sol = wasserstein1(p, p, cost, 3, 3);
    CHECK(sol.cost == doctest::Approx(0.0).epsilon(1e-12));
    for (int i = 0; i < 3; ++i) CHECK(sol.plan_at(i, i) == doctest::Approx(p.probs[i]));
}

TEST_CASE("all mass must move between disjoint point masses") {
    const auto p = Distribution::from({1.0, 0.0});
    const auto q = Distribution::from({0.0, 1.0});
    const std::vector<double> cost{0.0, 3.0, 3.0, 0.0};
    CHECK(wasserstein1(p, q, cost, 2, 2).cost == doctest::Approx(3.0));
}

TEST_CASE("two-point instance solved by hand") {
    const auto p = Distribution::from({0.5, 0.5});
    const auto q = Distribution::from({0.25, 0.75});
    const std::vector<double> cost{0.0, 1.0, 1.0, 0.0};
    CHECK(wasserstein1(p, q, cost, 2, 2).cost == doctest::Approx(0.25));
}

TEST_CASE("plan satisfies marginal constraints") {
    std::mt19937_64 rng(5);
    const auto p = random_dist(rng, 5);
    const auto q = random_dist(rng, 4);
    const auto cost = random_cost(rng, 5, 4);
    const TransportSolution sol = wasserstein1(p, q, cost, 5, 4);
    double recomputed = 0.0;
    for (int i = 0; i < 5; ++i) {
        double row = 0.0;
        for (int j = 0; j < 4; ++j) {
            CHECK(sol.plan_at(i, j) >= -1e-12);
            row += sol.plan_at(i, j);
            recomputed += sol.plan_at(i, j) * cost[static_cast<size_t>(i) * 4 + j];
        }
        CHECK(row == doctest::Approx(p.probs[i]).epsilon(1e-8));
    }
    for (int j = 0; j < 4; ++j) {
        double col = 0.0;
        for (int i = 0; i < 5; ++i) col += sol.plan_at(i, j);
        CHECK(col == doctest::Approx(q.probs[j]).epsilon(1e-8));
    }
    CHECK(recomputed == doctest::Approx(sol.cost).epsilon(1e-8));
}

TEST_CASE("oracle handles the trivial cases") {
    const auto p = Distribution::from({0.4, 0.6});
    const std::vector<double> cost{0.0, 1.0, 1.0, 0.0};
    CHECK(wasserstein1_oracle(p, p, cost, 2, 2) == doctest::Approx(0.0).epsilon(1e-9));

    const auto a = Distribution::from({1.0, 0.0});
    const auto b = Distribution::from({0.0, 1.0});
    const std::vector<double> c2{0.0, 0.7, 0.7, 0.0};
    CHECK(wasserstein1_oracle(a, b, c2, 2, 2) == doctest::Approx(0.7));
}

TEST_CASE("oracle rejects instances larger than 6 points") {
    std::mt19937_64 rng(1);
    const auto p = random_dist(rng, 7);
    const auto q = random_dist(rng, 7);
    const auto cost = random_cost(rng, 7, 7);
    CHECK_THROWS_AS(wasserstein1_oracle(p, q, cost, 7, 7), TooLarge);
}

TEST_CASE("solver matches the oracle on 200 random 4x4 instances") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = random_dist(rng, 4);
        const auto q = random_dist(rng, 4);
        const auto cost = random_cost(rng, 4, 4);
        const double fast = wasserstein1(p, q, cost, 4, 4).cost;
        const double slow = wasserstein1_oracle(p, q, cost, 4, 4);
        CHECK(std::abs(fast - slow) <= 1e-6);
    }
}

TEST_CASE("warm simplex matches the path solver across drifting costs") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 6);
        const int m = 3 + static_cast<int>(rng() % 6);
        const auto p = random_dist(rng, n);
        const auto q = random_dist(rng, m);
        std::vector<int> pidx(n), qidx(m);
        for (int i = 0; i < n; ++i) pidx[i] = i;
        for (int j = 0; j < m; ++j) qidx[j] = j;

        detail::WarmSimplex warm;
        warm.reset(pidx.data(), p.probs.data(), n, qidx.data(), q.probs.data(), m);
        detail::SimplexWorkspace sws;
        detail::TransportWorkspace tws;

        auto cost = random_cost(rng, n, std::max(n, m));
        std::uniform_real_distribution<double> bump(0.0, 0.05);
        for (int step = 0; step < 25; ++step) {
            for (double& c : cost) c += bump(rng);  // nondecreasing drift, like the iterates
            const double a = warm.solve(cost.data(), std::max(n, m), sws);
            const double b = detail::w1_support(pidx.data(), p.probs.data(), n, qidx.data(),
                                                q.probs.data(), m, cost.data(), std::max(n, m),
                                                tws);
            CHECK(std::abs(a - b) <= 1e-9);
        }
    }
}

TEST_CASE("total variation basics") {
    const auto p = Distribution::from({0.5, 0.5});
    CHECK(total_variation(p, p) == doctest::Approx(0.0));
    const auto a = Distribution::from({1.0, 0.0});
    const auto b = Distribution::from({0.0, 1.0});
    CHECK(total_variation(a, b) == doctest::Approx(1.0));
    const auto q = Distribution::from({0.25, 0.75});
    CHECK(total_variation(p, q) == doctest::Approx(0.25));
}

TEST_CASE("dimension and distribution validation") {
    const auto p = Distribution::from({0.5, 0.5});
    const auto q = Distribution::from({0.3, 0.3, 0.4});
    CHECK_THROWS_AS(total_variation(p, q), DimensionMismatch);
    CHECK_THROWS_AS(wasserstein1(p, q, std::vector<double>(4, 0.0), 2, 2), DimensionMismatch);
    CHECK_THROWS_AS(Distribution::from({0.5, 0.6}), NotADistribution);
    CHECK_THROWS_AS(Distribution::from({1.2, -0.2}), NotADistribution);
    CHECK_NOTHROW(Distribution::from({1.0, -1e-13}));  // clamped
}

TEST_CASE("W1 is bounded by the largest cost entry") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = random_dist(rng, 5);
        const auto q = random_dist(rng, 5);
        const auto cost = random_cost(rng, 5, 5);
        const double w = wasserstein1(p, q, cost, 5, 5).cost;
        CHECK(w >= -1e-12);
        CHECK(w <= *std::max_element(cost.begin(), cost.end()) + 1e-12);
    }
}

TEST_CASE("coupling bound: W1 <= TV * max cost + (1 - TV) * max diagonal cost") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = random_dist(rng, 5);
        const auto q = random_dist(rng, 5);
        auto cost = random_cost(rng, 5, 5, 0.2, 1.0);
        std::uniform_real_distribution<double> diag(0.0, 0.1);
        for (int i = 0; i < 5; ++i) cost[static_cast<size_t>(i) * 5 + i] = diag(rng);

        const double w = wasserstein1(p, q, cost, 5, 5).cost;
        const double tv = total_variation(p, q);
        double max_c = *std::max_element(cost.begin(), cost.end());
        double max_diag = 0.0;
        for (int i = 0; i < 5; ++i)
            max_diag = std::max(max_diag, cost[static_cast<size_t>(i) * 5 + i]);
        CHECK(w <= tv * max_c + (1.0 - tv) * max_diag + 1e-9);
    }
}

TEST_CASE("gluing: W1 is transitive over pointwise-triangle cost matrices") {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 4, k = 3, m = 4;
        const auto p = random_dist(rng, n);
        const auto r = random_dist(rng, k);
        const auto q = random_dist(rng, m);
        const auto d13 = random_cost(rng, n, k);
        const auto d32 = random_cost(rng, k, m);
        std::vector<double> d12(static_cast<size_t>(n) * m);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j) {
                double best = 1e100;
                for (int t = 0; t < k; ++t)
                    best = std::min(best, d13[static_cast<size_t>(i) * k + t] +
                                              d32[static_cast<size_t>(t) * m + j]);
                d12[static_cast<size_t>(i) * m + j] = best;
            }
        const double lhs = wasserstein1(p, q, d12, n, m).cost;
        const double rhs = wasserstein1(p, r, d13, n, k).cost + wasserstein1(r, q, d32, k, m).cost;
        CHECK(lhs <= rhs + 1e-9);
    }
}
