#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "gbsm/mdp.hpp"
#include "gbsm/solve.hpp"
#include "helpers.hpp"

using namespace gbsm;
using testutil::garnet;
using testutil::make_mdp;

TEST_CASE("validate_mdp accepts Garnet output") {
    CHECK_NOTHROW(validate_mdp(garnet(20, 5, 0.9, 7)));
}

TEST_CASE("validate_mdp rejects a row summing to 0.9") {
    Mdp m = make_mdp(2, 1, 0.5, {0.5, 0.5}, {0.4, 0.5, 0.0, 1.0});
    CHECK_THROWS_AS(validate_mdp(m), NonStochasticRow);
}

TEST_CASE("validate_mdp rejects gamma = 1") {
    Mdp m = make_mdp(1, 1, 1.0, {0.5}, {1.0});
    CHECK_THROWS_AS(validate_mdp(m), InvalidGamma);
}

TEST_CASE("validate_mdp rejects out-of-range rewards") {
    Mdp m = make_mdp(1, 1, 0.5, {1.5}, {1.0});
    CHECK_THROWS_AS(validate_mdp(m), RewardOutOfRange);
}

TEST_CASE("garnet rows have exactly ceil(branching * |S|) successors") {
    const Mdp m = garnet(20, 5, 0.9, 7, 0.5);
    for (int s = 0; s < 20; ++s)
        for (int a = 0; a < 5; ++a) {
            int nonzero = 0;
            for (double p : m.row(s, a))
                if (p > 0.0) ++nonzero;
            CHECK(nonzero == 10);
        }
}

TEST_CASE("garnet with branching 1/|S| produces point-mass rows") {
    const Mdp m = garnet(8, 3, 0.5, 11, 1.0 / 8);
    for (int s = 0; s < 8; ++s)
        for (int a = 0; a < 3; ++a) {
            int nonzero = 0;
            for (double p : m.row(s, a)) {
                if (p > 0.0) {
                    CHECK(p == doctest::Approx(1.0));
                    ++nonzero;
                }
            }
            CHECK(nonzero == 1);
        }
}

TEST_CASE("garnet generation is a pure function of its config") {
    const Mdp m1 = garnet(12, 4, 0.9, 99);
    const Mdp m2 = garnet(12, 4, 0.9, 99);
    CHECK(m1.rewards == m2.rewards);
    CHECK(m1.transitions == m2.transitions);
    const Mdp m3 = garnet(12, 4, 0.9, 100);
    CHECK(m1.transitions != m3.transitions);
}

TEST_CASE("value iteration: zero rewards give zero values") {
    Mdp m = garnet(6, 2, 0.8, 3);
    std::fill(m.rewards.begin(), m.rewards.end(), 0.0);
    const ValueFunction v = value_iteration_optimal(m, 1e-9);
    for (double x : v.values) CHECK(x == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("value iteration: single state geometric series") {
    const Mdp m = testutil::single_state(0.5, {1.0});
    const ValueFunction v = value_iteration_optimal(m, 1e-10);
    CHECK(v.values[0] == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("value iteration matches a direct linear solve for the greedy policy") {
    const Mdp m = garnet(5, 3, 0.9, 42);
    const double tol = 1e-9;
    const ValueFunction v = value_iteration_optimal(m, tol);
    const Policy pi = greedy_policy(m, v);

    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(5, 5);
    Eigen::VectorXd b(5);
    for (int s = 0; s < 5; ++s) {
        const int a = pi.det_actions[s];
        b[s] = m.reward(s, a);
        const auto row = m.row(s, a);
        for (int t = 0; t < 5; ++t) A(s, t) -= m.gamma * row[t];
    }
    const Eigen::VectorXd exact = A.partialPivLu().solve(b);
    for (int s = 0; s < 5; ++s) CHECK(std::abs(v.values[s] - exact[s]) <= 10 * tol);
}

TEST_CASE("value iteration output respects value bounds") {
    const Mdp m = garnet(10, 3, 0.9, 5);
    const ValueFunction v = value_iteration_optimal(m, 1e-9);
    for (double x : v.values) {
        CHECK(x >= 0.0);
        CHECK(x <= m.reward_max / (1.0 - m.gamma) + 1e-9);
    }
}

TEST_CASE("policy evaluation of the greedy policy reproduces V*") {
    const Mdp m = garnet(8, 3, 0.9, 17);
    const double tol = 1e-9;
    const ValueFunction v = value_iteration_optimal(m, tol);
    const ValueFunction v_pi = policy_evaluation(m, greedy_policy(m, v), tol);
    for (int s = 0; s < 8; ++s) CHECK(std::abs(v.values[s] - v_pi.values[s]) <= 2 * tol);
}

TEST_CASE("policy evaluation: uniform policy on hand-solvable single state") {
    // Two actions with rewards 0 and 1, gamma = 0.5: V = 0.5 + 0.5 V => V = 1.
    const Mdp m = testutil::single_state(0.5, {0.0, 1.0});
    const ValueFunction v = policy_evaluation(m, Policy::uniform(1, 2), 1e-10);
    CHECK(v.values[0] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("policy evaluation rejects mismatched policy shapes") {
    const Mdp m = garnet(4, 2, 0.5, 1);
    const Policy pi = Policy::uniform(5, 2);
    CHECK_THROWS_AS(policy_evaluation(m, pi, 1e-9), ShapeMismatch);
}

TEST_CASE("greedy policy picks the reward argmax under v = 0") {
    Mdp m = garnet(4, 3, 0.5, 9);
    for (int s = 0; s < 4; ++s) {
        m.reward(s, 0) = 0.1;
        m.reward(s, 1) = 0.2;
        m.reward(s, 2) = 0.9;
    }
    const Policy pi = greedy_policy(m, ValueFunction{std::vector<double>(4, 0.0)});
    for (int s = 0; s < 4; ++s) CHECK(pi.det_actions[s] == 2);
}

TEST_CASE("greedy policy breaks exact ties toward the lowest action index") {
    Mdp m = make_mdp(1, 3, 0.0, {0.3, 0.7, 0.7}, {1.0, 1.0, 1.0});
    const Policy pi = greedy_policy(m, ValueFunction{{0.0}});
    CHECK(pi.det_actions[0] == 1);
}

TEST_CASE("on-policy collapse of a deterministic policy copies rows") {
    const Mdp m = garnet(5, 3, 0.7, 21);
    const Policy pi = Policy::deterministic({2, 0, 1, 2, 0}, 3);
    const CollapsedMdp c = on_policy_collapse(m, pi);
    for (int s = 0; s < 5; ++s) {
        const auto row = m.row(s, pi.det_actions[s]);
        CHECK(c.rewards[s] == m.reward(s, pi.det_actions[s]));
        for (int t = 0; t < 5; ++t) CHECK(c.transitions[s * 5 + t] == row[t]);
    }
}

TEST_CASE("on-policy collapse averages rewards under a uniform policy") {
    // Identical rows for both actions; rewards 0 and 1.
    Mdp m = make_mdp(1, 2, 0.5, {0.0, 1.0}, {1.0, 1.0});
    const CollapsedMdp c = on_policy_collapse(m, Policy::uniform(1, 2));
    CHECK(c.rewards[0] == doctest::Approx(0.5));
    CHECK(c.transitions[0] == doctest::Approx(1.0));
}

TEST_CASE("on-policy collapse rows stay stochastic") {
    const Mdp m = garnet(9, 4, 0.9, 33);
    const CollapsedMdp c = on_policy_collapse(m, Policy::uniform(9, 4));
    for (int s = 0; s < 9; ++s) {
        double sum = 0.0;
        for (int t = 0; t < 9; ++t) sum += c.transitions[s * 9 + t];
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("garnet config validation") {
    GarnetConfig cfg;
    cfg.branching_fraction = 0.0;
    CHECK_THROWS(validate_garnet_config(cfg));
    cfg.branching_fraction = 0.5;
    cfg.gamma = 1.0;
    CHECK_THROWS(validate_garnet_config(cfg));
}
