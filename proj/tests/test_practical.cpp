#include <doctest.h>

#include <cmath>
#include <deque>
#include <set>

#include "gbsm/metric.hpp"
#include "gbsm/practical.hpp"
#include "helpers.hpp"

using namespace gbsm;
using testutil::garnet;
using testutil::make_mdp;

namespace {

PracticalConfig pcfg(int eta1 = 2, double eta2 = 1e-6) {
    PracticalConfig cfg;
    cfg.eta1 = eta1;
    cfg.eta2 = eta2;
    return cfg;
}

} // namespace

TEST_CASE("full per-pair coverage keeps every state representative") {
    const Mdp m = garnet(6, 2, 0.5, 1);
    const Dataset data = sample_dataset(m, 10, 2);
    const auto [u_t, filtered] = build_representative_set(data, 6, 2, pcfg(10));
    CHECK(u_t.size() == 6);
    CHECK(filtered.tuples.size() == data.tuples.size());
}

TEST_CASE("an empty dataset has no representatives") {
    CHECK_THROWS_AS(build_representative_set(Dataset{}, 4, 2, pcfg()), EmptyRepresentativeSet);
}

TEST_CASE("a state short one sample for one action is excluded") {
    Dataset data;
    const int eta1 = 3;
    for (int s = 0; s < 4; ++s)
        for (int a = 0; a < 2; ++a) {
            const int samples = (s == 3 && a == 0) ? eta1 - 1 : eta1;
            for (int i = 0; i < samples; ++i)
                data.tuples.push_back({s, a, (s + 1) % 4, 0.5});
        }
    const auto [u_t, filtered] = build_representative_set(data, 4, 2, pcfg(eta1));
    CHECK(std::set<int>(u_t.begin(), u_t.end()) == std::set<int>{0, 1, 2});
    for (const auto& t : filtered.tuples) {
        CHECK(t.s != 3);
        CHECK(t.s_next != 3);
    }
}

TEST_CASE("estimates recover a known model from ample data") {
    const Mdp m = garnet(5, 2, 0.5, 3, 1.0);  // fully-supported rows
    const Dataset data = sample_dataset(m, 20000, 4);
    const auto [u_t, filtered] = build_representative_set(data, 5, 2, pcfg(100));
    REQUIRE(u_t.size() == 5);
    const RestrictedMdp est = estimate_target_model(filtered, u_t, 2, 0.5, 1.0);
    for (int s = 0; s < 5; ++s)
        for (int a = 0; a < 2; ++a) {
            double tv = 0.0;
            for (int t = 0; t < 5; ++t) tv += std::abs(est.mdp.row(s, a)[t] - m.row(s, a)[t]);
            CHECK(tv / 2.0 <= 0.05);
        }
}

TEST_CASE("deterministic transitions estimate to exact point masses") {
    Dataset data;
    for (int i = 0; i < 5; ++i) {
        data.tuples.push_back({0, 0, 1, 0.25});
        data.tuples.push_back({1, 0, 0, 0.25});
    }
    const RestrictedMdp est = estimate_target_model(data, {0, 1}, 1, 0.5, 1.0);
    CHECK(est.mdp.row(0, 0)[1] == doctest::Approx(1.0));
    CHECK(est.mdp.row(1, 0)[0] == doctest::Approx(1.0));
    CHECK(est.mdp.reward(0, 0) == doctest::Approx(0.25));
}

TEST_CASE("a representative pair with no samples is reported") {
    Dataset data;
    data.tuples.push_back({0, 0, 1, 0.5});
    data.tuples.push_back({1, 0, 0, 0.5});
    // Action 1 never appears for state 1.
    data.tuples.push_back({0, 1, 0, 0.5});
    CHECK_THROWS_AS(estimate_target_model(data, {0, 1}, 2, 0.5, 1.0), UncoveredStateAction);
}

TEST_CASE("closing a fully connected source keeps all states") {
    const Mdp m = garnet(6, 2, 0.5, 5, 1.0);
    const RestrictedMdp r = close_source_space(m, {0});
    CHECK(r.states.size() == 6);
    CHECK(r.mdp.transitions == m.transitions);
}

TEST_CASE("absorbing seed states close onto themselves") {
    // Two absorbing states and one that leaks elsewhere.
    const Mdp m = make_mdp(3, 1, 0.5, {0.1, 0.2, 0.3},
                           {1.0, 0.0, 0.0,
                            0.0, 1.0, 0.0,
                            0.5, 0.0, 0.5});
    const RestrictedMdp r = close_source_space(m, {0, 1});
    CHECK(r.states == std::vector<int>{0, 1});
}

TEST_CASE("forward chain closure matches a BFS reachability oracle") {
    // Chain 0 -> 1 -> 2 -> 3 -> 3.
    const Mdp m = make_mdp(4, 1, 0.5, {0.1, 0.2, 0.3, 0.4},
                           {0.0, 1.0, 0.0, 0.0,
                            0.0, 0.0, 1.0, 0.0,
                            0.0, 0.0, 0.0, 1.0,
                            0.0, 0.0, 0.0, 1.0});
    const RestrictedMdp r = close_source_space(m, {1});

    std::set<int> reachable;
    std::deque<int> frontier{1};
    while (!frontier.empty()) {
        const int s = frontier.front();
        frontier.pop_front();
        if (!reachable.insert(s).second) continue;
        for (int t = 0; t < 4; ++t)
            if (m.row(s, 0)[t] > 0.0) frontier.push_back(t);
    }
    CHECK(std::set<int>(r.states.begin(), r.states.end()) == reachable);
}

TEST_CASE("self-sampled data reproduces a near-zero practical diagonal") {
    const Mdp m = garnet(8, 2, 0.5, 6);
    const Dataset data = sample_dataset(m, 20000, 7);
    StageReport stage;
    const MetricMatrix d = compute_gbsm_practical(data, m, pcfg(50, 1e-6), &stage);
    CHECK(stage.target_states == 8);
    CHECK(stage.source_states == 8);
    CHECK(d.rows == 8);
    CHECK(d.cols == 8);
    CHECK(d.max_diagonal() <= 0.05 * m.reward_max / (1.0 - m.gamma));
    // Metric cap still applies.
    for (double v : d.dist) CHECK(v <= m.reward_max / (1.0 - m.gamma) + 1e-6);
}

TEST_CASE("practical metric on exact data matches the exact metric") {
    // Feed the estimator a dataset so large the model is near-exact, then compare
    // against gbsm::gbsm(m, m) restricted to the identity index sets.
    const Mdp m = garnet(6, 2, 0.5, 8);
    const Dataset data = sample_dataset(m, 50000, 9);
    const MetricMatrix practical = compute_gbsm_practical(data, m, pcfg(100, 1e-8));
    FixedPointConfig cfg;
    cfg.tol = 1e-8;
    const MetricMatrix exact = gbsm::gbsm(m, m, cfg);
    for (size_t i = 0; i < exact.dist.size(); ++i)
        CHECK(std::abs(practical.dist[i] - exact.dist[i]) <= 0.1);
}

TEST_CASE("practical config validation") {
    CHECK_THROWS_AS(compute_gbsm_practical(Dataset{}, garnet(3, 1, 0.5, 10), pcfg(0)),
                    InvalidParameter);
    PracticalConfig bad;
    bad.eta2 = 0.0;
    CHECK_THROWS_AS(validate_practical_config(bad), InvalidParameter);
}

TEST_CASE("warm-started iteration still reports its residual below eta2") {
    const Mdp m = garnet(6, 2, 0.9, 11);
    const Dataset data = sample_dataset(m, 5000, 12);
    const MetricMatrix d = compute_gbsm_practical(data, m, pcfg(10, 1e-5));
    CHECK(d.converged);
    CHECK(d.residual <= 1e-5);
}
