#include <doctest.h>

#include <cmath>

#include "gbsm/bounds.hpp"
#include "helpers.hpp"

using namespace gbsm;
using testutil::garnet;

namespace {
FixedPointConfig cfg7() {
    FixedPointConfig cfg;
    cfg.tol = 1e-7;
    return cfg;
}
} // namespace

TEST_CASE("transferring the optimal policy onto itself has no regret") {
    const Mdp m = garnet(8, 3, 0.9, 1);
    const StateActionMaps maps = StateActionMaps::identity(8, 3);
    CHECK(transfer_ground_truth(m, m, maps, cfg7()) <= 1e-8);
}

TEST_CASE("equal-reward targets make every policy optimal") {
    const Mdp m1 = garnet(6, 2, 0.8, 2);
    Mdp m2 = garnet(6, 2, 0.8, 3);
    std::fill(m2.rewards.begin(), m2.rewards.end(), 0.5);
    const StateActionMaps maps = StateActionMaps::identity(6, 2);
    CHECK(transfer_ground_truth(m1, m2, maps, cfg7()) <= 1e-8);
}

TEST_CASE("general transfer bound collapses for identical MDPs and identity maps") {
    const Mdp m = garnet(6, 2, 0.8, 4);
    const StateActionMaps maps = StateActionMaps::identity(6, 2);
    const double slack = containment_slack(cfg7(), m.gamma);
    CHECK(transfer_bound_general(m, m, maps, cfg7()) <= slack / (1.0 - m.gamma));
}

TEST_CASE("transfer trial report: containment, ordering, and theorem-2 check") {
    const Mdp m1 = garnet(8, 3, 0.9, 5);
    const Mdp m2 = garnet(8, 3, 0.9, 6);
    StateActionMaps maps = StateActionMaps::identity(8, 3);
    maps.f = {3, 1, 4, 1, 5, 0, 2, 6};
    const BoundReport r = transfer_check(m1, m2, maps, cfg7(), 7);

    CHECK(r.trial_id == 7);
    CHECK(r.gamma == 0.9);
    CHECK(r.theorem2_ok);
    CHECK(r.all_contained());
    CHECK(r.bound("general") >= r.ground_truth);
    CHECK(r.bound("corollary1") >= r.ground_truth);
    // Hausdorff metric gives a bound at most the conference-metric one.
    CHECK(r.bound("corollary1") <= r.bound("corollary1_shared_action_max") + 1e-9);
    // The empirical scaling is recorded but exempt from containment claims.
    CHECK(std::find(r.empirical.begin(), r.empirical.end(), "empirical_2maxd") !=
          r.empirical.end());
}

TEST_CASE("identity-action transfer bound agrees with its standalone evaluation") {
    const Mdp m1 = garnet(6, 2, 0.8, 8);
    const Mdp m2 = garnet(6, 2, 0.8, 9);
    StateActionMaps maps = StateActionMaps::identity(6, 2);
    const BoundReport r = transfer_check(m1, m2, maps, cfg7());
    const double standalone = transfer_bound_identity_action(m1, m2, maps.f, cfg7());
    CHECK(r.bound("corollary1") == doctest::Approx(standalone).epsilon(1e-9));
    const double emp = empirical_bound_2maxd(m1, m2, maps.f, cfg7());
    CHECK(r.bound("empirical_2maxd") == doctest::Approx(emp).epsilon(1e-9));
}

TEST_CASE("empirical 2maxd vanishes for an MDP against itself") {
    const Mdp m = garnet(5, 2, 0.5, 10);
    const StateActionMaps maps = StateActionMaps::identity(5, 2);
    CHECK(empirical_bound_2maxd(m, m, maps.f, cfg7()) <= containment_slack(cfg7(), 0.5));
}

TEST_CASE("vfa report on the identity aggregation is all slack") {
    const Mdp m = garnet(6, 2, 0.8, 11);
    const BoundReport r = vfa_check(m, AggregationMap::identity(6), cfg7());
    CHECK(r.ground_truth <= r.slack);
    CHECK(r.bound("gbsm_sigma") <= r.slack);
    CHECK(r.all_contained());
}

TEST_CASE("vfa chain holds and bsm_legacy doubles bsm_over") {
    const Mdp m = garnet(10, 3, 0.8, 12);
    const BoundReport r = vfa_check(m, AggregationMap::half_pairing(10, 13), cfg7());
    CHECK(r.ground_truth <= r.bound("gbsm_sigma") + r.slack);
    CHECK(r.bound("gbsm_sigma") <= r.bound("bsm_over") + r.slack);
    CHECK(r.bound("bsm_legacy") == doctest::Approx(2.0 * r.bound("bsm_over")));
    CHECK(r.all_contained());
}

TEST_CASE("ssa aggregation with identity maps is all slack") {
    const Mdp m = garnet(6, 2, 0.8, 14);
    const AggregationMap id = AggregationMap::identity(6);
    const BoundReport r = ssa_aggregation_check(m, m, id, id, cfg7());
    CHECK(r.ground_truth <= r.slack);
    CHECK(r.all_contained());
}

TEST_CASE("ssa aggregation: gbsm bound is tighter than both bsm bounds") {
    const Mdp m = garnet(10, 3, 0.8, 15);
    const AggregationMap agg = AggregationMap::half_pairing(10, 16);
    const BoundReport r = ssa_aggregation_check(m, m, agg, agg, cfg7());
    CHECK(r.all_contained());
    CHECK(r.bound("gbsm") <= r.bound("bsm") + r.slack);
    CHECK(r.bound("gbsm") <= r.bound("bsm_legacy_single") + r.slack);
    CHECK(r.theorem2_ok);
}

TEST_CASE("ssa estimation with zero noise is all slack") {
    const Mdp m = garnet(6, 2, 0.8, 17);
    const BoundReport r =
        ssa_estimation_check(m, m, EstimationVariant::gaussian(0.0), cfg7(), 18);
    CHECK(r.ground_truth <= r.slack);
    CHECK(r.all_contained());
}

TEST_CASE("ssa estimation: containment and gbsm <= legacy for the single-MDP case") {
    const Mdp m = garnet(8, 3, 0.8, 19);
    for (double std_dev : {0.1, 0.2, 0.3}) {
        const BoundReport r =
            ssa_estimation_check(m, m, EstimationVariant::gaussian(std_dev), cfg7(), 20);
        CHECK(r.all_contained());
        CHECK(r.bound("gbsm") <= r.bound("bsm_legacy") + r.slack);
    }
}

TEST_CASE("ssa estimation supports the sampled variant") {
    const Mdp m = garnet(6, 2, 0.5, 21);
    const BoundReport r =
        ssa_estimation_check(m, m, EstimationVariant::sampled(500), cfg7(), 22);
    CHECK(r.all_contained());
}

TEST_CASE("on-policy vfa: identity aggregation and the containment chain") {
    const Mdp m = garnet(8, 3, 0.8, 23);
    const Policy pi = Policy::uniform(8, 3);

    const BoundReport id = on_policy_vfa_check(m, AggregationMap::identity(8), pi, cfg7());
    CHECK(id.ground_truth <= id.slack);
    CHECK(id.bound("gbsm_pi") <= id.slack);

    const AggregationMap agg = AggregationMap::half_pairing(8, 24);
    const BoundReport r = on_policy_vfa_check(m, agg, pi, cfg7());
    CHECK(r.ground_truth <= r.bound("gbsm_pi") + r.slack);
    CHECK(r.bound("gbsm_pi") <= r.bound("mid") + r.slack);
    CHECK(r.bound("mid") <= r.bound("legacy") + 1e-12);
    CHECK(r.bound("legacy") == doctest::Approx(2.0 * r.bound("mid")));
}

TEST_CASE("on-policy vfa: deterministic policy equals its one-hot form") {
    const Mdp m = garnet(6, 2, 0.8, 25);
    const AggregationMap agg = AggregationMap::half_pairing(6, 26);
    const Policy det = Policy::deterministic({0, 1, 1, 0, 1, 0}, 2);
    const BoundReport a = on_policy_vfa_check(m, agg, det, cfg7());
    const BoundReport b = on_policy_vfa_check(m, agg, det.as_stochastic(), cfg7());
    CHECK(a.ground_truth == doctest::Approx(b.ground_truth).epsilon(1e-10));
    CHECK(a.bound("gbsm_pi") == doctest::Approx(b.bound("gbsm_pi")).epsilon(1e-10));
}

TEST_CASE("bound report CSV layout") {
    BoundReport r;
    r.trial_id = 3;
    r.gamma = 0.5;
    r.ground_truth = 0.25;
    r.slack = 0.0;
    r.add("alpha", 0.5);
    r.add("beta", 0.1);
    CHECK(bound_report_csv_header(r) ==
          "trial_id,gamma,ground_truth,alpha,beta,contained_alpha,contained_beta");
    CHECK(bound_report_csv_row(r) == "3,0.5,0.25,0.5,0.1,1,0");
    CHECK(r.is_contained("alpha"));
    CHECK_FALSE(r.is_contained("beta"));
    CHECK_FALSE(r.all_contained());
    CHECK_THROWS_AS(r.bound("missing"), InvalidParameter);
}

TEST_CASE("state/action map validation") {
    const Mdp m1 = garnet(4, 2, 0.5, 27);
    const Mdp m2 = garnet(3, 2, 0.5, 28);
    StateActionMaps maps;
    maps.f = {0, 1, 9};  // out of range
    maps.g = {0, 1};
    CHECK_THROWS_AS(validate_maps(maps, m1, m2), ShapeMismatch);
    maps.f = {0, 1, 2};
    CHECK_NOTHROW(validate_maps(maps, m1, m2));
}
