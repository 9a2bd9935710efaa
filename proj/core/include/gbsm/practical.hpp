#pragma once

#include <utility>
#include <vector>

#include "gbsm/approximation.hpp"
#include "gbsm/mdp.hpp"
#include "gbsm/metric.hpp"

namespace gbsm {

struct PracticalConfig {
    int eta1 = 10;       // minimum sample count per (state, action)
    double eta2 = 1e-4;  // convergence threshold on the sup-norm sweep change
    int max_iters = 0;   // 0 selects the same default as FixedPointConfig
};

void validate_practical_config(const PracticalConfig& cfg);

/// An MDP restricted to a subset of states, with `states` holding the original
/// indices and `mdp` indexed locally. Every positive-probability successor of a
/// retained row lies inside the subset.
struct RestrictedMdp {
    std::vector<int> states;
    Mdp mdp;
};

/// Per-stage bookkeeping emitted alongside the dataset-driven metric.
struct StageReport {
    int target_states = 0;        // |u_t|
    int source_states = 0;        // |u_s|
    long dropped_tuples = 0;      // tuples removed by representative-set filtering
    double max_dropped_mass = 0;  // largest per-(s,a) fraction of removed samples
};

/// Stage 1a: states with at least eta1 samples for every action form the
/// representative set; the returned dataset keeps only tuples whose endpoints
/// both lie inside it.
std::pair<std::vector<int>, Dataset> build_representative_set(const Dataset& data, int num_states,
                                                              int num_actions,
                                                              const PracticalConfig& cfg);

/// Stage 1b: empirical transition frequencies and mean rewards over the filtered
/// tuples, renormalized over the representative set.
RestrictedMdp estimate_target_model(const Dataset& filtered, const std::vector<int>& u_t,
                                    int num_actions, double gamma, double reward_max);

/// Stage 2: least superset of seed_set closed under positive-probability
/// reachability, with the source MDP restricted to it.
RestrictedMdp close_source_space(const Mdp& m_s, const std::vector<int>& seed_set);

/// Stages 1-3: estimate the target model from data, close the source space, and
/// iterate the metric on u_t x u_s from d0(s,s') = max_a |R_t(s,a) - R_s(s',a)|.
/// Row i of the result is target state u_t[i]; column j is source state u_s[j].
MetricMatrix compute_gbsm_practical(const Dataset& data, const Mdp& m_s,
                                    const PracticalConfig& cfg, StageReport* report = nullptr);

} // namespace gbsm
