#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gbsm/errors.hpp"

namespace gbsm {

/// Finite MDP with dense row-stochastic transitions and bounded rewards.
///
/// rewards is |S|x|A| row-major, transitions is |S|x|A|x|S| row-major.
struct Mdp {
    int num_states = 0;
    int num_actions = 0;
    double gamma = 0.0;
    double reward_max = 1.0;
    std::vector<double> rewards;
    std::vector<double> transitions;

    double reward(int s, int a) const { return rewards[static_cast<size_t>(s) * num_actions + a]; }
    double& reward(int s, int a) { return rewards[static_cast<size_t>(s) * num_actions + a]; }

    std::span<const double> row(int s, int a) const {
        return {transitions.data() + (static_cast<size_t>(s) * num_actions + a) * num_states,
                static_cast<size_t>(num_states)};
    }
    std::span<double> row(int s, int a) {
        return {transitions.data() + (static_cast<size_t>(s) * num_actions + a) * num_states,
                static_cast<size_t>(num_states)};
    }

    static Mdp zeros(int num_states, int num_actions, double gamma, double reward_max = 1.0);
};

enum class PolicyKind { deterministic, stochastic };

/// Deterministic (one action per state) or stochastic (row-stochastic matrix) policy.
struct Policy {
    PolicyKind kind = PolicyKind::deterministic;
    int num_states = 0;
    int num_actions = 0;
    std::vector<int> det_actions;      // deterministic: length |S|
    std::vector<double> action_probs;  // stochastic: |S|x|A| row-major

    double prob(int s, int a) const {
        if (kind == PolicyKind::deterministic) return det_actions[s] == a ? 1.0 : 0.0;
        return action_probs[static_cast<size_t>(s) * num_actions + a];
    }

    static Policy deterministic(std::vector<int> actions, int num_actions);
    static Policy stochastic(std::vector<double> probs, int num_states, int num_actions);
    static Policy uniform(int num_states, int num_actions);

    /// One-hot stochastic representation of a deterministic policy (identity otherwise).
    Policy as_stochastic() const;
};

struct ValueFunction {
    std::vector<double> values;
};

/// Configuration for random Garnet MDP generation.
struct GarnetConfig {
    int num_states = 20;
    int num_actions = 5;
    double branching_fraction = 0.5;
    double gamma = 0.9;
    double reward_max = 1.0;
    std::uint64_t seed = 0;
};

/// Throws unless all Mdp invariants hold (stochastic rows, bounded rewards, gamma < 1).
void validate_mdp(const Mdp& m);

void validate_policy(const Policy& pi, const Mdp& m);

/// Seed-deterministic Garnet MDP: per (s,a), ceil(branching * |S|) successors sampled
/// without replacement with normalized uniform probabilities; rewards uniform(0, R_max).
Mdp garnet_generate(const GarnetConfig& cfg);

void validate_garnet_config(const GarnetConfig& cfg);

} // namespace gbsm
