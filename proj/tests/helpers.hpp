#pragma once

#include <vector>

#include "gbsm/mdp.hpp"

namespace testutil {

/// Dense MDP from explicit rewards (|S|x|A|) and transitions (|S|x|A|x|S|).
inline gbsm::Mdp make_mdp(int states, int actions, double gamma, std::vector<double> rewards,
                          std::vector<double> transitions, double reward_max = 1.0) {
    gbsm::Mdp m;
    m.num_states = states;
    m.num_actions = actions;
    m.gamma = gamma;
    m.reward_max = reward_max;
    m.rewards = std::move(rewards);
    m.transitions = std::move(transitions);
    return m;
}

/// 1-state MDP with the given per-action rewards; the single state self-loops.
inline gbsm::Mdp single_state(double gamma, std::vector<double> rewards) {
    const int actions = static_cast<int>(rewards.size());
    return make_mdp(1, actions, gamma, std::move(rewards), std::vector<double>(actions, 1.0));
}

inline gbsm::Mdp garnet(int states, int actions, double gamma, std::uint64_t seed,
                        double branching = 0.5) {
    gbsm::GarnetConfig cfg;
    cfg.num_states = states;
    cfg.num_actions = actions;
    cfg.branching_fraction = branching;
    cfg.gamma = gamma;
    cfg.seed = seed;
    return gbsm::garnet_generate(cfg);
}

} // namespace testutil
