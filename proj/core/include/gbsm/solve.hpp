#pragma once

#include <utility>
#include <vector>

#include "gbsm/mdp.hpp"

namespace gbsm {

/// Bellman-optimality fixed point from V = 0, accurate to tol in sup norm.
ValueFunction value_iteration_optimal(const Mdp& m, double tol = 1e-9);

/// On-policy fixed point, accurate to tol in sup norm.
ValueFunction policy_evaluation(const Mdp& m, const Policy& pi, double tol = 1e-9);

/// One-step greedy policy w.r.t. v; ties broken toward the lowest action index.
Policy greedy_policy(const Mdp& m, const ValueFunction& v);

struct CollapsedMdp {
    std::vector<double> rewards;      // length |S|
    std::vector<double> transitions;  // |S|x|S| row-major
};

/// Policy-averaged rewards and transition matrix: R^pi(s), P^pi(s'|s).
CollapsedMdp on_policy_collapse(const Mdp& m, const Policy& pi);

} // namespace gbsm
