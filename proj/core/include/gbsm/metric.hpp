#pragma once

#include <span>
#include <vector>

#include "gbsm/mdp.hpp"

namespace gbsm {

/// Distance matrix between the states of two MDPs plus convergence bookkeeping.
struct MetricMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> dist;  // row-major
    int iterations = 0;
    double residual = 0.0;
    bool converged = true;
    /// Per-sweep iterates, recorded only when FixedPointConfig::record_history is set.
    std::vector<std::vector<double>> history;

    double at(int i, int j) const { return dist[static_cast<size_t>(i) * cols + j]; }
    double max_entry() const;
    double max_diagonal() const;
};

/// State-action pair costs delta(d), shaped (|S1|*|A1|) x (|S2|*|A2|).
struct PairCost {
    int rows = 0;
    int cols = 0;
    std::vector<double> delta;

    double at(int s, int a, int s2, int a2, int num_actions1, int num_actions2) const {
        return delta[static_cast<size_t>(s * num_actions1 + a) * cols + (s2 * num_actions2 + a2)];
    }
};

struct FixedPointConfig {
    double tol = 1e-6;   // convergence threshold on the sup-norm sweep change
    int max_iters = 0;   // 0 selects 10 * ceil(log(tol*(1-gamma)/R) / log(gamma))
    bool record_history = false;
};

/// delta(d)((s,a),(s',a')) = |R1(s,a) - R2(s',a')| + gamma * W1(P1(.|s,a), P2(.|s',a'); d).
PairCost delta_cost(const Mdp& m1, const Mdp& m2, const MetricMatrix& d);

/// Hausdorff distance of a k x l pairwise-cost block:
/// max{ max_x min_y c(x,y), max_y min_x c(x,y) }.
double hausdorff(std::span<const double> costs, int k, int l);

/// Bisimulation metric between two MDPs (Hausdorff over heterogeneous action sets),
/// iterated synchronously from d0 = 0.
MetricMatrix gbsm(const Mdp& m1, const Mdp& m2, const FixedPointConfig& cfg);

/// Classic single-MDP bisimulation metric (max over the shared action).
MetricMatrix bsm(const Mdp& m, const FixedPointConfig& cfg);

/// Shared-action-max variant without the Hausdorff construction; requires |A1| = |A2|.
MetricMatrix gbsm_conference(const Mdp& m1, const Mdp& m2, const FixedPointConfig& cfg);

/// On-policy metric over policy-collapsed rewards and transitions.
MetricMatrix gbsm_on_policy(const Mdp& m1, const Mdp& m2, const Policy& pi,
                            const FixedPointConfig& cfg);

struct TvSurrogate {
    std::vector<double> per_state;  // H(X_s, X_s; delta_TV)
    double bound = 0.0;             // max_s per_state[s] / (1 - gamma)
};

/// Transport-free surrogate bound on the diagonal metric for MDPs on identical spaces.
TvSurrogate tv_surrogate(const Mdp& m1, const Mdp& m2);

namespace detail {

/// Fixed-point iteration shared by the metric variants. When `initial` is non-null it
/// seeds d0 (used by the dataset-driven pipeline); otherwise d0 = 0.
MetricMatrix metric_fixed_point(const Mdp& m1, const Mdp& m2, const FixedPointConfig& cfg,
                                bool shared_action_max, const std::vector<double>* initial);

int default_max_iters(double tol, double gamma, double reward_max);

} // namespace detail

} // namespace gbsm
