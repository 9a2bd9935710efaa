#pragma once

#include <cstdint>
#include <vector>

#include "gbsm/mdp.hpp"
#include "gbsm/metric.hpp"

namespace gbsm {

/// Representative-state set U and surjection assign: S -> U with assign[u] = u on U.
struct AggregationMap {
    std::vector<int> representatives;
    std::vector<int> assign;

    /// assign[s] = s for every state.
    static AggregationMap identity(int num_states);
    /// Seeded shuffle, consecutive pairing; the first of each pair represents both.
    static AggregationMap half_pairing(int num_states, std::uint64_t seed);
    /// Seeded shuffle; the first max(1, round(fraction * n)) states become
    /// representatives and the rest are assigned to them round-robin.
    static AggregationMap random_fraction(int num_states, double fraction, std::uint64_t seed);
};

void validate_aggregation(const AggregationMap& agg, int num_states);

/// Experience tuples (s, a, s', r).
struct Dataset {
    struct Tuple {
        int s;
        int a;
        int s_next;
        double r;
    };
    std::vector<Tuple> tuples;
};

/// Aggregated MDP on the same index set: each state adopts the rewards and (aggregated)
/// transition row of its representative; all probability mass lands inside U.
Mdp build_aggregated_mdp(const Mdp& m, const AggregationMap& agg);

struct AggregationSigmas {
    double sigma = 0.0;        // max_s gbsm(m, aggregated)(s, [s])
    double sigma_tilde = 0.0;  // max_s bsm(m)(s, [s])
};

AggregationSigmas aggregation_sigmas(const Mdp& m, const AggregationMap& agg,
                                     const FixedPointConfig& cfg);

/// Empirical MDP: per (s,a), k i.i.d. successor draws replace the row with frequencies.
Mdp build_empirical_mdp(const Mdp& m, int k, std::uint64_t seed);

/// Additive Gaussian noise on transition probabilities, clamped at zero and renormalized.
Mdp perturb_mdp_gaussian(const Mdp& m, double std_dev, std::uint64_t seed);

/// Per-(s,a) sample count K = -ln(alpha/2) * gamma^2 R^2 |S|^2 / (2 eps^2 (1-gamma)^4).
double sample_complexity_ssa(double epsilon, double alpha, double gamma, double reward_max,
                             int num_states);

/// Same with epsilon replaced by epsilon * (1 - gamma).
double sample_complexity_model_based_rl(double epsilon, double alpha, double gamma,
                                        double reward_max, int num_states);

/// Sample a dataset of `per_pair` tuples for every (s,a) of m.
Dataset sample_dataset(const Mdp& m, int per_pair, std::uint64_t seed);

} // namespace gbsm
