#include "gbsm/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace gbsm {

AggregationMap AggregationMap::identity(int num_states) {
    AggregationMap agg;
    agg.representatives.resize(num_states);
    agg.assign.resize(num_states);
    std::iota(agg.representatives.begin(), agg.representatives.end(), 0);
    std::iota(agg.assign.begin(), agg.assign.end(), 0);
    return agg;
}

AggregationMap AggregationMap::half_pairing(int num_states, std::uint64_t seed) {
    std::vector<int> order(num_states);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    AggregationMap agg;
    agg.assign.assign(num_states, -1);
    for (int i = 0; i < num_states; i += 2) {
        const int rep = order[i];
        agg.representatives.push_back(rep);
        agg.assign[rep] = rep;
        if (i + 1 < num_states) agg.assign[order[i + 1]] = rep;
    }
    std::sort(agg.representatives.begin(), agg.representatives.end());
    return agg;
}

AggregationMap AggregationMap::random_fraction(int num_states, double fraction,
                                               std::uint64_t seed) {
    if (!(fraction > 0.0) || fraction > 1.0)
        throw InvalidAggregation("aggregation fraction must lie in (0, 1]");
    std::vector<int> order(num_states);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    const int reps = std::max(1, static_cast<int>(std::lround(fraction * num_states)));
    AggregationMap agg;
    agg.assign.assign(num_states, -1);
    for (int i = 0; i < reps; ++i) {
        agg.representatives.push_back(order[i]);
        agg.assign[order[i]] = order[i];
    }
    for (int i = reps; i < num_states; ++i)
        agg.assign[order[i]] = agg.representatives[(i - reps) % reps];
    std::sort(agg.representatives.begin(), agg.representatives.end());
    return agg;
}

void validate_aggregation(const AggregationMap& agg, int num_states) {
    if (agg.assign.size() != static_cast<size_t>(num_states))
        throw InvalidAggregation("assign length != |S|");
    if (agg.representatives.empty()) throw InvalidAggregation("empty representative set");
    std::vector<char> is_rep(num_states, 0);
    for (int u : agg.representatives) {
        if (u < 0 || u >= num_states) throw InvalidAggregation("representative out of range");
        is_rep[u] = 1;
    }
    for (int s = 0; s < num_states; ++s) {
        const int target = agg.assign[s];
        if (target < 0 || target >= num_states || !is_rep[target])
            throw InvalidAggregation("assign[" + std::to_string(s) +
                                     "] is not a representative");
    }
    for (int u : agg.representatives)
        if (agg.assign[u] != u)
            throw InvalidAggregation("representative " + std::to_string(u) +
                                     " does not map to itself");
}

Mdp build_aggregated_mdp(const Mdp& m, const AggregationMap& agg) {
    validate_aggregation(agg, m.num_states);
    Mdp out = Mdp::zeros(m.num_states, m.num_actions, m.gamma, m.reward_max);
    for (int s = 0; s < m.num_states; ++s) {
        const int rep = agg.assign[s];
        for (int a = 0; a < m.num_actions; ++a) {
            out.reward(s, a) = m.reward(rep, a);
            const auto src = m.row(rep, a);
            auto dst = out.row(s, a);
            for (int t = 0; t < m.num_states; ++t) dst[agg.assign[t]] += src[t];
        }
    }
    return out;
}

AggregationSigmas aggregation_sigmas(const Mdp& m, const AggregationMap& agg,
                                     const FixedPointConfig& cfg) {
    const Mdp aggregated = build_aggregated_mdp(m, agg);
    const MetricMatrix d_cross = gbsm(m, aggregated, cfg);
    const MetricMatrix d_within = bsm(m, cfg);
    AggregationSigmas out;
    for (int s = 0; s < m.num_states; ++s) {
        out.sigma = std::max(out.sigma, d_cross.at(s, agg.assign[s]));
        out.sigma_tilde = std::max(out.sigma_tilde, d_within.at(s, agg.assign[s]));
    }
    return out;
}

Mdp build_empirical_mdp(const Mdp& m, int k, std::uint64_t seed) {
    if (k < 1) throw InvalidParameter("sample count k must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Mdp out = m;
    std::vector<double> cumulative(m.num_states);
    std::vector<int> counts(m.num_states);
    for (int s = 0; s < m.num_states; ++s) {
        for (int a = 0; a < m.num_actions; ++a) {
            const auto row = m.row(s, a);
            std::partial_sum(row.begin(), row.end(), cumulative.begin());
            std::fill(counts.begin(), counts.end(), 0);
            for (int i = 0; i < k; ++i) {
                const double u = unit(rng);
                const int t = static_cast<int>(
                    std::lower_bound(cumulative.begin(), cumulative.end(), u) -
                    cumulative.begin());
                ++counts[std::min(t, m.num_states - 1)];
            }
            auto dst = out.row(s, a);
            for (int t = 0; t < m.num_states; ++t)
                dst[t] = static_cast<double>(counts[t]) / k;
        }
    }
    return out;
}

Mdp perturb_mdp_gaussian(const Mdp& m, double std_dev, std::uint64_t seed) {
    if (std_dev < 0.0) throw InvalidParameter("std must be nonnegative");
    if (std_dev == 0.0) return m;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, std_dev);

    Mdp out = m;
    for (int s = 0; s < m.num_states; ++s) {
        for (int a = 0; a < m.num_actions; ++a) {
            const auto src = m.row(s, a);
            auto dst = out.row(s, a);
            bool ok = false;
            for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
                double sum = 0.0;
                for (int t = 0; t < m.num_states; ++t) {
                    dst[t] = std::max(0.0, src[t] + noise(rng));
                    sum += dst[t];
                }
                if (sum > 0.0) {
                    for (int t = 0; t < m.num_states; ++t) dst[t] /= sum;
                    ok = true;
                }
            }
            if (!ok) throw DegenerateRow(s, a);
        }
    }
    return out;
}

double sample_complexity_ssa(double epsilon, double alpha, double gamma, double reward_max,
                             int num_states) {
    if (!(epsilon > 0.0)) throw InvalidParameter("epsilon must be positive");
    if (!(alpha > 0.0) || alpha >= 1.0) throw InvalidParameter("alpha must be in (0, 1)");
    if (!(gamma >= 0.0) || gamma >= 1.0) throw InvalidParameter("gamma must be in [0, 1)");
    if (!(reward_max > 0.0) || num_states < 1) throw InvalidParameter("bad reward_max or |S|");
    const double num = -std::log(alpha / 2.0) * gamma * gamma * reward_max * reward_max *
                       static_cast<double>(num_states) * num_states;
    const double one_minus = 1.0 - gamma;
    return num / (2.0 * epsilon * epsilon * one_minus * one_minus * one_minus * one_minus);
}

double sample_complexity_model_based_rl(double epsilon, double alpha, double gamma,
                                        double reward_max, int num_states) {
    if (!(epsilon > 0.0)) throw InvalidParameter("epsilon must be positive");
    if (!(gamma >= 0.0) || gamma >= 1.0) throw InvalidParameter("gamma must be in [0, 1)");
    if (gamma == 0.0) {
        // Avoid a needless division; the SSA formula is zero anyway.
        return sample_complexity_ssa(epsilon, alpha, gamma, reward_max, num_states);
    }
    return sample_complexity_ssa(epsilon * (1.0 - gamma), alpha, gamma, reward_max, num_states);
}

Dataset sample_dataset(const Mdp& m, int per_pair, std::uint64_t seed) {
    if (per_pair < 1) throw InvalidParameter("per_pair must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Dataset data;
    data.tuples.reserve(static_cast<size_t>(m.num_states) * m.num_actions * per_pair);
    std::vector<double> cumulative(m.num_states);
    for (int s = 0; s < m.num_states; ++s)
        for (int a = 0; a < m.num_actions; ++a) {
            const auto row = m.row(s, a);
            std::partial_sum(row.begin(), row.end(), cumulative.begin());
            for (int i = 0; i < per_pair; ++i) {
                const double u = unit(rng);
                const int t = static_cast<int>(
                    std::lower_bound(cumulative.begin(), cumulative.end(), u) -
                    cumulative.begin());
                data.tuples.push_back({s, a, std::min(t, m.num_states - 1), m.reward(s, a)});
            }
        }
    return data;
}

} // namespace gbsm
