#include "gbsm/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace gbsm {

namespace {
constexpr double kRowSumTol = 1e-9;
}

Mdp Mdp::zeros(int num_states, int num_actions, double gamma, double reward_max) {
    Mdp m;
    m.num_states = num_states;
    m.num_actions = num_actions;
    m.gamma = gamma;
    m.reward_max = reward_max;
    m.rewards.assign(static_cast<size_t>(num_states) * num_actions, 0.0);
    m.transitions.assign(static_cast<size_t>(num_states) * num_actions * num_states, 0.0);
    return m;
}

Policy Policy::deterministic(std::vector<int> actions, int num_actions) {
    Policy pi;
    pi.kind = PolicyKind::deterministic;
    pi.num_states = static_cast<int>(actions.size());
    pi.num_actions = num_actions;
    pi.det_actions = std::move(actions);
    return pi;
}

Policy Policy::stochastic(std::vector<double> probs, int num_states, int num_actions) {
    Policy pi;
    pi.kind = PolicyKind::stochastic;
    pi.num_states = num_states;
    pi.num_actions = num_actions;
    pi.action_probs = std::move(probs);
    return pi;
}

Policy Policy::uniform(int num_states, int num_actions) {
    return stochastic(
        std::vector<double>(static_cast<size_t>(num_states) * num_actions, 1.0 / num_actions),
        num_states, num_actions);
}

Policy Policy::as_stochastic() const {
    if (kind == PolicyKind::stochastic) return *this;
    std::vector<double> probs(static_cast<size_t>(num_states) * num_actions, 0.0);
    for (int s = 0; s < num_states; ++s)
        probs[static_cast<size_t>(s) * num_actions + det_actions[s]] = 1.0;
    return stochastic(std::move(probs), num_states, num_actions);
}

void validate_mdp(const Mdp& m) {
    if (m.num_states <= 0 || m.num_actions <= 0)
        throw InvalidParameter("num_states and num_actions must be positive");
    if (!(m.gamma >= 0.0) || m.gamma >= 1.0) throw InvalidGamma(m.gamma);
    if (!(m.reward_max > 0.0)) throw InvalidParameter("reward_max must be positive");
    if (m.rewards.size() != static_cast<size_t>(m.num_states) * m.num_actions ||
        m.transitions.size() != static_cast<size_t>(m.num_states) * m.num_actions * m.num_states)
        throw ShapeMismatch("reward/transition storage does not match |S|, |A|");
    for (int s = 0; s < m.num_states; ++s) {
        for (int a = 0; a < m.num_actions; ++a) {
            const double r = m.reward(s, a);
            if (!(r >= 0.0 && r <= m.reward_max)) throw RewardOutOfRange(s, a, r, m.reward_max);
            double sum = 0.0;
            for (double p : m.row(s, a)) {
                if (p < 0.0) throw NonStochasticRow(s, a, p);
                sum += p;
            }
            if (std::abs(sum - 1.0) > kRowSumTol) throw NonStochasticRow(s, a, sum);
        }
    }
}

void validate_policy(const Policy& pi, const Mdp& m) {
    if (pi.num_states != m.num_states || pi.num_actions != m.num_actions)
        throw ShapeMismatch("policy dimensions do not match the MDP");
    if (pi.kind == PolicyKind::deterministic) {
        if (pi.det_actions.size() != static_cast<size_t>(m.num_states))
            throw ShapeMismatch("deterministic policy length != |S|");
        for (int a : pi.det_actions)
            if (a < 0 || a >= m.num_actions) throw ShapeMismatch("policy action index out of range");
    } else {
        if (pi.action_probs.size() != static_cast<size_t>(m.num_states) * m.num_actions)
            throw ShapeMismatch("stochastic policy storage != |S|x|A|");
        for (int s = 0; s < m.num_states; ++s) {
            double sum = 0.0;
            for (int a = 0; a < m.num_actions; ++a) {
                const double p = pi.prob(s, a);
                if (p < 0.0) throw ShapeMismatch("negative policy probability");
                sum += p;
            }
            if (std::abs(sum - 1.0) > kRowSumTol)
                throw ShapeMismatch("policy row " + std::to_string(s) + " sums to " +
                                    std::to_string(sum));
        }
    }
}

void validate_garnet_config(const GarnetConfig& cfg) {
    if (cfg.num_states <= 0 || cfg.num_actions <= 0)
        throw InvalidParameter("num_states and num_actions must be positive");
    if (!(cfg.branching_fraction > 0.0) || cfg.branching_fraction > 1.0)
        throw InvalidParameter("branching_fraction must be in (0, 1]");
    if (!(cfg.gamma >= 0.0) || cfg.gamma >= 1.0) throw InvalidGamma(cfg.gamma);
    if (!(cfg.reward_max > 0.0)) throw InvalidParameter("reward_max must be positive");
}

Mdp garnet_generate(const GarnetConfig& cfg) {
    validate_garnet_config(cfg);
    const int n = cfg.num_states;
    const int branch = static_cast<int>(std::ceil(cfg.branching_fraction * n));
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Mdp m = Mdp::zeros(n, cfg.num_actions, cfg.gamma, cfg.reward_max);
    std::vector<int> pool(n);
    for (int s = 0; s < n; ++s) {
        for (int a = 0; a < cfg.num_actions; ++a) {
            // Partial Fisher-Yates: first `branch` entries are a sample without replacement.
            std::iota(pool.begin(), pool.end(), 0);
            for (int i = 0; i < branch; ++i) {
                std::uniform_int_distribution<int> pick(i, n - 1);
                std::swap(pool[i], pool[pick(rng)]);
            }
            auto row = m.row(s, a);
            double total = 0.0;
            for (int i = 0; i < branch; ++i) {
                double w = unit(rng);
                // A zero draw would shrink the support below `branch`.
                while (w == 0.0) w = unit(rng);
                row[pool[i]] = w;
                total += w;
            }
            for (int i = 0; i < branch; ++i) row[pool[i]] /= total;
            m.reward(s, a) = unit(rng) * cfg.reward_max;
        }
    }
    return m;
}

} // namespace gbsm
