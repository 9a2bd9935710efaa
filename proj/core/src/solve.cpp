#include "gbsm/solve.hpp"

#include <algorithm>
#include <cmath>

namespace gbsm {

namespace {

// Iterations after which gamma^n * R_max / (1 - gamma) <= tol.
int a_priori_iterations(double gamma, double reward_max, double tol) {
    if (gamma <= 0.0) return 1;
    const double target = tol * (1.0 - gamma) / reward_max;
    if (target >= 1.0) return 1;
    return static_cast<int>(std::ceil(std::log(target) / std::log(gamma)));
}

} // namespace

ValueFunction value_iteration_optimal(const Mdp& m, double tol) {
    if (!(tol > 0.0)) throw InvalidParameter("tol must be positive");
    const int n = m.num_states;
    std::vector<double> v(n, 0.0), next(n, 0.0);
    const int max_sweeps = a_priori_iterations(m.gamma, m.reward_max, tol);
    // Residual threshold giving the posterior bound ||V - V*|| <= tol.
    const double residual_target = m.gamma > 0.0 ? tol * (1.0 - m.gamma) / m.gamma : 0.0;
    for (int it = 0; it < max_sweeps; ++it) {
        double residual = 0.0;
        for (int s = 0; s < n; ++s) {
            double best = -1.0;
            for (int a = 0; a < m.num_actions; ++a) {
                double q = m.reward(s, a);
                const auto row = m.row(s, a);
                for (int t = 0; t < n; ++t) q += m.gamma * row[t] * v[t];
                best = std::max(best, q);
            }
            next[s] = best;
            residual = std::max(residual, std::abs(next[s] - v[s]));
        }
        v.swap(next);
        if (residual <= residual_target) break;
    }
    return ValueFunction{std::move(v)};
}

ValueFunction policy_evaluation(const Mdp& m, const Policy& pi, double tol) {
    if (!(tol > 0.0)) throw InvalidParameter("tol must be positive");
    validate_policy(pi, m);
    const CollapsedMdp c = on_policy_collapse(m, pi);
    const int n = m.num_states;
    std::vector<double> v(n, 0.0), next(n, 0.0);
    const int max_sweeps = a_priori_iterations(m.gamma, m.reward_max, tol);
    const double residual_target = m.gamma > 0.0 ? tol * (1.0 - m.gamma) / m.gamma : 0.0;
    for (int it = 0; it < max_sweeps; ++it) {
        double residual = 0.0;
        for (int s = 0; s < n; ++s) {
            double x = c.rewards[s];
            const double* row = c.transitions.data() + static_cast<size_t>(s) * n;
            for (int t = 0; t < n; ++t) x += m.gamma * row[t] * v[t];
            next[s] = x;
            residual = std::max(residual, std::abs(next[s] - v[s]));
        }
        v.swap(next);
        if (residual <= residual_target) break;
    }
    return ValueFunction{std::move(v)};
}

Policy greedy_policy(const Mdp& m, const ValueFunction& v) {
    if (v.values.size() != static_cast<size_t>(m.num_states))
        throw ShapeMismatch("value function length != |S|");
    std::vector<int> actions(m.num_states, 0);
    for (int s = 0; s < m.num_states; ++s) {
        double best = -1.0;
        int best_a = 0;
        for (int a = 0; a < m.num_actions; ++a) {
            double q = m.reward(s, a);
            const auto row = m.row(s, a);
            for (int t = 0; t < m.num_states; ++t) q += m.gamma * row[t] * v.values[t];
            if (q > best) {
                best = q;
                best_a = a;
            }
        }
        actions[s] = best_a;
    }
    return Policy::deterministic(std::move(actions), m.num_actions);
}

CollapsedMdp on_policy_collapse(const Mdp& m, const Policy& pi) {
    validate_policy(pi, m);
    const int n = m.num_states;
    CollapsedMdp c;
    c.rewards.assign(n, 0.0);
    c.transitions.assign(static_cast<size_t>(n) * n, 0.0);
    for (int s = 0; s < n; ++s) {
        double* out = c.transitions.data() + static_cast<size_t>(s) * n;
        if (pi.kind == PolicyKind::deterministic) {
            const int a = pi.det_actions[s];
            c.rewards[s] = m.reward(s, a);
            const auto row = m.row(s, a);
            std::copy(row.begin(), row.end(), out);
        } else {
            for (int a = 0; a < m.num_actions; ++a) {
                const double p = pi.prob(s, a);
                if (p == 0.0) continue;
                c.rewards[s] += p * m.reward(s, a);
                const auto row = m.row(s, a);
                for (int t = 0; t < n; ++t) out[t] += p * row[t];
            }
        }
    }
    return c;
}

} // namespace gbsm
