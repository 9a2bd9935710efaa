#include "gbsm/practical.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "gbsm/errors.hpp"

namespace gbsm {

void validate_practical_config(const PracticalConfig& cfg) {
    if (cfg.eta1 < 1) throw InvalidParameter("eta1 must be at least 1");
    if (!(cfg.eta2 > 0.0)) throw InvalidParameter("eta2 must be positive");
    if (cfg.max_iters < 0) throw InvalidParameter("max_iters must be nonnegative");
}

std::pair<std::vector<int>, Dataset> build_representative_set(const Dataset& data, int num_states,
                                                              int num_actions,
                                                              const PracticalConfig& cfg) {
    validate_practical_config(cfg);
    std::vector<long> counts(static_cast<size_t>(num_states) * num_actions, 0);
    for (const auto& t : data.tuples) {
        if (t.s < 0 || t.s >= num_states || t.s_next < 0 || t.s_next >= num_states ||
            t.a < 0 || t.a >= num_actions)
            throw ShapeMismatch("dataset tuple indices out of range");
        ++counts[static_cast<size_t>(t.s) * num_actions + t.a];
    }

    std::vector<char> member(num_states, 0);
    std::vector<int> u_t;
    for (int s = 0; s < num_states; ++s) {
        bool covered = true;
        for (int a = 0; a < num_actions && covered; ++a)
            covered = counts[static_cast<size_t>(s) * num_actions + a] >= cfg.eta1;
        if (covered) {
            member[s] = 1;
            u_t.push_back(s);
        }
    }
    if (u_t.empty()) throw EmptyRepresentativeSet();

    Dataset filtered;
    filtered.tuples.reserve(data.tuples.size());
    for (const auto& t : data.tuples)
        if (member[t.s] && member[t.s_next]) filtered.tuples.push_back(t);
    return {std::move(u_t), std::move(filtered)};
}

RestrictedMdp estimate_target_model(const Dataset& filtered, const std::vector<int>& u_t,
                                    int num_actions, double gamma, double reward_max) {
    const int n = static_cast<int>(u_t.size());
    if (n == 0) throw EmptyRepresentativeSet();

    int max_state = 0;
    for (int s : u_t) max_state = std::max(max_state, s);
    std::vector<int> local(max_state + 1, -1);
    for (int i = 0; i < n; ++i) local[u_t[i]] = i;

    std::vector<long> counts(static_cast<size_t>(n) * num_actions, 0);
    std::vector<double> mass(static_cast<size_t>(n) * num_actions * n, 0.0);
    std::vector<double> reward_sum(static_cast<size_t>(n) * num_actions, 0.0);
    for (const auto& t : filtered.tuples) {
        if (t.s > max_state || local[t.s] < 0 || t.s_next > max_state || local[t.s_next] < 0)
            throw ShapeMismatch("filtered tuple outside the representative set");
        const size_t row = static_cast<size_t>(local[t.s]) * num_actions + t.a;
        ++counts[row];
        mass[row * n + local[t.s_next]] += 1.0;
        reward_sum[row] += t.r;
    }

    RestrictedMdp out;
    out.states = u_t;
    out.mdp = Mdp::zeros(n, num_actions, gamma, reward_max);
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < num_actions; ++a) {
            const size_t row = static_cast<size_t>(i) * num_actions + a;
            if (counts[row] == 0) throw UncoveredStateAction(u_t[i], a);
            const double inv = 1.0 / static_cast<double>(counts[row]);
            out.mdp.rewards[row] = reward_sum[row] * inv;
            for (int j = 0; j < n; ++j)
                out.mdp.transitions[row * n + j] = mass[row * n + j] * inv;
        }
    validate_mdp(out.mdp);
    return out;
}

RestrictedMdp close_source_space(const Mdp& m_s, const std::vector<int>& seed_set) {
    validate_mdp(m_s);
    if (seed_set.empty()) throw EmptyRepresentativeSet();

    std::vector<char> member(m_s.num_states, 0);
    std::deque<int> frontier;
    for (int s : seed_set) {
        if (s < 0 || s >= m_s.num_states) throw ShapeMismatch("seed state outside the source MDP");
        if (!member[s]) {
            member[s] = 1;
            frontier.push_back(s);
        }
    }
    while (!frontier.empty()) {
        const int s = frontier.front();
        frontier.pop_front();
        for (int a = 0; a < m_s.num_actions; ++a) {
            const auto row = m_s.row(s, a);
            for (int t = 0; t < m_s.num_states; ++t)
                if (row[t] > 0.0 && !member[t]) {
                    member[t] = 1;
                    frontier.push_back(t);
                }
        }
    }

    RestrictedMdp out;
    for (int s = 0; s < m_s.num_states; ++s)
        if (member[s]) out.states.push_back(s);
    const int n = static_cast<int>(out.states.size());
    std::vector<int> local(m_s.num_states, -1);
    for (int i = 0; i < n; ++i) local[out.states[i]] = i;

    out.mdp = Mdp::zeros(n, m_s.num_actions, m_s.gamma, m_s.reward_max);
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < m_s.num_actions; ++a) {
            const auto row = m_s.row(out.states[i], a);
            out.mdp.rewards[static_cast<size_t>(i) * m_s.num_actions + a] =
                m_s.reward(out.states[i], a);
            for (int t = 0; t < m_s.num_states; ++t)
                if (row[t] > 0.0)
                    out.mdp.transitions[(static_cast<size_t>(i) * m_s.num_actions + a) * n +
                                        local[t]] = row[t];
        }
    validate_mdp(out.mdp);
    return out;
}

MetricMatrix compute_gbsm_practical(const Dataset& data, const Mdp& m_s,
                                    const PracticalConfig& cfg, StageReport* report) {
    validate_mdp(m_s);
    validate_practical_config(cfg);

    auto [u_t, filtered] = build_representative_set(data, m_s.num_states, m_s.num_actions, cfg);
    const RestrictedMdp target = estimate_target_model(filtered, u_t, m_s.num_actions, m_s.gamma,
                                                       m_s.reward_max);
    const RestrictedMdp source = close_source_space(m_s, u_t);

    if (report) {
        report->target_states = static_cast<int>(u_t.size());
        report->source_states = static_cast<int>(source.states.size());
        report->dropped_tuples =
            static_cast<long>(data.tuples.size()) - static_cast<long>(filtered.tuples.size());

        // Largest fraction of samples a retained (s,a) row lost to filtering.
        const int na = m_s.num_actions;
        std::vector<long> before(static_cast<size_t>(u_t.size()) * na, 0);
        std::vector<long> after(before.size(), 0);
        std::vector<int> local(m_s.num_states, -1);
        for (size_t i = 0; i < u_t.size(); ++i) local[u_t[i]] = static_cast<int>(i);
        for (const auto& t : data.tuples)
            if (local[t.s] >= 0) ++before[static_cast<size_t>(local[t.s]) * na + t.a];
        for (const auto& t : filtered.tuples)
            ++after[static_cast<size_t>(local[t.s]) * na + t.a];
        double worst = 0.0;
        for (size_t i = 0; i < before.size(); ++i)
            if (before[i] > 0)
                worst = std::max(worst, 1.0 - static_cast<double>(after[i]) /
                                                  static_cast<double>(before[i]));
        report->max_dropped_mass = worst;
    }

    std::vector<double> d0(target.mdp.num_states * static_cast<size_t>(source.mdp.num_states));
    for (int i = 0; i < target.mdp.num_states; ++i)
        for (int j = 0; j < source.mdp.num_states; ++j) {
            double gap = 0.0;
            for (int a = 0; a < m_s.num_actions; ++a)
                gap = std::max(gap,
                               std::abs(target.mdp.reward(i, a) - source.mdp.reward(j, a)));
            d0[static_cast<size_t>(i) * source.mdp.num_states + j] = gap;
        }

    FixedPointConfig fp;
    fp.tol = cfg.eta2;
    fp.max_iters = cfg.max_iters;
    return detail::metric_fixed_point(target.mdp, source.mdp, fp, false, &d0);
}

} // namespace gbsm
