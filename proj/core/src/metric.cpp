#include "gbsm/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gbsm/solve.hpp"
#include "gbsm/transport.hpp"

namespace gbsm {

double MetricMatrix::max_entry() const {
    double m = 0.0;
    for (double v : dist) m = std::max(m, v);
    return m;
}

double MetricMatrix::max_diagonal() const {
    double m = 0.0;
    for (int i = 0; i < std::min(rows, cols); ++i) m = std::max(m, at(i, i));
    return m;
}

double hausdorff(std::span<const double> costs, int k, int l) {
    if (k < 1 || l < 1) throw EmptySet("hausdorff requires nonempty action sets");
    constexpr double inf = std::numeric_limits<double>::infinity();
    double max_min_rows = 0.0;
    for (int x = 0; x < k; ++x) {
        double row_min = inf;
        for (int y = 0; y < l; ++y) row_min = std::min(row_min, costs[static_cast<size_t>(x) * l + y]);
        max_min_rows = std::max(max_min_rows, row_min);
    }
    double max_min_cols = 0.0;
    for (int y = 0; y < l; ++y) {
        double col_min = inf;
        for (int x = 0; x < k; ++x) col_min = std::min(col_min, costs[static_cast<size_t>(x) * l + y]);
        max_min_cols = std::max(max_min_cols, col_min);
    }
    return std::max(max_min_rows, max_min_cols);
}

namespace detail {

int default_max_iters(double tol, double gamma, double reward_max) {
    if (gamma <= 0.0) return 10;
    const double target = tol * (1.0 - gamma) / reward_max;
    if (target >= 1.0) return 10;
    return 10 * static_cast<int>(std::ceil(std::log(target) / std::log(gamma)));
}

namespace {

// Compact per-(s,a) transition supports.
struct SupportTable {
    int num_states = 0;
    int num_actions = 0;
    std::vector<int> offsets;   // per (s,a), into idx/w; offsets.back() is the total
    std::vector<int> idx;
    std::vector<double> w;

    explicit SupportTable(const Mdp& m)
        : num_states(m.num_states), num_actions(m.num_actions) {
        offsets.reserve(static_cast<size_t>(num_states) * num_actions + 1);
        offsets.push_back(0);
        for (int s = 0; s < num_states; ++s)
            for (int a = 0; a < num_actions; ++a) {
                const auto row = m.row(s, a);
                for (int t = 0; t < num_states; ++t)
                    if (row[t] > 0.0) {
                        idx.push_back(t);
                        w.push_back(row[t]);
                    }
                offsets.push_back(static_cast<int>(idx.size()));
            }
    }

    int count(int sa) const { return offsets[sa + 1] - offsets[sa]; }
    const int* indices(int sa) const { return idx.data() + offsets[sa]; }
    const double* weights(int sa) const { return w.data() + offsets[sa]; }
};

int a_priori_sweeps(double tol, double gamma, double reward_max) {
    if (gamma <= 0.0) return 1;
    const double target = tol * (1.0 - gamma) / reward_max;
    if (target >= 1.0) return 1;
    return static_cast<int>(std::ceil(std::log(target) / std::log(gamma)));
}

// One synchronous sweep: next(s,s') from the frozen previous iterate. Each (sa, sb)
// transport problem keeps its simplex basis warm across sweeps.
void sweep(const Mdp& m1, const Mdp& m2, const SupportTable& t1, const SupportTable& t2,
           const std::vector<double>& prev, std::vector<double>& next, bool shared_action_max,
           std::vector<WarmSimplex>& solvers, SimplexWorkspace& ws, std::vector<double>& block) {
    const int s1 = m1.num_states, s2 = m2.num_states;
    const int a1 = m1.num_actions, a2 = m2.num_actions;
    const int n_sb = s2 * a2;
    const double gamma = m1.gamma;

    auto w1 = [&](int sa, int sb) {
        WarmSimplex& solver = solvers[static_cast<size_t>(sa) * n_sb + sb];
        if (!solver.initialized())
            solver.reset(t1.indices(sa), t1.weights(sa), t1.count(sa), t2.indices(sb),
                         t2.weights(sb), t2.count(sb));
        return solver.solve(prev.data(), s2, ws);
    };

    for (int s = 0; s < s1; ++s) {
        for (int sp = 0; sp < s2; ++sp) {
            if (shared_action_max) {
                double worst = 0.0;
                for (int a = 0; a < a1; ++a) {
                    const int sa = s * a1 + a, sb = sp * a2 + a;
                    double v = std::abs(m1.reward(s, a) - m2.reward(sp, a));
                    if (gamma > 0.0) v += gamma * w1(sa, sb);
                    worst = std::max(worst, v);
                }
                next[static_cast<size_t>(s) * s2 + sp] = worst;
            } else {
                for (int a = 0; a < a1; ++a) {
                    const int sa = s * a1 + a;
                    for (int ap = 0; ap < a2; ++ap) {
                        const int sb = sp * a2 + ap;
                        double v = std::abs(m1.reward(s, a) - m2.reward(sp, ap));
                        if (gamma > 0.0) v += gamma * w1(sa, sb);
                        block[static_cast<size_t>(a) * a2 + ap] = v;
                    }
                }
                next[static_cast<size_t>(s) * s2 + sp] = hausdorff(block, a1, a2);
            }
        }
    }
}

} // namespace

MetricMatrix metric_fixed_point(const Mdp& m1, const Mdp& m2, const FixedPointConfig& cfg,
                                bool shared_action_max, const std::vector<double>* initial) {
    if (m1.gamma != m2.gamma) throw GammaMismatch(m1.gamma, m2.gamma);
    if (shared_action_max && m1.num_actions != m2.num_actions)
        throw ActionSpaceMismatch(m1.num_actions, m2.num_actions);
    if (!(cfg.tol > 0.0)) throw InvalidParameter("tol must be positive");

    const int s1 = m1.num_states, s2 = m2.num_states;
    const double reward_max = std::max(m1.reward_max, m2.reward_max);
    const int apriori = a_priori_sweeps(cfg.tol, m1.gamma, reward_max);
    const int max_iters =
        cfg.max_iters > 0 ? cfg.max_iters : default_max_iters(cfg.tol, m1.gamma, reward_max);

    const SupportTable t1(m1), t2(m2);
    std::vector<WarmSimplex> solvers(static_cast<size_t>(s1) * m1.num_actions * s2 *
                                     m2.num_actions);
    SimplexWorkspace ws;
    std::vector<double> block(static_cast<size_t>(m1.num_actions) * m2.num_actions);

    MetricMatrix out;
    out.rows = s1;
    out.cols = s2;
    out.dist.assign(static_cast<size_t>(s1) * s2, 0.0);
    if (initial) {
        if (initial->size() != out.dist.size())
            throw ShapeMismatch("initial metric has wrong shape");
        out.dist = *initial;
    }

    std::vector<double> next(out.dist.size());
    out.converged = false;
    for (int n = 1; n <= max_iters; ++n) {
        sweep(m1, m2, t1, t2, out.dist, next, shared_action_max, solvers, ws, block);
        double residual = 0.0;
        for (size_t i = 0; i < next.size(); ++i)
            residual = std::max(residual, std::abs(next[i] - out.dist[i]));
        out.dist.swap(next);
        out.iterations = n;
        out.residual = residual;
        if (cfg.record_history) out.history.push_back(out.dist);
        if (residual <= cfg.tol || (!initial && n >= apriori)) {
            out.converged = true;
            break;
        }
    }
    return out;
}

} // namespace detail

PairCost delta_cost(const Mdp& m1, const Mdp& m2, const MetricMatrix& d) {
    if (m1.gamma != m2.gamma) throw GammaMismatch(m1.gamma, m2.gamma);
    if (d.rows != m1.num_states || d.cols != m2.num_states)
        throw ShapeMismatch("metric matrix must be |S1| x |S2|");

    const detail::SupportTable t1(m1), t2(m2);
    detail::TransportWorkspace ws;
    PairCost out;
    out.rows = m1.num_states * m1.num_actions;
    out.cols = m2.num_states * m2.num_actions;
    out.delta.resize(static_cast<size_t>(out.rows) * out.cols);
    for (int sa = 0; sa < out.rows; ++sa) {
        const int s = sa / m1.num_actions, a = sa % m1.num_actions;
        for (int sb = 0; sb < out.cols; ++sb) {
            const int sp = sb / m2.num_actions, ap = sb % m2.num_actions;
            double v = std::abs(m1.reward(s, a) - m2.reward(sp, ap));
            if (m1.gamma > 0.0)
                v += m1.gamma * detail::w1_support(t1.indices(sa), t1.weights(sa), t1.count(sa),
                                                   t2.indices(sb), t2.weights(sb), t2.count(sb),
                                                   d.dist.data(), m2.num_states, ws);
            out.delta[static_cast<size_t>(sa) * out.cols + sb] = v;
        }
    }
    return out;
}

MetricMatrix gbsm(const Mdp& m1, const Mdp& m2, const FixedPointConfig& cfg) {
    return detail::metric_fixed_point(m1, m2, cfg, false, nullptr);
}

MetricMatrix bsm(const Mdp& m, const FixedPointConfig& cfg) {
    return detail::metric_fixed_point(m, m, cfg, true, nullptr);
}

MetricMatrix gbsm_conference(const Mdp& m1, const Mdp& m2, const FixedPointConfig& cfg) {
    return detail::metric_fixed_point(m1, m2, cfg, true, nullptr);
}

MetricMatrix gbsm_on_policy(const Mdp& m1, const Mdp& m2, const Policy& pi,
                            const FixedPointConfig& cfg) {
    if (m1.gamma != m2.gamma) throw GammaMismatch(m1.gamma, m2.gamma);
    if (m1.num_actions != m2.num_actions)
        throw ShapeMismatch("on-policy metric requires a shared action space");
    if (!(cfg.tol > 0.0)) throw InvalidParameter("tol must be positive");

    // on_policy_collapse validates the policy shape against each MDP.
    const CollapsedMdp c1 = on_policy_collapse(m1, pi);
    const CollapsedMdp c2 = on_policy_collapse(m2, pi);

    const int s1 = m1.num_states, s2 = m2.num_states;
    const double gamma = m1.gamma;
    const double reward_max = std::max(m1.reward_max, m2.reward_max);

    // Compact supports of the collapsed rows.
    auto build = [](const CollapsedMdp& c, int n) {
        std::vector<int> offsets{0};
        std::vector<int> idx;
        std::vector<double> w;
        for (int s = 0; s < n; ++s) {
            const double* row = c.transitions.data() + static_cast<size_t>(s) * n;
            for (int t = 0; t < n; ++t)
                if (row[t] > 0.0) {
                    idx.push_back(t);
                    w.push_back(row[t]);
                }
            offsets.push_back(static_cast<int>(idx.size()));
        }
        return std::tuple(std::move(offsets), std::move(idx), std::move(w));
    };
    auto [off1, idx1, w1v] = build(c1, s1);
    auto [off2, idx2, w2v] = build(c2, s2);

    const int apriori = [&] {
        if (gamma <= 0.0) return 1;
        const double target = cfg.tol * (1.0 - gamma) / reward_max;
        if (target >= 1.0) return 1;
        return static_cast<int>(std::ceil(std::log(target) / std::log(gamma)));
    }();
    const int max_iters =
        cfg.max_iters > 0 ? cfg.max_iters : detail::default_max_iters(cfg.tol, gamma, reward_max);

    MetricMatrix out;
    out.rows = s1;
    out.cols = s2;
    out.dist.assign(static_cast<size_t>(s1) * s2, 0.0);
    std::vector<double> next(out.dist.size());
    detail::TransportWorkspace ws;

    out.converged = false;
    for (int n = 1; n <= max_iters; ++n) {
        for (int s = 0; s < s1; ++s)
            for (int sp = 0; sp < s2; ++sp) {
                double v = std::abs(c1.rewards[s] - c2.rewards[sp]);
                if (gamma > 0.0)
                    v += gamma * detail::w1_support(idx1.data() + off1[s], w1v.data() + off1[s],
                                                    off1[s + 1] - off1[s], idx2.data() + off2[sp],
                                                    w2v.data() + off2[sp], off2[sp + 1] - off2[sp],
                                                    out.dist.data(), s2, ws);
                next[static_cast<size_t>(s) * s2 + sp] = v;
            }
        double residual = 0.0;
        for (size_t i = 0; i < next.size(); ++i)
            residual = std::max(residual, std::abs(next[i] - out.dist[i]));
        out.dist.swap(next);
        out.iterations = n;
        out.residual = residual;
        if (cfg.record_history) out.history.push_back(out.dist);
        if (residual <= cfg.tol || n >= apriori) {
            out.converged = true;
            break;
        }
    }
    return out;
}

TvSurrogate tv_surrogate(const Mdp& m1, const Mdp& m2) {
    if (m1.num_states != m2.num_states || m1.num_actions != m2.num_actions)
        throw ShapeMismatch("tv_surrogate requires identical state and action spaces");
    if (m1.gamma != m2.gamma) throw GammaMismatch(m1.gamma, m2.gamma);

    const int n = m1.num_states, na = m1.num_actions;
    const double gamma = m1.gamma;
    const double reward_max = std::max(m1.reward_max, m2.reward_max);
    const double tv_scale = gamma > 0.0 ? gamma * reward_max / (1.0 - gamma) : 0.0;

    TvSurrogate out;
    out.per_state.resize(n);
    std::vector<double> block(static_cast<size_t>(na) * na);
    for (int s = 0; s < n; ++s) {
        for (int a = 0; a < na; ++a) {
            const auto row1 = m1.row(s, a);
            for (int ap = 0; ap < na; ++ap) {
                const auto row2 = m2.row(s, ap);
                double tv = 0.0;
                for (int t = 0; t < n; ++t) tv += std::abs(row1[t] - row2[t]);
                tv *= 0.5;
                block[static_cast<size_t>(a) * na + ap] =
                    std::abs(m1.reward(s, a) - m2.reward(s, ap)) + tv_scale * tv;
            }
        }
        out.per_state[s] = hausdorff(block, na, na);
    }
    double worst = 0.0;
    for (double v : out.per_state) worst = std::max(worst, v);
    out.bound = worst / (1.0 - gamma);
    return out;
}

} // namespace gbsm
