#include "gbsm/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gbsm {

namespace {
constexpr double kClampFloor = -1e-12;
constexpr double kSumTol = 1e-9;
constexpr double kFlowEps = 1e-14;
} // namespace

Distribution Distribution::from(std::vector<double> values) {
    double sum = 0.0;
    for (double& v : values) {
        if (v < kClampFloor)
            throw NotADistribution("entry " + std::to_string(v) + " below zero");
        if (v < 0.0) v = 0.0;
        sum += v;
    }
    if (std::abs(sum - 1.0) > kSumTol)
        throw NotADistribution("probabilities sum to " + std::to_string(sum));
    return Distribution{std::move(values)};
}

namespace detail {

double w1_support(const int* p_idx, const double* p_w, int n, const int* q_idx,
                  const double* q_w, int m, const double* cost, int cost_stride,
                  TransportWorkspace& ws, double* plan_out) {
    const int total = n + m;
    constexpr double inf = std::numeric_limits<double>::infinity();

    ws.flow.assign(static_cast<size_t>(n) * m, 0.0);
    ws.pot.assign(total, 0.0);
    ws.dist.resize(total);
    ws.parent.resize(total);
    ws.done.resize(total);

    // Mutable supplies/demands; reuse dist buffer tail is not possible, keep local copies.
    static thread_local std::vector<double> supply, demand;
    supply.assign(p_w, p_w + n);
    demand.assign(q_w, q_w + m);

    auto arc_cost = [&](int i, int j) { return cost[static_cast<size_t>(p_idx[i]) * cost_stride + q_idx[j]]; };

    double remaining = 0.0;
    for (int i = 0; i < n; ++i) remaining += supply[i];

    while (remaining > kFlowEps) {
        // Multi-source Dijkstra on reduced costs over the residual graph.
        for (int x = 0; x < total; ++x) {
            ws.dist[x] = inf;
            ws.parent[x] = -1;
            ws.done[x] = 0;
        }
        for (int i = 0; i < n; ++i)
            if (supply[i] > kFlowEps) ws.dist[i] = 0.0;

        int target = -1;
        for (int iter = 0; iter < total; ++iter) {
            int u = -1;
            double best = inf;
            for (int x = 0; x < total; ++x)
                if (!ws.done[x] && ws.dist[x] < best) {
                    best = ws.dist[x];
                    u = x;
                }
            if (u < 0) break;
            ws.done[u] = 1;
            if (u >= n && demand[u - n] > kFlowEps) {
                target = u;
                break;
            }
            if (u < n) {
                const double base = ws.dist[u] + ws.pot[u];
                for (int j = 0; j < m; ++j) {
                    const int y = n + j;
                    if (ws.done[y]) continue;
                    const double nd = base + arc_cost(u, j) - ws.pot[y];
                    if (nd < ws.dist[y]) {
                        ws.dist[y] = nd;
                        ws.parent[y] = u;
                    }
                }
            } else {
                const int j = u - n;
                const double base = ws.dist[u] + ws.pot[u];
                for (int i = 0; i < n; ++i) {
                    if (ws.done[i] || ws.flow[static_cast<size_t>(i) * m + j] <= kFlowEps) continue;
                    const double nd = base - arc_cost(i, j) - ws.pot[i];
                    if (nd < ws.dist[i]) {
                        ws.dist[i] = nd;
                        ws.parent[i] = u;
                    }
                }
            }
        }
        if (target < 0) break; // all residual demand unreachable (fp dust)

        const double dist_t = ws.dist[target];
        for (int x = 0; x < total; ++x)
            ws.pot[x] += std::min(ws.dist[x], dist_t);

        // Bottleneck along the augmenting path.
        double delta = demand[target - n];
        int x = target;
        while (ws.parent[x] >= 0) {
            const int pred = ws.parent[x];
            if (pred >= n) // backward arc sink->source, limited by current flow
                delta = std::min(delta, ws.flow[static_cast<size_t>(x) * m + (pred - n)]);
            x = pred;
        }
        delta = std::min(delta, supply[x]);

        int y = target;
        while (ws.parent[y] >= 0) {
            const int pred = ws.parent[y];
            if (pred < n)
                ws.flow[static_cast<size_t>(pred) * m + (y - n)] += delta;
            else
                ws.flow[static_cast<size_t>(y) * m + (pred - n)] -= delta;
            y = pred;
        }
        supply[x] -= delta;
        demand[target - n] -= delta;
        remaining -= delta;
    }

    double total_cost = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            const double f = ws.flow[static_cast<size_t>(i) * m + j];
            if (f > 0.0) total_cost += f * arc_cost(i, j);
        }
    if (plan_out) std::copy(ws.flow.begin(), ws.flow.end(), plan_out);
    return total_cost;
}

void WarmSimplex::reset(const int* p_idx, const double* p_w, int n, const int* q_idx,
                        const double* q_w, int m) {
    n_ = n;
    m_ = m;
    pi_.assign(p_idx, p_idx + n);
    qi_.assign(q_idx, q_idx + m);
    pw_.assign(p_w, p_w + n);
    qw_.assign(q_w, q_w + m);
    northwest_basis();
}

void WarmSimplex::northwest_basis() {
    bi_.clear();
    bj_.clear();
    bf_.clear();
    int i = 0, j = 0;
    double a = pw_[0], b = qw_[0];
    while (true) {
        const double f = std::max(0.0, std::min(a, b));
        bi_.push_back(i);
        bj_.push_back(j);
        bf_.push_back(f);
        if (i == n_ - 1 && j == m_ - 1) break;
        if ((a <= b && i < n_ - 1) || j == m_ - 1) {
            b -= f;
            a = pw_[++i];
        } else {
            a -= f;
            b = qw_[++j];
        }
    }
}

double WarmSimplex::solve(const double* cost, int cost_stride, SimplexWorkspace& ws) {
    constexpr double kPivotEps = 1e-12;
    const int n = n_, m = m_, arcs = n + m - 1, total = n + m;

    ws.c.resize(static_cast<size_t>(n) * m);
    for (int i = 0; i < n; ++i) {
        const double* row = cost + static_cast<size_t>(pi_[i]) * cost_stride;
        for (int j = 0; j < m; ++j) ws.c[static_cast<size_t>(i) * m + j] = row[qi_[j]];
    }

    for (int attempt = 0; attempt < 2; ++attempt) {
        const int max_pivots = 50 * (n + m) + 200;
        int pivots = 0;
        while (true) {
            // Duals from the basis tree: u_i + v_j = c_ij on basic arcs, u_0 = 0.
            ws.u.assign(n, 0.0);
            ws.v.assign(m, 0.0);
            ws.uset.assign(n, 0);
            ws.vset.assign(m, 0);
            ws.uset[0] = 1;
            for (int settled = 1; settled < total;) {
                int progressed = 0;
                for (int k = 0; k < arcs; ++k) {
                    const int i = bi_[k], j = bj_[k];
                    if (ws.uset[i] && !ws.vset[j]) {
                        ws.v[j] = ws.c[static_cast<size_t>(i) * m + j] - ws.u[i];
                        ws.vset[j] = 1;
                        ++settled;
                        ++progressed;
                    } else if (ws.vset[j] && !ws.uset[i]) {
                        ws.u[i] = ws.c[static_cast<size_t>(i) * m + j] - ws.v[j];
                        ws.uset[i] = 1;
                        ++settled;
                        ++progressed;
                    }
                }
                if (!progressed) break;  // disconnected basis (shouldn't happen)
            }

            // Entering arc: most negative reduced cost.
            int ei = -1, ej = -1;
            double best = -kPivotEps;
            for (int i = 0; i < n; ++i) {
                const double ui = ws.u[i];
                const double* ci = ws.c.data() + static_cast<size_t>(i) * m;
                for (int j = 0; j < m; ++j) {
                    const double r = ci[j] - ui - ws.v[j];
                    if (r < best) {
                        best = r;
                        ei = i;
                        ej = j;
                    }
                }
            }
            if (ei < 0) {
                double obj = 0.0;
                for (int k = 0; k < arcs; ++k)
                    obj += bf_[k] * ws.c[static_cast<size_t>(bi_[k]) * m + bj_[k]];
                return obj;
            }
            if (++pivots > max_pivots) break;

            // Cycle: path from row node ei to col node ej through the basis tree.
            // Nodes: rows 0..n-1, cols n..n+m-1; via[x] = basic-arc index used to reach x.
            ws.via.assign(total, -1);
            ws.stack.clear();
            ws.stack.push_back(ei);
            std::vector<char>& seen = ws.basic;  // reuse as node marks
            seen.assign(total, 0);
            seen[ei] = 1;
            while (!ws.stack.empty() && !seen[n + ej]) {
                const int x = ws.stack.back();
                ws.stack.pop_back();
                for (int k = 0; k < arcs; ++k) {
                    const int ri = bi_[k], cj = n + bj_[k];
                    int next = -1;
                    if (ri == x && !seen[cj]) next = cj;
                    else if (cj == x && !seen[ri]) next = ri;
                    if (next >= 0) {
                        seen[next] = 1;
                        ws.via[next] = k;
                        ws.stack.push_back(next);
                    }
                }
            }
            if (!seen[n + ej]) break;  // tree broken; rebuild

            // Walk back from ej to ei collecting the alternating cycle.
            ws.cycle.clear();
            int node = n + ej;
            while (node != ei) {
                const int k = ws.via[node];
                ws.cycle.push_back(k);
                node = (n + bj_[k] == node) ? bi_[k] : n + bj_[k];
            }
            // Entering arc would get +theta; arcs along the path alternate starting
            // with '-' at the arc adjacent to ej.
            double theta = std::numeric_limits<double>::infinity();
            int leave = -1;
            for (size_t t = 0; t < ws.cycle.size(); t += 2) {
                const int k = ws.cycle[t];
                if (bf_[k] < theta) {
                    theta = bf_[k];
                    leave = k;
                }
            }
            if (leave < 0) break;
            for (size_t t = 0; t < ws.cycle.size(); ++t) {
                const int k = ws.cycle[t];
                bf_[k] += (t % 2 == 0) ? -theta : theta;
                if (bf_[k] < 0.0) bf_[k] = 0.0;
            }
            bi_[leave] = ei;
            bj_[leave] = ej;
            bf_[leave] = theta;
        }
        northwest_basis();  // rebuild and retry once from scratch
    }

    // Pivoting failed twice; fall back to the independent solver.
    northwest_basis();
    return w1_support(pi_.data(), pw_.data(), n, qi_.data(), qw_.data(), m, cost, cost_stride,
                      ws.ssp);
}

} // namespace detail

namespace {

void check_instance(const Distribution& p, const Distribution& q, std::span<const double> cost,
                    int n, int m) {
    if (p.size() != n || q.size() != m || cost.size() != static_cast<size_t>(n) * m)
        throw DimensionMismatch("cost matrix is " + std::to_string(cost.size()) +
                                " entries, expected " + std::to_string(n) + "x" + std::to_string(m));
    for (double c : cost)
        if (!(c >= 0.0) || !std::isfinite(c))
            throw InvalidParameter("cost entries must be nonnegative and finite");
}

} // namespace

TransportSolution wasserstein1(const Distribution& p, const Distribution& q,
                               std::span<const double> cost, int n, int m) {
    check_instance(p, q, cost, n, m);
    // Zero-probability rows/columns are pruned and reinserted as zero plan rows.
    std::vector<int> pi, qi;
    std::vector<double> pw, qw;
    for (int i = 0; i < n; ++i)
        if (p.probs[i] > 0.0) {
            pi.push_back(i);
            pw.push_back(p.probs[i]);
        }
    for (int j = 0; j < m; ++j)
        if (q.probs[j] > 0.0) {
            qi.push_back(j);
            qw.push_back(q.probs[j]);
        }

    detail::TransportWorkspace ws;
    std::vector<double> support_plan(pi.size() * qi.size());
    const double value = detail::w1_support(pi.data(), pw.data(), static_cast<int>(pi.size()),
                                            qi.data(), qw.data(), static_cast<int>(qi.size()),
                                            cost.data(), m, ws, support_plan.data());

    TransportSolution sol;
    sol.cost = value;
    sol.rows = n;
    sol.cols = m;
    sol.plan.assign(static_cast<size_t>(n) * m, 0.0);
    for (size_t a = 0; a < pi.size(); ++a)
        for (size_t b = 0; b < qi.size(); ++b)
            sol.plan[static_cast<size_t>(pi[a]) * m + qi[b]] = support_plan[a * qi.size() + b];
    return sol;
}

double total_variation(const Distribution& p, const Distribution& q) {
    if (p.size() != q.size())
        throw DimensionMismatch("distributions have lengths " + std::to_string(p.size()) +
                                " and " + std::to_string(q.size()));
    double sum = 0.0;
    for (int i = 0; i < p.size(); ++i) sum += std::abs(p.probs[i] - q.probs[i]);
    return 0.5 * sum;
}

// ---------------------------------------------------------------------------
// Oracle: self-contained two-phase dense simplex on the primal transportation LP.
// Deliberately shares no code with the flow solver above.
// ---------------------------------------------------------------------------

namespace {

constexpr double kSimplexEps = 1e-11;

// Minimizes c.x subject to A x = b, x >= 0 (b >= 0). Returns optimal objective.
double two_phase_simplex(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                         const std::vector<double>& c) {
    const int rows = static_cast<int>(a.size());
    const int cols = static_cast<int>(c.size());
    const int width = cols + rows + 1; // structural + artificial + rhs
    std::vector<std::vector<double>> t(rows + 1, std::vector<double>(width, 0.0));
    std::vector<int> basis(rows);
    for (int r = 0; r < rows; ++r) {
        for (int j = 0; j < cols; ++j) t[r][j] = a[r][j];
        t[r][cols + r] = 1.0;
        t[r][width - 1] = b[r];
        basis[r] = cols + r;
    }
    // Phase-1 objective row: minimize sum of artificials.
    for (int j = 0; j < width; ++j) {
        double s = 0.0;
        for (int r = 0; r < rows; ++r) s += t[r][j];
        t[rows][j] = (j >= cols && j < cols + rows) ? 0.0 : -s;
    }

    auto pivot = [&](int pr, int pc) {
        const double pv = t[pr][pc];
        for (int j = 0; j < width; ++j) t[pr][j] /= pv;
        for (int r = 0; r <= rows; ++r) {
            if (r == pr) continue;
            const double f = t[r][pc];
            if (f == 0.0) continue;
            for (int j = 0; j < width; ++j) t[r][j] -= f * t[pr][j];
        }
        basis[pr] = pc;
    };

    auto run = [&](bool phase_one) {
        for (;;) {
            // Bland's rule: lowest eligible column index.
            int pc = -1;
            const int limit = phase_one ? width - 1 : cols;
            for (int j = 0; j < limit; ++j) {
                if (phase_one && j >= cols) continue; // artificials never re-enter
                if (t[rows][j] < -kSimplexEps) {
                    pc = j;
                    break;
                }
            }
            if (pc < 0) return;
            int pr = -1;
            double best_ratio = 0.0;
            for (int r = 0; r < rows; ++r) {
                if (t[r][pc] > kSimplexEps) {
                    const double ratio = t[r][width - 1] / t[r][pc];
                    if (pr < 0 || ratio < best_ratio - kSimplexEps ||
                        (ratio < best_ratio + kSimplexEps && basis[r] < basis[pr])) {
                        pr = r;
                        best_ratio = ratio;
                    }
                }
            }
            if (pr < 0) throw Error("oracle LP unbounded (malformed instance)");
            pivot(pr, pc);
        }
    };

    run(true);
    // Drive any residual artificial out of the basis if possible; a feasible
    // transportation instance always reaches phase-1 objective ~0.
    for (int r = 0; r < rows; ++r) {
        if (basis[r] >= cols && std::abs(t[r][width - 1]) > 1e-7)
            throw Error("oracle phase 1 failed to reach feasibility");
    }

    // Phase-2 objective row.
    for (int j = 0; j < width; ++j) t[rows][j] = 0.0;
    for (int j = 0; j < cols; ++j) t[rows][j] = c[j];
    // Canonicalize: objective row must be zero on basic columns.
    for (int r = 0; r < rows; ++r) {
        const double f = t[rows][basis[r]];
        if (f != 0.0)
            for (int j = 0; j < width; ++j) t[rows][j] -= f * t[r][j];
    }
    run(false);

    double obj = 0.0;
    for (int r = 0; r < rows; ++r)
        if (basis[r] < cols) obj += c[basis[r]] * t[r][width - 1];
    return obj;
}

} // namespace

double wasserstein1_oracle(const Distribution& p, const Distribution& q,
                           std::span<const double> cost, int n, int m) {
    if (n > 6 || m > 6)
        throw TooLarge("oracle limited to 6 support points, got " + std::to_string(n) + "x" +
                       std::to_string(m));
    check_instance(p, q, cost, n, m);

    const int vars = n * m;
    std::vector<std::vector<double>> a(n + m, std::vector<double>(vars, 0.0));
    std::vector<double> b(n + m, 0.0), c(vars, 0.0);
    for (int i = 0; i < n; ++i) {
        b[i] = p.probs[i];
        for (int j = 0; j < m; ++j) {
            a[i][i * m + j] = 1.0;
            a[n + j][i * m + j] = 1.0;
            c[i * m + j] = cost[static_cast<size_t>(i) * m + j];
        }
    }
    for (int j = 0; j < m; ++j) b[n + j] = q.probs[j];
    return two_phase_simplex(a, b, c);
}

} // namespace gbsm
