#pragma once

#include <span>
#include <vector>

#include "gbsm/errors.hpp"

namespace gbsm {

/// Probability vector. Entries down to -1e-12 are clamped to zero on construction.
struct Distribution {
    std::vector<double> probs;

    static Distribution from(std::vector<double> values);
    int size() const { return static_cast<int>(probs.size()); }
};

/// Optimal transport plan and its cost. plan is n x m row-major.
struct TransportSolution {
    double cost = 0.0;
    int rows = 0;
    int cols = 0;
    std::vector<double> plan;

    double plan_at(int i, int j) const { return plan[static_cast<size_t>(i) * cols + j]; }
};

/// Exact Wasserstein-1 distance between p and q under the given n x m cost matrix
/// (row-major, nonnegative). Solved as an uncapacitated bipartite min-cost flow by
/// successive shortest augmenting paths with node potentials.
TransportSolution wasserstein1(const Distribution& p, const Distribution& q,
                               std::span<const double> cost, int n, int m);

/// Independent verification oracle: solves the same LP with a self-contained
/// two-phase dense simplex. Requires n, m <= 6.
double wasserstein1_oracle(const Distribution& p, const Distribution& q,
                           std::span<const double> cost, int n, int m);

/// Half L1 distance, in [0, 1].
double total_variation(const Distribution& p, const Distribution& q);

namespace detail {

/// Scratch buffers reused across solves.
struct TransportWorkspace {
    std::vector<double> flow, dist, pot;
    std::vector<int> parent;
    std::vector<char> done;
};

/// Wasserstein-1 value on compact supports. p_idx/q_idx index into the rows/columns
/// of `cost` (leading dimension cost_stride). Weights must each sum to ~1.
double w1_support(const int* p_idx, const double* p_w, int n, const int* q_idx,
                  const double* q_w, int m, const double* cost, int cost_stride,
                  TransportWorkspace& ws, double* plan_out = nullptr);

/// Shared scratch buffers for WarmSimplex::solve.
struct SimplexWorkspace {
    std::vector<double> c, u, v;
    std::vector<char> basic, uset, vset;
    std::vector<int> stack, via;
    std::vector<int> cycle;
    TransportWorkspace ssp;
};

/// Exact transportation simplex over fixed marginals that keeps its optimal basis
/// between solves, so repeated solves under slowly-drifting cost matrices finish in
/// near O(nm) once the basis stabilizes. Falls back to the successive-shortest-path
/// solver if pivoting fails to terminate (then rebuilds a fresh basis).
class WarmSimplex {
public:
    void reset(const int* p_idx, const double* p_w, int n, const int* q_idx,
               const double* q_w, int m);
    bool initialized() const { return n_ > 0; }
    double solve(const double* cost, int cost_stride, SimplexWorkspace& ws);

private:
    void northwest_basis();

    int n_ = 0, m_ = 0;
    std::vector<int> pi_, qi_;
    std::vector<double> pw_, qw_;
    std::vector<int> bi_, bj_;   // basic arcs (n + m - 1 of them)
    std::vector<double> bf_;     // basic-arc flows
};

} // namespace detail

} // namespace gbsm
