#include <benchmark/benchmark.h>

#include "gbsm/metric.hpp"
#include "gbsm/transport.hpp"

namespace {

gbsm::Mdp make_garnet(int states, int actions, double gamma, std::uint64_t seed) {
    gbsm::GarnetConfig cfg;
    cfg.num_states = states;
    cfg.num_actions = actions;
    cfg.branching_fraction = 0.5;
    cfg.gamma = gamma;
    cfg.seed = seed;
    return gbsm::garnet_generate(cfg);
}

void BM_Wasserstein1(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const gbsm::Mdp m1 = make_garnet(n, 1, 0.9, 11);
    const gbsm::Mdp m2 = make_garnet(n, 1, 0.9, 12);
    std::vector<double> cost(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            cost[static_cast<size_t>(i) * n + j] = i == j ? 0.0 : 0.5 + 0.5 * ((i * 31 + j) % 7) / 7.0;
    const auto pr = m1.row(0, 0);
    const auto qr = m2.row(0, 0);
    const auto p = gbsm::Distribution::from(std::vector<double>(pr.begin(), pr.end()));
    const auto q = gbsm::Distribution::from(std::vector<double>(qr.begin(), qr.end()));
    for (auto _ : state) {
        auto sol = gbsm::wasserstein1(p, q, cost, n, n);
        benchmark::DoNotOptimize(sol.cost);
    }
}
BENCHMARK(BM_Wasserstein1)->Arg(20)->Arg(50)->Arg(100);

void BM_GbsmSweep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const gbsm::Mdp m1 = make_garnet(n, 5, 0.9, 21);
    const gbsm::Mdp m2 = make_garnet(n, 5, 0.9, 22);
    gbsm::FixedPointConfig cfg;
    cfg.tol = 1e-6;
    cfg.max_iters = 1;
    for (auto _ : state) {
        auto d = gbsm::gbsm(m1, m2, cfg);
        benchmark::DoNotOptimize(d.residual);
    }
}
BENCHMARK(BM_GbsmSweep)->Arg(10)->Arg(20);

} // namespace

BENCHMARK_MAIN();
