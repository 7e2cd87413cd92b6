#include <benchmark/benchmark.h>

#include <complex>
#include <numbers>
#include <vector>

#include "zk/zk.hpp"

namespace {

zk::Field reference_profile(const zk::Grid& g) {
    zk::ProfileSpec p;
    p.family = zk::ProfileFamily::bump;
    p.amplitude = 1e-5;
    return zk::make_profile(g, p);
}

void BM_Rhs(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const zk::Grid g = zk::build_grid(std::numbers::pi / 2, 2, n, n, 1, 6.0);
    const zk::OperatorSet ops(g);
    const zk::Field u = reference_profile(g);
    for (auto _ : state) benchmark::DoNotOptimize(zk::rhs(ops, u, 1e-3));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_Rhs)->Arg(64)->Arg(128)->Arg(256);

void BM_Step(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const zk::Grid g = zk::build_grid(std::numbers::pi / 2, 2, n, n, 1, 6.0);
    const zk::OperatorSet ops(g);
    zk::IntegratorConfig cfg;
    cfg.T = 1e6;
    cfg.startup_substeps = 1;
    zk::Stepper st(ops, cfg, reference_profile(g));
    for (auto _ : state) st.advance();
    state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_Step)->Arg(64)->Arg(128)->Arg(256);

void BM_BandedSolve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const zk::Grid g = zk::build_grid(std::numbers::pi / 2, 2, n, 8, 1, 6.0);
    const zk::OperatorSet ops(g);
    const zk::BandedMatrix A =
        zk::BandedMatrix::identity(n, 2, 2).scaled(1.5).plus(ops.linear_matrix(3, 1e-3), -1e-3);
    const zk::BandedLU lu(A);
    std::vector<std::complex<double>> b(n, {1.0, -0.5});
    for (auto _ : state) {
        lu.solve(b.data());
        benchmark::DoNotOptimize(b.data());
    }
}
BENCHMARK(BM_BandedSolve)->Arg(128)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
