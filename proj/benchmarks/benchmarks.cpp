#include <benchmark/benchmark.h>

#include "opinet/lumped.hpp"
#include "opinet/master.hpp"
#include "opinet/ssa.hpp"
#include "opinet/topology.hpp"

using namespace opinet;

namespace {

NetworkModel complete_net(int n, double lambda) {
    TopologySpec spec{TopologySpec::Kind::Complete, n};
    return NetworkModel(generate_topology(spec), RateMatrix::two_state(1, 1),
                        IntensitySchedule(InfluenceIntensities::uniform(2, lambda)));
}

void BM_MasterGeneratorAssembly(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto net = complete_net(n, 5.0);
    for (auto _ : state) {
        auto gen = build_master_generator(net);
        benchmark::DoNotOptimize(gen);
    }
    state.SetComplexityN(1 << n);
}
BENCHMARK(BM_MasterGeneratorAssembly)->DenseRange(6, 14, 2)->Complexity();

void BM_MasterSteadyState(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto net = complete_net(n, 5.0);
    auto gen = build_master_generator(net);
    for (auto _ : state) {
        auto bar = master_steady_state(gen);
        benchmark::DoNotOptimize(bar);
    }
}
BENCHMARK(BM_MasterSteadyState)->DenseRange(6, 10, 2);

void BM_SsaEvents(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto net = complete_net(n, 10.0);
    std::vector<int> sigma0(n);
    for (int r = 0; r < n; ++r) sigma0[r] = r % 2;
    std::uint64_t seed = 1;
    std::int64_t events = 0;
    for (auto _ : state) {
        auto path = simulate_path(net, sigma0, 10.0, seed++);
        events += static_cast<std::int64_t>(path.events.size());
        benchmark::DoNotOptimize(path);
    }
    state.SetItemsProcessed(events);
}
BENCHMARK(BM_SsaEvents)->Arg(50)->Arg(100)->Arg(400);

void BM_LumpedSteadyState(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto chain = build_pa_chain(n, 1, 1, 10, 10);
    for (auto _ : state) {
        auto pbar = pa_steady_state(chain);
        benchmark::DoNotOptimize(pbar);
    }
}
BENCHMARK(BM_LumpedSteadyState)->Arg(100)->Arg(10000)->Arg(1000000);

void BM_LumpedTransient(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto chain = build_pa_chain(n, 1, 1, 10, 10);
    Eigen::VectorXd p0 = initial_count_distribution(InitialCountKind::Binomial, n);
    const std::vector<double> grid{1.0, 5.0, 10.0};
    for (auto _ : state) {
        auto traj = pa_transient(chain, p0, grid);
        benchmark::DoNotOptimize(traj);
    }
}
BENCHMARK(BM_LumpedTransient)->Arg(100)->Arg(1000);

} // namespace

BENCHMARK_MAIN();
