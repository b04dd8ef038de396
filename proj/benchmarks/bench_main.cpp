#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "poresim/biology.hpp"
#include "poresim/explicit_diffusion.hpp"
#include "poresim/implicit_diffusion.hpp"
#include "poresim/sparse.hpp"
#include "poresim/synthetic.hpp"
#include "poresim/units.hpp"

using namespace poresim;

namespace {

PoolGrid seeded_states(const PoreNetwork& net, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    PoolGrid states(static_cast<size_t>(net.node_count()));
    for (size_t i = 0; i < states.size(); ++i) {
        states.dom[i] = 0.5 + 0.5 * static_cast<double>(rng() >> 11) * 0x1.0p-53;
        states.mb[i] = 0.01;
    }
    return states;
}

void bm_explicit_diffusion_step(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const PoreNetwork net = generate_synthetic_network(SyntheticKind::Grid3d, n, 0);
    const WaterMask water(static_cast<size_t>(net.node_count()), 1);
    std::vector<double> dom = seeded_states(net, 1).dom;
    for (auto _ : state) {
        dom = diffusion_step_explicit(dom, net, water, 1000.0, units::seconds_to_days(10.0));
        benchmark::DoNotOptimize(dom.data());
    }
    state.SetItemsProcessed(state.iterations() * net.arc_count());
}

void bm_implicit_diffusion_step(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const PoreNetwork net = generate_synthetic_network(SyntheticKind::Grid3d, n, 0);
    const WaterMask water(static_cast<size_t>(net.node_count()), 1);
    ImplicitWorkspace workspace(net, water);
    workspace.prepare(100000.0, units::seconds_to_days(10.0));
    std::vector<double> dom = seeded_states(net, 1).dom;
    for (auto _ : state) {
        dom = workspace.step(dom, PcgOptions{});
        benchmark::DoNotOptimize(dom.data());
    }
}

void bm_transform_all(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const PoreNetwork net = generate_synthetic_network(SyntheticKind::Grid3d, n, 0);
    const WaterMask water(static_cast<size_t>(net.node_count()), 1);
    const PoolGrid states = seeded_states(net, 2);
    const BioParams params;
    for (auto _ : state) {
        PoolGrid out = transform_all(states, net, water, params, units::seconds_to_days(10.0));
        benchmark::DoNotOptimize(out.dom.data());
    }
    state.SetItemsProcessed(state.iterations() * net.node_count());
}

void bm_pcg_solve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const PoreNetwork net = generate_synthetic_network(SyntheticKind::Grid3d, n, 0);
    const WaterMask water(static_cast<size_t>(net.node_count()), 1);
    std::vector<int> component(static_cast<size_t>(net.node_count()));
    for (int i = 0; i < net.node_count(); ++i) component[static_cast<size_t>(i)] = i;
    const ImplicitSystem sys =
        assemble(net, water, component, 100000.0, units::seconds_to_days(10.0));
    const std::vector<double> b = seeded_states(net, 3).dom;
    for (auto _ : state) {
        PcgResult r = pcg_solve(sys.matrix, b);
        benchmark::DoNotOptimize(r.x.data());
    }
}

void bm_assemble(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const PoreNetwork net = generate_synthetic_network(SyntheticKind::Grid3d, n, 0);
    const WaterMask water(static_cast<size_t>(net.node_count()), 1);
    std::vector<int> component(static_cast<size_t>(net.node_count()));
    for (int i = 0; i < net.node_count(); ++i) component[static_cast<size_t>(i)] = i;
    for (auto _ : state) {
        ImplicitSystem sys = assemble(net, water, component, 100000.0, units::seconds_to_days(10.0));
        benchmark::DoNotOptimize(sys.matrix.values().data());
    }
}

} // namespace

BENCHMARK(bm_explicit_diffusion_step)->Arg(10)->Arg(20);
BENCHMARK(bm_implicit_diffusion_step)->Arg(10)->Arg(20);
BENCHMARK(bm_transform_all)->Arg(10)->Arg(20);
BENCHMARK(bm_pcg_solve)->Arg(10)->Arg(20);
BENCHMARK(bm_assemble)->Arg(10)->Arg(20);

BENCHMARK_MAIN();
