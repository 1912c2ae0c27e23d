// Serial vs OpenMP-parallel replications, and single-run throughput across
// grid sizes. Counters report the real-time factor of the simulated runs.

#include <benchmark/benchmark.h>

#include "dsg/config.hpp"
#include "dsg/replication.hpp"
#include "dsg/synthetic.hpp"

namespace {

dsg::Scenario grid(std::uint32_t rows, std::uint32_t cols)
{
    dsg::GridParams params;
    params.rows = rows;
    params.cols = cols;
    params.seed = 5;
    return dsg::make_grid_scenario(params);
}

dsg::ReplicationOptions options(std::uint32_t count, double days)
{
    dsg::ReplicationOptions o;
    o.count = count;
    o.base_seed = 11;
    o.simulation.t_end = days * 86400.0;
    o.simulation.warmup_end = 6.0 * 3600.0;
    return o;
}

template <bool Parallel>
void replications(benchmark::State& state)
{
    const auto scenario = grid(20, 20);
    const auto config = dsg::default_config(scenario.graph->registry());
    const auto opts = options(static_cast<std::uint32_t>(state.range(0)), 2.0);
    double rtf = 0.0;
    for (auto _ : state) {
        auto results = Parallel ? dsg::run_replications(scenario.graph, config, opts)
                                : dsg::run_replications_serial(scenario.graph, config, opts);
        rtf = 0.0;
        for (const auto& r : results)
            if (r.ok()) rtf += r.summary->rtf / static_cast<double>(results.size());
        benchmark::DoNotOptimize(results.data());
    }
    state.counters["mean_rtf"] = rtf;
}

void scaling(benchmark::State& state)
{
    const auto side = static_cast<std::uint32_t>(state.range(0));
    const auto scenario = grid(side, side);
    const auto config = dsg::default_config(scenario.graph->registry());
    const auto opts = options(1, 1.0);
    double rtf = 0.0, events = 0.0;
    for (auto _ : state) {
        auto results = dsg::run_replications_serial(scenario.graph, config, opts);
        if (!results.front().ok()) {
            state.SkipWithError(results.front().error.c_str());
            return;
        }
        rtf = results.front().summary->rtf;
        events = static_cast<double>(results.front().summary->events_executed);
    }
    state.counters["path_nodes"] = static_cast<double>(scenario.graph->path_nodes().size());
    state.counters["rtf"] = rtf;
    state.counters["events"] = events;
}

} // namespace

BENCHMARK(replications<false>)->Name("replications/serial")->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(replications<true>)->Name("replications/parallel")->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(scaling)->Name("rtf_scaling")->Arg(25)->Arg(50)->Arg(71)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
