#include "dsg/replication.hpp"

#include <cmath>
#include <fstream>

namespace dsg {

namespace {

ReplicationResult run_one(const std::shared_ptr<const StaticGraph>& graph, const SimConfig& config,
                          const ReplicationOptions& options, std::uint32_t i)
{
    ReplicationResult r;
    r.index = i;
    r.seed = options.base_seed ^ i;
    std::ofstream trace;
    SimulationOptions sim = options.simulation;
    sim.trace = nullptr;
    try {
        if (options.trace_dir) {
            trace.open(*options.trace_dir / ("trace_" + std::to_string(i) + ".ndjson"), std::ios::binary);
            if (!trace) throw std::runtime_error("cannot open trace file in " + options.trace_dir->string());
            sim.trace = &trace;
        }
        r.simulation = std::make_unique<Simulation>(graph, config, r.seed, sim);
        r.simulation->run();
        r.summary = r.simulation->summary();
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    return r;
}

} // namespace

std::vector<ReplicationResult> run_replications(std::shared_ptr<const StaticGraph> graph, const SimConfig& config,
                                                const ReplicationOptions& options)
{
    std::vector<ReplicationResult> results(options.count);
    const auto n = static_cast<std::int64_t>(options.count);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i)
        results[static_cast<std::size_t>(i)] = run_one(graph, config, options, static_cast<std::uint32_t>(i));
    return results;
}

std::vector<ReplicationResult> run_replications_serial(std::shared_ptr<const StaticGraph> graph,
                                                       const SimConfig& config, const ReplicationOptions& options)
{
    std::vector<ReplicationResult> results;
    results.reserve(options.count);
    for (std::uint32_t i = 0; i < options.count; ++i) results.push_back(run_one(graph, config, options, i));
    return results;
}

MetricAggregate aggregate_values(std::string name, const std::vector<double>& values)
{
    MetricAggregate a;
    a.name = std::move(name);
    a.n = values.size();
    if (values.empty()) return a;
    double sum = 0.0;
    for (double v : values) sum += v;
    a.mean = sum / static_cast<double>(values.size());
    if (values.size() >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - a.mean) * (v - a.mean);
        a.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return a;
}

std::vector<MetricAggregate> aggregate(const std::vector<ReplicationResult>& results)
{
    struct Column {
        const char* name;
        std::optional<double> (*get)(const RunSummary&);
    };
    static const Column columns[] = {
        {"up_to_date_share_pct", [](const RunSummary& s) -> std::optional<double> { return s.up_to_date_share; }},
        {"mean_task_delay_pct", [](const RunSummary& s) { return s.mean_task_delay; }},
        {"tasks_completed",
         [](const RunSummary& s) -> std::optional<double> { return static_cast<double>(s.tasks_completed); }},
        {"mean_inter_observation_s", [](const RunSummary& s) { return s.mean_inter_observation; }},
        {"arrivals", [](const RunSummary& s) -> std::optional<double> { return static_cast<double>(s.arrivals); }},
        {"discarded_private",
         [](const RunSummary& s) -> std::optional<double> { return static_cast<double>(s.discarded_private); }},
        {"discarded_no_capacity",
         [](const RunSummary& s) -> std::optional<double> { return static_cast<double>(s.discarded_no_capacity); }},
        {"mean_live_objects", [](const RunSummary& s) -> std::optional<double> { return s.mean_live_objects; }},
        {"arrivals_per_poi_per_hour",
         [](const RunSummary& s) -> std::optional<double> { return s.arrivals_per_poi_per_hour; }},
        {"arrivals_per_node_per_hour",
         [](const RunSummary& s) -> std::optional<double> { return s.arrivals_per_node_per_hour; }},
    };
    std::vector<MetricAggregate> out;
    for (const auto& col : columns) {
        std::vector<double> values;
        for (const auto& r : results)
            if (r.ok())
                if (auto v = col.get(*r.summary)) values.push_back(*v);
        out.push_back(aggregate_values(col.name, values));
    }
    return out;
}

} // namespace dsg
