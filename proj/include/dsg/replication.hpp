#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dsg/simulation.hpp"

namespace dsg {

struct ReplicationOptions {
    std::uint32_t count = 5;
    std::uint64_t base_seed = 1;
    SimulationOptions simulation; // the trace stream is ignored; see trace_dir
    /// If set, replication i writes its event trace to trace_dir/trace_<i>.ndjson.
    std::optional<std::filesystem::path> trace_dir;
};

struct ReplicationResult {
    std::uint32_t index = 0;
    std::uint64_t seed = 0;
    std::unique_ptr<Simulation> simulation; // null if construction failed
    std::optional<RunSummary> summary;      // set on success
    std::string error;                      // set on failure

    bool ok() const noexcept { return summary.has_value(); }
};

/// Replication i runs with seed base_seed ^ i. Failures are captured per
/// replication; the others still complete. Replications run in parallel
/// across OpenMP threads and share only the immutable static graph.
std::vector<ReplicationResult> run_replications(std::shared_ptr<const StaticGraph> graph, const SimConfig& config,
                                                const ReplicationOptions& options);

/// Same contract, one replication after another on the calling thread.
std::vector<ReplicationResult> run_replications_serial(std::shared_ptr<const StaticGraph> graph,
                                                       const SimConfig& config, const ReplicationOptions& options);

struct MetricAggregate {
    std::string name;
    std::size_t n = 0;
    double mean = 0.0;
    std::optional<double> stddev; // sample standard deviation; absent for n < 2
};

/// Mean and standard deviation of each headline metric over the successful
/// replications. Metrics missing in some replications aggregate over the rest.
std::vector<MetricAggregate> aggregate(const std::vector<ReplicationResult>& results);

/// Mean and standard deviation of a list of values.
MetricAggregate aggregate_values(std::string name, const std::vector<double>& values);

} // namespace dsg
