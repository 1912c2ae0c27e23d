#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dsg/replication.hpp"

namespace dsg {

/// Floating values in every table use 6 significant digits.
std::string format_value(double v);

/// Writes summary.csv, daily_trends.csv, arrivals_by_node_hour.csv,
/// heatmap.csv and tasks.csv for one finished replication into `dir`.
/// None of them carries wall-clock data, so equal seeds give equal bytes.
void write_replication_outputs(const std::filesystem::path& dir, const Simulation& sim, const RunSummary& summary);

/// aggregate.csv (metric mean/std over replications), daily_trends_aggregate.csv
/// and performance.csv (wall time and real-time factor per replication).
void write_aggregate_outputs(const std::filesystem::path& dir, const std::vector<ReplicationResult>& results);

/// Writes every per-replication table under dir/rep_<i>/ plus the aggregate
/// tables under dir. Failed replications are listed in failures.csv.
void write_run_outputs(const std::filesystem::path& dir, const std::vector<ReplicationResult>& results);

} // namespace dsg
