#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "dsg/fleet.hpp"
#include "dsg/graph.hpp"
#include "dsg/process.hpp"

namespace dsg {

using HourHistogram = std::array<std::uint64_t, 24>;

/// Per-task record as written to tasks.csv.
struct TaskRecord {
    std::uint32_t id = 0;
    NodeId target_poi = kNoNode;
    double t_issued = 0.0;
    double t_assigned = 0.0;
    double t_pred = 0.0;
    double t_completed = 0.0;
    double predicted_duration = 0.0;
    double actual_duration = 0.0; // t_true
    double delay = 0.0;           // signed d
};

/// Signed normalized deviation (predicted - actual) / actual of the task
/// duration measured from assignment. Throws DegenerateTask on zero duration.
double task_delay(const Task& task);

struct NodeObservationStats {
    NodeId node = kNoNode;
    std::uint64_t observations = 0;
    std::optional<double> mean_gap; // unset: observed fewer than twice
};

/// Accumulates every metric of one replication. The kernel feeds it state
/// transitions; hooks before `warmup_end` only maintain state and record
/// nothing. Correctness is tracked from transitions, never sampled.
class MetricsLedger {
public:
    MetricsLedger(const StaticGraph& graph, double warmup_end, double t_end);

    double warmup_end() const noexcept { return warmup_end_; }
    double t_end() const noexcept { return t_end_; }

    /// Take the hourly live-count samples for every hour boundary up to t.
    /// Must be called before the state at t changes.
    void advance_to(double t);
    /// An object entered (+1) or left (-1) the true graph.
    void on_population_change(const ObjectNode& object, int delta, double t);
    void on_arrival(const ObjectNode& object, double t);
    void on_discard(DrainStatus status, double t);
    void on_correctness(NodeId node, bool correct, double t);
    void on_merge(const MergeReport& report, double t);
    void on_task_completed(const Task& task);
    /// Closes all open intervals at t_end.
    void finalize();

    /// Mean over path nodes of the correct share of the window, percent.
    /// Throws EmptyMeasurement when the window has zero length.
    double up_to_date_share() const;
    /// Per path node: correct and incorrect seconds inside the window.
    double correct_seconds(NodeId node) const { return correct_time_.at(node); }
    double incorrect_seconds(NodeId node) const { return incorrect_time_.at(node); }

    std::vector<NodeObservationStats> inter_observation_stats() const;
    /// Mean over nodes observed at least twice; nullopt if there are none.
    std::optional<double> mean_inter_observation() const;
    /// Per path node (index = node id), merges covering the node.
    const std::vector<std::uint64_t>& observation_heatmap() const noexcept { return heatmap_; }

    /// Mean |d| over completed in-window tasks, percent; nullopt if none.
    std::optional<double> mean_task_delay() const;
    const std::vector<TaskRecord>& tasks() const noexcept { return tasks_; }

    // Hour-of-day tables.
    /// Sum of live counts per (class, hour) and the number of samples per hour.
    const std::vector<std::array<double, 24>>& live_count_sums() const noexcept { return live_sums_; }
    const std::array<std::uint64_t, 24>& live_samples() const noexcept { return live_samples_; }
    std::array<double, 24> mean_live_count(ClassId cls) const;
    const HourHistogram& true_arrivals(NodeId node) const { return true_arrivals_.at(node); }
    const HourHistogram& observed_arrivals(NodeId node) const { return observed_arrivals_.at(node); }
    const std::vector<HourHistogram>& class_arrivals() const noexcept { return class_arrivals_; }

    std::uint64_t arrivals() const noexcept { return arrivals_; }
    std::uint64_t removals() const noexcept { return removals_; }
    std::uint64_t discarded_private() const noexcept { return discarded_private_; }
    std::uint64_t discarded_no_capacity() const noexcept { return discarded_no_capacity_; }
    std::int64_t live_objects() const noexcept { return live_total_; }
    /// Time-averaged number of live objects over the window.
    double mean_live_objects() const;

private:
    bool in_window(double t) const noexcept { return t >= warmup_end_ && t <= t_end_; }
    void integrate_population(double t);
    void close_interval(NodeId node, double until);

    const StaticGraph* graph_;
    double warmup_end_;
    double t_end_;
    bool finalized_ = false;

    // Correctness intervals.
    std::vector<char> correct_;
    std::vector<double> since_;
    std::vector<double> correct_time_;
    std::vector<double> incorrect_time_;

    // Observations.
    std::vector<std::uint64_t> heatmap_;
    std::vector<double> last_obs_;
    std::vector<double> gap_sum_;
    std::vector<std::uint64_t> gap_count_;

    // Population.
    std::vector<std::int64_t> live_by_class_;
    std::int64_t live_total_ = 0;
    double population_integral_ = 0.0;
    double population_t_ = 0.0;
    double next_sample_ = 0.0;
    std::vector<std::array<double, 24>> live_sums_;
    std::array<std::uint64_t, 24> live_samples_{};

    // Arrivals.
    std::vector<HourHistogram> true_arrivals_;
    std::vector<HourHistogram> observed_arrivals_;
    std::vector<HourHistogram> class_arrivals_;
    std::uint64_t arrivals_ = 0;
    std::uint64_t removals_ = 0;
    std::uint64_t discarded_private_ = 0;
    std::uint64_t discarded_no_capacity_ = 0;

    std::vector<TaskRecord> tasks_;
};

} // namespace dsg
