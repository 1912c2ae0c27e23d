#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <queue>
#include <string_view>
#include <vector>

#include "dsg/config.hpp"
#include "dsg/fleet.hpp"
#include "dsg/metrics.hpp"
#include "dsg/process.hpp"

namespace dsg {

/// Declaration order is the tie-break priority at equal timestamps: capacity
/// freed by an expiry at t is available to a spawn at t.
enum class EventKind : std::uint8_t { expiry, spawn, task_arrival, agent_node_entry, agent_node_exit, wait_retry };

std::string_view to_string(EventKind kind);

struct Event {
    double time = 0.0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::spawn;
    std::uint32_t subject = 0; // process instance, task generator, or agent
    std::uint64_t object = 0;  // object id for expiries
};

struct EventOrder {
    bool operator()(const Event& a, const Event& b) const noexcept
    {
        if (a.time != b.time) return a.time > b.time;
        if (a.kind != b.kind) return a.kind > b.kind;
        return a.seq > b.seq;
    }
};

/// Binary min-heap on (time, kind priority, seq).
class EventQueue {
public:
    void push(const Event& e) { heap_.push(e); }
    Event pop()
    {
        Event e = heap_.top();
        heap_.pop();
        return e;
    }
    const Event& top() const { return heap_.top(); }
    bool empty() const noexcept { return heap_.empty(); }
    std::size_t size() const noexcept { return heap_.size(); }

private:
    std::priority_queue<Event, std::vector<Event>, EventOrder> heap_;
};

struct TaskGenerator {
    NodeId poi = kNoNode;
    RateProfile profile;
    RandomStream stream;
};

struct SimulationOptions {
    double t_end = 22.0 * 86400.0;
    double warmup_end = 48.0 * 3600.0;
    PlannerMode planner = PlannerMode::observed;
    bool agents_enabled = true;
    std::ostream* trace = nullptr; // newline-delimited JSON, one record per event
};

/// Counters and headline metrics of one finished replication.
struct RunSummary {
    std::uint64_t seed = 0;
    double simulated_seconds = 0.0;
    double warmup_seconds = 0.0;
    PlannerMode planner = PlannerMode::observed;
    std::size_t path_nodes = 0;
    std::size_t pois = 0;
    double up_to_date_share = 0.0;          // percent
    std::optional<double> mean_task_delay;  // percent
    std::size_t tasks_completed = 0;
    std::uint64_t arrivals = 0;
    std::uint64_t expiries = 0;
    std::uint64_t discarded_private = 0;
    std::uint64_t discarded_no_capacity = 0;
    std::int64_t live_objects_end = 0;
    double mean_live_objects = 0.0;
    std::optional<double> mean_inter_observation;
    double arrivals_per_poi_per_hour = 0.0;
    double arrivals_per_node_per_hour = 0.0;
    std::uint64_t events_executed = 0;
    std::uint64_t trace_hash = 0;
    double wall_seconds = 0.0;
    double rtf = 0.0;
};

/// One replication: the true graph, the belief, processes, fleet, event
/// queue, clock, and metrics. Strictly single-threaded.
class Simulation final : private FleetListener {
public:
    Simulation(std::shared_ptr<const StaticGraph> graph, const SimConfig& config, std::uint64_t seed,
               SimulationOptions options);

    /// Schedules the first spawn of every non-inert process and the first
    /// arrival of every task generator. Process sources may be swapped
    /// before this is called.
    void initialize();

    /// Throws TimeTravel if e.time precedes the clock. Assigns e.seq.
    void schedule(Event e);

    /// Executes events up to the configured horizon, then finalizes metrics.
    /// Handler exceptions surface as HandlerFailure naming the event.
    void run();

    /// Simulated seconds per wall-clock second of the last run().
    double measure_rtf() const;

    RunSummary summary() const;

    double clock() const noexcept { return clock_; }
    const SceneGraph& truth() const noexcept { return truth_; }
    const ObservedGraph& belief() const noexcept { return belief_; }
    const MetricsLedger& ledger() const noexcept { return ledger_; }
    const Fleet* fleet() const noexcept { return fleet_ ? &*fleet_ : nullptr; }
    std::vector<ProcessInstance>& processes() noexcept { return processes_; }
    const std::vector<ProcessSpec>& process_specs() const noexcept { return specs_; }
    std::uint64_t trace_hash() const noexcept { return trace_hash_; }
    std::uint64_t events_executed() const noexcept { return executed_; }
    std::uint64_t attached_total() const noexcept { return attached_total_; }
    std::uint64_t expired_total() const noexcept { return expired_total_; }
    const SimulationOptions& options() const noexcept { return options_; }

    /// Extra listener receiving merges, task completions, dwell and plan
    /// callbacks; for instrumentation.
    void set_probe(FleetListener* probe) noexcept { probe_ = probe; }
    /// Called after every executed event; for tests that replay trajectories.
    void set_event_hook(std::function<void(const Event&, const Simulation&)> hook) { hook_ = std::move(hook); }

private:
    void execute(const Event& e);
    void handle_spawn(const Event& e);
    void handle_expiry(const Event& e);
    void handle_task_arrival(const Event& e);
    void schedule_agent_events();
    void refresh_correctness(NodeId node, double t);
    void record_trace(const Event& e);

    // FleetListener
    void on_merge(const MergeReport& report, double t) override;
    void on_task_completed(const Task& task) override;
    void on_dwell(const Agent& a, NodeId node, double footprint, double dwell) override;
    void on_plan(const Agent& a, const DynamicLayer* view) override;

    std::shared_ptr<const StaticGraph> graph_;
    SimulationOptions options_;
    std::uint64_t seed_;
    std::vector<ProcessSpec> specs_;
    SceneGraph truth_;
    ObservedGraph belief_;
    MetricsLedger ledger_;
    NearestCapacityDrain drain_;
    std::vector<ProcessInstance> processes_;
    std::vector<TaskGenerator> task_generators_;
    std::optional<Fleet> fleet_;
    std::vector<AgentEvent> agent_out_;

    EventQueue queue_;
    double clock_ = 0.0;
    std::uint64_t next_seq_ = 0;
    std::uint64_t next_object_id_;
    std::uint64_t executed_ = 0;
    std::uint64_t attached_total_ = 0;
    std::uint64_t expired_total_ = 0;
    std::uint64_t trace_hash_ = 0xcbf29ce484222325ULL;
    double wall_seconds_ = 0.0;
    bool initialized_ = false;

    FleetListener* probe_ = nullptr;
    std::function<void(const Event&, const Simulation&)> hook_;
};

} // namespace dsg
