#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dsg/graph.hpp"
#include "dsg/planner.hpp"

namespace dsg {

enum class AgentState : std::uint8_t { idle_at_depot, to_target, returning, waiting };

struct Agent {
    std::uint32_t id = 0;
    NodeId current_node = kNoNode;
    AgentParams params;
    AgentState state = AgentState::idle_at_depot;
    std::vector<NodeId> path; // current leg, starting at the node it was planned from
    std::size_t path_pos = 0;
    std::optional<std::uint32_t> task;
    std::uint64_t planned_at_version = 0;
    double elapsed = 0.0; // task time accumulated step by step

    // Waiting bookkeeping.
    AgentState resume_state = AgentState::idle_at_depot;
    NodeId blocked_on = kNoNode;
    bool blocked_at_entry = false;
    bool retry_pending = false;
};

/// Delivery from the depot to the issuing PoI and back.
struct Task {
    std::uint32_t id = 0;
    NodeId target_poi = kNoNode;
    double t_issued = 0.0;
    double t_assigned = 0.0;
    double t_pred = 0.0;      // predicted completion, fixed at assignment
    double t_completed = 0.0;
    double predicted_duration = 0.0;
    double actual_duration = 0.0;
    std::optional<std::uint32_t> agent;
    bool completed = false;
    bool unroutable = false;
};

enum class AgentEventKind : std::uint8_t { node_entry, node_exit, wait_retry };

struct AgentEvent {
    double time;
    AgentEventKind kind;
    std::uint32_t agent;
};

/// Receives everything the fleet does that other modules care about. The
/// dwell/plan callbacks exist for instrumentation.
class FleetListener {
public:
    virtual ~FleetListener() = default;
    virtual void on_merge(const MergeReport& report, double t) = 0;
    virtual void on_task_completed(const Task& task) = 0;
    virtual void on_dwell(const Agent&, NodeId /*node*/, double /*footprint_used*/, double /*dwell*/) {}
    virtual void on_plan(const Agent&, const DynamicLayer* /*view*/) {}
};

/// Agents, the task queue, and the node-traversal state machine. All methods
/// are called by the kernel between events; produced follow-up events are
/// appended to `out`. In observed mode an agent replans its current leg on
/// entering a node if the belief about any node still ahead has changed.
class Fleet {
public:
    Fleet(std::shared_ptr<const StaticGraph> graph, std::uint32_t agent_count, AgentParams params,
          PlannerMode mode);

    std::span<const Agent> agents() const noexcept { return agents_; }
    const Agent& agent(std::uint32_t id) const { return agents_.at(id); }
    std::span<const Task> tasks() const noexcept { return tasks_; }
    std::size_t queued_tasks() const noexcept { return pending_.size(); }
    PlannerMode mode() const noexcept { return mode_; }

    /// Range-limited noiseless observation around the agent.
    static Subgraph observe(const SceneGraph& truth, const Agent& agent);

    /// New task from a PoI; dispatches at once if an agent idles at the depot.
    std::uint32_t issue_task(NodeId poi, double t, SceneGraph& truth, ObservedGraph& belief,
                             FleetListener& listener, std::vector<AgentEvent>& out);

    void on_event(const AgentEvent& ev, SceneGraph& truth, ObservedGraph& belief, FleetListener& listener,
                  std::vector<AgentEvent>& out);

    /// An object at `node` expired: wake agents waiting on it.
    void on_expiry_at(NodeId node, double t, std::vector<AgentEvent>& out);

private:
    const DynamicLayer* planning_view(const ObservedGraph& belief) const;
    void dispatch(std::uint32_t task_id, std::uint32_t agent_id, double t, const ObservedGraph& belief,
                  FleetListener& listener, std::vector<AgentEvent>& out);
    void observe_and_merge(Agent& a, double t, const SceneGraph& truth, ObservedGraph& belief,
                           FleetListener& listener);
    void enter_node(Agent& a, double t, SceneGraph& truth, ObservedGraph& belief, FleetListener& listener,
                    std::vector<AgentEvent>& out);
    void exit_node(Agent& a, double t, SceneGraph& truth, ObservedGraph& belief, FleetListener& listener,
                   std::vector<AgentEvent>& out);
    void complete_task(Agent& a, double t, const ObservedGraph& belief, FleetListener& listener,
                       std::vector<AgentEvent>& out);
    void wait_for(Agent& a, NodeId node, bool at_entry, double t);
    bool replan_leg(Agent& a, const ObservedGraph& belief, std::span<const NodeId> excluded,
                    FleetListener& listener);
    NodeId leg_goal(const Agent& a) const;

    std::shared_ptr<const StaticGraph> graph_;
    PlannerMode mode_;
    PathPlanner planner_;
    std::vector<Agent> agents_;
    std::vector<Task> tasks_;
    std::deque<std::uint32_t> pending_;
    std::deque<std::uint32_t> idle_;
    std::unordered_map<NodeId, std::vector<std::uint32_t>> waiters_;
    std::vector<std::vector<NodeId>> return_legs_; // per agent, static-mode inbound plan
    std::unordered_map<std::uint32_t, double> wait_started_;
};

} // namespace dsg
