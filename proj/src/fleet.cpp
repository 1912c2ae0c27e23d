#include "dsg/fleet.hpp"

#include <algorithm>

#include "dsg/error.hpp"

namespace dsg {

namespace {
constexpr int kMaxBlockedReplans = 8;

bool blocked_in_truth(const SceneGraph& truth, NodeId node, const AgentParams& params)
{
    return node_dwell(truth.statics().node(node), truth.dynamics().footprint_at(node), params) == kBlocked;
}

/// True if the believed objects on any node still ahead changed since planning.
bool route_changed(const Agent& a, const ObservedGraph& belief)
{
    if (belief.version() == a.planned_at_version) return false;
    for (std::size_t i = a.path_pos + 1; i < a.path.size(); ++i)
        if (belief.changed_version(a.path[i]) > a.planned_at_version) return true;
    return false;
}
} // namespace

Fleet::Fleet(std::shared_ptr<const StaticGraph> graph, std::uint32_t agent_count, AgentParams params,
             PlannerMode mode)
    : graph_(std::move(graph)), mode_(mode), return_legs_(agent_count)
{
    const NodeId depot = graph_->depot_access_node();
    for (std::uint32_t i = 0; i < agent_count; ++i) {
        Agent a;
        a.id = i;
        a.current_node = depot;
        a.params = params;
        agents_.push_back(a);
        idle_.push_back(i);
    }
}

Subgraph Fleet::observe(const SceneGraph& truth, const Agent& agent)
{
    return induced_radius_subgraph(truth, truth.statics().node(agent.current_node).position,
                                   agent.params.sensor_radius);
}

const DynamicLayer* Fleet::planning_view(const ObservedGraph& belief) const
{
    return mode_ == PlannerMode::observed ? &belief.dynamics() : nullptr;
}

NodeId Fleet::leg_goal(const Agent& a) const
{
    const AgentState leg = a.state == AgentState::waiting ? a.resume_state : a.state;
    if (leg == AgentState::returning) return graph_->depot_access_node();
    return graph_->access_node(tasks_.at(*a.task).target_poi);
}

std::uint32_t Fleet::issue_task(NodeId poi, double t, SceneGraph& /*truth*/, ObservedGraph& belief,
                                FleetListener& listener, std::vector<AgentEvent>& out)
{
    const auto id = static_cast<std::uint32_t>(tasks_.size());
    Task task;
    task.id = id;
    task.target_poi = poi;
    task.t_issued = t;
    tasks_.push_back(task);
    pending_.push_back(id);
    while (!idle_.empty() && !pending_.empty()) {
        const auto next = pending_.front();
        pending_.pop_front();
        dispatch(next, idle_.front(), t, belief, listener, out);
        if (agents_[idle_.front()].state != AgentState::idle_at_depot) idle_.pop_front();
    }
    return id;
}

void Fleet::dispatch(std::uint32_t task_id, std::uint32_t agent_id, double t, const ObservedGraph& belief,
                     FleetListener& listener, std::vector<AgentEvent>& out)
{
    Task& task = tasks_[task_id];
    Agent& a = agents_[agent_id];
    const NodeId depot = graph_->depot_access_node();
    const NodeId target = graph_->access_node(task.target_poi);

    const DynamicLayer* view = planning_view(belief);
    auto outbound = planner_.plan(*graph_, view, depot, target, a.params);
    auto inbound = planner_.plan(*graph_, view, target, depot, a.params);
    if ((!outbound || !inbound) && view != nullptr) {
        // Believed blockages cut every route; predict on the static graph and
        // let the agent wait at the blockage.
        view = nullptr;
        outbound = planner_.plan(*graph_, view, depot, target, a.params);
        inbound = planner_.plan(*graph_, view, target, depot, a.params);
    }
    if (!outbound || !inbound) {
        task.unroutable = true;
        return;
    }

    std::vector<NodeId> walk = outbound->nodes;
    walk.insert(walk.end(), inbound->nodes.begin() + 1, inbound->nodes.end());
    task.t_assigned = t;
    task.predicted_duration = walk_cost(*graph_, view, walk, a.params);
    task.t_pred = t + task.predicted_duration;
    task.agent = agent_id;

    a.task = task_id;
    a.state = AgentState::to_target;
    a.path = std::move(outbound->nodes);
    a.path_pos = 0;
    a.elapsed = 0.0;
    a.planned_at_version = belief.version();
    return_legs_[agent_id] = std::move(inbound->nodes);
    listener.on_plan(a, view);
    out.push_back({t, AgentEventKind::node_entry, agent_id});
}

void Fleet::on_event(const AgentEvent& ev, SceneGraph& truth, ObservedGraph& belief, FleetListener& listener,
                     std::vector<AgentEvent>& out)
{
    Agent& a = agents_.at(ev.agent);
    switch (ev.kind) {
    case AgentEventKind::node_entry:
        enter_node(a, ev.time, truth, belief, listener, out);
        break;
    case AgentEventKind::node_exit:
        exit_node(a, ev.time, truth, belief, listener, out);
        break;
    case AgentEventKind::wait_retry:
        a.retry_pending = false;
        if (a.state != AgentState::waiting) break;
        a.elapsed += ev.time - wait_started_.at(a.id);
        a.state = a.resume_state;
        if (a.blocked_at_entry)
            enter_node(a, ev.time, truth, belief, listener, out);
        else
            exit_node(a, ev.time, truth, belief, listener, out);
        break;
    }
}

void Fleet::observe_and_merge(Agent& a, double t, const SceneGraph& truth, ObservedGraph& belief,
                              FleetListener& listener)
{
    const auto report = merge_observation(belief, observe(truth, a), t);
    listener.on_merge(report, t);
}

void Fleet::enter_node(Agent& a, double t, SceneGraph& truth, ObservedGraph& belief, FleetListener& listener,
                       std::vector<AgentEvent>& out)
{
    const NodeId node = a.path.at(a.path_pos);
    a.current_node = node;
    observe_and_merge(a, t, truth, belief, listener);

    if (mode_ == PlannerMode::observed && route_changed(a, belief)) replan_leg(a, belief, {}, listener);

    const double footprint = truth.dynamics().footprint_at(node);
    const double dwell = node_dwell(graph_->node(node), footprint, a.params);
    if (dwell == kBlocked) {
        wait_for(a, node, true, t);
        return;
    }
    listener.on_dwell(a, node, footprint, dwell);
    a.elapsed += dwell;
    out.push_back({t + dwell, AgentEventKind::node_exit, a.id});
}

void Fleet::exit_node(Agent& a, double t, SceneGraph& truth, ObservedGraph& belief, FleetListener& listener,
                      std::vector<AgentEvent>& out)
{
    observe_and_merge(a, t, truth, belief, listener);

    if (a.path_pos + 1 == a.path.size()) {
        if (a.state == AgentState::returning) {
            complete_task(a, t, belief, listener, out);
            return;
        }
        a.state = AgentState::returning;
        bool planned = false;
        if (mode_ == PlannerMode::observed) planned = replan_leg(a, belief, {}, listener);
        if (!planned) {
            a.path = return_legs_[a.id];
            a.path_pos = 0;
        }
        if (a.path.size() == 1) {
            complete_task(a, t, belief, listener, out);
            return;
        }
    }

    NodeId next = a.path[a.path_pos + 1];
    if (blocked_in_truth(truth, next, a.params)) {
        std::vector<NodeId> excluded{next};
        bool routed = false;
        for (int attempt = 0; attempt < kMaxBlockedReplans && !routed; ++attempt) {
            if (!replan_leg(a, belief, excluded, listener)) break;
            next = a.path[1];
            if (blocked_in_truth(truth, next, a.params))
                excluded.push_back(next);
            else
                routed = true;
        }
        if (!routed) {
            wait_for(a, next, false, t);
            return;
        }
    }
    const double travel = graph_->arc_length(a.current_node, next) / a.params.velocity;
    a.elapsed += travel;
    ++a.path_pos;
    out.push_back({t + travel, AgentEventKind::node_entry, a.id});
}

void Fleet::complete_task(Agent& a, double t, const ObservedGraph& belief, FleetListener& listener,
                          std::vector<AgentEvent>& out)
{
    Task& task = tasks_.at(*a.task);
    task.t_completed = t;
    task.actual_duration = a.elapsed;
    task.completed = true;
    listener.on_task_completed(task);

    a.task.reset();
    a.state = AgentState::idle_at_depot;
    a.path.clear();
    a.path_pos = 0;
    while (!pending_.empty()) {
        const auto next = pending_.front();
        pending_.pop_front();
        dispatch(next, a.id, t, belief, listener, out);
        if (a.state != AgentState::idle_at_depot) return;
    }
    idle_.push_back(a.id);
}

void Fleet::wait_for(Agent& a, NodeId node, bool at_entry, double t)
{
    a.resume_state = a.state;
    a.state = AgentState::waiting;
    a.blocked_on = node;
    a.blocked_at_entry = at_entry;
    wait_started_[a.id] = t;
    waiters_[node].push_back(a.id);
}

void Fleet::on_expiry_at(NodeId node, double t, std::vector<AgentEvent>& out)
{
    auto it = waiters_.find(node);
    if (it == waiters_.end()) return;
    for (auto id : it->second) {
        Agent& a = agents_[id];
        if (a.state != AgentState::waiting || a.blocked_on != node || a.retry_pending) continue;
        a.retry_pending = true;
        out.push_back({t, AgentEventKind::wait_retry, id});
    }
    waiters_.erase(it);
}

bool Fleet::replan_leg(Agent& a, const ObservedGraph& belief, std::span<const NodeId> excluded,
                       FleetListener& listener)
{
    const DynamicLayer* view = planning_view(belief);
    auto path = planner_.plan(*graph_, view, a.current_node, leg_goal(a), a.params, excluded);
    if (!path) return false;
    a.path = std::move(path->nodes);
    a.path_pos = 0;
    a.planned_at_version = belief.version();
    listener.on_plan(a, view);
    return true;
}

} // namespace dsg
