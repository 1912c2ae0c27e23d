#include "dsg/planner.hpp"

#include <algorithm>
#include <queue>
#include <tuple>

#include "dsg/error.hpp"

namespace dsg {

double node_velocity(const StaticNode& node, double footprint_sum, const AgentParams& agent)
{
    if (!(agent.width < node.sidewalk_width))
        throw InvalidGeometry("agent width " + std::to_string(agent.width) + " m does not fit sidewalk width " +
                              std::to_string(node.sidewalk_width) + " m at node " + std::to_string(node.id));
    const double free_area = node.segment_length * (node.sidewalk_width - agent.width);
    return std::max((free_area - footprint_sum) / free_area * agent.velocity, 0.0);
}

double node_penalty(const StaticNode& node, double footprint_sum, const AgentParams& agent)
{
    const double v = node_velocity(node, footprint_sum, agent);
    if (v <= 0.0) return kBlocked;
    return node.segment_length / v - node.segment_length / agent.velocity;
}

double node_dwell(const StaticNode& node, double footprint_sum, const AgentParams& agent)
{
    const double v = node_velocity(node, footprint_sum, agent);
    if (footprint_sum <= 0.0) return node.segment_length / agent.velocity;
    return v > 0.0 ? node.segment_length / v : kBlocked;
}

namespace {

double view_dwell(const StaticGraph& graph, const DynamicLayer* view, NodeId v, const AgentParams& agent)
{
    return node_dwell(graph.node(v), view ? view->footprint_at(v) : 0.0, agent);
}

double view_penalty(const StaticGraph& graph, const DynamicLayer* view, NodeId v, const AgentParams& agent)
{
    if (!view) return 0.0;
    const double footprint = view->footprint_at(v);
    return footprint > 0.0 ? node_penalty(graph.node(v), footprint, agent) : 0.0;
}

} // namespace

std::optional<Path> PathPlanner::plan(const StaticGraph& graph, const DynamicLayer* view, NodeId from, NodeId to,
                                      const AgentParams& agent, std::span<const NodeId> excluded)
{
    expansions_ = 0;
    if (!graph.is_path(from) || !graph.is_path(to))
        throw UnknownId("planner endpoints must be path nodes");
    const std::size_t n = graph.node_count();
    if (g_.size() != n) {
        g_.assign(n, 0.0);
        parent_.assign(n, kNoNode);
        stamp_.assign(n, 0);
        excluded_stamp_.assign(n, 0);
        epoch_ = 0;
    }
    if (++epoch_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        std::fill(excluded_stamp_.begin(), excluded_stamp_.end(), 0);
        epoch_ = 1;
    }
    for (auto x : excluded)
        if (x < n) excluded_stamp_[x] = epoch_;
    if (from == to) return Path{{from}, 0.0};
    if (excluded_stamp_[to] == epoch_) return std::nullopt;

    const Point2 goal = graph.node(to).position;
    const double h_scale = graph.heuristic_scale() / agent.velocity;
    auto heuristic = [&](NodeId v) { return distance(graph.node(v).position, goal) * h_scale; };

    using Entry = std::tuple<double, double, NodeId>; // (f, g, node)
    open_.clear();
    auto push = [this](Entry e) {
        open_.push_back(e);
        std::push_heap(open_.begin(), open_.end(), std::greater<>{});
    };
    g_[from] = 0.0;
    parent_[from] = kNoNode;
    stamp_[from] = epoch_;
    push({heuristic(from), 0.0, from});
    while (!open_.empty()) {
        std::pop_heap(open_.begin(), open_.end(), std::greater<>{});
        const auto [f, g, u] = open_.back();
        open_.pop_back();
        if (g > g_[u]) continue; // stale entry
        if (u == to) break;
        ++expansions_;
        for (const auto& arc : graph.arcs(u)) {
            const NodeId v = arc.to;
            if (excluded_stamp_[v] == epoch_) continue;
            const double penalty = view_penalty(graph, view, v, agent);
            if (penalty == kBlocked) continue;
            const double cand = g_[u] + (arc.length / agent.velocity + penalty);
            if (stamp_[v] != epoch_ || cand < g_[v]) {
                stamp_[v] = epoch_;
                g_[v] = cand;
                parent_[v] = u;
                push({cand + heuristic(v), cand, v});
            }
        }
    }
    if (stamp_[to] != epoch_) return std::nullopt;

    Path path;
    for (NodeId v = to; v != kNoNode; v = parent_[v]) path.nodes.push_back(v);
    std::reverse(path.nodes.begin(), path.nodes.end());
    path.cost = g_[to];
    return path;
}

Path plan_path(const StaticGraph& graph, const DynamicLayer* view, NodeId from, NodeId to, const AgentParams& agent,
               PlannerMode mode)
{
    auto resolve = [&](NodeId v) { return graph.is_path(v) ? v : graph.access_node(v); };
    PathPlanner planner;
    auto path = planner.plan(graph, mode == PlannerMode::observed ? view : nullptr, resolve(from), resolve(to), agent);
    if (!path) throw Unreachable("no path from node " + std::to_string(from) + " to node " + std::to_string(to));
    return std::move(*path);
}

double walk_cost(const StaticGraph& graph, const DynamicLayer* view, std::span<const NodeId> nodes,
                 const AgentParams& agent)
{
    if (nodes.empty()) return 0.0;
    double total = view_dwell(graph, view, nodes.front(), agent);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        total += graph.arc_length(nodes[i - 1], nodes[i]) / agent.velocity;
        total += view_dwell(graph, view, nodes[i], agent);
    }
    return total;
}

bool is_valid_walk(const StaticGraph& graph, std::span<const NodeId> nodes)
{
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (graph.arc_length(nodes[i - 1], nodes[i]) == kBlocked) return false;
    return true;
}

} // namespace dsg
