#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "dsg/graph.hpp"

namespace dsg {

inline constexpr double kBlocked = std::numeric_limits<double>::infinity();

/// Physical parameters shared by every agent of the fleet.
struct AgentParams {
    double velocity = 1.5;       // nu_default, m/s
    double width = 0.6;          // b_agent, m
    double sensor_radius = 25.0; // r_sigma, m
};

/// Velocity through a path node given the summed footprint of the objects on
/// it: linear in the free area l_s * (b_s - b_agent), clamped at zero.
/// Throws InvalidGeometry if the agent does not fit the sidewalk.
double node_velocity(const StaticNode& node, double footprint_sum, const AgentParams& agent);

/// Extra seconds needed to pass the node compared with an empty one;
/// kBlocked when the velocity drops to zero.
double node_penalty(const StaticNode& node, double footprint_sum, const AgentParams& agent);

/// Seconds spent inside the node, l_s / nu_j; kBlocked when blocked.
double node_dwell(const StaticNode& node, double footprint_sum, const AgentParams& agent);

enum class PlannerMode : std::uint8_t { static_graph, observed };

struct Path {
    std::vector<NodeId> nodes;
    double cost = 0.0; // sum over steps of travel time + penalty at the step's target
};

/// A* over the path network. Step cost u->v is length/nu_default plus the
/// penalty of v under the given object view (nullptr = static graph, no
/// obstacles). Nodes the view shows as blocked, and any node listed in
/// `excluded`, are never entered. The straight-line heuristic is scaled by
/// StaticGraph::heuristic_scale() and stays admissible; nodes are reopened
/// when a cheaper route is found, so the result is optimal.
class PathPlanner {
public:
    std::optional<Path> plan(const StaticGraph& graph, const DynamicLayer* view, NodeId from, NodeId to,
                             const AgentParams& agent, std::span<const NodeId> excluded = {});

    std::size_t last_expansions() const noexcept { return expansions_; }

private:
    std::vector<double> g_;
    std::vector<NodeId> parent_;
    std::vector<std::uint32_t> stamp_;
    std::vector<std::uint32_t> excluded_stamp_;
    std::uint32_t epoch_ = 0;
    std::vector<std::tuple<double, double, NodeId>> open_; // binary heap on (f, g, node)
    std::size_t expansions_ = 0;
};

/// Resolves PoI endpoints to their access nodes. Throws Unreachable.
Path plan_path(const StaticGraph& graph, const DynamicLayer* view, NodeId from, NodeId to, const AgentParams& agent,
               PlannerMode mode);

/// Cost of walking `nodes` from its first node: dwell at the first node, then
/// per step the travel time followed by the dwell at the reached node. This is
/// the same summation order agents use when they account for elapsed time.
double walk_cost(const StaticGraph& graph, const DynamicLayer* view, std::span<const NodeId> nodes,
                 const AgentParams& agent);

/// True iff consecutive nodes are joined by a traversable adjacency arc.
bool is_valid_walk(const StaticGraph& graph, std::span<const NodeId> nodes);

} // namespace dsg
