#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "dsg/classes.hpp"
#include "dsg/geometry.hpp"
#include "dsg/spatial_grid.hpp"

namespace dsg {

/// Static node id. Path and PoI nodes are numbered densely from zero.
using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/// Object ids live in their own type; the kernel additionally allocates them
/// above the static id range so serialized ids never collide either.
enum class ObjectId : std::uint64_t {};

inline constexpr std::uint64_t to_integer(ObjectId id) noexcept
{
    return static_cast<std::uint64_t>(id);
}

enum class NodeKind : std::uint8_t { path, poi };
enum class EdgeKind : std::uint8_t { adjacency, access, attachment };

/// Per-class slot counts indexed by ClassId. Place classes stay at zero.
using CapacityTable = std::vector<std::uint16_t>;

struct PathNode {
    NodeId id = kNoNode;
    Point2 position;
    ClassId semantic_class = 0;
    CapacityTable capacity;
    double segment_length = 0.0; // l_s
    double sidewalk_width = 0.0; // b_s
};

struct PoiNode {
    NodeId id = kNoNode;
    Point2 position;
    ClassId semantic_class = 0;
    bool is_depot = false;
};

struct ObjectNode {
    ObjectId id{};
    ClassId semantic_class = 0;
    double t_spawn = 0.0;
    double t_lifetime = 0.0;
    double footprint_area = 0.0;
    NodeId attached_to = kNoNode;

    friend bool operator==(const ObjectNode&, const ObjectNode&) = default;
};

/// Static edge (adjacency or access). Attachment edges are implied by
/// ObjectNode::attached_to and never stored here.
struct Edge {
    EdgeKind kind = EdgeKind::adjacency;
    NodeId from = kNoNode;
    NodeId to = kNoNode;
    bool directed = false;
    double length = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// One stored static node; the union of the PathNode and PoiNode fields.
struct StaticNode {
    NodeId id = kNoNode;
    NodeKind kind = NodeKind::path;
    Point2 position;
    ClassId semantic_class = 0;
    CapacityTable capacity;
    double segment_length = 0.0;
    double sidewalk_width = 0.0;
    bool is_depot = false;
};

/// Outgoing traversal arc on the path network.
struct Arc {
    NodeId to;
    double length;
};

/// The static subgraph S: path network plus PoIs and their access edges.
/// Immutable once built; shared read-only between the true graph, the belief,
/// and any number of concurrently running replications.
class StaticGraph {
public:
    /// Validates every structural invariant and throws ValidationError
    /// listing all violations.
    StaticGraph(ClassRegistry registry, std::vector<PathNode> paths, std::vector<PoiNode> pois,
                std::vector<Edge> edges);

    const ClassRegistry& registry() const noexcept { return registry_; }

    std::size_t node_count() const noexcept { return nodes_.size(); }
    const StaticNode& node(NodeId id) const { return nodes_.at(id); }
    std::span<const StaticNode> nodes() const noexcept { return nodes_; }
    bool contains(NodeId id) const noexcept { return id < nodes_.size(); }
    bool is_path(NodeId id) const noexcept
    {
        return id < nodes_.size() && nodes_[id].kind == NodeKind::path;
    }

    std::span<const NodeId> path_nodes() const noexcept { return path_ids_; }
    std::span<const NodeId> poi_nodes() const noexcept { return poi_ids_; }
    NodeId depot() const noexcept { return depot_; }
    NodeId depot_access_node() const { return access_node(depot_); }

    std::span<const Edge> edges() const noexcept { return edges_; }
    /// Indices into edges() of every static edge touching the node.
    std::span<const std::uint32_t> incident_edges(NodeId id) const;
    /// Traversable arcs leaving a path node (undirected edges appear both ways).
    std::span<const Arc> arcs(NodeId id) const;
    /// Length of the arc from->to; +inf if none.
    double arc_length(NodeId from, NodeId to) const;

    NodeId access_node(NodeId poi) const;
    double access_length(NodeId poi) const;

    /// Multiplier <= 1 applied to straight-line distance so that it never
    /// overestimates network distance, even if stored edge lengths are shorter
    /// than the Euclidean gap between their endpoints.
    double heuristic_scale() const noexcept { return heuristic_scale_; }

    const SpatialGrid& spatial_index() const noexcept { return grid_; }

    /// Content hash over nodes, attributes, and edges.
    std::uint64_t fingerprint() const noexcept;

private:
    ClassRegistry registry_;
    std::vector<StaticNode> nodes_;
    std::vector<Edge> edges_;
    std::vector<NodeId> path_ids_;
    std::vector<NodeId> poi_ids_;
    NodeId depot_ = kNoNode;

    std::vector<std::uint32_t> incident_offsets_;
    std::vector<std::uint32_t> incident_;
    std::vector<std::uint32_t> arc_offsets_;
    std::vector<Arc> arcs_;
    std::vector<NodeId> access_node_;
    std::vector<double> access_length_;
    double heuristic_scale_ = 1.0;
    SpatialGrid grid_;
};

/// Object content of a graph: D[t] without the static part.
class DynamicLayer {
public:
    explicit DynamicLayer(const StaticGraph& graph);

    bool contains(ObjectId id) const { return objects_.contains(id); }
    const ObjectNode& object(ObjectId id) const; // throws UnknownId
    std::size_t object_count() const noexcept { return objects_.size(); }

    /// Sorted ids of the objects attached to a node.
    std::span<const ObjectId> objects_at(NodeId node) const { return at_node_.at(node); }
    std::uint32_t occupancy(NodeId node, ClassId cls) const
    {
        return occupancy_[static_cast<std::size_t>(node) * class_count_ + cls];
    }
    double footprint_at(NodeId node) const { return footprint_.at(node); }

    void insert(const ObjectNode& object);
    ObjectNode erase(ObjectId id);
    /// Replace the object set at one node; returns true if it changed.
    bool replace_at(NodeId node, std::span<const ObjectNode> objects);

    template <typename F>
    void for_each_object(F&& fn) const
    {
        for (const auto& [_, obj] : objects_) fn(obj);
    }

    friend bool operator==(const DynamicLayer& a, const DynamicLayer& b);

private:
    std::size_t class_count_;
    std::unordered_map<ObjectId, ObjectNode> objects_;
    std::vector<std::vector<ObjectId>> at_node_;
    std::vector<std::uint32_t> occupancy_;
    std::vector<double> footprint_;
};

/// The true world state G[t].
class SceneGraph {
public:
    explicit SceneGraph(std::shared_ptr<const StaticGraph> graph);

    const StaticGraph& statics() const noexcept { return *static_; }
    std::shared_ptr<const StaticGraph> statics_ptr() const noexcept { return static_; }
    const DynamicLayer& dynamics() const noexcept { return dynamic_; }

    bool has_free_capacity(NodeId node, ClassId cls) const;

    /// Attach an object to its `attached_to` path node. Throws
    /// CapacityExceeded, DuplicateId, or UnknownId (target not a path node).
    void attach_object(const ObjectNode& object);
    /// Throws UnknownId if absent.
    ObjectNode remove_object(ObjectId id);

    friend bool operator==(const SceneGraph& a, const SceneGraph& b)
    {
        return a.static_ == b.static_ && a.dynamic_ == b.dynamic_;
    }

private:
    std::shared_ptr<const StaticGraph> static_;
    DynamicLayer dynamic_;
};

/// Induced subgraph returned by a range query and consumed by merges.
struct Subgraph {
    std::vector<NodeId> nodes;          // ascending
    std::vector<ObjectNode> objects;    // grouped by attached_to, ascending id
    std::vector<std::uint32_t> edges;   // indices into StaticGraph::edges()

    bool empty() const noexcept { return nodes.empty(); }
};

/// What one merge changed; consumed by metric hooks.
struct MergeReport {
    std::vector<NodeId> covered_path_nodes;
    std::vector<NodeId> changed_nodes;
    std::vector<ObjectNode> first_seen;
};

/// The fleet's belief G_obs[t]. Shares the static subgraph with the truth by
/// construction and changes only through merge_observation().
class ObservedGraph {
public:
    explicit ObservedGraph(std::shared_ptr<const StaticGraph> graph);

    const StaticGraph& statics() const noexcept { return *static_; }
    const DynamicLayer& dynamics() const noexcept { return dynamic_; }

    /// Timestamp of the latest observation covering the node; NaN if never.
    double last_observed(NodeId node) const { return last_observed_.at(node); }
    /// Bumped whenever a merge changes any believed object set.
    std::uint64_t version() const noexcept { return version_; }
    /// Version at which the believed object set of the node last changed.
    std::uint64_t changed_version(NodeId node) const { return changed_version_.at(node); }

    friend MergeReport merge_observation(ObservedGraph& belief, const Subgraph& observation,
                                         double t);

    friend bool operator==(const ObservedGraph& a, const ObservedGraph& b);

private:
    std::shared_ptr<const StaticGraph> static_;
    DynamicLayer dynamic_;
    std::vector<double> last_observed_;
    std::vector<std::uint64_t> changed_version_;
    std::uint64_t version_ = 0;
};

/// Nodes strictly closer than `radius` to `center`, with the objects attached
/// to them and the static edges whose both endpoints are selected.
Subgraph induced_radius_subgraph(const SceneGraph& graph, Point2 center, double radius);

/// Replace, per covered path node, the believed object set with the observed
/// one and stamp last_observed. Throws UnknownStaticNode on scenario mismatch.
MergeReport merge_observation(ObservedGraph& belief, const Subgraph& observation, double t);

/// True iff the believed object ids at the node equal the true ones.
bool up_to_date(const ObservedGraph& belief, const SceneGraph& truth, NodeId node);

} // namespace dsg
