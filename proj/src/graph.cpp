#include "dsg/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "dsg/error.hpp"

namespace dsg {

namespace {

std::string node_ref(NodeId id) { return "node " + std::to_string(id); }

class Fnv1a {
public:
    template <typename T>
    void add(const T& value) noexcept
    {
        const auto* bytes = reinterpret_cast<const unsigned char*>(&value);
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            hash_ ^= bytes[i];
            hash_ *= 0x100000001b3ULL;
        }
    }
    std::uint64_t value() const noexcept { return hash_; }

private:
    std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

// Union-find over path nodes for the connectivity check.
NodeId find_root(std::vector<NodeId>& parent, NodeId x)
{
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

} // namespace

// ---------------------------------------------------------------------------
// StaticGraph

StaticGraph::StaticGraph(ClassRegistry registry, std::vector<PathNode> paths,
                         std::vector<PoiNode> pois, std::vector<Edge> edges)
    : registry_(std::move(registry)), edges_(std::move(edges))
{
    std::vector<std::string> errors;
    const std::size_t n = paths.size() + pois.size();
    nodes_.resize(n);
    std::vector<bool> seen(n, false);

    auto claim = [&](NodeId id, const std::string& where) {
        if (id >= n) {
            errors.push_back(where + ".id: " + std::to_string(id) + " outside dense range [0, " +
                             std::to_string(n) + ")");
            return false;
        }
        if (seen[id]) {
            errors.push_back(where + ".id: duplicate id " + std::to_string(id));
            return false;
        }
        seen[id] = true;
        return true;
    };
    auto check_place = [&](ClassId cls, const std::string& where) {
        if (cls >= registry_.size())
            errors.push_back(where + ".class: unknown class index " + std::to_string(cls));
        else if (!registry_.is_place(cls))
            errors.push_back(where + ".class: '" + registry_[cls].label + "' is not a place class");
    };

    for (std::size_t i = 0; i < paths.size(); ++i) {
        auto& p = paths[i];
        const std::string where = "path_nodes[" + std::to_string(i) + "]";
        if (!claim(p.id, where)) continue;
        check_place(p.semantic_class, where);
        if (!std::isfinite(p.position.x) || !std::isfinite(p.position.y))
            errors.push_back(where + ".position: non-finite coordinate");
        if (!(p.segment_length > 0.0)) errors.push_back(where + ".segment_length: must be > 0");
        if (!(p.sidewalk_width > 0.0)) errors.push_back(where + ".sidewalk_width: must be > 0");
        if (p.capacity.size() > registry_.size())
            errors.push_back(where + ".capacity: more entries than declared classes");
        p.capacity.resize(registry_.size(), 0);
        for (std::size_t c = 0; c < registry_.size(); ++c)
            if (p.capacity[c] != 0 && !registry_.is_object(static_cast<ClassId>(c)))
                errors.push_back(where + ".capacity: place class '" + registry_[static_cast<ClassId>(c)].label +
                                 "' cannot hold objects");
        nodes_[p.id] = StaticNode{p.id,         NodeKind::path,   p.position,          p.semantic_class,
                                  p.capacity,   p.segment_length, p.sidewalk_width,    false};
    }

    const auto sidewalk = registry_.find("sidewalk");
    std::vector<NodeId> depots;
    for (std::size_t i = 0; i < pois.size(); ++i) {
        const auto& p = pois[i];
        const std::string where = "poi_nodes[" + std::to_string(i) + "]";
        if (!claim(p.id, where)) continue;
        check_place(p.semantic_class, where);
        if (sidewalk && p.semantic_class == *sidewalk)
            errors.push_back(where + ".class: a PoI cannot carry the sidewalk class");
        if (!std::isfinite(p.position.x) || !std::isfinite(p.position.y))
            errors.push_back(where + ".position: non-finite coordinate");
        if (p.is_depot) depots.push_back(p.id);
        nodes_[p.id] = StaticNode{p.id, NodeKind::poi, p.position, p.semantic_class,
                                  CapacityTable(registry_.size(), 0), 0.0, 0.0, p.is_depot};
    }
    if (depots.size() != 1) {
        std::string ids;
        for (auto d : depots) ids += (ids.empty() ? "" : ", ") + std::to_string(d);
        errors.push_back("poi_nodes: expected exactly one depot, found " + std::to_string(depots.size()) +
                         (ids.empty() ? "" : " (ids " + ids + ")"));
    } else {
        depot_ = depots.front();
    }

    // Later checks index nodes by id; they are meaningless without a dense id set.
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw ValidationError(std::move(errors));

    for (const auto& node : nodes_) (node.kind == NodeKind::path ? path_ids_ : poi_ids_).push_back(node.id);
    if (path_ids_.empty()) errors.push_back("path_nodes: the path network is empty");

    access_node_.assign(n, kNoNode);
    access_length_.assign(n, 0.0);
    std::vector<std::uint32_t> access_count(n, 0);
    std::vector<std::uint32_t> arc_count(n, 0);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const auto& e = edges_[i];
        const std::string where = "edges[" + std::to_string(i) + "]";
        if (e.from >= n || e.to >= n) {
            errors.push_back(where + ": endpoint outside node range");
            continue;
        }
        if (e.from == e.to) errors.push_back(where + ": self loop at " + node_ref(e.from));
        if (!(e.length > 0.0) || !std::isfinite(e.length)) errors.push_back(where + ".length: must be finite and > 0");
        const auto kf = nodes_[e.from].kind, kt = nodes_[e.to].kind;
        switch (e.kind) {
        case EdgeKind::adjacency:
            if (kf != NodeKind::path || kt != NodeKind::path)
                errors.push_back(where + ": adjacency edges must join two path nodes");
            ++arc_count[e.from];
            if (!e.directed) ++arc_count[e.to];
            break;
        case EdgeKind::access: {
            if ((kf == NodeKind::poi) == (kt == NodeKind::poi)) {
                errors.push_back(where + ": access edges must join a PoI and a path node");
                break;
            }
            const NodeId poi = kf == NodeKind::poi ? e.from : e.to;
            ++access_count[poi];
            access_node_[poi] = kf == NodeKind::poi ? e.to : e.from;
            access_length_[poi] = e.length;
            break;
        }
        case EdgeKind::attachment:
            errors.push_back(where + ": attachment edges are dynamic and cannot be loaded statically");
            break;
        }
    }
    for (auto poi : poi_ids_)
        if (access_count[poi] != 1)
            errors.push_back("poi " + std::to_string(poi) + ": needs exactly one access edge, has " +
                             std::to_string(access_count[poi]));
    // Weak connectivity of the path network.
    std::vector<NodeId> parent(n);
    std::iota(parent.begin(), parent.end(), NodeId{0});
    for (const auto& e : edges_)
        if (e.kind == EdgeKind::adjacency && e.from < n && e.to < n) parent[find_root(parent, e.from)] = find_root(parent, e.to);
    const NodeId root = path_ids_.empty() ? 0 : find_root(parent, path_ids_.front());
    std::size_t stray = 0;
    for (auto v : path_ids_)
        if (find_root(parent, v) != root) ++stray;
    if (stray > 0)
        errors.push_back("path network is not connected: " + std::to_string(stray) +
                         " path node(s) outside the component of node " + std::to_string(path_ids_.front()));
    if (!errors.empty()) throw ValidationError(std::move(errors));

    // CSR incidence and traversal arcs.
    incident_offsets_.assign(n + 1, 0);
    for (const auto& e : edges_) {
        ++incident_offsets_[e.from + 1];
        ++incident_offsets_[e.to + 1];
    }
    std::partial_sum(incident_offsets_.begin(), incident_offsets_.end(), incident_offsets_.begin());
    incident_.resize(incident_offsets_.back());
    {
        auto cursor = incident_offsets_;
        for (std::uint32_t i = 0; i < edges_.size(); ++i) {
            incident_[cursor[edges_[i].from]++] = i;
            incident_[cursor[edges_[i].to]++] = i;
        }
    }
    arc_offsets_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) arc_offsets_[v + 1] = arc_offsets_[v] + arc_count[v];
    arcs_.resize(arc_offsets_.back());
    {
        auto cursor = arc_offsets_;
        for (const auto& e : edges_) {
            if (e.kind != EdgeKind::adjacency) continue;
            arcs_[cursor[e.from]++] = {e.to, e.length};
            if (!e.directed) arcs_[cursor[e.to]++] = {e.from, e.length};
        }
        for (std::size_t v = 0; v < n; ++v)
            std::sort(arcs_.begin() + arc_offsets_[v], arcs_.begin() + arc_offsets_[v + 1],
                      [](const Arc& a, const Arc& b) { return a.to < b.to || (a.to == b.to && a.length < b.length); });
    }


    double mean_len = 0.0;
    std::size_t adj = 0;
    for (const auto& e : edges_) {
        if (e.kind != EdgeKind::adjacency) continue;
        const double straight = distance(nodes_[e.from].position, nodes_[e.to].position);
        if (straight > 0.0) heuristic_scale_ = std::min(heuristic_scale_, e.length / straight);
        mean_len += e.length;
        ++adj;
    }
    if (adj > 0) mean_len /= static_cast<double>(adj);

    std::vector<Point2> positions(n);
    for (std::size_t v = 0; v < n; ++v) positions[v] = nodes_[v].position;
    grid_ = SpatialGrid(positions, std::clamp(2.0 * mean_len, 5.0, 100.0));
}

std::span<const std::uint32_t> StaticGraph::incident_edges(NodeId id) const
{
    return {incident_.data() + incident_offsets_.at(id), incident_.data() + incident_offsets_.at(id + 1)};
}

std::span<const Arc> StaticGraph::arcs(NodeId id) const
{
    return {arcs_.data() + arc_offsets_.at(id), arcs_.data() + arc_offsets_.at(id + 1)};
}

double StaticGraph::arc_length(NodeId from, NodeId to) const
{
    for (const auto& a : arcs(from))
        if (a.to == to) return a.length;
    return std::numeric_limits<double>::infinity();
}

NodeId StaticGraph::access_node(NodeId poi) const
{
    if (!contains(poi) || nodes_[poi].kind != NodeKind::poi) throw UnknownId(node_ref(poi) + " is not a PoI");
    return access_node_[poi];
}

double StaticGraph::access_length(NodeId poi) const
{
    if (!contains(poi) || nodes_[poi].kind != NodeKind::poi) throw UnknownId(node_ref(poi) + " is not a PoI");
    return access_length_[poi];
}

std::uint64_t StaticGraph::fingerprint() const noexcept
{
    Fnv1a h;
    h.add(nodes_.size());
    for (const auto& v : nodes_) {
        h.add(v.id);
        h.add(v.kind);
        h.add(v.position.x);
        h.add(v.position.y);
        h.add(v.semantic_class);
        for (auto c : v.capacity) h.add(c);
        h.add(v.segment_length);
        h.add(v.sidewalk_width);
        h.add(v.is_depot);
    }
    h.add(edges_.size());
    for (const auto& e : edges_) {
        h.add(e.kind);
        h.add(e.from);
        h.add(e.to);
        h.add(e.directed);
        h.add(e.length);
    }
    return h.value();
}

// ---------------------------------------------------------------------------
// DynamicLayer

DynamicLayer::DynamicLayer(const StaticGraph& graph)
    : class_count_(graph.registry().size()),
      at_node_(graph.node_count()),
      occupancy_(graph.node_count() * class_count_, 0),
      footprint_(graph.node_count(), 0.0)
{
}

const ObjectNode& DynamicLayer::object(ObjectId id) const
{
    auto it = objects_.find(id);
    if (it == objects_.end()) throw UnknownId("object " + std::to_string(to_integer(id)) + " not present");
    return it->second;
}

void DynamicLayer::insert(const ObjectNode& object)
{
    if (!objects_.emplace(object.id, object).second)
        throw DuplicateId("object " + std::to_string(to_integer(object.id)) + " already present");
    auto& list = at_node_[object.attached_to];
    list.insert(std::upper_bound(list.begin(), list.end(), object.id), object.id);
    ++occupancy_[static_cast<std::size_t>(object.attached_to) * class_count_ + object.semantic_class];
    footprint_[object.attached_to] += object.footprint_area;
}

ObjectNode DynamicLayer::erase(ObjectId id)
{
    auto it = objects_.find(id);
    if (it == objects_.end()) throw UnknownId("object " + std::to_string(to_integer(id)) + " not present");
    ObjectNode obj = it->second;
    objects_.erase(it);
    auto& list = at_node_[obj.attached_to];
    list.erase(std::lower_bound(list.begin(), list.end(), id));
    --occupancy_[static_cast<std::size_t>(obj.attached_to) * class_count_ + obj.semantic_class];
    footprint_[obj.attached_to] -= obj.footprint_area;
    if (list.empty()) footprint_[obj.attached_to] = 0.0; // drop accumulated rounding
    return obj;
}

bool DynamicLayer::replace_at(NodeId node, std::span<const ObjectNode> objects)
{
    const auto& current = at_node_.at(node);
    if (current.size() == objects.size()) {
        bool same = true;
        for (std::size_t i = 0; i < objects.size() && same; ++i) same = current[i] == objects[i].id;
        if (same) return false;
    }
    const std::vector<ObjectId> old = current;
    for (auto id : old) erase(id);
    for (const auto& obj : objects) insert(obj);
    return true;
}

bool operator==(const DynamicLayer& a, const DynamicLayer& b)
{
    return a.objects_ == b.objects_ && a.at_node_ == b.at_node_ && a.occupancy_ == b.occupancy_;
}

// ---------------------------------------------------------------------------
// SceneGraph

SceneGraph::SceneGraph(std::shared_ptr<const StaticGraph> graph)
    : static_(std::move(graph)), dynamic_(*static_)
{
}

bool SceneGraph::has_free_capacity(NodeId node, ClassId cls) const
{
    if (!static_->is_path(node)) return false;
    return dynamic_.occupancy(node, cls) < static_->node(node).capacity[cls];
}

void SceneGraph::attach_object(const ObjectNode& object)
{
    if (!static_->is_path(object.attached_to))
        throw UnknownId("objects attach only to path nodes; " + node_ref(object.attached_to) + " is not one");
    if (object.semantic_class >= static_->registry().size() || !static_->registry().is_object(object.semantic_class))
        throw UnknownId("class index " + std::to_string(object.semantic_class) + " is not an object class");
    if (dynamic_.contains(object.id))
        throw DuplicateId("object " + std::to_string(to_integer(object.id)) + " already present");
    if (!has_free_capacity(object.attached_to, object.semantic_class))
        throw CapacityExceeded(node_ref(object.attached_to) + " has no free slot for class '" +
                               static_->registry()[object.semantic_class].label + "'");
    dynamic_.insert(object);
}

ObjectNode SceneGraph::remove_object(ObjectId id) { return dynamic_.erase(id); }

// ---------------------------------------------------------------------------
// ObservedGraph

ObservedGraph::ObservedGraph(std::shared_ptr<const StaticGraph> graph)
    : static_(std::move(graph)),
      dynamic_(*static_),
      last_observed_(static_->node_count(), std::numeric_limits<double>::quiet_NaN()),
      changed_version_(static_->node_count(), 0)
{
}

bool operator==(const ObservedGraph& a, const ObservedGraph& b)
{
    if (a.static_ != b.static_ || !(a.dynamic_ == b.dynamic_)) return false;
    for (std::size_t i = 0; i < a.last_observed_.size(); ++i) {
        const double x = a.last_observed_[i], y = b.last_observed_[i];
        if (!(x == y || (std::isnan(x) && std::isnan(y)))) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Free operations

Subgraph induced_radius_subgraph(const SceneGraph& graph, Point2 center, double radius)
{
    Subgraph sub;
    if (!(radius > 0.0)) return sub;
    const auto& s = graph.statics();
    s.spatial_index().query(center, radius, sub.nodes);

    for (auto v : sub.nodes) {
        for (auto e_idx : s.incident_edges(v)) {
            const auto& e = s.edges()[e_idx];
            const NodeId other = e.from == v ? e.to : e.from;
            if (other < v) continue; // emitted from the lower endpoint
            if (std::binary_search(sub.nodes.begin(), sub.nodes.end(), other)) sub.edges.push_back(e_idx);
        }
        if (s.node(v).kind != NodeKind::path) continue;
        for (auto id : graph.dynamics().objects_at(v)) sub.objects.push_back(graph.dynamics().object(id));
    }
    std::sort(sub.edges.begin(), sub.edges.end());
    return sub;
}

MergeReport merge_observation(ObservedGraph& belief, const Subgraph& observation, double t)
{
    const auto& s = *belief.static_;
    for (auto v : observation.nodes)
        if (!s.contains(v))
            throw UnknownStaticNode("observation references " + node_ref(v) + " unknown to the belief");

    // Objects may arrive in any order; index them by attachment node.
    std::vector<const ObjectNode*> sorted;
    sorted.reserve(observation.objects.size());
    for (const auto& o : observation.objects) {
        if (!s.is_path(o.attached_to))
            throw UnknownStaticNode("observed object attached to " + node_ref(o.attached_to) +
                                    ", which is not a path node of the belief");
        if (!std::binary_search(observation.nodes.begin(), observation.nodes.end(), o.attached_to))
            throw UnknownStaticNode("observed object attached to " + node_ref(o.attached_to) +
                                    " outside the observed node set");
        sorted.push_back(&o);
    }
    std::sort(sorted.begin(), sorted.end(), [](const ObjectNode* a, const ObjectNode* b) {
        return a->attached_to < b->attached_to ||
               (a->attached_to == b->attached_to && to_integer(a->id) < to_integer(b->id));
    });

    MergeReport report;
    std::vector<ObjectNode> at_node;
    auto cursor = sorted.begin();
    for (auto v : observation.nodes) {
        if (s.node(v).kind != NodeKind::path) continue;
        report.covered_path_nodes.push_back(v);
        at_node.clear();
        while (cursor != sorted.end() && (*cursor)->attached_to < v) ++cursor;
        for (; cursor != sorted.end() && (*cursor)->attached_to == v; ++cursor) {
            at_node.push_back(**cursor);
            if (!belief.dynamic_.contains((*cursor)->id)) report.first_seen.push_back(**cursor);
        }
        if (belief.dynamic_.replace_at(v, at_node)) report.changed_nodes.push_back(v);
        belief.last_observed_[v] = t;
    }
    if (!report.changed_nodes.empty()) {
        ++belief.version_;
        for (auto v : report.changed_nodes) belief.changed_version_[v] = belief.version_;
    }
    return report;
}

bool up_to_date(const ObservedGraph& belief, const SceneGraph& truth, NodeId node)
{
    if (!truth.statics().contains(node) || !belief.statics().contains(node))
        throw UnknownId(node_ref(node) + " not in graph");
    const auto a = belief.dynamics().objects_at(node);
    const auto b = truth.dynamics().objects_at(node);
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

} // namespace dsg
