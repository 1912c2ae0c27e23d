#include "dsg/osm_import.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include <expat.h>
#include <json.hpp>

#include "dsg/error.hpp"

namespace dsg {

TagMapping TagMapping::defaults()
{
    TagMapping m;
    m.poi_rules = {
        {"amenity", {"school", "university", "kindergarten", "college"}, "education"},
        {"amenity", {"restaurant", "cafe", "bar"}, "leisure"},
        {"leisure", {}, "leisure"},
        {"tourism", {}, "leisure"},
        {"shop", {}, "retail"},
        {"building", {"retail"}, "retail"},
        {"office", {}, "work"},
        {"building", {"office", "industrial", "commercial"}, "work"},
        {"landuse", {"industrial"}, "work"},
        {"building", {"house", "apartments", "residential", "detached"}, "housing"},
        // Untyped buildings are overwhelmingly residential.
        {"building", {}, "housing"},
    };
    m.pedestrian_highways = {"footway", "path", "pedestrian", "living_street"};
    m.sidewalk_absent_values = {"no", "none", "separate"};
    return m;
}

TagMapping TagMapping::from_json(const std::string& text)
{
    using nlohmann::json;
    TagMapping m = defaults();
    json doc;
    try {
        doc = json::parse(text, nullptr, true, true);
        if (doc.contains("poi_rules")) {
            m.poi_rules.clear();
            for (const auto& r : doc.at("poi_rules"))
                m.poi_rules.push_back({r.at("key").get<std::string>(),
                                       r.value("values", std::vector<std::string>{}),
                                       r.at("class").get<std::string>()});
        }
        if (doc.contains("pedestrian_highways"))
            m.pedestrian_highways = doc.at("pedestrian_highways").get<std::vector<std::string>>();
        if (doc.contains("sidewalk_absent_values"))
            m.sidewalk_absent_values = doc.at("sidewalk_absent_values").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("tag mapping: ") + e.what());
    }
    return m;
}

namespace {

using Tags = std::map<std::string, std::string>;

struct OsmNode {
    double lat = 0.0, lon = 0.0;
    Tags tags;
};

struct OsmWay {
    std::int64_t id = 0;
    std::vector<std::int64_t> refs;
    Tags tags;
};

struct OsmData {
    std::map<std::int64_t, OsmNode> nodes;
    std::vector<OsmWay> ways;
};

struct ParseState {
    OsmData data;
    enum class In { none, node, way, other } in = In::none;
    std::int64_t node_id = 0;
    std::string error;
    XML_Parser parser = nullptr;
};

const char* attr(const XML_Char** attrs, const char* name)
{
    for (int i = 0; attrs[i]; i += 2)
        if (std::strcmp(attrs[i], name) == 0) return attrs[i + 1];
    return nullptr;
}

void fail(ParseState& st, const std::string& msg)
{
    if (st.error.empty())
        st.error = msg + " at line " + std::to_string(XML_GetCurrentLineNumber(st.parser));
    XML_StopParser(st.parser, XML_FALSE);
}

bool parse_number(const char* s, double& out)
{
    if (!s) return false;
    char* end = nullptr;
    out = std::strtod(s, &end);
    return end != s && *end == '\0' && std::isfinite(out);
}

bool parse_id(const char* s, std::int64_t& out)
{
    if (!s) return false;
    char* end = nullptr;
    out = std::strtoll(s, &end, 10);
    return end != s && *end == '\0';
}

void XMLCALL on_start(void* user, const XML_Char* name, const XML_Char** attrs)
{
    auto& st = *static_cast<ParseState*>(user);
    if (std::strcmp(name, "node") == 0) {
        std::int64_t id;
        OsmNode n;
        if (!parse_id(attr(attrs, "id"), id) || !parse_number(attr(attrs, "lat"), n.lat) ||
            !parse_number(attr(attrs, "lon"), n.lon))
            return fail(st, "node without valid id/lat/lon");
        st.node_id = id;
        st.data.nodes[id] = std::move(n);
        st.in = ParseState::In::node;
    } else if (std::strcmp(name, "way") == 0) {
        OsmWay w;
        if (!parse_id(attr(attrs, "id"), w.id)) return fail(st, "way without valid id");
        st.data.ways.push_back(std::move(w));
        st.in = ParseState::In::way;
    } else if (std::strcmp(name, "nd") == 0) {
        if (st.in != ParseState::In::way) return;
        std::int64_t ref;
        if (!parse_id(attr(attrs, "ref"), ref)) return fail(st, "nd without valid ref");
        st.data.ways.back().refs.push_back(ref);
    } else if (std::strcmp(name, "tag") == 0) {
        const char* k = attr(attrs, "k");
        const char* v = attr(attrs, "v");
        if (!k || !v) return fail(st, "tag without k/v");
        if (st.in == ParseState::In::node) st.data.nodes[st.node_id].tags[k] = v;
        else if (st.in == ParseState::In::way) st.data.ways.back().tags[k] = v;
    } else if (std::strcmp(name, "relation") == 0) {
        st.in = ParseState::In::other;
    }
}

void XMLCALL on_end(void* user, const XML_Char* name)
{
    auto& st = *static_cast<ParseState*>(user);
    if (std::strcmp(name, "node") == 0 || std::strcmp(name, "way") == 0 || std::strcmp(name, "relation") == 0)
        st.in = ParseState::In::none;
}

OsmData parse_osm(const std::string& xml)
{
    ParseState st;
    XML_Parser parser = XML_ParserCreate(nullptr);
    if (!parser) throw MalformedXml("cannot create XML parser");
    st.parser = parser;
    XML_SetUserData(parser, &st);
    XML_SetElementHandler(parser, on_start, on_end);
    const auto status = XML_Parse(parser, xml.data(), static_cast<int>(xml.size()), XML_TRUE);
    std::string error = st.error;
    if (status == XML_STATUS_ERROR && error.empty())
        error = std::string(XML_ErrorString(XML_GetErrorCode(parser))) + " at line " +
                std::to_string(XML_GetCurrentLineNumber(parser));
    XML_ParserFree(parser);
    if (!error.empty()) throw MalformedXml("OSM extract: " + error);
    return std::move(st.data);
}

bool contains(const std::vector<std::string>& v, const std::string& s)
{
    return std::find(v.begin(), v.end(), s) != v.end();
}

bool is_pedestrian(const Tags& tags, const TagMapping& m)
{
    auto hw = tags.find("highway");
    if (hw == tags.end()) return false;
    if (contains(m.pedestrian_highways, hw->second)) return true;
    for (const char* key : {"sidewalk", "sidewalk:both", "sidewalk:left", "sidewalk:right"}) {
        auto sw = tags.find(key);
        if (sw != tags.end() && !contains(m.sidewalk_absent_values, sw->second)) return true;
    }
    return false;
}

const TagRule* match_poi(const Tags& tags, const TagMapping& m)
{
    for (const auto& rule : m.poi_rules) {
        auto it = tags.find(rule.key);
        if (it == tags.end()) continue;
        if (rule.values.empty() || contains(rule.values, it->second)) return &rule;
    }
    return nullptr;
}

struct UnionFind {
    std::vector<std::uint32_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
    std::uint32_t find(std::uint32_t x)
    {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b)
    {
        a = find(a), b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

struct Candidate {
    Point2 position;
    ClassId cls;
};

} // namespace

Scenario import_osm(const std::string& xml, const ImportParams& params)
{
    if (!(params.max_segment > 0.0) || !(params.radius > 0.0) || !(params.sidewalk_width > 0.0))
        throw ValidationError({"import parameters: max_segment, radius and sidewalk width must be > 0"});

    const OsmData osm = parse_osm(xml);
    const LocalProjection proj(params.center);
    ClassRegistry reg = ClassRegistry::urban_default();

    std::vector<std::string> errors;
    CapacityTable capacity(reg.size(), 0);
    for (const auto& [label, slots] : params.capacities) {
        auto c = reg.find(label);
        if (!c || !reg.is_object(*c)) errors.push_back("capacities." + label + ": not an object class");
        else capacity[*c] = slots;
    }
    for (const auto& rule : params.tags.poi_rules) {
        auto c = reg.find(rule.place_class);
        if (!c || !reg.is_place(*c) || *c == reg.at("sidewalk"))
            errors.push_back("tag mapping: '" + rule.place_class + "' is not a PoI class");
    }
    if (!errors.empty()) throw ValidationError(std::move(errors));

    auto inside = [&](Point2 p) { return std::abs(p.x) + std::abs(p.y) <= params.radius; };
    auto position_of = [&](const OsmNode& n) { return proj.to_plane({n.lon, n.lat}); };

    // Pedestrian segments between OSM nodes, both ends inside the radius.
    std::set<std::pair<std::int64_t, std::int64_t>> segments;
    for (const auto& w : osm.ways) {
        if (!is_pedestrian(w.tags, params.tags)) continue;
        for (std::size_t i = 1; i < w.refs.size(); ++i) {
            const auto a = w.refs[i - 1], b = w.refs[i];
            if (a == b) continue;
            auto na = osm.nodes.find(a), nb = osm.nodes.find(b);
            if (na == osm.nodes.end() || nb == osm.nodes.end()) continue;
            if (!inside(position_of(na->second)) || !inside(position_of(nb->second))) continue;
            segments.emplace(std::min(a, b), std::max(a, b));
        }
    }

    // Original path nodes in OSM id order, interpolated nodes appended.
    std::map<std::int64_t, std::uint32_t> index_of;
    std::vector<Point2> pos;
    for (const auto& [a, b] : segments)
        for (auto id : {a, b}) index_of.emplace(id, 0);
    for (auto& [id, idx] : index_of) {
        idx = static_cast<std::uint32_t>(pos.size());
        pos.push_back(position_of(osm.nodes.at(id)));
    }
    struct Seg {
        std::uint32_t a, b;
        double length;
    };
    std::vector<Seg> segs;
    for (const auto& [oa, ob] : segments) {
        const auto a = index_of.at(oa), b = index_of.at(ob);
        const double len = distance(pos[a], pos[b]);
        const auto pieces = static_cast<std::uint32_t>(std::max(1.0, std::ceil(len / params.max_segment - 1e-9)));
        std::uint32_t prev = a;
        for (std::uint32_t k = 1; k < pieces; ++k) {
            const double f = static_cast<double>(k) / pieces;
            const auto idx = static_cast<std::uint32_t>(pos.size());
            pos.push_back({pos[a].x + f * (pos[b].x - pos[a].x), pos[a].y + f * (pos[b].y - pos[a].y)});
            segs.push_back({prev, idx, len / pieces});
            prev = idx;
        }
        segs.push_back({prev, b, len / pieces});
    }
    if (pos.empty()) throw EmptyNetwork("no pedestrian ways inside the radius");

    // Largest component; ties go to the one holding the lowest index.
    UnionFind uf(pos.size());
    for (const auto& s : segs) uf.unite(s.a, s.b);
    std::vector<std::uint32_t> size(pos.size(), 0);
    for (std::uint32_t i = 0; i < pos.size(); ++i) ++size[uf.find(i)];
    std::uint32_t root = 0;
    for (std::uint32_t i = 0; i < pos.size(); ++i)
        if (size[i] > size[root]) root = i;
    std::vector<std::uint32_t> new_id(pos.size(), kNoNode);
    std::vector<Point2> kept;
    for (std::uint32_t i = 0; i < pos.size(); ++i)
        if (uf.find(i) == root) {
            new_id[i] = static_cast<std::uint32_t>(kept.size());
            kept.push_back(pos[i]);
        }

    std::vector<double> incident_sum(kept.size(), 0.0);
    std::vector<std::uint32_t> incident_count(kept.size(), 0);
    std::vector<Edge> edges;
    for (const auto& s : segs) {
        if (new_id[s.a] == kNoNode) continue;
        const auto a = new_id[s.a], b = new_id[s.b];
        edges.push_back({EdgeKind::adjacency, a, b, false, s.length});
        incident_sum[a] += s.length;
        incident_sum[b] += s.length;
        ++incident_count[a];
        ++incident_count[b];
    }

    // PoI candidates: tagged ways (outline centroid) then tagged nodes.
    std::vector<Candidate> candidates;
    for (const auto& w : osm.ways) {
        const TagRule* rule = match_poi(w.tags, params.tags);
        if (!rule) continue;
        std::vector<std::int64_t> refs = w.refs;
        if (refs.size() > 1 && refs.front() == refs.back()) refs.pop_back();
        Point2 c{};
        std::size_t n = 0;
        for (auto r : refs) {
            auto it = osm.nodes.find(r);
            if (it == osm.nodes.end()) continue;
            const Point2 p = position_of(it->second);
            c.x += p.x;
            c.y += p.y;
            ++n;
        }
        if (n == 0) continue;
        candidates.push_back({{c.x / n, c.y / n}, reg.at(rule->place_class)});
    }
    for (const auto& [id, node] : osm.nodes) {
        const TagRule* rule = match_poi(node.tags, params.tags);
        if (rule) candidates.push_back({position_of(node), reg.at(rule->place_class)});
    }

    const SpatialGrid grid(kept, std::clamp(params.max_segment, 5.0, 100.0));
    struct Poi {
        Candidate c;
        std::uint32_t access;
        double length;
    };
    std::vector<Poi> pois;
    for (const auto& c : candidates) {
        if (!inside(c.position)) continue;
        const auto near = grid.nearest(c.position, [](std::uint32_t) { return true; });
        const double d = distance(c.position, kept[near]);
        if (d > params.max_access_distance) continue;
        pois.push_back({c, near, std::max(d, 0.01)});
    }
    if (pois.empty()) throw NoDepotCandidate("no building inside the radius can reach the path network");

    std::size_t depot = 0;
    for (std::size_t i = 1; i < pois.size(); ++i)
        if (distance(pois[i].c.position, {}) < distance(pois[depot].c.position, {})) depot = i;

    const ClassId sidewalk = reg.at("sidewalk");
    std::vector<PathNode> paths;
    for (std::uint32_t i = 0; i < kept.size(); ++i)
        paths.push_back({i, kept[i], sidewalk, capacity, incident_sum[i] / incident_count[i], params.sidewalk_width});
    std::vector<PoiNode> poi_nodes;
    for (std::size_t i = 0; i < pois.size(); ++i) {
        const auto id = static_cast<NodeId>(kept.size() + i);
        poi_nodes.push_back({id, pois[i].c.position, pois[i].c.cls, i == depot});
        edges.push_back({EdgeKind::access, id, pois[i].access, false, pois[i].length});
    }

    Scenario s;
    s.name = params.name;
    s.center = params.center;
    s.radius = params.radius;
    s.graph = std::make_shared<const StaticGraph>(std::move(reg), std::move(paths), std::move(poi_nodes), std::move(edges));
    return s;
}

Scenario import_osm_file(const std::filesystem::path& path, const ImportParams& params)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open OSM file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return import_osm(ss.str(), params);
}

} // namespace dsg
