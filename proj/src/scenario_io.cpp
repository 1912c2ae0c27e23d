#include "dsg/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dsg/error.hpp"

namespace dsg {

using nlohmann::json;

namespace {

const char* kind_name(EdgeKind k)
{
    switch (k) {
    case EdgeKind::adjacency: return "adjacency";
    case EdgeKind::access: return "access";
    case EdgeKind::attachment: return "attachment";
    }
    return "?";
}

// Slack for positions that sit exactly on the L1 boundary after projection.
constexpr double kRadiusSlack = 1e-6;

} // namespace

std::string scenario_to_json(const Scenario& s)
{
    const auto& g = *s.graph;
    const auto& reg = g.registry();
    json doc;
    doc["name"] = s.name;
    doc["center"] = {{"lon", s.center.lon}, {"lat", s.center.lat}};
    doc["radius_m"] = s.radius;

    json classes = json::array();
    for (ClassId c = 0; c < reg.size(); ++c)
        classes.push_back({{"label", reg[c].label}, {"kind", reg[c].kind == ClassKind::place ? "place" : "object"}});
    doc["classes"] = classes;

    json paths = json::array();
    json pois = json::array();
    for (const auto& n : g.nodes()) {
        if (n.kind == NodeKind::path) {
            json cap = json::object();
            for (ClassId c = 0; c < n.capacity.size(); ++c)
                if (n.capacity[c] > 0) cap[reg[c].label] = n.capacity[c];
            paths.push_back({{"id", n.id},
                             {"x", n.position.x},
                             {"y", n.position.y},
                             {"class", reg[n.semantic_class].label},
                             {"capacity", cap},
                             {"segment_length_m", n.segment_length},
                             {"sidewalk_width_m", n.sidewalk_width}});
        } else {
            pois.push_back({{"id", n.id},
                            {"x", n.position.x},
                            {"y", n.position.y},
                            {"class", reg[n.semantic_class].label},
                            {"is_depot", n.is_depot}});
        }
    }
    doc["path_nodes"] = paths;
    doc["poi_nodes"] = pois;

    json edges = json::array();
    for (const auto& e : g.edges())
        edges.push_back(
            {{"kind", kind_name(e.kind)}, {"from", e.from}, {"to", e.to}, {"directed", e.directed}, {"length_m", e.length}});
    doc["edges"] = edges;
    return doc.dump(1) + "\n";
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write scenario file " + path.string());
    out << scenario_to_json(scenario);
    if (!out) throw ParseError("failed writing scenario file " + path.string());
}

namespace {

struct Reader {
    std::vector<std::string> errors;

    static std::string join(const std::string& path, const char* key)
    {
        return path.empty() ? std::string(key) : path + "." + key;
    }

    const json* field(const json& obj, const char* key, const std::string& path)
    {
        if (!obj.is_object() || !obj.contains(key)) {
            errors.push_back(join(path, key) + ": missing");
            return nullptr;
        }
        return &obj.at(key);
    }

    double number(const json& obj, const char* key, const std::string& path)
    {
        const json* v = field(obj, key, path);
        if (!v) return 0.0;
        if (!v->is_number()) {
            errors.push_back(join(path, key) + ": expected a number");
            return 0.0;
        }
        return v->get<double>();
    }

    std::uint32_t id(const json& obj, const char* key, const std::string& path)
    {
        const json* v = field(obj, key, path);
        if (!v) return kNoNode;
        if (!v->is_number_unsigned() || v->get<std::uint64_t>() >= kNoNode) {
            errors.push_back(join(path, key) + ": expected a node id");
            return kNoNode;
        }
        return v->get<std::uint32_t>();
    }

    std::string string(const json& obj, const char* key, const std::string& path)
    {
        const json* v = field(obj, key, path);
        if (!v) return {};
        if (!v->is_string()) {
            errors.push_back(join(path, key) + ": expected a string");
            return {};
        }
        return v->get<std::string>();
    }

    const json& array(const json& obj, const char* key, const std::string& path)
    {
        static const json empty = json::array();
        const json* v = field(obj, key, path);
        if (!v) return empty;
        if (!v->is_array()) {
            errors.push_back(join(path, key) + ": expected an array");
            return empty;
        }
        return *v;
    }
};

} // namespace

Scenario parse_scenario(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scenario: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("scenario: top level must be an object");

    Reader rd;
    Scenario s;
    s.name = doc.value("name", std::string("unnamed"));
    if (const json* c = rd.field(doc, "center", "")) {
        s.center.lon = rd.number(*c, "lon", "center");
        s.center.lat = rd.number(*c, "lat", "center");
    }
    s.radius = rd.number(doc, "radius_m", "");
    if (!(s.radius > 0.0)) rd.errors.push_back("radius_m: must be > 0");

    ClassRegistry reg;
    const auto& classes = rd.array(doc, "classes", "");
    for (std::size_t i = 0; i < classes.size(); ++i) {
        const std::string p = "classes[" + std::to_string(i) + "]";
        const auto label = rd.string(classes[i], "label", p);
        const auto kind = rd.string(classes[i], "kind", p);
        if (label.empty()) continue;
        if (kind != "place" && kind != "object") {
            rd.errors.push_back(p + ".kind: expected \"place\" or \"object\"");
            continue;
        }
        try {
            reg.add(label, kind == "place" ? ClassKind::place : ClassKind::object);
        } catch (const DuplicateId&) {
            rd.errors.push_back(p + ".label: duplicate class '" + label + "'");
        }
    }

    auto class_of = [&](const json& obj, const std::string& p) -> ClassId {
        const auto label = rd.string(obj, "class", p);
        if (label.empty()) return 0;
        auto id = reg.find(label);
        if (!id) {
            rd.errors.push_back(p + ".class: class '" + label + "' is not declared");
            return 0;
        }
        return *id;
    };

    auto check_radius = [&](Point2 pos, const std::string& p) {
        if (std::abs(pos.x) + std::abs(pos.y) > s.radius + kRadiusSlack)
            rd.errors.push_back(p + ": position lies outside the L1 radius of the center");
    };

    std::vector<PathNode> paths;
    const auto& pn = rd.array(doc, "path_nodes", "");
    for (std::size_t i = 0; i < pn.size(); ++i) {
        const std::string p = "path_nodes[" + std::to_string(i) + "]";
        PathNode n;
        n.id = rd.id(pn[i], "id", p);
        n.position = {rd.number(pn[i], "x", p), rd.number(pn[i], "y", p)};
        n.semantic_class = class_of(pn[i], p);
        n.segment_length = rd.number(pn[i], "segment_length_m", p);
        n.sidewalk_width = rd.number(pn[i], "sidewalk_width_m", p);
        n.capacity.assign(reg.size(), 0);
        if (const json* cap = rd.field(pn[i], "capacity", p)) {
            if (!cap->is_object()) rd.errors.push_back(p + ".capacity: expected an object");
            else
                for (const auto& [label, v] : cap->items()) {
                    auto c = reg.find(label);
                    if (!c) {
                        rd.errors.push_back(p + ".capacity." + label + ": class is not declared");
                        continue;
                    }
                    if (!v.is_number_unsigned() || v.get<std::uint64_t>() > 0xffff) {
                        rd.errors.push_back(p + ".capacity." + label + ": expected a slot count");
                        continue;
                    }
                    n.capacity[*c] = v.get<std::uint16_t>();
                }
        }
        check_radius(n.position, p);
        paths.push_back(std::move(n));
    }

    std::vector<PoiNode> pois;
    const auto& po = rd.array(doc, "poi_nodes", "");
    for (std::size_t i = 0; i < po.size(); ++i) {
        const std::string p = "poi_nodes[" + std::to_string(i) + "]";
        PoiNode n;
        n.id = rd.id(po[i], "id", p);
        n.position = {rd.number(po[i], "x", p), rd.number(po[i], "y", p)};
        n.semantic_class = class_of(po[i], p);
        n.is_depot = po[i].value("is_depot", false);
        check_radius(n.position, p);
        pois.push_back(n);
    }

    std::vector<Edge> edges;
    const auto& ed = rd.array(doc, "edges", "");
    for (std::size_t i = 0; i < ed.size(); ++i) {
        const std::string p = "edges[" + std::to_string(i) + "]";
        Edge e;
        const auto kind = rd.string(ed[i], "kind", p);
        if (kind == "adjacency") e.kind = EdgeKind::adjacency;
        else if (kind == "access") e.kind = EdgeKind::access;
        else if (kind == "attachment") e.kind = EdgeKind::attachment;
        else if (!kind.empty()) rd.errors.push_back(p + ".kind: unknown edge kind '" + kind + "'");
        e.from = rd.id(ed[i], "from", p);
        e.to = rd.id(ed[i], "to", p);
        e.directed = ed[i].value("directed", false);
        e.length = rd.number(ed[i], "length_m", p);
        edges.push_back(e);
    }

    if (!rd.errors.empty()) throw ValidationError(std::move(rd.errors));
    s.graph = std::make_shared<const StaticGraph>(std::move(reg), std::move(paths), std::move(pois), std::move(edges));
    return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open scenario file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

} // namespace dsg
