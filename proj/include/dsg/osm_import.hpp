#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dsg/scenario_io.hpp"

namespace dsg {

/// One row of the tag table: an element whose `key` tag takes one of
/// `values` (any value if empty) becomes a PoI of `place_class`.
struct TagRule {
    std::string key;
    std::vector<std::string> values;
    std::string place_class;
};

/// Ordered tag table; the first matching rule wins.
struct TagMapping {
    std::vector<TagRule> poi_rules;
    /// `highway` values accepted as pedestrian ways.
    std::vector<std::string> pedestrian_highways;
    /// A way of any other highway type is accepted if it carries a `sidewalk`
    /// tag other than these values.
    std::vector<std::string> sidewalk_absent_values;

    static TagMapping defaults();
    /// Reads {"poi_rules":[{"key","values","class"}], "pedestrian_highways":[...],
    /// "sidewalk_absent_values":[...]}; absent keys keep their defaults.
    static TagMapping from_json(const std::string& text);
};

struct ImportParams {
    std::string name = "imported";
    LonLat center;
    double radius = 1000.0;            // L1, meters
    double max_segment = 25.0;         // meters
    double sidewalk_width = 2.0;       // b_s, meters
    double max_access_distance = 150.0; // PoIs farther from every path node are dropped
    /// Slots per sidewalk node by object class label. Placeholder values.
    std::map<std::string, std::uint16_t> capacities{{"car", 2}, {"bicycle", 4}, {"trashcan", 1}};
    TagMapping tags = TagMapping::defaults();
};

/// OSM XML extract to scenario. Throws MalformedXml, EmptyNetwork, or
/// NoDepotCandidate.
Scenario import_osm(const std::string& xml, const ImportParams& params);
Scenario import_osm_file(const std::filesystem::path& path, const ImportParams& params);

} // namespace dsg
