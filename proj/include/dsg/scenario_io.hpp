#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "dsg/geometry.hpp"
#include "dsg/graph.hpp"

namespace dsg {

/// A loaded scenario: the static graph plus the geographic frame it was cut
/// from. Positions in the graph are meters relative to `center`.
struct Scenario {
    std::string name;
    LonLat center;
    double radius = 0.0; // L1 radius, meters
    std::shared_ptr<const StaticGraph> graph;
};

/// JSON scenario format. Keys are written in sorted order and doubles with
/// round-trip precision, so equal scenarios serialize to equal bytes.
std::string scenario_to_json(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

/// Throws ParseError on malformed JSON and ValidationError listing every
/// field-level and structural violation.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

} // namespace dsg
