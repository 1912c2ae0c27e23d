#pragma once

#include <map>
#include <string>

#include "dsg/scenario_io.hpp"

namespace dsg {

/// Rectangular sidewalk lattice centered on the origin, with PoIs offset from
/// a random subset of lattice nodes. The PoI nearest the center is the depot.
struct GridParams {
    std::string name = "grid";
    std::uint32_t rows = 10;
    std::uint32_t cols = 10;
    double spacing = 20.0;        // meters between neighboring nodes
    double sidewalk_width = 2.0;  // b_s
    double poi_probability = 0.3; // chance that a lattice node gets a PoI
    double poi_offset = 5.0;      // PoI distance from its access node
    std::map<std::string, std::uint16_t> capacities{{"car", 2}, {"bicycle", 4}, {"trashcan", 1}};
    /// Relative weights of the PoI place classes.
    std::map<std::string, double> poi_mix{{"housing", 0.5}, {"work", 0.15}, {"retail", 0.15},
                                          {"leisure", 0.1}, {"education", 0.1}};
    std::uint64_t seed = 1;
};

Scenario make_grid_scenario(const GridParams& params);

} // namespace dsg
