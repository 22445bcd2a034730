#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "locons/atlas.hpp"
#include "locons/dynamics.hpp"
#include "locons/field.hpp"

namespace locons::cli {

/// Everything a scenario needs: field, atlas, gauges, the simulation block
/// and output paths. Loaded from one JSON document; flags override it.
struct ScenarioConfig {
    FieldOneForm field = vortex_field();
    Atlas atlas = quadrant_atlas();
    std::vector<double> gauges;
    SimConfig sim;
    std::string out;
    std::string svg;
};

/// Validates and converts a JSON scenario. Unknown keys are rejected with
/// ValidationError; malformed values likewise.
ScenarioConfig parse_scenario(const nlohmann::json& doc);
/// Reads and parses a scenario file (ParseError on invalid JSON).
ScenarioConfig load_scenario(const std::string& path);

/// "vortex" / "exact" / "xdy" / "zero", or "fx,fy" over x, y. Singular
/// points are "x,y;x,y;..." (empty for none).
FieldOneForm field_from_flag(std::string_view spec, std::string_view singular = {});
std::vector<Vec2> parse_point_list(std::string_view text);
/// Chart list: [{"id", "label", "constraints": [[a,b,c],...], "excluded":
/// [[x,y],...], "basepoint": [x,y]}, ...] or the string "quadrant".
Atlas atlas_from_json(const nlohmann::json& j);
nlohmann::json atlas_to_json(const Atlas& atlas);
std::vector<double> parse_number_list(std::string_view text);
std::vector<int> parse_int_list(std::string_view text);

}  // namespace locons::cli
