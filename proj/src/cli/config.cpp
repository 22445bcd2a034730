#include "locons/cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "locons/errors.hpp"
#include "locons/expr.hpp"
#include "locons/path.hpp"

namespace locons::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ValidationError(where + ": expected an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) throw ValidationError(where + ": unknown key '" + key + "'");
}

double number(const json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return expr::parse_constant(j.get<std::string>());
    throw ValidationError(where + ": expected a number");
}

Vec2 point(const json& j, const std::string& where) {
    if (j.is_string()) return parse_point(j.get<std::string>());
    if (!j.is_array() || j.size() != 2) throw ValidationError(where + ": expected [x, y]");
    return {number(j[0], where), number(j[1], where)};
}

Chart chart_from_json(const json& j, std::size_t index) {
    const std::string where = "atlas.charts[" + std::to_string(index) + "]";
    reject_unknown(j, {"id", "label", "constraints", "excluded", "basepoint"}, where);
    Chart c;
    if (!j.contains("id") || !j["id"].is_number_integer()) throw ValidationError(where + ": integer 'id' required");
    c.id = j["id"].get<int>();
    if (j.contains("label")) c.label = j["label"].get<std::string>();
    if (!j.contains("constraints") || !j["constraints"].is_array())
        throw ValidationError(where + ": 'constraints' list required");
    for (const json& hp : j["constraints"]) {
        if (!hp.is_array() || hp.size() != 3) throw ValidationError(where + ": constraint must be [a, b, c]");
        c.constraints.push_back({number(hp[0], where), number(hp[1], where), number(hp[2], where)});
    }
    if (j.contains("excluded"))
        for (const json& p : j["excluded"]) c.excluded.push_back(point(p, where + ".excluded"));
    if (!j.contains("basepoint")) throw ValidationError(where + ": 'basepoint' required");
    c.basepoint = point(j["basepoint"], where + ".basepoint");
    return c;
}

FieldOneForm field_from_json(const json& j) {
    if (j.is_string()) return builtin_field(j.get<std::string>());
    reject_unknown(j, {"name", "fx", "fy", "singular_points"}, "field");
    if (!j.contains("fx") || !j.contains("fy")) throw ValidationError("field: 'fx' and 'fy' required");
    std::vector<Vec2> sing;
    if (j.contains("singular_points"))
        for (const json& p : j["singular_points"]) sing.push_back(point(p, "field.singular_points"));
    return make_field(j.value("name", std::string("custom")), j["fx"].get<std::string>(),
                      j["fy"].get<std::string>(), std::move(sing));
}

}  // namespace

std::vector<double> parse_number_list(std::string_view text) {
    std::vector<double> out;
    for (const std::string& part : split_top_level(text, ',')) out.push_back(expr::parse_constant(part));
    return out;
}

std::vector<int> parse_int_list(std::string_view text) {
    std::vector<int> out;
    for (const std::string& part : split_top_level(text, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(part, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (part.empty() || used != part.size()) throw ParseError(0, "expected an integer, got '" + part + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<Vec2> parse_point_list(std::string_view text) {
    std::vector<Vec2> out;
    if (text.find_first_not_of(" \t") == std::string_view::npos) return out;
    for (const std::string& part : split_top_level(text, ';')) out.push_back(parse_point(part));
    return out;
}

FieldOneForm field_from_flag(std::string_view spec, std::string_view singular) {
    auto parts = split_top_level(spec, ',');
    if (parts.size() == 1) {
        FieldOneForm f = builtin_field(parts[0]);
        if (!singular.empty()) f.singular_points = parse_point_list(singular);
        return f;
    }
    if (parts.size() != 2) throw ValidationError("field must be a built-in name or 'fx,fy'");
    return make_field("custom", parts[0], parts[1], parse_point_list(singular));
}

Atlas atlas_from_json(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() != "quadrant") throw ValidationError("unknown atlas '" + j.get<std::string>() + "'");
        return quadrant_atlas();
    }
    reject_unknown(j, {"charts", "window"}, "atlas");
    if (!j.contains("charts") || !j["charts"].is_array()) throw ValidationError("atlas: 'charts' list required");
    std::vector<Chart> charts;
    for (std::size_t i = 0; i < j["charts"].size(); ++i) charts.push_back(chart_from_json(j["charts"][i], i));
    SamplingWindow w;
    if (j.contains("window")) {
        reject_unknown(j["window"], {"radius", "margin"}, "atlas.window");
        if (j["window"].contains("radius")) w.radius = number(j["window"]["radius"], "atlas.window.radius");
        if (j["window"].contains("margin")) w.margin = number(j["window"]["margin"], "atlas.window.margin");
    }
    return Atlas(std::move(charts), w);
}

json atlas_to_json(const Atlas& atlas) {
    json charts = json::array();
    for (const Chart& c : atlas.charts()) {
        json hp = json::array();
        for (const HalfPlane& h : c.constraints) hp.push_back({h.a, h.b, h.c});
        json ex = json::array();
        for (Vec2 p : c.excluded) ex.push_back({p.x, p.y});
        charts.push_back({{"id", c.id},
                          {"label", c.label},
                          {"constraints", hp},
                          {"excluded", ex},
                          {"basepoint", {c.basepoint.x, c.basepoint.y}}});
    }
    return {{"charts", charts}, {"window", {{"radius", atlas.window().radius}, {"margin", atlas.window().margin}}}};
}

ScenarioConfig parse_scenario(const json& doc) {
    reject_unknown(doc, {"field", "atlas", "gauges", "simulation", "outputs"}, "config");
    ScenarioConfig cfg;
    if (doc.contains("field")) cfg.field = field_from_json(doc["field"]);
    if (doc.contains("atlas")) cfg.atlas = atlas_from_json(doc["atlas"]);
    if (doc.contains("gauges")) {
        if (!doc["gauges"].is_array()) throw ValidationError("gauges: expected a list");
        for (const json& g : doc["gauges"]) cfg.gauges.push_back(number(g, "gauges"));
    }
    if (doc.contains("simulation")) {
        const json& s = doc["simulation"];
        reject_unknown(s, {"m", "q0", "p0", "h", "T", "r_min", "integrator", "log_every"}, "simulation");
        if (s.contains("m")) cfg.sim.mass = number(s["m"], "simulation.m");
        if (s.contains("q0")) cfg.sim.q0 = point(s["q0"], "simulation.q0");
        if (s.contains("p0")) cfg.sim.p0 = point(s["p0"], "simulation.p0");
        if (s.contains("h")) cfg.sim.h = number(s["h"], "simulation.h");
        if (s.contains("T")) cfg.sim.T = number(s["T"], "simulation.T");
        if (s.contains("r_min")) cfg.sim.r_min = number(s["r_min"], "simulation.r_min");
        if (s.contains("integrator")) cfg.sim.integrator = parse_integrator(s["integrator"].get<std::string>());
        if (s.contains("log_every")) cfg.sim.log_every = s["log_every"].get<int>();
    }
    if (doc.contains("outputs")) {
        const json& o = doc["outputs"];
        reject_unknown(o, {"out", "svg"}, "outputs");
        if (o.contains("out")) cfg.out = o["out"].get<std::string>();
        if (o.contains("svg")) cfg.svg = o["svg"].get<std::string>();
    }
    cfg.sim.atlas = cfg.atlas;
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    json doc;
    try {
        doc = json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw ParseError(e.byte, std::string("config ") + path + ": " + e.what());
    }
    return parse_scenario(doc);
}

}  // namespace locons::cli
