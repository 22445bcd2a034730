#pragma once

#include <limits>
#include <string>
#include <vector>

#include "locons/expr.hpp"
#include "locons/geometry.hpp"

namespace locons {

/// Guard radius around singular points for field evaluation.
inline constexpr double kFieldMinRadius = 1e-9;

/// A planar force 1-form f = fx dx + fy dy, undefined at its singular points.
struct FieldOneForm {
    std::string name;
    expr::Expr fx;
    expr::Expr fy;
    std::vector<Vec2> singular_points;
    double r_min = kFieldMinRadius;

    /// (fx, fy) at q. Throws SingularityError within r_min of a singular
    /// point, DomainError if an expression leaves its domain.
    Vec2 operator()(Vec2 q) const;

    /// Distance from q to the nearest singular point (infinity if none).
    double clearance(Vec2 q) const;
};

/// Builds a field from component sources over x, y.
FieldOneForm make_field(std::string name, std::string_view fx, std::string_view fy,
                        std::vector<Vec2> singular_points = {});

/// Built-in fields: "vortex" (-y dx + x dy)/(x^2+y^2), "exact" 2x dx + 2y dy,
/// "xdy" x dy (not closed), "zero".
FieldOneForm builtin_field(std::string_view name);
std::vector<std::string> builtin_field_names();

FieldOneForm vortex_field();

}  // namespace locons
