#include "locons/field.hpp"

#include <algorithm>

#include "locons/errors.hpp"

namespace locons {

Vec2 FieldOneForm::operator()(Vec2 q) const {
    for (const Vec2& s : singular_points) {
        if (distance(q, s) < r_min)
            throw SingularityError("field '" + name + "' evaluated within " +
                                   expr::format_double(r_min) + " of singular point (" +
                                   expr::format_double(s.x) + ", " + expr::format_double(s.y) + ")");
    }
    return {fx(q.x, q.y), fy(q.x, q.y)};
}

double FieldOneForm::clearance(Vec2 q) const {
    double d = std::numeric_limits<double>::infinity();
    for (const Vec2& s : singular_points) d = std::min(d, distance(q, s));
    return d;
}

FieldOneForm make_field(std::string name, std::string_view fx, std::string_view fy,
                        std::vector<Vec2> singular_points) {
    FieldOneForm f;
    f.name = std::move(name);
    f.fx = expr::parse(fx);
    f.fy = expr::parse(fy);
    f.singular_points = std::move(singular_points);
    return f;
}

FieldOneForm vortex_field() {
    return make_field("vortex", "-y/(x^2+y^2)", "x/(x^2+y^2)", {{0.0, 0.0}});
}

FieldOneForm builtin_field(std::string_view name) {
    if (name == "vortex") return vortex_field();
    if (name == "exact") return make_field("exact", "2*x", "2*y");
    if (name == "xdy") return make_field("xdy", "0", "x");
    if (name == "zero") return make_field("zero", "0", "0");
    throw ValidationError("unknown built-in field '" + std::string(name) + "'");
}

std::vector<std::string> builtin_field_names() { return {"vortex", "exact", "xdy", "zero"}; }

}  // namespace locons
