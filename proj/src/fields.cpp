#include "locons/fields.hpp"

#include <algorithm>
#include <cmath>

#include "locons/errors.hpp"

namespace locons {

double distance_to_rect(Vec2 p, const Rect& r) {
    const double dx = std::max({r.x0 - p.x, 0.0, p.x - r.x1});
    const double dy = std::max({r.y0 - p.y, 0.0, p.y - r.y1});
    return std::hypot(dx, dy);
}

ClosednessReport is_closed(const FieldOneForm& f, const Rect& region, int grid, double h, double tol) {
    if (grid < 2) throw ValidationError("closedness grid must be at least 2");
    if (!(h > 0.0)) throw ValidationError("finite-difference step must be positive");
    if (!(region.x1 >= region.x0 && region.y1 >= region.y0)) throw ValidationError("empty region");
    for (const Vec2& s : f.singular_points) {
        if (distance_to_rect(s, region) < 10.0 * h)
            throw SingularityError("region comes within 10*h of singular point (" + expr::format_double(s.x) +
                                   ", " + expr::format_double(s.y) + ")");
    }

    ClosednessReport rep;
    rep.grid = grid;
    rep.h = h;
    rep.tol = tol;
    for (int i = 0; i < grid; ++i) {
        const double x = region.x0 + (region.x1 - region.x0) * i / (grid - 1);
        for (int j = 0; j < grid; ++j) {
            const double y = region.y0 + (region.y1 - region.y0) * j / (grid - 1);
            const double dfx_dy = (f({x, y + h}).x - f({x, y - h}).x) / (2.0 * h);
            const double dfy_dx = (f({x + h, y}).y - f({x - h, y}).y) / (2.0 * h);
            const double r = std::fabs(dfx_dy - dfy_dx);
            if (r > rep.max_residual || (i == 0 && j == 0)) {
                rep.max_residual = r;
                rep.worst_point = {x, y};
            }
        }
    }
    rep.closed = rep.max_residual < tol;
    return rep;
}

namespace {

double polyline_work(const FieldOneForm& f, const std::vector<Vec2>& v, const Quadrature& quad) {
    double total_len = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) total_len += distance(v[i], v[i + 1]);

    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const Vec2 a = v[i];
        const Vec2 d = v[i + 1] - a;
        for (const Vec2& s : f.singular_points) {
            if (distance_to_segment(s, a, v[i + 1]) < f.r_min)
                throw SingularityError("path segment passes within r_min of a singular point");
        }
        const double len = norm(d);
        if (len == 0.0) continue;
        Quadrature q = quad;
        q.segments = std::max(1, static_cast<int>(std::lround(quad.segments * len / total_len)));
        sum += integrate([&](double s) { return dot(f(a + s * d), d); }, 0.0, 1.0, q);
    }
    return sum;
}

// Fourth-order central difference for the path tangent.
Vec2 tangent(const std::function<Vec2(double)>& c, double t, double delta) {
    const Vec2 d = (1.0 / 12.0) * (c(t - 2 * delta) - c(t + 2 * delta)) +
                   (8.0 / 12.0) * (c(t + delta) - c(t - delta));
    return (1.0 / delta) * d;
}

}  // namespace

double work(const FieldOneForm& f, const PlanarPath& c, const Quadrature& quad) {
    double sum = 0.0;
    for (const auto& piece : c.pieces()) {
        if (const auto* poly = std::get_if<PlanarPath::Polyline>(&piece)) {
            sum += polyline_work(f, poly->vertices, quad);
        } else {
            const auto& par = std::get<PlanarPath::Parametric>(piece);
            const double delta = 1e-4 * std::fabs(par.t1 - par.t0);
            Quadrature q = quad;
            q.segments = par.samples;
            sum += integrate([&](double t) { return dot(f(par.point(t)), tangent(par.point, t, delta)); },
                             par.t0, par.t1, q);
        }
        if (!std::isfinite(sum)) throw NumericError("work integral is not finite");
    }
    return sum;
}

WindingNumber winding_number(const PlanarPath& c, Vec2 q) {
    if (!c.closed()) throw ValidationError("winding number needs a closed path");
    WindingNumber w;
    w.total_angle = accumulated_angle(c, q);
    w.n = static_cast<int>(std::lround(w.total_angle / kTwoPi));
    w.residual = std::fabs(w.total_angle - kTwoPi * w.n);
    return w;
}

}  // namespace locons
