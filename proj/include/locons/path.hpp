#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "locons/expr.hpp"
#include "locons/geometry.hpp"

namespace locons {

/// Tolerance under which start and end of a path count as the same point.
inline constexpr double kClosedTolerance = 1e-12;

/// Piecewise planar path: a chain of polylines and parametric arcs, each
/// piece starting where the previous one ends.
class PlanarPath {
public:
    struct Polyline {
        std::vector<Vec2> vertices;
    };
    struct Parametric {
        std::function<Vec2(double)> point;
        double t0 = 0.0;
        double t1 = 1.0;
        int samples = 2000;
    };
    using Piece = std::variant<Polyline, Parametric>;

    static PlanarPath polyline(std::vector<Vec2> vertices);
    static PlanarPath parametric(std::function<Vec2(double)> point, double t0, double t1, int samples);
    static PlanarPath from_exprs(const expr::Expr& x_of_t, const expr::Expr& y_of_t, double t0,
                                 double t1, int samples);
    /// Circle starting at center + (r, 0); negative turns run clockwise.
    static PlanarPath circle(Vec2 center, double radius, double turns, int samples = 2000);

    /// Traverses the same trace backwards.
    PlanarPath reversed() const;
    /// This path followed by `next`; the joint must match within 1e-9.
    PlanarPath then(const PlanarPath& next) const;

    Vec2 start() const;
    Vec2 end() const;
    bool closed() const { return distance(start(), end()) <= kClosedTolerance; }

    /// Polyline vertices and parametric sample points, joints not repeated.
    std::vector<Vec2> samples() const;
    const std::vector<Piece>& pieces() const noexcept { return pieces_; }

private:
    std::vector<Piece> pieces_;
};

/// Parses "circle:cx,cy,r,turns[,N]", "poly:x1,y1;x2,y2;..." or
/// "param:xexpr,yexpr,t0,t1,N" (expressions over t). Numbers may be
/// constant expressions such as 2*pi.
PlanarPath parse_path_spec(std::string_view spec);

/// Splits text at commas that are not inside parentheses.
std::vector<std::string> split_top_level(std::string_view text, char sep);

/// Parses "x,y" into a point (each coordinate a constant expression).
Vec2 parse_point(std::string_view text);

/// Continuous change of the angle of (point - center) along the path. Each
/// step between consecutive samples is refined by bisection until the
/// principal increment is below pi/2; throws NumericError when `max_depth`
/// bisections do not suffice (path through the center or too coarse).
double accumulated_angle(const PlanarPath& path, Vec2 center, int max_depth = 40);

}  // namespace locons
