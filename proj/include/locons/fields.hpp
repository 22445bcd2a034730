#pragma once

#include "locons/field.hpp"
#include "locons/path.hpp"
#include "locons/quadrature.hpp"

namespace locons {

struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
};

/// Distance from p to the closed rectangle (zero inside).
double distance_to_rect(Vec2 p, const Rect& r);

struct ClosednessReport {
    double max_residual = 0.0;  // max |dfx/dy - dfy/dx| over the grid
    Vec2 worst_point;
    int grid = 0;
    double h = 0.0;
    double tol = 0.0;
    bool closed = false;
};

/// Central-difference curl residual of f on a grid x grid lattice covering
/// `region`. The region must stay 10*h away from every singular point.
ClosednessReport is_closed(const FieldOneForm& f, const Rect& region, int grid = 20, double h = 1e-5,
                           double tol = 1e-5);

/// Line integral of f along c. Parametric pieces use their own sample count
/// as the number of panels; polylines share `quad.segments` panels among
/// their edges in proportion to edge length (at least one per edge).
double work(const FieldOneForm& f, const PlanarPath& c, const Quadrature& quad = Quadrature::simpson());

struct WindingNumber {
    int n = 0;
    double residual = 0.0;      // |total - 2 pi n|
    double total_angle = 0.0;
};

/// Winding number of a closed path about q by angle unwrapping.
WindingNumber winding_number(const PlanarPath& c, Vec2 q);

}  // namespace locons
