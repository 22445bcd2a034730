#pragma once

#include <complex>
#include <vector>

#include "locons/dynamics.hpp"
#include "locons/path.hpp"

namespace locons {

/// Point of the universal cover C -> C* (z -> exp z): u = log r and the
/// continuous angle v.
struct LiftState {
    double t = 0.0;
    double u = 0.0;
    double v = 0.0;
    std::complex<double> z() const { return {u, v}; }
    /// Projection exp(u + iv) back to the plane (relative to the center).
    Vec2 base() const;
};

/// Lift of q about `center` given its accumulated angle.
LiftState lift_point(double t, Vec2 q, double v, Vec2 center = {});

/// Lifts every logged state about the trajectory's first center. The
/// initial sheet shifts v by 2 pi * initial_sheet.
std::vector<LiftState> lift_trajectory(const Trajectory& tr, long initial_sheet = 0);

/// Global potential on the cover, -v.
inline double cover_potential(const LiftState& s) { return -s.v; }

struct CoverEnergy {
    std::vector<double> series;  // T(t) - v(t)
    double max_drift = 0.0;      // max |E(t) - E(0)|
};

CoverEnergy cover_energy(const Trajectory& tr, const std::vector<LiftState>& lift, double mass);

/// Sheet n with v in (-pi + 2 pi n, pi + 2 pi n], matching Arg in (-pi, pi].
long sheet_of(const LiftState& s);

/// Germ of the logarithm at `anchor` on sheet n:
/// log|z| + i (Arg z + 2 pi n), Arg in (-pi, pi].
struct LogGerm {
    std::complex<double> anchor{1.0, 0.0};
    long sheet = 0;
    std::complex<double> value() const;
    friend bool operator==(const LogGerm&, const LogGerm&) = default;
};

/// Analytic continuation along a path starting at the anchor (within 1e-9).
/// Throws ValidationError on a wrong start, NumericError if the path passes
/// through 0 or cannot be refined enough.
LogGerm continue_log(const LogGerm& g, const PlanarPath& path);

/// Change of the log value after n counter-clockwise loops, 2 pi i n.
std::complex<double> monodromy_log(long n_loops);

}  // namespace locons
