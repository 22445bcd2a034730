#include "locons/cover.hpp"

#include <cmath>

#include "locons/errors.hpp"

namespace locons {

namespace {

// Arg in (-pi, pi]; atan2 returns -pi for y == -0.0.
double principal_arg(double x, double y) {
    double a = std::atan2(y, x);
    return a == -kPi ? kPi : a;
}

}  // namespace

Vec2 LiftState::base() const {
    double r = std::exp(u);
    return {r * std::cos(v), r * std::sin(v)};
}

LiftState lift_point(double t, Vec2 q, double v, Vec2 center) {
    double r = distance(q, center);
    if (r == 0.0) throw NumericError("cannot lift the center point");
    return {t, std::log(r), v};
}

std::vector<LiftState> lift_trajectory(const Trajectory& tr, long initial_sheet) {
    std::vector<LiftState> out;
    if (tr.centers.empty()) return out;
    out.reserve(tr.states.size());
    const double shift = kTwoPi * static_cast<double>(initial_sheet);
    for (const SimState& s : tr.states)
        out.push_back(lift_point(s.t, s.q, s.theta_acc.front() + shift, tr.centers.front()));
    return out;
}

CoverEnergy cover_energy(const Trajectory& tr, const std::vector<LiftState>& lift, double mass) {
    if (lift.size() != tr.states.size()) throw ValidationError("lift does not match trajectory length");
    CoverEnergy ce;
    ce.series.reserve(lift.size());
    for (std::size_t k = 0; k < lift.size(); ++k) {
        const Vec2 p = tr.states[k].p;
        double e = 0.5 * dot(p, p) / mass + cover_potential(lift[k]);
        ce.series.push_back(e);
        ce.max_drift = std::max(ce.max_drift, std::abs(e - ce.series.front()));
    }
    return ce;
}

long sheet_of(const LiftState& s) {
    if (!std::isfinite(s.v)) throw NumericError("sheet index of a non-finite angle");
    // v in (-pi + 2 pi n, pi + 2 pi n]; a hair of slack keeps v = pi + ulp on sheet 0
    return static_cast<long>(std::ceil((s.v - kPi) / kTwoPi - 1e-12));
}

std::complex<double> LogGerm::value() const {
    return {std::log(std::abs(anchor)), principal_arg(anchor.real(), anchor.imag()) + kTwoPi * static_cast<double>(sheet)};
}

LogGerm continue_log(const LogGerm& g, const PlanarPath& path) {
    if (g.anchor == 0.0) throw ValidationError("log germ anchored at 0");
    Vec2 a{g.anchor.real(), g.anchor.imag()};
    if (distance(path.start(), a) > 1e-9) throw ValidationError("path does not start at the germ anchor");
    double turn = accumulated_angle(path, {0.0, 0.0});
    Vec2 e = path.end();
    LogGerm out;
    out.anchor = {e.x, e.y};
    double im = principal_arg(g.anchor.real(), g.anchor.imag()) + kTwoPi * static_cast<double>(g.sheet) + turn;
    double k = (im - principal_arg(e.x, e.y)) / kTwoPi;
    double n = std::round(k);
    if (std::abs(k - n) > 1e-6) throw NumericError("continued log lost its sheet (residual " +
                                                   expr::format_double(k - n) + ")");
    out.sheet = static_cast<long>(n);
    return out;
}

std::complex<double> monodromy_log(long n_loops) { return {0.0, kTwoPi * static_cast<double>(n_loops)}; }

}  // namespace locons
