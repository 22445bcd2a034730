#include "doctest.h"

#include <cmath>
#include <random>

#include "locons/cover.hpp"
#include "locons/errors.hpp"
#include "locons/fields.hpp"

using namespace locons;

namespace {

PotentialSet vortex_potentials() { return build_potentials(vortex_field(), quadrant_atlas()); }

SimConfig run(Vec2 q0, Vec2 p0, double h = 1e-3, double T = 5.0) {
    SimConfig cfg;
    cfg.q0 = q0;
    cfg.p0 = p0;
    cfg.h = h;
    cfg.T = T;
    return cfg;
}

// net signed crossings of the negative real axis, +1 going from y > 0 to y < 0
long cut_crossings(const std::vector<Vec2>& pts) {
    long n = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        Vec2 a = pts[i - 1], b = pts[i];
        if ((a.y >= 0) == (b.y >= 0)) continue;
        double x = a.x + (b.x - a.x) * (0.0 - a.y) / (b.y - a.y);
        if (x < 0) n += (a.y >= 0) ? 1 : -1;
    }
    return n;
}

}  // namespace

TEST_CASE("lift of single points") {
    LiftState s = lift_point(0.0, {1, 0}, 0.0);
    CHECK(s.u == 0.0);
    CHECK(s.v == 0.0);
    CHECK(sheet_of(s) == 0);
    LiftState w = lift_point(0.0, {-1, 0}, -3 * M_PI);
    CHECK(sheet_of(w) == -2);
    CHECK(sheet_of(lift_point(0.0, {-1, 0}, M_PI)) == 0);
    CHECK(sheet_of(lift_point(0.0, {0, 2}, M_PI / 2 + 2 * M_PI)) == 1);
    CHECK(sheet_of(lift_point(0.0, {1, 0}, -M_PI + 1e-9)) == 0);
    CHECK_THROWS_AS(sheet_of(LiftState{0, 0, NAN}), NumericError);

    LiftState c = lift_point(1.0, {3, 4}, std::atan2(4.0, 3.0), {1, 1});
    CHECK(std::abs(c.u - std::log(std::hypot(2.0, 3.0))) < 1e-15);
    CHECK(cover_potential(c) == -c.v);
}

TEST_CASE("lifted trajectories project back and track the sheets") {
    PotentialSet ps = vortex_potentials();
    Trajectory tr = simulate(run({1, 0}, {0, 1}), ps);
    auto lift = lift_trajectory(tr);
    REQUIRE(lift.size() == tr.states.size());
    double reproj = 0.0;
    for (std::size_t i = 0; i < lift.size(); ++i) {
        reproj = std::max(reproj, distance(lift[i].base(), tr.states[i].q));
        CHECK(lift[i].t == tr.states[i].t);
    }
    CHECK(reproj < 1e-9);
    CHECK(lift.front().v == 0.0);

    auto shifted = lift_trajectory(tr, 3);
    CHECK(std::abs(shifted.back().v - lift.back().v - 6 * M_PI) < 1e-12);
    CHECK(sheet_of(shifted.front()) == 3);

    struct Case {
        Vec2 q0, p0;
    };
    for (Case c : {Case{{1, 0}, {0, 1}}, Case{{-1, 0.5}, {0, -1}}, Case{{-1, -0.5}, {0, 1}}, Case{{0.3, -2}, {-1, 1}}}) {
        Trajectory t = simulate(run(c.q0, c.p0), ps);
        REQUIRE(t.status == SimStatus::Completed);
        auto l = lift_trajectory(t);
        std::vector<Vec2> pts;
        for (const SimState& s : t.states) pts.push_back(s.q);
        long start_sheet = sheet_of(l.front());
        CHECK(sheet_of(l.back()) - start_sheet == cut_crossings(pts));
    }
}

TEST_CASE("closed loops move the lift by one sheet per turn") {
    for (int n : {-2, -1, 1, 3}) {
        PlanarPath loop = PlanarPath::circle({0, 0}, 1.5, n, 4000);
        double dv = accumulated_angle(loop, {0, 0});
        LiftState a = lift_point(0, loop.start(), 0.0), b = lift_point(1, loop.end(), dv);
        CHECK(std::abs(b.v - a.v - 2 * M_PI * n) < 1e-9);
        CHECK(sheet_of(b) - sheet_of(a) == winding_number(loop, {0, 0}).n);
        CHECK(std::abs(cover_potential(b) - cover_potential(a) + 2 * M_PI * n) < 1e-9);
    }
}

TEST_CASE("cover energy is conserved to second order") {
    PotentialSet ps = vortex_potentials();
    auto drift = [&](double h) {
        Trajectory t = simulate(run({1, 0}, {0, 1}, h), ps);
        return cover_energy(t, lift_trajectory(t), 1.0).max_drift;
    };
    double d1 = drift(1e-3), d2 = drift(5e-4);
    CHECK(d1 < 1e-4);
    CHECK(d1 / d2 >= 3.0);
    CHECK(d1 / d2 <= 5.0);

    Trajectory t = simulate(run({1, 0}, {0, 1}), ps);
    CoverEnergy ce = cover_energy(t, lift_trajectory(t), 1.0);
    REQUIRE(ce.series.size() == t.states.size());
    CHECK(ce.series.front() == 0.5);
    CHECK_THROWS_AS(cover_energy(t, {}, 1.0), ValidationError);
}

TEST_CASE("continuation of the logarithm") {
    LogGerm g{{1, 0}, 0};
    CHECK(g.value() == std::complex<double>(0, 0));
    CHECK(continue_log(g, PlanarPath::polyline({{1, 0}, {1, 0}})) == g);

    LogGerm once = continue_log(g, PlanarPath::circle({0, 0}, 1, 1));
    CHECK(once.sheet == 1);
    CHECK(std::abs(once.value() - g.value() - monodromy_log(1)) < 1e-12);

    LogGerm back = continue_log(g, PlanarPath::circle({0, 0}, 1, -3));
    CHECK(back.sheet == -3);
    CHECK(std::abs(back.value() - std::complex<double>(0, -6 * M_PI)) < 1e-8);

    PlanarPath out = PlanarPath::polyline({{1, 0}, {0, 2}, {-3, 0.5}, {-1, -1}});
    LogGerm there = continue_log(g, out);
    CHECK(there.anchor == std::complex<double>(-1, -1));
    CHECK(there.sheet == 1);  // crossed the negative real axis downwards
    CHECK(std::abs(there.value() - std::complex<double>(std::log(std::sqrt(2.0)), 5 * M_PI / 4)) < 1e-12);
    CHECK(continue_log(there, out.reversed()) == g);

    CHECK_THROWS_AS(continue_log(g, PlanarPath::polyline({{2, 0}, {3, 0}})), ValidationError);
    CHECK_THROWS_AS(continue_log(g, PlanarPath::polyline({{1, 0}, {-1, 0}})), NumericError);
}

TEST_CASE("continuation respects concatenation") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3, 3);
    auto random_poly = [&](Vec2 from) {
        std::vector<Vec2> v{from};
        for (int k = 0; k < 4; ++k) v.push_back({u(rng), u(rng)});
        return PlanarPath::polyline(v);
    };
    int tried = 0;
    for (int trial = 0; trial < 200; ++trial) {
        PlanarPath a = random_poly({1, 0});
        PlanarPath b = random_poly(a.end());
        LogGerm g{{1, 0}, 0};
        try {
            LogGerm step = continue_log(continue_log(g, a), b);
            CHECK(continue_log(g, a.then(b)) == step);
            ++tried;
        } catch (const NumericError&) {
            // an edge through the origin, skip
        }
    }
    CHECK(tried > 150);
}
