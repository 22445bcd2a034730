#include "doctest.h"

#include <cmath>
#include <random>

#include "locons/dynamics.hpp"
#include "locons/errors.hpp"
#include "locons/fields.hpp"

using namespace locons;

namespace {

SimConfig benchmark(double h = 1e-3) {
    SimConfig cfg;
    cfg.h = h;
    return cfg;
}

PotentialSet vortex_potentials(const std::vector<double>& gauges = {}) {
    return build_potentials(vortex_field(), quadrant_atlas(), gauges);
}

double max_segment_drift(const Trajectory& tr, const PotentialSet& ps) {
    return energy_ledger(tr, ps, cocycle(ps, quadrant_atlas())).max_segment_drift;
}

}  // namespace

TEST_CASE("local hamiltonians and lagrangians") {
    Atlas a = quadrant_atlas();
    PotentialSet ps = vortex_potentials();
    for (const Chart& c : a.charts()) CHECK(hamiltonian(c.id, c.basepoint, {0, 0}, ps, 1.0) == 0.0);

    // gauge with V_1(1, 0) = 0
    PotentialSet g = vortex_potentials({-M_PI / 4, 0, 0, 0});
    CHECK(std::abs(hamiltonian(1, {1, 0}, {0, 1}, g, 1.0) - 0.5) < 1e-12);
    const Vec2 q{2, 0.5}, p{0.3, -1.2};
    double k1 = hamiltonian(1, q, p, ps, 1.5) - ps(1, q);
    double k2 = hamiltonian(1, q, 2.0 * p, ps, 1.5) - ps(1, q);
    CHECK(k2 == 4.0 * k1);
    CHECK_THROWS_AS(hamiltonian(1, {-1, 1}, p, ps, 1.0), ValidationError);

    CHECK(lagrangian(1, {1, 1}, {1, 1}, ps, 2.0) == 2.0);
    CHECK(lagrangian(3, {-2, -1}, {0, 0}, ps, 1.0) == -ps(3, {-2, -1}));
    CHECK(hamiltonian(3, {-2, -1}, {0, 0}, ps, 1.0) == ps(3, {-2, -1}));
    CHECK(legendre_check(3, {-2, -1}, {0, 0}, ps, 1.0) == 0.0);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.1, 3);
    for (int k = 0; k < 50; ++k) {
        Vec2 x{u(rng), u(rng)}, v{u(rng) - 1.5, u(rng) - 1.5};
        CHECK(legendre_check(1, x, v, ps, u(rng)) < 1e-12);
    }
}

TEST_CASE("angular momentum grows at unit rate") {
    Trajectory tr = simulate(benchmark(), vortex_potentials());
    REQUIRE(tr.status == SimStatus::Completed);
    REQUIRE(tr.states.size() == 5001);
    CHECK(tr.states.back().t == 5.0);
    double err = 0.0;
    for (const SimState& s : tr.states) err = std::max(err, std::abs(s.p_theta - tr.states.front().p_theta - s.t));
    CHECK(err < 1e-4);

    // least-squares slope of p_theta(t)
    auto pol = polar_diagnostics(tr, 1.0);
    double st = 0, sp = 0, stt = 0, stp = 0, n = static_cast<double>(pol.size());
    for (const auto& s : pol) {
        st += s.t;
        sp += s.p_theta;
        stt += s.t * s.t;
        stp += s.t * s.p_theta;
    }
    CHECK(std::abs((n * stp - st * sp) / (n * stt - st * st) - 1.0) < 1e-4);
}

TEST_CASE("polar diagnostics") {
    Trajectory tr = simulate(benchmark(), vortex_potentials());
    auto pol = polar_diagnostics(tr, 1.0);
    CHECK(pol.front().p_theta == 1.0);
    CHECK(pol.front().p_r == 0.0);
    CHECK(pol.front().r == 1.0);
    // the radial equation: dp_r/dt = p_theta^2 / (m r^3), the vortex has no radial force
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < pol.size(); ++i) {
        double dpr = (pol[i + 1].p_r - pol[i - 1].p_r) / (pol[i + 1].t - pol[i - 1].t);
        worst = std::max(worst, std::abs(dpr - pol[i].p_theta * pol[i].p_theta / std::pow(pol[i].r, 3)));
    }
    CHECK(worst < 1e-3);
    // theta is continuous (the run crosses the positive y axis)
    CHECK(pol.back().theta > M_PI / 2);
    CHECK(pol.back().theta == tr.states.back().theta_acc.front());
}

TEST_CASE("free motion is a straight line") {
    FieldOneForm zero = builtin_field("zero");
    PotentialSet ps = build_potentials(zero, quadrant_atlas());
    SimConfig cfg = benchmark();
    cfg.mass = 2.0;
    cfg.q0 = {1, 0.5};
    cfg.p0 = {-0.4, 0.3};
    cfg.T = 2.0;
    Trajectory tr = simulate(cfg, ps);
    REQUIRE(tr.status == SimStatus::Completed);
    Vec2 expect = cfg.q0 + (cfg.T / cfg.mass) * cfg.p0;
    CHECK(distance(tr.states.back().q, expect) < 1e-9);
}

TEST_CASE("work-energy theorem along the logged path") {
    PotentialSet ps = vortex_potentials();
    Trajectory tr = simulate(benchmark(), ps);
    std::vector<Vec2> pts;
    for (const SimState& s : tr.states) pts.push_back(s.q);
    double w = work(ps.field(), PlanarPath::polyline(pts), Quadrature::simpson(static_cast<int>(pts.size())));
    CHECK(std::abs(tr.states.back().kinetic - tr.states.front().kinetic - w) < 1e-5);
    CHECK(std::abs(tr.states.back().work_so_far - w) < 1e-9);
}

TEST_CASE("chart transitions and the energy ledger") {
    Atlas a = quadrant_atlas();
    PotentialSet ps = vortex_potentials();
    CechCocycle cc = cocycle(ps, a);
    Trajectory tr = simulate(benchmark(), ps);
    REQUIRE(tr.transitions.size() == 1);
    const ChartTransition& t = tr.transitions.front();
    CHECK(t.from == 1);
    CHECK(t.to == 2);
    CHECK(a.chart(1).contains(t.q));
    CHECK(a.chart(2).contains(t.q));
    CHECK(std::abs(t.dE + cc(1, 2)) < 1e-9);

    EnergyLedger led = energy_ledger(tr, ps, cc);
    REQUIRE(led.segments.size() == 2);
    CHECK(led.segments[0].chart == 1);
    CHECK(led.segments[1].chart == 2);
    CHECK(led.segments[1].last == tr.states.size() - 1);
    CHECK(led.max_segment_drift < 1e-5);
    CHECK(led.max_transition_residual < 1e-9);
    CHECK_FALSE(led.loop.has_value());
    // the jump is real: local energy is not globally conserved
    const SimState& before = tr.states[led.segments[0].last];
    const SimState& after = tr.states[led.segments[1].first];
    CHECK(std::abs((after.E_local - before.E_local) - t.dE) < 1e-5);
}

TEST_CASE("leapfrog drift is second order and matches the reference integrator") {
    PotentialSet ps = vortex_potentials();
    double d1 = max_segment_drift(simulate(benchmark(1e-3), ps), ps);
    double d2 = max_segment_drift(simulate(benchmark(5e-4), ps), ps);
    CHECK(d1 < 1e-5);
    CHECK(d1 / d2 >= 3.0);
    CHECK(d1 / d2 <= 5.0);

    SimConfig ref = benchmark(1e-3);
    ref.integrator = Integrator::Rk4;
    Trajectory r = simulate(ref, ps), l = simulate(benchmark(1e-3), ps);
    CHECK(distance(r.states.back().q, l.states.back().q) < 1e-4);
    CHECK(max_segment_drift(r, ps) < 1e-8);
}

TEST_CASE("time reversal") {
    PotentialSet ps = vortex_potentials();
    Trajectory fwd = simulate(benchmark(), ps);
    SimConfig back = benchmark();
    back.q0 = fwd.states.back().q;
    back.p0 = -fwd.states.back().p;
    Trajectory rev = simulate(back, ps);
    REQUIRE(rev.status == SimStatus::Completed);
    CHECK(distance(rev.states.back().q, {1, 0}) < 1e-9);
    CHECK(distance(rev.states.back().p, {0, -1}) < 1e-9);
}

TEST_CASE("gauge shifts never change the motion") {
    Trajectory a = simulate(benchmark(), vortex_potentials());
    Trajectory b = simulate(benchmark(), vortex_potentials({3, -1, 0.5, 7}));
    REQUIRE(a.states.size() == b.states.size());
    for (std::size_t i = 0; i < a.states.size(); ++i) {
        CHECK(a.states[i].q == b.states[i].q);
        CHECK(a.states[i].p == b.states[i].p);
    }
}

TEST_CASE("aborts keep the partial trajectory") {
    PotentialSet ps = vortex_potentials();
    SimConfig inside = benchmark();
    inside.q0 = {1e-4, 0};
    inside.p0 = {-1, 0};
    Trajectory t0 = simulate(inside, ps);
    CHECK(t0.status == SimStatus::SingularityAbort);
    CHECK(t0.states.empty());

    // fast head-on approach: the vortex torque cannot deflect it in time
    SimConfig dive = benchmark(1e-5);
    dive.q0 = {0.5, 0};
    dive.p0 = {-200, 0};
    Trajectory t1 = simulate(dive, ps);
    CHECK(t1.status == SimStatus::SingularityAbort);
    CHECK(t1.states.size() > 100);
    CHECK(norm(t1.states.back().q) >= dive.r_min);
    CHECK_FALSE(t1.message.empty());

    // one coarse step jumps across the origin
    SimConfig coarse = benchmark(0.01);
    coarse.q0 = {0.02, 0};
    coarse.p0 = {-4, 0};
    CHECK(simulate(coarse, ps).status == SimStatus::StepGuardAbort);

    SimConfig bad = benchmark();
    bad.mass = 0;
    CHECK_THROWS_AS(simulate(bad, ps), ValidationError);
    bad = benchmark();
    bad.q0 = {0, 0};
    CHECK_THROWS_AS(simulate(bad, ps), ValidationError);
}

TEST_CASE("whole-loop ledger on a closed orbit") {
    // harmonic attraction, circular orbit of period 2 pi
    FieldOneForm spring = make_field("spring", "-x", "-y");
    PotentialSet ps = build_potentials(spring, quadrant_atlas());
    SimConfig cfg;
    cfg.h = 2 * M_PI / 20000;
    cfg.T = 2 * M_PI;
    Trajectory tr = simulate(cfg, ps);
    REQUIRE(tr.status == SimStatus::Completed);
    EnergyLedger led = energy_ledger(tr, ps, cocycle(ps, quadrant_atlas()));
    REQUIRE(led.loop.has_value());
    CHECK(led.loop->closure_gap < 1e-6);
    CHECK(led.loop->windings == std::vector<int>{1});
    CHECK(led.loop->expected == 0.0);
    CHECK(led.loop->residual < 1e-6);
    CHECK(tr.transitions.size() == 4);
    CHECK(led.max_transition_residual < 1e-9);
}
