// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned here.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "locons/bundle.hpp"
#include "locons/cli/run.hpp"
#include "locons/cocycle.hpp"
#include "locons/cover.hpp"
#include "locons/dynamics.hpp"
#include "locons/fields.hpp"
#include "locons/forms3.hpp"

using namespace locons;

namespace {

constexpr double kWorkTol = 1e-7;
constexpr double kClosedTol = 1e-5;
constexpr double kSpreadTol = 1e-7;
constexpr double kNerveTol = 1e-6;
constexpr double kHolonomyRelTol = 1e-9;
constexpr double kPThetaTol = 1e-4;
constexpr double kSegmentDriftTol = 1e-5;
constexpr double kJumpTol = 1e-9;
constexpr double kWorkEnergyTol = 1e-5;
constexpr double kCoverDriftTol = 1e-4;
constexpr double kOrderLo = 3.0, kOrderHi = 5.0;
constexpr double kMonodromyTol = 1e-12;
constexpr double kGroupoidTol = 1e-9;
constexpr double kFormsTol = 1e-12;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

SimConfig benchmark(double h) {
    SimConfig cfg;  // m = 1, q0 = (1, 0), p0 = (0, 1), T = 5
    cfg.h = h;
    return cfg;
}

PotentialSet vortex_potentials() { return build_potentials(vortex_field(), quadrant_atlas()); }

bool in_order_band(double ratio) { return ratio >= kOrderLo && ratio <= kOrderHi; }

// n turns of a square about the origin; n = 0 gives a square away from it
PlanarPath square_loop(int n) {
    std::vector<Vec2> sq{{1, -1}, {1, 1}, {-1, 1}, {-1, -1}};
    if (n < 0) std::reverse(sq.begin(), sq.end());
    Vec2 off = n == 0 ? Vec2{4, 0} : Vec2{};
    std::vector<Vec2> v{sq[0] + off};
    for (int k = 0; k < std::max(1, std::abs(n)); ++k)
        for (std::size_t i = 1; i <= sq.size(); ++i) v.push_back(sq[i % sq.size()] + off);
    return PlanarPath::polyline(v);
}

Outcome work_winding() {
    FieldOneForm f = vortex_field();
    double worst = 0.0;
    for (int n = -2; n <= 2; ++n) {
        PlanarPath circ = n == 0 ? PlanarPath::circle({3, 0}, 1, 1) : PlanarPath::circle({}, 1.3, n);
        worst = std::max(worst, std::abs(work(f, circ) - 2 * M_PI * n));
        worst = std::max(worst, std::abs(work(f, square_loop(n)) - 2 * M_PI * n));
    }
    return {worst < kWorkTol, "max |W - 2 pi n| " + num(worst)};
}

Outcome closedness() {
    double vortex = 0.0;
    for (Rect r : {Rect{0.5, 0.5, 3, 3}, Rect{-3, 0.5, -0.5, 3}, Rect{-3, -3, -0.5, -0.5}, Rect{0.5, -3, 3, -0.5},
                   Rect{0.2, -2, 2, 2}})
        vortex = std::max(vortex, is_closed(vortex_field(), r, 20).max_residual);
    ClosednessReport ctl = is_closed(builtin_field("xdy"), {-2, -2, 2, 2}, 20);
    bool ok = vortex < kClosedTol && !ctl.closed && std::abs(ctl.max_residual - 1.0) < 1e-3;
    return {ok, "vortex " + num(vortex) + ", x dy " + num(ctl.max_residual)};
}

Outcome cocycle_identities() {
    Atlas atlas = quadrant_atlas();
    CechCocycle cc = cocycle(build_potentials(vortex_field(), atlas), atlas, 32);
    double spread = 0.0;
    bool exact_table = true;
    for (auto [i, j] : cc.edges()) {
        spread = std::max(spread, cc.entry(i, j).spread);
        exact_table = exact_table && cc(i, j) == -cc(j, i);
    }
    for (const Chart& c : atlas.charts()) exact_table = exact_table && cc(c.id, c.id) == 0.0;
    // oracle: the nerve sum is minus the period of the loop through the basepoints
    double period = work(vortex_field(), PlanarPath::polyline({{1, 1}, {-1, 1}, {-1, -1}, {1, -1}, {1, 1}}));
    double nerve = cycle_sum(cc, {1, 2, 3, 4, 1});
    bool vortex_exact = exactness_test(cc).exact;

    std::vector<double> gauges{0.0, 0.75, -2.0, 1.5};
    ExactnessResult ex = exactness_test(cocycle(build_potentials(builtin_field("exact"), atlas, gauges), atlas, 32));
    double off = 0.0;
    if (ex.exact)
        for (int id = 1; id <= 4; ++id)
            off = std::max(off, std::abs(ex.offsets.at(id) - ex.offsets.at(1) - (gauges[id - 1] - gauges[0])));
    bool ok = exact_table && spread < kSpreadTol && std::abs(nerve + period) < kNerveTol &&
              std::abs(nerve + 2 * M_PI) < kNerveTol && !vortex_exact && ex.exact && off < 1e-9;
    return {ok, "spread " + num(spread) + ", nerve sum " + num(nerve) + ", vortex exact " +
                    (vortex_exact ? "yes" : "no") + ", control offsets err " + num(off)};
}

Outcome bundle_holonomy() {
    Atlas atlas = quadrant_atlas();
    TransitionSystem ts = transitions(cocycle(build_potentials(vortex_field(), atlas), atlas));
    double hol = holonomy(ts, {1, 2, 3, 4, 1});
    double rel = std::abs(hol / std::exp(-2 * M_PI) - 1.0);
    bool vortex_trivial = is_trivial(ts).trivial;

    TransitionSystem te =
        transitions(cocycle(build_potentials(builtin_field("exact"), atlas, {1, -1, 0.25, 3}), atlas));
    TrivialityResult tr = is_trivial(te);
    double gauge_err = INFINITY;
    if (tr.trivial) {
        gauge_err = 0.0;
        for (auto [i, j] : te.cocycle().edges())
            gauge_err = std::max(gauge_err, std::abs(te(i, j) * tr.fiber_gauges.at(j) / tr.fiber_gauges.at(i) - 1.0));
    }
    bool ok = rel < kHolonomyRelTol && !vortex_trivial && tr.trivial && gauge_err < 1e-9;
    return {ok, "holonomy " + num(hol) + " (rel err " + num(rel) + "), trivial vortex/control " +
                    (vortex_trivial ? "yes" : "no") + "/" + (tr.trivial ? "yes" : "no")};
}

double p_theta_error(const Trajectory& tr) {
    double err = 0.0;
    for (const SimState& s : tr.states) err = std::max(err, std::abs(s.p_theta - tr.states.front().p_theta - s.t));
    return err;
}

Outcome angular_momentum() {
    PotentialSet ps = vortex_potentials();
    double e1 = p_theta_error(simulate(benchmark(1e-3), ps));
    double e2 = p_theta_error(simulate(benchmark(5e-4), ps));
    double ratio = e1 / e2;
    return {e1 < kPThetaTol && in_order_band(ratio),
            "max error " + num(e1) + ", ratio h/(h/2) " + num(ratio) + " (needs " + num(kOrderLo) + ".." +
                num(kOrderHi) + ")"};
}

Outcome local_global_energy() {
    Atlas atlas = quadrant_atlas();
    PotentialSet ps = vortex_potentials();
    Trajectory tr = simulate(benchmark(1e-3), ps);
    EnergyLedger led = energy_ledger(tr, ps, cocycle(ps, atlas));
    double work_err = 0.0;
    for (std::size_t last = 250; last < tr.states.size(); last += 250) {
        std::vector<Vec2> pts;
        for (std::size_t i = 0; i <= last; ++i) pts.push_back(tr.states[i].q);
        double w = work(ps.field(), PlanarPath::polyline(pts), Quadrature::simpson(static_cast<int>(last)));
        work_err = std::max(work_err, std::abs(tr.states[last].kinetic - tr.states[0].kinetic - w));
    }
    bool ok = tr.status == SimStatus::Completed && !tr.transitions.empty() &&
              led.max_segment_drift < kSegmentDriftTol && led.max_transition_residual < kJumpTol &&
              work_err < kWorkEnergyTol;
    return {ok, "segment drift " + num(led.max_segment_drift) + ", |dE + c| " + num(led.max_transition_residual) +
                    ", |dT - W| " + num(work_err)};
}

// net crossings of the negative real axis from above
long cut_crossings(const Trajectory& tr) {
    long n = 0;
    for (std::size_t i = 1; i < tr.states.size(); ++i) {
        Vec2 a = tr.states[i - 1].q, b = tr.states[i].q;
        if ((a.y >= 0) == (b.y >= 0)) continue;
        if (a.x + (b.x - a.x) * a.y / (a.y - b.y) < 0) n += a.y >= 0 ? 1 : -1;
    }
    return n;
}

Outcome cover_conservation() {
    PotentialSet ps = vortex_potentials();
    auto drift = [&](double h) {
        Trajectory t = simulate(benchmark(h), ps);
        return cover_energy(t, lift_trajectory(t), t.mass).max_drift;
    };
    double d1 = drift(1e-3), d2 = drift(5e-4);

    bool sheets = true;
    std::string tally;
    for (auto [q0, p0] : {std::pair<Vec2, Vec2>{{1, 0}, {0, 1}}, {{-1, 0.5}, {0, -1}}, {{-1, -0.5}, {0, 1}},
                          {{-2, 0.1}, {0.5, -1}}}) {
        SimConfig cfg = benchmark(1e-3);
        cfg.q0 = q0;
        cfg.p0 = p0;
        Trajectory t = simulate(cfg, ps);
        auto lift = lift_trajectory(t);
        long sheet = sheet_of(lift.back()) - sheet_of(lift.front());
        sheets = sheets && sheet == cut_crossings(t);
        tally += " " + std::to_string(sheet) + "/" + std::to_string(cut_crossings(t));
    }
    for (int n : {-2, -1, 1, 2}) {
        PlanarPath loop = PlanarPath::circle({}, 0.7, n);
        LiftState a = lift_point(0, loop.start(), 0), b = lift_point(1, loop.end(), accumulated_angle(loop, {}));
        sheets = sheets && sheet_of(b) - sheet_of(a) == winding_number(loop, {}).n;
    }
    bool ok = d1 < kCoverDriftTol && in_order_band(d1 / d2) && sheets;
    return {ok, "drift " + num(d1) + ", ratio h/(h/2) " + num(d1 / d2) + ", sheet/crossings" + tally};
}

Outcome log_monodromy() {
    LogGerm g0{{1, 0}, 0};
    double worst = 0.0;
    bool sheets = true;
    for (int n = -3; n <= 3; ++n) {
        if (n == 0) continue;
        LogGerm g = continue_log(g0, PlanarPath::circle({}, 1.0, n));
        sheets = sheets && g.sheet == n;
        worst = std::max(worst, std::abs(g.value() - g0.value() - std::complex<double>(0, 2 * M_PI * n)));
    }
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> c(-2.5, 2.5);
    int done = 0, bad = 0;
    while (done < 100) {
        std::vector<Vec2> v{{c(rng), c(rng)}};
        for (int k = 0; k < 5; ++k) v.push_back({c(rng), c(rng)});
        bool clear = norm(v[0]) > 0.1;
        for (std::size_t i = 1; i < v.size(); ++i) clear = clear && distance_to_segment({}, v[i - 1], v[i]) > 0.05;
        if (!clear) continue;
        PlanarPath a = PlanarPath::polyline({v.begin(), v.begin() + 3});
        PlanarPath b = PlanarPath::polyline({v.begin() + 2, v.end()});
        LogGerm g{{v[0].x, v[0].y}, static_cast<long>(rng() % 5) - 2};
        LogGerm two = continue_log(continue_log(g, a), b), one = continue_log(g, a.then(b));
        LogGerm there_back = continue_log(one, a.then(b).reversed());
        if (two.sheet != one.sheet || std::abs(two.value() - one.value()) > kGroupoidTol || !(there_back == g)) ++bad;
        ++done;
    }
    bool ok = sheets && worst < kMonodromyTol && bad == 0;
    return {ok, "max |shift - 2 pi i n| " + num(worst) + ", sheets " + (sheets ? "exact" : "wrong") +
                    ", groupoid failures " + std::to_string(bad) + "/100"};
}

Outcome forms_identities() {
    using namespace forms;
    // hand-copied table: (degree, index) -> (index, sign)
    struct Row {
        int deg, in, out, sign;
    };
    const Row rows[] = {{0, 0, 0, 1}, {1, 0, 2, 1}, {1, 1, 1, -1}, {1, 2, 0, 1},
                        {2, 0, 2, 1}, {2, 1, 1, -1}, {2, 2, 0, 1}, {3, 0, 0, 1}};
    bool table = true;
    for (const Row& r : rows) {
        auto comp = hodge(FormField::basis(r.deg, r.in)).at({0.4, -1.3, 2.2});
        for (int i = 0; i < static_cast<int>(comp.size()); ++i)
            table = table && comp[static_cast<std::size_t>(i)] == (i == r.out ? r.sign : 0);
    }
    IdentityResiduals res = identity_residuals(100, 31);
    bool ok = table && res.star_star == 0.0 && res.cross_product < kFormsTol && res.scalar_product < kFormsTol &&
              res.curl_grad < 10 * res.step && res.div_curl < 10 * res.step;
    return {ok, std::string("table ") + (table ? "exact" : "wrong") + ", cross " + num(res.cross_product) +
                    ", scalar " + num(res.scalar_product) + ", curl grad " + num(res.curl_grad) + ", div curl " +
                    num(res.div_curl)};
}

Outcome determinism() {
    std::ostringstream a, b, err;
    int ca = cli::run({"verify", "--deterministic"}, a, err);
    int cb = cli::run({"verify", "--deterministic", "--jobs", "2"}, b, err);
    bool same = a.str() == b.str() && ca == cb && !a.str().empty();
    return {same, std::to_string(a.str().size()) + " bytes, " + (same ? "identical" : "different")};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
        double budget_s;  // 0: no runtime bound
    };
    const Criterion criteria[] = {
        {1, "work-winding", work_winding, 1.0},
        {2, "closedness", closedness, 0.0},
        {3, "cocycle", cocycle_identities, 0.0},
        {4, "bundle-holonomy", bundle_holonomy, 1.0},
        {5, "angular-momentum", angular_momentum, 5.0},
        {6, "local-global-energy", local_global_energy, 0.0},
        {7, "cover-conservation", cover_conservation, 0.0},
        {8, "log-monodromy", log_monodromy, 0.0},
        {9, "forms-identities", forms_identities, 0.0},
        {10, "determinism", determinism, 0.0},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0 && secs >= c.budget_s) {
            o.pass = false;
            o.detail += ", over time budget";
        }
        failed += !o.pass;
        std::printf("%s  %2d %-20s %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    }
    std::printf("%d/10 criteria passed\n", 10 - failed);
    return failed == 0 ? 0 : 1;
}
