#include "locons/cli/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "locons/bundle.hpp"
#include "locons/cli/report.hpp"
#include "locons/cocycle.hpp"
#include "locons/cover.hpp"
#include "locons/dynamics.hpp"
#include "locons/fields.hpp"
#include "locons/forms3.hpp"

namespace locons::cli {

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

SimConfig benchmark(double h) {
    SimConfig cfg;
    cfg.h = h;
    return cfg;
}

double p_theta_error(const Trajectory& tr) {
    double err = 0.0;
    const double l0 = tr.states.front().p_theta;
    for (const SimState& s : tr.states) err = std::max(err, std::abs(s.p_theta - l0 - s.t));
    return err;
}

double cover_drift(const Trajectory& tr) { return cover_energy(tr, lift_trajectory(tr), tr.mass).max_drift; }

// Signed crossings of the negative real axis, the cut of Arg.
long cut_crossings(const Trajectory& tr) {
    long n = 0;
    for (std::size_t i = 1; i < tr.states.size(); ++i) {
        Vec2 a = tr.states[i - 1].q, b = tr.states[i].q;
        bool down = a.y >= 0.0 && b.y < 0.0, up = a.y < 0.0 && b.y >= 0.0;
        if (!down && !up) continue;
        double x = a.x + (b.x - a.x) * (a.y / (a.y - b.y));
        if (x < 0.0) n += down ? 1 : -1;
    }
    return n;
}

CheckResult work_winding() {
    const FieldOneForm f = vortex_field();
    double worst = 0.0;
    for (int n = -2; n <= 2; ++n) {
        PlanarPath circ = n == 0 ? PlanarPath::circle({3.0, 0.0}, 1.0, 1.0) : PlanarPath::circle({}, 1.0, n);
        std::vector<Vec2> sq{{1, -1}, {1, 1}, {-1, 1}, {-1, -1}};
        if (n < 0) std::reverse(sq.begin(), sq.end());
        const Vec2 off = n == 0 ? Vec2{4.0, 0.0} : Vec2{};
        std::vector<Vec2> verts{sq.front() + off};
        for (int k = 0; k < std::max(1, std::abs(n)); ++k)
            for (std::size_t i = 1; i <= sq.size(); ++i) verts.push_back(sq[i % sq.size()] + off);
        PlanarPath poly = PlanarPath::polyline(verts);
        worst = std::max(worst, std::abs(work(f, circ) - kTwoPi * n));
        worst = std::max(worst, std::abs(work(f, poly) - kTwoPi * n));
    }
    return {worst < 1e-7, "max |W - 2 pi n| = " + sci(worst) + " (n = -2..2, circles and squares)"};
}

CheckResult closedness() {
    double vortex = 0.0;
    for (const Rect& r : default_probe_regions()) vortex = std::max(vortex, is_closed(vortex_field(), r).max_residual);
    ClosednessReport ctl = is_closed(builtin_field("xdy"), {0.5, 0.5, 2.0, 2.0});
    bool ok = vortex < 1e-5 && !ctl.closed && std::abs(ctl.max_residual - 1.0) < 1e-6;
    return {ok, "vortex residual " + sci(vortex) + ", x dy residual " + sci(ctl.max_residual)};
}

const std::vector<double> kControlGauges{0.0, 0.5, -1.25, 2.0};

CheckResult cocycle_identities() {
    const Atlas atlas = quadrant_atlas();
    CechCocycle cc = cocycle(build_potentials(vortex_field(), atlas), atlas);
    double spread = 0.0;
    for (auto [i, j] : cc.edges()) spread = std::max(spread, cc.entry(i, j).spread);
    double cyc = std::abs(cycle_sum(cc, {1, 2, 3, 4, 1}) + kTwoPi);
    bool vortex_exact = exactness_test(cc).exact;

    CechCocycle ce = cocycle(build_potentials(builtin_field("exact"), atlas, kControlGauges), atlas);
    ExactnessResult ex = exactness_test(ce);
    double off = 0.0;
    for (std::size_t k = 0; k < kControlGauges.size(); ++k) {
        int id = static_cast<int>(k) + 1;
        off = std::max(off, std::abs(ex.offsets.at(id) - (kControlGauges[k] - kControlGauges[0])));
    }
    bool ok = cc.identities_hold() && spread < 1e-7 && cyc < 1e-6 && !vortex_exact && ex.exact && off < 1e-9;
    return {ok, "spread " + sci(spread) + ", |cycle + 2 pi| " + sci(cyc) + ", vortex exact=" +
                    (vortex_exact ? "yes" : "no") + ", control offsets err " + sci(off)};
}

CheckResult bundle_holonomy() {
    const Atlas atlas = quadrant_atlas();
    TransitionSystem ts = transitions(cocycle(build_potentials(vortex_field(), atlas), atlas));
    double hol = holonomy(ts, {1, 2, 3, 4, 1});
    double rel = std::abs(hol / std::exp(-kTwoPi) - 1.0);
    bool vortex_trivial = is_trivial(ts).trivial;

    TransitionSystem te = transitions(cocycle(build_potentials(builtin_field("exact"), atlas, kControlGauges), atlas));
    TrivialityResult tr = is_trivial(te);
    double gauge_err = 0.0;
    if (tr.trivial)
        for (auto [i, j] : te.cocycle().edges())
            gauge_err = std::max(gauge_err, std::abs(te(i, j) / (tr.fiber_gauges.at(i) / tr.fiber_gauges.at(j)) - 1.0));
    bool ok = rel < 1e-9 && !vortex_trivial && tr.trivial && gauge_err < 1e-9;
    return {ok, "holonomy " + sci(hol) + " (rel err " + sci(rel) + "), vortex trivial=" +
                    (vortex_trivial ? "yes" : "no") + ", control trivial=" + (tr.trivial ? "yes" : "no")};
}

PotentialSet vortex_potentials() { return build_potentials(vortex_field(), quadrant_atlas()); }

CheckResult angular_momentum_law() {
    double err = p_theta_error(simulate(benchmark(1e-3), vortex_potentials()));
    return {err < 1e-4, "max |p_theta - p_theta(0) - t| = " + sci(err) + " (h = 1e-3)"};
}

CheckResult angular_momentum_order() {
    PotentialSet ps = vortex_potentials();
    double e1 = p_theta_error(simulate(benchmark(1e-3), ps));
    double e2 = p_theta_error(simulate(benchmark(5e-4), ps));
    double ratio = e2 > 0.0 ? e1 / e2 : INFINITY;
    return {ratio >= 3.0 && ratio <= 5.0,
            "error ratio h/(h/2) = " + sci(ratio) + " (" + sci(e1) + " / " + sci(e2) + ")"};
}

CheckResult energy_bookkeeping() {
    const Atlas atlas = quadrant_atlas();
    PotentialSet ps = vortex_potentials();
    CechCocycle cc = cocycle(ps, atlas);
    Trajectory tr = simulate(benchmark(1e-3), ps);
    EnergyLedger led = energy_ledger(tr, ps, cc);
    double work_err = 0.0;
    const std::size_t n = tr.states.size();
    for (int k = 1; k <= 10; ++k) {
        std::size_t last = (n - 1) * k / 10;
        std::vector<Vec2> pts;
        for (std::size_t i = 0; i <= last; ++i) pts.push_back(tr.states[i].q);
        double w = work(ps.field(), PlanarPath::polyline(pts), Quadrature::simpson(static_cast<int>(last)));
        work_err = std::max(work_err, std::abs(tr.states[last].kinetic - tr.states.front().kinetic - w));
    }
    bool ok = tr.status == SimStatus::Completed && !tr.transitions.empty() && led.max_segment_drift < 1e-5 &&
              led.max_transition_residual < 1e-9 && work_err < 1e-5;
    return {ok, "segment drift " + sci(led.max_segment_drift) + ", |dE + c| " + sci(led.max_transition_residual) +
                    " over " + std::to_string(tr.transitions.size()) + " transitions, |dT - W| " + sci(work_err)};
}

CheckResult cover_conservation() {
    PotentialSet ps = vortex_potentials();
    Trajectory tr = simulate(benchmark(1e-3), ps);
    double d1 = cover_drift(tr);
    double d2 = cover_drift(simulate(benchmark(2e-3), ps));
    double ratio = d2 / d1;
    return {d1 < 1e-4 && ratio >= 3.0 && ratio <= 5.0,
            "drift " + sci(d1) + " (h = 1e-3), ratio 2h/h = " + sci(ratio)};
}

CheckResult cover_sheets() {
    PotentialSet ps = vortex_potentials();
    bool ok = true;
    std::string detail;
    for (auto [q0, p0] : {std::pair<Vec2, Vec2>{{1, 0}, {0, 1}}, {{-1, 0.5}, {0, -1}}, {{-1, -0.5}, {0, 1}}}) {
        SimConfig cfg = benchmark(1e-3);
        cfg.q0 = q0;
        cfg.p0 = p0;
        Trajectory tr = simulate(cfg, ps);
        auto lift = lift_trajectory(tr);
        long sheet = sheet_of(lift.back()) - sheet_of(lift.front());
        long cuts = cut_crossings(tr);
        ok = ok && sheet == cuts;
        detail += (detail.empty() ? "" : ", ") + std::to_string(sheet) + "/" + std::to_string(cuts);
    }
    return {ok, "sheet/cut crossings " + detail};
}

CheckResult log_monodromy() {
    double worst = 0.0;
    bool sheets = true;
    const LogGerm g0{{1.0, 0.0}, 0};
    for (long n = -3; n <= 3; ++n) {
        PlanarPath loop = n == 0 ? PlanarPath::polyline({{1.0, 0.0}, {1.0, 0.0}})
                                 : PlanarPath::circle({}, 1.0, static_cast<double>(n));
        LogGerm g = continue_log(g0, loop);
        sheets = sheets && g.sheet == n;
        worst = std::max(worst, std::abs(g.value() - g0.value() - monodromy_log(n)));
    }
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    std::uniform_int_distribution<int> nv(3, 8), sh(-2, 2);
    int groupoid_fail = 0;
    double groupoid_err = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Vec2> v;
        int count = nv(rng);
        while (static_cast<int>(v.size()) < count) {
            Vec2 p{coord(rng), coord(rng)};
            if (norm(p) < 0.1) continue;
            if (!v.empty() && distance_to_segment({}, v.back(), p) < 0.05) continue;
            v.push_back(p);
        }
        std::size_t k = 1 + static_cast<std::size_t>(rng() % (v.size() - 2));
        LogGerm g{{v[0].x, v[0].y}, sh(rng)};
        PlanarPath a = PlanarPath::polyline({v.begin(), v.begin() + static_cast<long>(k) + 1});
        PlanarPath b = PlanarPath::polyline({v.begin() + static_cast<long>(k), v.end()});
        LogGerm two = continue_log(continue_log(g, a), b);
        LogGerm one = continue_log(g, a.then(b));
        double err = std::abs(two.value() - one.value());
        groupoid_err = std::max(groupoid_err, err);
        if (two.sheet != one.sheet || err > 1e-9) ++groupoid_fail;
    }
    bool ok = sheets && worst < 1e-12 && groupoid_fail == 0;
    return {ok, "max |shift - 2 pi i n| = " + sci(worst) + ", sheets " + (sheets ? "exact" : "WRONG") +
                    ", groupoid failures " + std::to_string(groupoid_fail) + "/100 (max err " + sci(groupoid_err) + ")"};
}

CheckResult forms_identities() {
    using namespace forms;
    bool table = true;
    const Vec3 p{0.3, -0.7, 1.1};
    for (const StarRow& row : star_table()) {
        auto c = hodge(FormField::basis(row.in_degree, row.in_index)).at(p);
        for (int i = 0; i < static_cast<int>(c.size()); ++i)
            table = table && c[static_cast<std::size_t>(i)] == (i == row.out_index ? row.sign : 0);
    }
    IdentityResiduals r = identity_residuals(100, 7);
    bool ok = table && r.star_star == 0.0 && r.cross_product < 1e-12 && r.scalar_product < 1e-12 &&
              r.curl_grad < 10 * r.step && r.div_curl < 10 * r.step;
    return {ok, std::string("star table ") + (table ? "exact" : "WRONG") + ", **-id " + sci(r.star_star) +
                    ", cross " + sci(r.cross_product) + ", scalar " + sci(r.scalar_product) + ", curl grad " +
                    sci(r.curl_grad) + ", div curl " + sci(r.div_curl)};
}

CheckResult simulate_determinism() {
    PotentialSet ps = vortex_potentials();
    std::ostringstream a, b;
    write_trajectory_csv(a, simulate(benchmark(1e-3), ps));
    write_trajectory_csv(b, simulate(benchmark(1e-3), vortex_potentials()));
    return {a.str() == b.str(), "benchmark CSV " + std::to_string(a.str().size()) + " bytes, repeat " +
                                    (a.str() == b.str() ? "identical" : "DIFFERENT")};
}

}  // namespace

std::vector<Check> verify_checks() {
    return {
        {"work-winding", work_winding},
        {"closedness", closedness},
        {"cocycle", cocycle_identities},
        {"bundle-holonomy", bundle_holonomy},
        {"angular-momentum", angular_momentum_law},
        {"angular-momentum-order", angular_momentum_order},
        {"energy-ledger", energy_bookkeeping},
        {"cover-energy", cover_conservation},
        {"cover-sheets", cover_sheets},
        {"log-monodromy", log_monodromy},
        {"forms-identities", forms_identities},
        {"simulate-determinism", simulate_determinism},
    };
}

int run_verify(std::ostream& out, bool deterministic, int jobs) {
    auto start = std::chrono::steady_clock::now();
    std::vector<Check> checks = verify_checks();
    std::vector<CheckResult> results(checks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < checks.size();) {
            try {
                results[i] = checks[i].run();
            } catch (const std::exception& e) {
                results[i] = {false, std::string("error: ") + e.what()};
            }
        }
    };
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(checks.size())));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    if (!deterministic) {
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        char buf[96];
        std::snprintf(buf, sizeof buf, "# locons verify: %.2f s wall, %d job(s)", secs, jobs);
        out << buf << '\n';
    }
    std::size_t passed = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        char name[40];
        std::snprintf(name, sizeof name, "%-24s", checks[i].name.c_str());
        out << (results[i].pass ? "PASS  " : "FAIL  ") << name << results[i].detail << '\n';
        passed += results[i].pass;
    }
    out << passed << '/' << checks.size() << " checks passed\n";
    return passed == checks.size() ? 0 : 1;
}

}  // namespace locons::cli
