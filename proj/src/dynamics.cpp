#include "locons/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "locons/errors.hpp"
#include "locons/fields.hpp"

namespace locons {

std::string to_string(Integrator i) { return i == Integrator::Leapfrog ? "leapfrog" : "rk4-reference"; }

Integrator parse_integrator(std::string_view name) {
    if (name == "leapfrog") return Integrator::Leapfrog;
    if (name == "rk4-reference" || name == "rk4") return Integrator::Rk4;
    throw ValidationError("unknown integrator '" + std::string(name) + "' (leapfrog, rk4-reference)");
}

std::string to_string(SimStatus s) {
    switch (s) {
        case SimStatus::Completed: return "completed";
        case SimStatus::SingularityAbort: return "singularity";
        case SimStatus::StepGuardAbort: return "step-guard";
        case SimStatus::LeftAtlas: return "left-atlas";
    }
    return "?";
}

double hamiltonian(int chart, Vec2 q, Vec2 p, const PotentialSet& ps, double mass) {
    return 0.5 * dot(p, p) / mass + ps(chart, q);
}

double lagrangian(int chart, Vec2 q, Vec2 qdot, const PotentialSet& ps, double mass) {
    return 0.5 * mass * dot(qdot, qdot) - ps(chart, q);
}

double legendre_check(int chart, Vec2 q, Vec2 qdot, const PotentialSet& ps, double mass) {
    Vec2 p = mass * qdot;
    return std::abs(dot(p, qdot) - lagrangian(chart, q, qdot, ps, mass) -
                    hamiltonian(chart, q, p, ps, mass));
}

namespace {

std::vector<Vec2> angle_centers(const FieldOneForm& f) {
    if (f.singular_points.empty()) return {Vec2{0.0, 0.0}};
    return f.singular_points;
}

double min_center_distance(const std::vector<Vec2>& pts, Vec2 q) {
    double d = std::numeric_limits<double>::infinity();
    for (Vec2 s : pts) d = std::min(d, distance(q, s));
    return d;
}

// Point where the chord a -> b leaves the chart (b itself if it never does).
Vec2 exit_point(const Chart& chart, Vec2 a, Vec2 b) {
    if (chart.contains(b)) return b;
    double s = 1.0;
    for (const HalfPlane& hp : chart.constraints) {
        double sa = hp.slack(a), sb = hp.slack(b);
        if (sb < -kChartSlack && sa > sb) s = std::min(s, std::max(0.0, sa) / (sa - sb));
    }
    return a + s * (b - a);
}

struct Stepper {
    const FieldOneForm& f;
    double m, h;
    Integrator kind;

    // Advances (q, p); `force` holds F(q) on entry and F(q_new) on exit.
    void step(Vec2& q, Vec2& p, Vec2& force) const {
        if (kind == Integrator::Leapfrog) {
            Vec2 ph = p + (0.5 * h) * force;
            q = q + (h / m) * ph;
            force = f(q);
            p = ph + (0.5 * h) * force;
            return;
        }
        auto acc = [&](Vec2 x) { return f(x); };
        Vec2 k1q = p / m, k1p = acc(q);
        Vec2 k2q = (p + 0.5 * h * k1p) / m, k2p = acc(q + 0.5 * h * k1q);
        Vec2 k3q = (p + 0.5 * h * k2p) / m, k3p = acc(q + 0.5 * h * k2q);
        Vec2 k4q = (p + h * k3p) / m, k4p = acc(q + h * k3q);
        q = q + (h / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
        p = p + (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        force = f(q);
    }
};

}  // namespace

Trajectory simulate(const SimConfig& cfg, const PotentialSet& ps) {
    if (!(cfg.mass > 0.0) || !std::isfinite(cfg.mass)) throw ValidationError("mass must be positive");
    if (!(cfg.h > 0.0) || !(cfg.T > 0.0) || !std::isfinite(cfg.T))
        throw ValidationError("step h and duration T must be positive");
    if (!(cfg.r_min > 0.0)) throw ValidationError("r_min must be positive");
    if (cfg.log_every < 1) throw ValidationError("log_every must be >= 1");
    if (cfg.T / cfg.h > 1e9) throw ValidationError("too many steps (T/h > 1e9)");

    const FieldOneForm& f = ps.field();
    const Atlas& atlas = cfg.atlas;
    Trajectory tr;
    tr.mass = cfg.mass;
    tr.centers = angle_centers(f);

    const long long n = std::max(1LL, static_cast<long long>(std::ceil(cfg.T / cfg.h - 1e-9)));
    const double h = cfg.T / static_cast<double>(n);
    const Vec2 c0 = tr.centers.front();

    SimState s;
    s.q = cfg.q0;
    s.p = cfg.p0;
    s.theta_acc.resize(tr.centers.size());
    for (std::size_t k = 0; k < tr.centers.size(); ++k) {
        Vec2 d = s.q - tr.centers[k];
        s.theta_acc[k] = std::atan2(d.y, d.x);
    }
    auto chart0 = atlas.lowest_chart_containing(s.q);
    if (!chart0) throw ValidationError("initial point is not covered by the atlas");
    s.chart = *chart0;

    auto finish_state = [&](SimState& st) {
        st.V = ps(st.chart, st.q);
        st.kinetic = 0.5 * dot(st.p, st.p) / cfg.mass;
        st.E_local = st.kinetic + st.V;
        st.p_theta = cross(st.q - c0, st.p);
    };

    if (!f.singular_points.empty() && min_center_distance(f.singular_points, s.q) < cfg.r_min) {
        tr.status = SimStatus::SingularityAbort;
        tr.message = "initial point within r_min of a singular point";
        return tr;
    }
    finish_state(s);
    tr.states.push_back(s);

    Stepper stepper{f, cfg.mass, h, cfg.integrator};
    Vec2 force = f(s.q);
    for (long long k = 1; k <= n; ++k) {
        Vec2 q_old = s.q;
        Vec2 q = s.q, p = s.p, force_new = force;
        try {
            stepper.step(q, p, force_new);
        } catch (const SingularityError& e) {
            tr.status = SimStatus::SingularityAbort;
            tr.message = e.what();
            break;
        }
        if (!f.singular_points.empty() && min_center_distance(f.singular_points, q) < cfg.r_min) {
            tr.status = SimStatus::SingularityAbort;
            tr.message = "trajectory entered r_min of a singular point at t=" + expr::format_double(k * h);
            break;
        }
        if (!std::isfinite(q.x) || !std::isfinite(q.y) || !std::isfinite(p.x) || !std::isfinite(p.y)) {
            tr.status = SimStatus::StepGuardAbort;
            tr.message = "non-finite state";
            break;
        }

        bool guard = false;
        std::vector<double> theta = s.theta_acc;
        for (std::size_t c = 0; c < tr.centers.size(); ++c) {
            double d = angle_between(q_old - tr.centers[c], q - tr.centers[c]);
            if (std::abs(d) >= kMaxStepAngle) guard = true;
            theta[c] += d;
        }
        if (guard) {
            tr.status = SimStatus::StepGuardAbort;
            tr.message = "angle step exceeded pi/2 at t=" + expr::format_double(k * h) + "; reduce h";
            break;
        }

        auto chart = atlas.lowest_chart_containing(q);
        if (!chart) {
            tr.status = SimStatus::LeftAtlas;
            tr.message = "trajectory left the atlas at t=" + expr::format_double(k * h);
            break;
        }
        if (*chart != s.chart) {
            Vec2 qs = exit_point(atlas.chart(s.chart), q_old, q);
            if (!atlas.chart(*chart).contains(qs)) {
                tr.status = SimStatus::StepGuardAbort;
                tr.message = "chart switch " + std::to_string(s.chart) + "->" + std::to_string(*chart) +
                             " without a common point on the step; reduce h";
                break;
            }
            ChartTransition ct;
            ct.t = k * h;
            ct.from = s.chart;
            ct.to = *chart;
            ct.q = qs;
            ct.dE = ps(ct.to, qs) - ps(ct.from, qs);
            tr.transitions.push_back(ct);
        }

        double work_step;
        try {
            Vec2 mid = 0.5 * (q_old + q);
            Vec2 dq = q - q_old;
            work_step = (dot(force, dq) + 4.0 * dot(f(mid), dq) + dot(force_new, dq)) / 6.0;
        } catch (const SingularityError& e) {
            tr.status = SimStatus::SingularityAbort;
            tr.message = e.what();
            break;
        }

        s.t = k * h;
        s.q = q;
        s.p = p;
        s.chart = *chart;
        s.theta_acc = std::move(theta);
        s.work_so_far += work_step;
        force = force_new;
        if (k % cfg.log_every == 0 || k == n) {
            finish_state(s);
            tr.states.push_back(s);
        }
    }
    return tr;
}

EnergyLedger energy_ledger(const Trajectory& tr, const PotentialSet& ps, const CechCocycle& cc,
                           double closure_tol) {
    EnergyLedger led;
    const auto& st = tr.states;
    for (std::size_t i = 0; i < st.size();) {
        EnergyLedger::Segment seg;
        seg.chart = st[i].chart;
        seg.first = i;
        std::size_t j = i;
        while (j + 1 < st.size() && st[j + 1].chart == seg.chart) ++j;
        seg.last = j;
        for (std::size_t k = i; k <= j; ++k)
            seg.max_drift = std::max(seg.max_drift, std::abs(st[k].E_local - st[i].E_local));
        led.max_segment_drift = std::max(led.max_segment_drift, seg.max_drift);
        led.segments.push_back(seg);
        i = j + 1;
    }

    for (const ChartTransition& ct : tr.transitions) {
        EnergyLedger::TransitionCheck chk;
        chk.transition = ct;
        chk.expected = -cc(ct.from, ct.to);
        chk.residual = std::abs(ct.dE - chk.expected);
        led.max_transition_residual = std::max(led.max_transition_residual, chk.residual);
        led.transitions.push_back(chk);
    }

    if (st.size() >= 2 && tr.status == SimStatus::Completed) {
        double gap = distance(st.front().q, st.back().q);
        if (gap <= closure_tol) {
            EnergyLedger::LoopCheck loop;
            loop.closure_gap = gap;
            loop.delta_kinetic = st.back().kinetic - st.front().kinetic;
            const FieldOneForm& f = ps.field();
            double spacing = 0.2;
            for (std::size_t a = 0; a < f.singular_points.size(); ++a)
                for (std::size_t b = a + 1; b < f.singular_points.size(); ++b)
                    spacing = std::min(spacing, distance(f.singular_points[a], f.singular_points[b]));
            for (std::size_t c = 0; c < tr.centers.size(); ++c) {
                double turns = (st.back().theta_acc[c] - st.front().theta_acc[c]) / kTwoPi;
                int w = static_cast<int>(std::lround(turns));
                loop.windings.push_back(w);
                if (w == 0 || f.singular_points.empty()) continue;
                double period = work(f, PlanarPath::circle(tr.centers[c], 0.5 * spacing, 1.0, 4000));
                loop.expected += w * period;
            }
            loop.residual = std::abs(loop.delta_kinetic - loop.expected);
            led.loop = loop;
        }
    }
    return led;
}

std::vector<PolarSample> polar_diagnostics(const Trajectory& tr, double mass) {
    (void)mass;  // momenta are stored, so p_r and p_theta need no velocity
    std::vector<PolarSample> out;
    if (tr.centers.empty()) return out;
    Vec2 c = tr.centers.front();
    out.reserve(tr.states.size());
    for (const SimState& s : tr.states) {
        Vec2 d = s.q - c;
        double r = norm(d);
        out.push_back({s.t, r, s.theta_acc.front(), r > 0.0 ? dot(d, s.p) / r : 0.0, cross(d, s.p)});
    }
    return out;
}

}  // namespace locons
