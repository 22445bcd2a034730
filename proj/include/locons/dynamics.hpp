#pragma once

#include <optional>
#include <string>
#include <vector>

#include "locons/atlas.hpp"
#include "locons/cocycle.hpp"
#include "locons/potentials.hpp"

namespace locons {

enum class Integrator { Leapfrog, Rk4 };

std::string to_string(Integrator i);
Integrator parse_integrator(std::string_view name);

/// Point mass in the plane under the force field of the potential set.
/// Integration runs in global Cartesian coordinates; charts only drive the
/// energy bookkeeping.
struct SimConfig {
    double mass = 1.0;
    Vec2 q0{1.0, 0.0};
    Vec2 p0{0.0, 1.0};
    double h = 1e-3;
    double T = 5.0;
    double r_min = 1e-3;
    Integrator integrator = Integrator::Leapfrog;
    Atlas atlas = quadrant_atlas();
    int log_every = 1;
};

struct SimState {
    double t = 0.0;
    Vec2 q;
    Vec2 p;
    int chart = 0;
    /// Continuous angle about each tracked center (singular points, or the
    /// origin for fields without any).
    std::vector<double> theta_acc;
    double V = 0.0;
    double kinetic = 0.0;
    double E_local = 0.0;
    double p_theta = 0.0;      // (q - c) x p about the first center
    double work_so_far = 0.0;  // Simpson along the chords travelled so far
};

struct ChartTransition {
    double t = 0.0;
    int from = 0;
    int to = 0;
    Vec2 q;           // common point of both charts on the crossing chord
    double dE = 0.0;  // V_to(q) - V_from(q)
};

enum class SimStatus { Completed, SingularityAbort, StepGuardAbort, LeftAtlas };
std::string to_string(SimStatus s);

struct Trajectory {
    double mass = 1.0;
    std::vector<Vec2> centers;
    std::vector<SimState> states;
    std::vector<ChartTransition> transitions;
    SimStatus status = SimStatus::Completed;
    std::string message;
};

/// Local Hamiltonian H_i = |p|^2 / 2m + V_i(q). Throws if q is not in U_i.
double hamiltonian(int chart, Vec2 q, Vec2 p, const PotentialSet& ps, double mass);
/// Local Lagrangian L_i = m |qdot|^2 / 2 - V_i(q).
double lagrangian(int chart, Vec2 q, Vec2 qdot, const PotentialSet& ps, double mass);
/// |p.qdot - L_i - H_i| with p = m qdot.
double legendre_check(int chart, Vec2 q, Vec2 qdot, const PotentialSet& ps, double mass);

/// Fixed-step integration with chart tracking. Numerical failures end the
/// run early with a non-Completed status; the partial trajectory is kept.
Trajectory simulate(const SimConfig& cfg, const PotentialSet& ps);

/// Largest principal angle increment allowed per step.
inline constexpr double kMaxStepAngle = 0.5 * kPi;

struct EnergyLedger {
    struct Segment {
        int chart = 0;
        std::size_t first = 0, last = 0;  // state indices, inclusive
        double max_drift = 0.0;           // max |E_local - E_local(first)|
    };
    struct TransitionCheck {
        ChartTransition transition;
        double expected = 0.0;  // -c_{from,to}
        double residual = 0.0;
    };
    struct LoopCheck {
        double closure_gap = 0.0;
        std::vector<int> windings;  // per center
        double delta_kinetic = 0.0;
        double expected = 0.0;      // sum of winding * period
        double residual = 0.0;
    };

    std::vector<Segment> segments;
    double max_segment_drift = 0.0;
    std::vector<TransitionCheck> transitions;
    double max_transition_residual = 0.0;
    std::optional<LoopCheck> loop;
};

/// Per-chart drift, transition jumps against the cocycle and, when the
/// trajectory returns within `closure_tol` of its start, the kinetic energy
/// gained against the periods of the field around each center.
EnergyLedger energy_ledger(const Trajectory& tr, const PotentialSet& ps, const CechCocycle& cc,
                           double closure_tol = 1e-6);

struct PolarSample {
    double t, r, theta, p_r, p_theta;
};

/// Polar coordinates and momenta about the first tracked center; theta is
/// the continuous accumulated angle.
std::vector<PolarSample> polar_diagnostics(const Trajectory& tr, double mass);

}  // namespace locons
