#pragma once

#include <map>
#include <vector>

#include "locons/atlas.hpp"
#include "locons/cocycle.hpp"

namespace locons {

/// Largest |c_ij| whose exponential is representable.
inline constexpr double kMaxLogTransition = 700.0;

/// Multiplicative transition functions t_ij = exp(c_ij) of the principal
/// R-bundle glued from a cocycle. Points are identified by
/// (i, q, a) ~ (j, q, t_ij * a).
class TransitionSystem {
public:
    explicit TransitionSystem(CechCocycle cc);

    double operator()(int i, int j) const;
    double log(int i, int j) const { return cc_(i, j); }
    bool has(int i, int j) const { return cc_.has(i, j); }
    const CechCocycle& cocycle() const noexcept { return cc_; }
    const std::vector<int>& chart_ids() const noexcept { return cc_.chart_ids(); }

private:
    CechCocycle cc_;
};

/// Throws NumericError if some |c_ij| exceeds kMaxLogTransition.
TransitionSystem transitions(const CechCocycle& cc);

/// Ordered product of t along a closed chart sequence, accumulated in the
/// log domain.
double holonomy(const TransitionSystem& ts, const std::vector<int>& cycle);

struct HolonomyWitness {
    std::vector<int> cycle;
    double holonomy = 1.0;
};

struct TrivialityResult {
    bool trivial = false;
    /// s_i > 0 with t_ij = s_i / s_j (meaningful when trivial).
    std::map<int, double> fiber_gauges;
    /// Independent nerve cycles with their holonomies.
    std::vector<HolonomyWitness> witnesses;
};

TrivialityResult is_trivial(const TransitionSystem& ts, double tol = kCocycleTolerance);

struct BundlePoint {
    int chart = 0;
    Vec2 base;
    double fiber = 0.0;
    bool operator==(const BundlePoint&) const = default;
};

/// Representative of [(chart, q, fiber)] in the lowest-id chart containing q.
BundlePoint canonical_point(const TransitionSystem& ts, const Atlas& atlas, int chart, Vec2 q, double fiber);

}  // namespace locons
