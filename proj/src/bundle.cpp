#include "locons/bundle.hpp"

#include <cmath>

#include "locons/errors.hpp"
#include "locons/expr.hpp"

namespace locons {

TransitionSystem::TransitionSystem(CechCocycle cc) : cc_(std::move(cc)) {}

double TransitionSystem::operator()(int i, int j) const { return std::exp(cc_(i, j)); }

TransitionSystem transitions(const CechCocycle& cc) {
    for (const auto& [i, j] : cc.edges()) {
        if (std::fabs(cc(i, j)) > kMaxLogTransition)
            throw NumericError("transition t_" + std::to_string(i) + std::to_string(j) + " = exp(" +
                               expr::format_double(cc(i, j)) + ") overflows");
    }
    return TransitionSystem(cc);
}

double holonomy(const TransitionSystem& ts, const std::vector<int>& cycle) {
    return std::exp(cycle_sum(ts.cocycle(), cycle));
}

TrivialityResult is_trivial(const TransitionSystem& ts, double tol) {
    const ExactnessResult ex = exactness_test(ts.cocycle(), tol);
    TrivialityResult out;
    out.trivial = ex.exact;
    for (const auto& [id, a] : ex.offsets) out.fiber_gauges[id] = std::exp(a);
    for (const auto& p : ex.periods) out.witnesses.push_back({p.cycle, std::exp(p.period)});
    return out;
}

BundlePoint canonical_point(const TransitionSystem& ts, const Atlas& atlas, int chart, Vec2 q, double fiber) {
    if (!atlas.chart(chart).contains(q))
        throw ValidationError("point (" + expr::format_double(q.x) + ", " + expr::format_double(q.y) +
                              ") is not in chart " + std::to_string(chart));
    const int lowest = *atlas.lowest_chart_containing(q);
    if (lowest == chart) return {chart, q, fiber};
    // (lowest, q, b) ~ (chart, q, t_{lowest,chart} b)  =>  b = t_{chart,lowest} a
    return {lowest, q, ts(chart, lowest) * fiber};
}

}  // namespace locons
