#pragma once

#include <memory>
#include <span>
#include <vector>

#include "locons/atlas.hpp"
#include "locons/field.hpp"

namespace locons {

/// Resolution of the segment integrals behind local potentials: graded
/// 4-point Gauss-Legendre panels of width min(max_panel, clearance_fraction
/// * d), d being the distance from the panel start to the nearest singular
/// point.
struct PotentialOptions {
    double max_panel = 0.1;
    double clearance_fraction = 0.05;
    int min_panels = 16;
    int max_panels = 1 << 20;
    std::size_t cache_capacity = 1 << 18;
};

/// V(q) = gauge - integral of f along the straight segment basepoint -> q.
/// Integrals are memoized per point; copies and gauge-shifted variants share
/// one thread-safe cache.
class LocalPotential {
public:
    LocalPotential(std::shared_ptr<const FieldOneForm> field, Chart chart, double gauge,
                   PotentialOptions options = {});

    double operator()(Vec2 q) const { return gauge_ - segment_integral(q); }

    /// Integral of f from the basepoint to q (gauge free). Throws
    /// ValidationError if q lies outside the chart and SingularityError if
    /// the segment comes within r_min of a singular point.
    double segment_integral(Vec2 q) const;

    /// (-dV/dx, -dV/dy) by central differences; should reproduce f.
    Vec2 negative_gradient(Vec2 q, double h) const;

    LocalPotential shifted(double a) const;

    double gauge() const noexcept { return gauge_; }
    const Chart& chart() const noexcept { return chart_; }
    const FieldOneForm& field() const noexcept { return *field_; }

private:
    struct Cache;

    std::shared_ptr<const FieldOneForm> field_;
    Chart chart_;
    double gauge_;
    PotentialOptions options_;
    std::shared_ptr<Cache> cache_;
};

LocalPotential local_potential(const FieldOneForm& f, const Chart& chart, double gauge = 0.0,
                               PotentialOptions options = {});

/// One local potential per chart, in atlas order.
class PotentialSet {
public:
    PotentialSet(std::shared_ptr<const FieldOneForm> field, std::vector<LocalPotential> potentials);

    const LocalPotential& operator[](int chart_id) const;
    double operator()(int chart_id, Vec2 q) const { return (*this)[chart_id](q); }

    const std::vector<LocalPotential>& potentials() const noexcept { return potentials_; }
    const FieldOneForm& field() const noexcept { return *field_; }
    std::shared_ptr<const FieldOneForm> field_ptr() const noexcept { return field_; }
    std::vector<double> gauges() const;

private:
    std::shared_ptr<const FieldOneForm> field_;
    std::vector<LocalPotential> potentials_;
};

/// Potentials on every chart; gauges default to zero (V_i(basepoint_i) = 0).
PotentialSet build_potentials(const FieldOneForm& f, const Atlas& atlas, std::vector<double> gauges = {},
                              PotentialOptions options = {});

/// V_i -> V_i + a_i; the segment integrals (and their caches) are shared.
PotentialSet gauge_shift(const PotentialSet& ps, std::span<const double> a);

}  // namespace locons
