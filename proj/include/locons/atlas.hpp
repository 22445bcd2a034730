#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "locons/geometry.hpp"

namespace locons {

/// Closed half-plane a*x + b*y >= c.
struct HalfPlane {
    double a = 0.0, b = 0.0, c = 0.0;

    double slack(Vec2 p) const { return a * p.x + b * p.y - c; }
};

/// Membership slack for half-plane tests.
inline constexpr double kChartSlack = 1e-12;

/// Convex chart: an intersection of closed half-planes with finitely many
/// points removed.
struct Chart {
    int id = 0;
    std::string label;
    std::vector<HalfPlane> constraints;
    std::vector<Vec2> excluded;
    Vec2 basepoint;

    bool contains(Vec2 q) const;
    /// Strictly inside every half-plane and away from the removed points.
    bool interior(Vec2 q) const;
};

/// Wedge with apex at the origin between polar angles `from` and `to`
/// (to - from < pi), origin removed, basepoint on the bisector at radius 1.
Chart sector_chart(int id, double from, double to, std::string label = {});

/// Bounded window used to sample overlaps: points are drawn from
/// [-radius, radius]^2 and kept at least `margin` away from removed points.
struct SamplingWindow {
    double radius = 4.0;
    double margin = 0.5;
};

class Atlas {
public:
    Atlas() = default;
    /// Validates ids (unique, positive) and basepoints (strictly interior).
    explicit Atlas(std::vector<Chart> charts, SamplingWindow window = {});

    const std::vector<Chart>& charts() const noexcept { return charts_; }
    const SamplingWindow& window() const noexcept { return window_; }
    std::size_t size() const noexcept { return charts_.size(); }
    std::vector<int> ids() const;

    const Chart& chart(int id) const;
    bool has_chart(int id) const;

    /// Lowest chart id whose chart contains q.
    std::optional<int> lowest_chart_containing(Vec2 q) const;

    /// Up to k deterministic low-discrepancy points in the common overlap of
    /// the given charts, inside the sampling window. An empty result means
    /// the overlap is empty within the window (certified by clipping, or by
    /// exhausting the rejection-sampling budget).
    std::vector<Vec2> overlap_samples(std::span<const int> ids, int k = 32) const;
    bool overlaps(int i, int j) const;

    /// Probe points not contained in any chart.
    std::vector<Vec2> uncovered(std::span<const Vec2> probes) const;

private:
    std::vector<Chart> charts_;
    SamplingWindow window_;
};

/// Four closed quadrants of the punctured plane, ids 1..4 counter-clockwise
/// from the first quadrant, basepoints (+-1, +-1).
Atlas quadrant_atlas();

/// i-th element (i >= 1) of the van der Corput / Halton sequence in `base`.
double radical_inverse(unsigned long long i, unsigned base);

struct StarShapeReport {
    bool star_shaped = true;
    int checked = 0;
    std::optional<Vec2> first_violation;
    std::string reason;
};

/// Samples points of the chart (plus probes behind each removed point) and
/// checks that the segment from the basepoint stays in the chart and keeps
/// `clearance` from every removed point. Violations are reported, not thrown.
StarShapeReport check_star_shaped(const Chart& chart, int samples, double clearance = 1e-9,
                                  SamplingWindow window = {});

}  // namespace locons
