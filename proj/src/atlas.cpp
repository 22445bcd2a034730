#include "locons/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "locons/errors.hpp"
#include "locons/expr.hpp"

namespace locons {

bool Chart::contains(Vec2 q) const {
    for (const HalfPlane& h : constraints)
        if (h.slack(q) < -kChartSlack) return false;
    for (const Vec2& e : excluded)
        if (q == e) return false;
    return true;
}

bool Chart::interior(Vec2 q) const {
    for (const HalfPlane& h : constraints)
        if (!(h.slack(q) > 0.0)) return false;
    for (const Vec2& e : excluded)
        if (q == e) return false;
    return true;
}

Chart sector_chart(int id, double from, double to, std::string label) {
    if (!(to > from) || !(to - from < kPi)) throw ValidationError("sector must span an angle in (0, pi)");
    Chart c;
    c.id = id;
    c.label = label.empty() ? "sector " + std::to_string(id) : std::move(label);
    // left of the ray at `from`, right of the ray at `to`
    c.constraints.push_back({-std::sin(from), std::cos(from), 0.0});
    c.constraints.push_back({std::sin(to), -std::cos(to), 0.0});
    c.excluded.push_back({0.0, 0.0});
    const double mid = 0.5 * (from + to);
    c.basepoint = {std::cos(mid), std::sin(mid)};
    return c;
}

double radical_inverse(unsigned long long i, unsigned base) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

namespace {

using Polygon = std::vector<Vec2>;

Polygon clip(const Polygon& poly, const HalfPlane& h) {
    Polygon out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = poly[i];
        const Vec2 b = poly[(i + 1) % n];
        const double da = h.slack(a);
        const double db = h.slack(b);
        const bool ina = da >= -kChartSlack;
        const bool inb = db >= -kChartSlack;
        if (ina) out.push_back(a);
        if (ina != inb) {
            const double s = da / (da - db);
            out.push_back(a + s * (b - a));
        }
    }
    return out;
}

enum class Shape { Empty, Point, Segment, Area };

struct Region {
    Shape shape = Shape::Empty;
    Polygon polygon;
    Vec2 a, b;  // Point: a; Segment: [a, b]
};

Region clip_region(std::span<const Chart* const> charts, double radius) {
    Polygon poly = {{-radius, -radius}, {radius, -radius}, {radius, radius}, {-radius, radius}};
    for (const Chart* c : charts)
        for (const HalfPlane& h : c->constraints) {
            poly = clip(poly, h);
            if (poly.empty()) return {};
        }
    Region r;
    r.polygon = poly;
    double area = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) area += cross(poly[i], poly[(i + 1) % poly.size()]);
    area = 0.5 * std::fabs(area);

    double diameter = 0.0;
    r.a = r.b = poly.front();
    for (std::size_t i = 0; i < poly.size(); ++i)
        for (std::size_t j = i + 1; j < poly.size(); ++j)
            if (distance(poly[i], poly[j]) > diameter) {
                diameter = distance(poly[i], poly[j]);
                r.a = poly[i];
                r.b = poly[j];
            }
    if (area > 1e-12 * radius * radius) r.shape = Shape::Area;
    else if (diameter > 1e-12 * radius) r.shape = Shape::Segment;
    else r.shape = Shape::Point;
    return r;
}

constexpr int kAreaBudget = 20000;
constexpr int kSegmentBudget = 4096;

template <class Accept>
std::vector<Vec2> sample_region(const Region& r, int k, Accept accept) {
    std::vector<Vec2> out;
    if (k <= 0) return out;
    switch (r.shape) {
    case Shape::Empty:
        break;
    case Shape::Point:
        if (accept(r.a)) out.push_back(r.a);
        break;
    case Shape::Segment:
        for (int i = 1; i <= kSegmentBudget && static_cast<int>(out.size()) < k; ++i) {
            const Vec2 p = r.a + radical_inverse(static_cast<unsigned long long>(i), 2) * (r.b - r.a);
            if (accept(p)) out.push_back(p);
        }
        break;
    case Shape::Area: {
        Vec2 lo = r.polygon.front(), hi = r.polygon.front();
        for (const Vec2& p : r.polygon) {
            lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
            hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
        }
        for (int i = 1; i <= kAreaBudget && static_cast<int>(out.size()) < k; ++i) {
            const auto u = static_cast<unsigned long long>(i);
            const Vec2 p{lo.x + radical_inverse(u, 2) * (hi.x - lo.x), lo.y + radical_inverse(u, 3) * (hi.y - lo.y)};
            if (accept(p)) out.push_back(p);
        }
        break;
    }
    }
    return out;
}

}  // namespace

Atlas::Atlas(std::vector<Chart> charts, SamplingWindow window) : charts_(std::move(charts)), window_(window) {
    if (charts_.empty()) throw ValidationError("an atlas needs at least one chart");
    std::sort(charts_.begin(), charts_.end(), [](const Chart& a, const Chart& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < charts_.size(); ++i) {
        const Chart& c = charts_[i];
        if (c.id <= 0) throw ValidationError("chart ids must be positive");
        if (i > 0 && charts_[i - 1].id == c.id)
            throw ValidationError("duplicate chart id " + std::to_string(c.id));
        if (!c.interior(c.basepoint))
            throw ValidationError("basepoint of chart " + std::to_string(c.id) + " is not strictly inside it");
    }
    if (!(window_.radius > 0.0) || !(window_.margin >= 0.0))
        throw ValidationError("sampling window needs radius > 0 and margin >= 0");
}

std::vector<int> Atlas::ids() const {
    std::vector<int> out;
    for (const Chart& c : charts_) out.push_back(c.id);
    return out;
}

const Chart& Atlas::chart(int id) const {
    for (const Chart& c : charts_)
        if (c.id == id) return c;
    throw ValidationError("no chart with id " + std::to_string(id));
}

bool Atlas::has_chart(int id) const {
    return std::any_of(charts_.begin(), charts_.end(), [id](const Chart& c) { return c.id == id; });
}

std::optional<int> Atlas::lowest_chart_containing(Vec2 q) const {
    for (const Chart& c : charts_)
        if (c.contains(q)) return c.id;
    return std::nullopt;
}

std::vector<Vec2> Atlas::overlap_samples(std::span<const int> ids, int k) const {
    std::vector<const Chart*> involved;
    for (int id : ids) involved.push_back(&chart(id));
    const Region region = clip_region(involved, window_.radius);
    const double margin = window_.margin;
    return sample_region(region, k, [&](Vec2 p) {
        for (const Chart* c : involved) {
            if (!c->contains(p)) return false;
            for (const Vec2& e : c->excluded)
                if (distance(p, e) < margin) return false;
        }
        return true;
    });
}

bool Atlas::overlaps(int i, int j) const {
    const int ids[2] = {i, j};
    return !overlap_samples(ids, 1).empty();
}

std::vector<Vec2> Atlas::uncovered(std::span<const Vec2> probes) const {
    std::vector<Vec2> out;
    for (const Vec2& p : probes)
        if (!lowest_chart_containing(p)) out.push_back(p);
    return out;
}

Atlas quadrant_atlas() {
    const Vec2 origin{0.0, 0.0};
    auto quadrant = [&](int id, double sx, double sy, std::string label) {
        Chart c;
        c.id = id;
        c.label = std::move(label);
        c.constraints = {{sx, 0.0, 0.0}, {0.0, sy, 0.0}};
        c.excluded = {origin};
        c.basepoint = {sx, sy};
        return c;
    };
    return Atlas({quadrant(1, 1, 1, "U1: x>=0, y>=0"), quadrant(2, -1, 1, "U2: x<=0, y>=0"),
                  quadrant(3, -1, -1, "U3: x<=0, y<=0"), quadrant(4, 1, -1, "U4: x>=0, y<=0")});
}

StarShapeReport check_star_shaped(const Chart& chart, int samples, double clearance, SamplingWindow window) {
    if (samples < 1) throw ValidationError("star-shape check needs at least one sample");
    const Chart* self = &chart;
    const Region region = clip_region(std::span<const Chart* const>(&self, 1), window.radius);
    std::vector<Vec2> points = sample_region(region, samples, [&](Vec2 p) { return chart.contains(p); });
    for (const Vec2& e : chart.excluded) {
        for (double s : {1.25, 1.5, 2.0, 3.0}) {
            const Vec2 probe = chart.basepoint + s * (e - chart.basepoint);
            if (chart.contains(probe)) points.push_back(probe);
        }
    }

    StarShapeReport rep;
    constexpr int kSegmentChecks = 32;
    for (const Vec2& q : points) {
        ++rep.checked;
        for (int m = 1; m <= kSegmentChecks; ++m) {
            const Vec2 p = chart.basepoint + (static_cast<double>(m) / kSegmentChecks) * (q - chart.basepoint);
            if (!chart.contains(p)) {
                rep.star_shaped = false;
                rep.first_violation = q;
                rep.reason = "segment from basepoint leaves the chart";
                return rep;
            }
        }
        for (const Vec2& e : chart.excluded) {
            if (distance_to_segment(e, chart.basepoint, q) < clearance) {
                rep.star_shaped = false;
                rep.first_violation = q;
                rep.reason = "segment from basepoint passes within " + expr::format_double(clearance) +
                             " of removed point (" + expr::format_double(e.x) + ", " + expr::format_double(e.y) + ")";
                return rep;
            }
        }
    }
    return rep;
}

}  // namespace locons
