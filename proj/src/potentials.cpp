#include "locons/potentials.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "locons/errors.hpp"
#include "locons/expr.hpp"
#include "locons/quadrature.hpp"

namespace locons {

struct LocalPotential::Cache {
    struct Key {
        std::uint64_t x, y;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            return std::hash<std::uint64_t>{}(k.x * 0x9E3779B97F4A7C15ull ^ k.y);
        }
    };

    std::shared_mutex mutex;
    std::unordered_map<Key, double, KeyHash> values;
};

LocalPotential::LocalPotential(std::shared_ptr<const FieldOneForm> field, Chart chart, double gauge,
                               PotentialOptions options)
    : field_(std::move(field)), chart_(std::move(chart)), gauge_(gauge), options_(options),
      cache_(std::make_shared<Cache>()) {
    if (!field_) throw ValidationError("local potential needs a field");
}

double LocalPotential::segment_integral(Vec2 q) const {
    const Cache::Key key{std::bit_cast<std::uint64_t>(q.x), std::bit_cast<std::uint64_t>(q.y)};
    {
        std::shared_lock lock(cache_->mutex);
        if (auto it = cache_->values.find(key); it != cache_->values.end()) return it->second;
    }

    if (!chart_.contains(q))
        throw ValidationError("point (" + expr::format_double(q.x) + ", " + expr::format_double(q.y) +
                              ") lies outside chart " + std::to_string(chart_.id));
    const Vec2 bp = chart_.basepoint;
    double clearance = std::numeric_limits<double>::infinity();
    for (const Vec2& s : field_->singular_points) {
        clearance = std::min(clearance, distance_to_segment(s, bp, q));
        if (clearance < field_->r_min)
            throw SingularityError("segment from the basepoint of chart " + std::to_string(chart_.id) +
                                   " passes within r_min of a singular point");
    }
    for (const Vec2& e : chart_.excluded) {
        if (distance_to_segment(e, bp, q) < field_->r_min)
            throw ValidationError("segment from the basepoint of chart " + std::to_string(chart_.id) +
                                  " passes through a removed point (chart not star-shaped)");
    }

    double value = 0.0;
    const Vec2 d = q - bp;
    const double len = norm(d);
    if (len > 0.0) {
        // Graded Gauss-Legendre panels: width tracks the distance to the
        // nearest singular point, so the count grows only like
        // log(len / clearance).
        static const GaussLegendre rule = gauss_legendre(4);
        auto local_clearance = [&](double s) {
            double c = std::numeric_limits<double>::infinity();
            for (const Vec2& sp : field_->singular_points) c = std::min(c, distance(bp + s * d, sp));
            return c;
        };
        const double widest = std::min(options_.max_panel / len, 1.0 / options_.min_panels);
        const double narrowest = 1.0 / options_.max_panels;
        double s = 0.0;
        while (s < 1.0) {
            double w = std::min(widest, options_.clearance_fraction * local_clearance(s) / len);
            w = std::max(w, narrowest);
            double e = s + w >= 1.0 - 1e-3 * w ? 1.0 : s + w;
            double mid = 0.5 * (s + e), half = 0.5 * (e - s), panel = 0.0;
            for (std::size_t k = 0; k < rule.nodes.size(); ++k)
                panel += rule.weights[k] * dot((*field_)(bp + (mid + half * rule.nodes[k]) * d), d);
            value += half * panel;
            s = e;
        }
    }

    std::unique_lock lock(cache_->mutex);
    if (cache_->values.size() >= options_.cache_capacity) cache_->values.clear();
    cache_->values.emplace(key, value);
    return value;
}

Vec2 LocalPotential::negative_gradient(Vec2 q, double h) const {
    const double dvdx = ((*this)(q + Vec2{h, 0.0}) - (*this)(q - Vec2{h, 0.0})) / (2.0 * h);
    const double dvdy = ((*this)(q + Vec2{0.0, h}) - (*this)(q - Vec2{0.0, h})) / (2.0 * h);
    return {-dvdx, -dvdy};
}

LocalPotential LocalPotential::shifted(double a) const {
    LocalPotential copy = *this;
    copy.gauge_ += a;
    return copy;
}

LocalPotential local_potential(const FieldOneForm& f, const Chart& chart, double gauge, PotentialOptions options) {
    return LocalPotential(std::make_shared<const FieldOneForm>(f), chart, gauge, options);
}

PotentialSet::PotentialSet(std::shared_ptr<const FieldOneForm> field, std::vector<LocalPotential> potentials)
    : field_(std::move(field)), potentials_(std::move(potentials)) {}

const LocalPotential& PotentialSet::operator[](int chart_id) const {
    for (const auto& p : potentials_)
        if (p.chart().id == chart_id) return p;
    throw ValidationError("no potential for chart " + std::to_string(chart_id));
}

std::vector<double> PotentialSet::gauges() const {
    std::vector<double> out;
    for (const auto& p : potentials_) out.push_back(p.gauge());
    return out;
}

PotentialSet build_potentials(const FieldOneForm& f, const Atlas& atlas, std::vector<double> gauges,
                              PotentialOptions options) {
    if (gauges.empty()) gauges.assign(atlas.size(), 0.0);
    if (gauges.size() != atlas.size()) throw ValidationError("need one gauge per chart");
    auto field = std::make_shared<const FieldOneForm>(f);
    std::vector<LocalPotential> pots;
    for (std::size_t i = 0; i < atlas.size(); ++i)
        pots.emplace_back(field, atlas.charts()[i], gauges[i], options);
    return PotentialSet(field, std::move(pots));
}

PotentialSet gauge_shift(const PotentialSet& ps, std::span<const double> a) {
    if (a.size() != ps.potentials().size()) throw ValidationError("gauge shift needs one offset per chart");
    std::vector<LocalPotential> pots;
    for (std::size_t i = 0; i < a.size(); ++i) pots.push_back(ps.potentials()[i].shifted(a[i]));
    return PotentialSet(ps.field_ptr(), std::move(pots));
}

}  // namespace locons
