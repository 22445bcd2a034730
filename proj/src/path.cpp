#include "locons/path.hpp"

#include <cctype>
#include <cmath>

#include "locons/errors.hpp"

namespace locons {

PlanarPath PlanarPath::polyline(std::vector<Vec2> vertices) {
    if (vertices.size() < 2) throw ValidationError("a polyline needs at least two vertices");
    PlanarPath p;
    p.pieces_.push_back(Polyline{std::move(vertices)});
    return p;
}

PlanarPath PlanarPath::parametric(std::function<Vec2(double)> point, double t0, double t1, int samples) {
    if (samples < 1) throw ValidationError("a parametric path needs at least one segment");
    if (!(t0 != t1) || !std::isfinite(t0) || !std::isfinite(t1))
        throw ValidationError("a parametric path needs a finite, non-empty parameter range");
    PlanarPath p;
    p.pieces_.push_back(Parametric{std::move(point), t0, t1, samples});
    return p;
}

PlanarPath PlanarPath::from_exprs(const expr::Expr& x_of_t, const expr::Expr& y_of_t, double t0,
                                  double t1, int samples) {
    return parametric(
        [x_of_t, y_of_t](double t) {
            const double v[1] = {t};
            return Vec2{x_of_t.eval(v), y_of_t.eval(v)};
        },
        t0, t1, samples);
}

PlanarPath PlanarPath::circle(Vec2 center, double radius, double turns, int samples) {
    if (!(radius > 0.0)) throw ValidationError("circle radius must be positive");
    if (turns == 0.0) throw ValidationError("circle needs a non-zero number of turns");
    return parametric(
        [center, radius](double t) {
            return Vec2{center.x + radius * std::cos(t), center.y + radius * std::sin(t)};
        },
        0.0, kTwoPi * turns, samples);
}

PlanarPath PlanarPath::reversed() const {
    PlanarPath r;
    for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
        if (const auto* poly = std::get_if<Polyline>(&*it)) {
            r.pieces_.push_back(Polyline{{poly->vertices.rbegin(), poly->vertices.rend()}});
        } else {
            const auto& par = std::get<Parametric>(*it);
            const double sum = par.t0 + par.t1;
            r.pieces_.push_back(
                Parametric{[fn = par.point, sum](double s) { return fn(sum - s); }, par.t0, par.t1, par.samples});
        }
    }
    return r;
}

PlanarPath PlanarPath::then(const PlanarPath& next) const {
    if (distance(end(), next.start()) > 1e-9)
        throw ValidationError("concatenated paths do not meet (gap " +
                              expr::format_double(distance(end(), next.start())) + ")");
    PlanarPath r = *this;
    r.pieces_.insert(r.pieces_.end(), next.pieces_.begin(), next.pieces_.end());
    return r;
}

namespace {

Vec2 piece_start(const PlanarPath::Piece& piece) {
    if (const auto* poly = std::get_if<PlanarPath::Polyline>(&piece)) return poly->vertices.front();
    const auto& par = std::get<PlanarPath::Parametric>(piece);
    return par.point(par.t0);
}

Vec2 piece_end(const PlanarPath::Piece& piece) {
    if (const auto* poly = std::get_if<PlanarPath::Polyline>(&piece)) return poly->vertices.back();
    const auto& par = std::get<PlanarPath::Parametric>(piece);
    return par.point(par.t1);
}

double param_at(const PlanarPath::Parametric& par, int k) {
    if (k == par.samples) return par.t1;
    return par.t0 + (par.t1 - par.t0) * k / par.samples;
}

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

// Angle swept by (p - center) from a to b, refining the step until it is
// small enough that the principal value is the continuous increment.
struct AngleWalker {
    Vec2 center;
    int max_depth;

    double step(const std::function<Vec2(double)>& at, double s0, Vec2 p0, double s1, Vec2 p1, int depth) const {
        const Vec2 a = p0 - center;
        const Vec2 b = p1 - center;
        if ((a.x == 0.0 && a.y == 0.0) || (b.x == 0.0 && b.y == 0.0))
            throw NumericError("path passes through the winding center");
        const double d = angle_between(a, b);
        if (std::fabs(d) < 0.5 * kPi) return d;
        if (depth >= max_depth)
            throw NumericError("angle refinement exceeded depth " + std::to_string(max_depth) +
                               " (path too coarse or through the center)");
        const double sm = 0.5 * (s0 + s1);
        const Vec2 pm = at(sm);
        return step(at, s0, p0, sm, pm, depth + 1) + step(at, sm, pm, s1, p1, depth + 1);
    }
};

}  // namespace

Vec2 PlanarPath::start() const { return piece_start(pieces_.front()); }
Vec2 PlanarPath::end() const { return piece_end(pieces_.back()); }

std::vector<Vec2> PlanarPath::samples() const {
    std::vector<Vec2> out;
    for (const Piece& piece : pieces_) {
        const std::size_t first = out.empty() ? 0 : 1;
        if (const auto* poly = std::get_if<Polyline>(&piece)) {
            out.insert(out.end(), poly->vertices.begin() + static_cast<std::ptrdiff_t>(first), poly->vertices.end());
        } else {
            const auto& par = std::get<Parametric>(piece);
            for (int k = static_cast<int>(first); k <= par.samples; ++k) out.push_back(par.point(param_at(par, k)));
        }
    }
    return out;
}

double accumulated_angle(const PlanarPath& path, Vec2 center, int max_depth) {
    const AngleWalker walker{center, max_depth};
    double total = 0.0;
    for (const auto& piece : path.pieces()) {
        if (const auto* poly = std::get_if<PlanarPath::Polyline>(&piece)) {
            for (std::size_t i = 0; i + 1 < poly->vertices.size(); ++i) {
                const Vec2 a = poly->vertices[i];
                const Vec2 b = poly->vertices[i + 1];
                const auto at = [a, b](double s) { return a + s * (b - a); };
                total += walker.step(at, 0.0, a, 1.0, b, 0);
            }
        } else {
            const auto& par = std::get<PlanarPath::Parametric>(piece);
            double s0 = par.t0;
            Vec2 p0 = par.point(s0);
            for (int k = 1; k <= par.samples; ++k) {
                const double s1 = param_at(par, k);
                const Vec2 p1 = par.point(s1);
                total += walker.step(par.point, s0, p0, s1, p1, 0);
                s0 = s1;
                p0 = p1;
            }
        }
    }
    return total;
}

std::vector<std::string> split_top_level(std::string_view text, char sep) {
    std::vector<std::string> parts;
    int depth = 0;
    std::size_t begin = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '(') ++depth;
        else if (text[i] == ')') --depth;
        else if (text[i] == sep && depth == 0) {
            parts.push_back(trim(text.substr(begin, i - begin)));
            begin = i + 1;
        }
    }
    parts.push_back(trim(text.substr(begin)));
    return parts;
}

Vec2 parse_point(std::string_view text) {
    const auto parts = split_top_level(text, ',');
    if (parts.size() != 2) throw ParseError(0, "parse error at byte 0: expected a point 'x,y'");
    return {expr::parse_constant(parts[0]), expr::parse_constant(parts[1])};
}

PlanarPath parse_path_spec(std::string_view spec) {
    const std::size_t colon = spec.find(':');
    if (colon == std::string_view::npos)
        throw ParseError(0, "parse error at byte 0: expected 'circle:', 'poly:' or 'param:'");
    const std::string_view kind = spec.substr(0, colon);
    const std::string_view body = spec.substr(colon + 1);

    if (kind == "circle") {
        const auto parts = split_top_level(body, ',');
        if (parts.size() != 4 && parts.size() != 5)
            throw ParseError(colon + 1, "parse error at byte " + std::to_string(colon + 1) +
                                            ": expected circle:cx,cy,r,turns[,N]");
        const Vec2 c{expr::parse_constant(parts[0]), expr::parse_constant(parts[1])};
        const double r = expr::parse_constant(parts[2]);
        const double turns = expr::parse_constant(parts[3]);
        const int n = parts.size() == 5 ? static_cast<int>(expr::parse_constant(parts[4])) : 2000;
        return PlanarPath::circle(c, r, turns, n);
    }
    if (kind == "poly") {
        std::vector<Vec2> vertices;
        for (const auto& v : split_top_level(body, ';')) vertices.push_back(parse_point(v));
        return PlanarPath::polyline(std::move(vertices));
    }
    if (kind == "param") {
        const auto parts = split_top_level(body, ',');
        if (parts.size() != 5)
            throw ParseError(colon + 1, "parse error at byte " + std::to_string(colon + 1) +
                                            ": expected param:xexpr,yexpr,t0,t1,N");
        const auto x = expr::parse(parts[0], {"t"});
        const auto y = expr::parse(parts[1], {"t"});
        const double n = expr::parse_constant(parts[4]);
        if (n < 1 || n != std::floor(n)) throw ValidationError("param sample count must be a positive integer");
        return PlanarPath::from_exprs(x, y, expr::parse_constant(parts[2]), expr::parse_constant(parts[3]),
                                      static_cast<int>(n));
    }
    throw ParseError(0, "parse error at byte 0: expected 'circle:', 'poly:' or 'param:'");
}

}  // namespace locons
