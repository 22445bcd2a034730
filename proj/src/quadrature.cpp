#include "locons/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "locons/errors.hpp"
#include "locons/expr.hpp"

namespace locons {

namespace {

// P_n(z) and P_n'(z) by the three-term recurrence.
std::pair<double, double> legendre(int n, double z) {
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
    }
    if (n == 1) p0 = 1.0;
    return {p1, n * (z * p1 - p0) / (z * z - 1.0)};
}

}  // namespace

GaussLegendre gauss_legendre(int n) {
    if (n < 1 || n > 64) throw ValidationError("gauss-legendre order must be in 1..64");
    GaussLegendre gl;
    gl.nodes.resize(static_cast<std::size_t>(n));
    gl.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, dp] = legendre(n, z);
            const double dz = p / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-16) break;
        }
        const double dp = legendre(n, z).second;
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        gl.nodes[lo] = -z;
        gl.nodes[hi] = z;
        gl.weights[lo] = w;
        gl.weights[hi] = w;
    }
    if (n % 2 == 1) gl.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return gl;
}

double integrate(const std::function<double(double)>& g, double a, double b, const Quadrature& q) {
    if (q.segments < 1) throw ValidationError("quadrature needs at least one segment");
    const int n = q.segments;
    const double h = (b - a) / n;
    double sum = 0.0;
    switch (q.rule) {
    case QuadRule::Trapezoid: {
        double left = g(a);
        for (int k = 1; k <= n; ++k) {
            const double right = g(k == n ? b : a + k * h);
            sum += 0.5 * h * (left + right);
            left = right;
        }
        break;
    }
    case QuadRule::Simpson: {
        double left = g(a);
        for (int k = 1; k <= n; ++k) {
            const double mid = g(a + (k - 0.5) * h);
            const double right = g(k == n ? b : a + k * h);
            sum += h / 6.0 * (left + 4.0 * mid + right);
            left = right;
        }
        break;
    }
    case QuadRule::Gauss: {
        const GaussLegendre gl = gauss_legendre(q.gauss_nodes);
        for (int k = 0; k < n; ++k) {
            const double lo = a + k * h;
            const double c = lo + 0.5 * h;
            double panel = 0.0;
            for (std::size_t i = 0; i < gl.nodes.size(); ++i)
                panel += gl.weights[i] * g(c + 0.5 * h * gl.nodes[i]);
            sum += 0.5 * h * panel;
        }
        break;
    }
    }
    return sum;
}

Quadrature parse_quadrature(std::string_view text, int segments) {
    if (text == "trapezoid") return Quadrature::trapezoid(segments);
    if (text == "simpson") return Quadrature::simpson(segments);
    if (text.starts_with("gauss")) {
        std::string_view rest = text.substr(5);
        if (rest.empty()) return Quadrature::gauss(8, segments);
        if (rest.front() == ':') rest.remove_prefix(1);
        else if (rest.front() == '(' && rest.back() == ')') rest = rest.substr(1, rest.size() - 2);
        else throw ParseError(5, "parse error at byte 5: expected '(' or ':' after gauss");
        const double n = expr::parse_constant(rest);
        if (n != std::floor(n) || n < 1 || n > 64)
            throw ValidationError("gauss order must be an integer in 1..64");
        return Quadrature::gauss(static_cast<int>(n), segments);
    }
    throw ParseError(0, "parse error at byte 0: expected trapezoid, simpson or gauss(n)");
}

std::string to_string(const Quadrature& q) {
    switch (q.rule) {
    case QuadRule::Trapezoid: return "trapezoid";
    case QuadRule::Simpson: return "simpson";
    case QuadRule::Gauss: return "gauss(" + std::to_string(q.gauss_nodes) + ")";
    }
    return "?";
}

}  // namespace locons
