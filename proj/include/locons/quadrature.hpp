#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace locons {

enum class QuadRule { Trapezoid, Simpson, Gauss };

/// Composite rule: [a, b] is split into `segments` equal panels and the
/// base rule is applied on each. Gauss uses `gauss_nodes` Legendre nodes
/// per panel.
struct Quadrature {
    QuadRule rule = QuadRule::Simpson;
    int segments = 2000;
    int gauss_nodes = 8;

    static Quadrature trapezoid(int segments = 2000) { return {QuadRule::Trapezoid, segments, 0}; }
    static Quadrature simpson(int segments = 2000) { return {QuadRule::Simpson, segments, 0}; }
    static Quadrature gauss(int nodes = 8, int segments = 2000) {
        return {QuadRule::Gauss, segments, nodes};
    }
};

/// Parses "trapezoid", "simpson" or "gauss(n)" / "gauss:n".
Quadrature parse_quadrature(std::string_view text, int segments = 2000);
std::string to_string(const Quadrature& q);

struct GaussLegendre {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;
};

/// Nodes and weights of the n-point Gauss-Legendre rule (Newton iteration on
/// the Legendre recurrence).
GaussLegendre gauss_legendre(int n);

/// Integrates g over [a, b] (b < a allowed, giving the negated integral).
/// Panels are summed left to right so results are reproducible.
double integrate(const std::function<double(double)>& g, double a, double b, const Quadrature& q);

}  // namespace locons
