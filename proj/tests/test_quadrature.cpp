#include "doctest.h"

#include <cmath>

#include "locons/errors.hpp"
#include "locons/quadrature.hpp"

using namespace locons;

TEST_CASE("gauss-legendre nodes and weights") {
    auto g2 = gauss_legendre(2);
    REQUIRE(g2.nodes.size() == 2);
    CHECK(g2.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(g2.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(g2.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
    auto g3 = gauss_legendre(3);
    CHECK(g3.nodes[1] == doctest::Approx(0.0));
    CHECK(g3.weights[1] == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
    CHECK(g3.nodes[2] == doctest::Approx(std::sqrt(0.6)).epsilon(1e-15));
    for (int n = 1; n <= 20; ++n) {
        auto g = gauss_legendre(n);
        double sum = 0.0;
        for (double w : g.weights) sum += w;
        CHECK(sum == doctest::Approx(2.0).epsilon(1e-13));
    }
    CHECK_THROWS_AS(gauss_legendre(0), ValidationError);
}

TEST_CASE("polynomial exactness") {
    // integral of x^k over [0, 2] is 2^(k+1)/(k+1)
    auto mono = [](int k) { return [k](double x) { return std::pow(x, k); }; };
    for (int k = 0; k <= 3; ++k)
        CHECK(integrate(mono(k), 0, 2, Quadrature::simpson(1)) ==
              doctest::Approx(std::pow(2.0, k + 1) / (k + 1)).epsilon(1e-14));
    for (int n = 1; n <= 8; ++n)
        for (int k = 0; k <= 2 * n - 1; ++k)
            CHECK(integrate(mono(k), 0, 2, Quadrature::gauss(n, 1)) ==
                  doctest::Approx(std::pow(2.0, k + 1) / (k + 1)).epsilon(1e-13));
    CHECK(integrate(mono(1), 0, 2, Quadrature::trapezoid(1)) == doctest::Approx(2.0));
}

TEST_CASE("convergence orders") {
    auto f = [](double x) { return std::exp(x); };
    const double exact = std::exp(1.0) - 1.0;
    double t1 = std::abs(integrate(f, 0, 1, Quadrature::trapezoid(20)) - exact);
    double t2 = std::abs(integrate(f, 0, 1, Quadrature::trapezoid(40)) - exact);
    CHECK(t1 / t2 == doctest::Approx(4.0).epsilon(0.01));
    double s1 = std::abs(integrate(f, 0, 1, Quadrature::simpson(4)) - exact);
    double s2 = std::abs(integrate(f, 0, 1, Quadrature::simpson(8)) - exact);
    CHECK(s1 / s2 == doctest::Approx(16.0).epsilon(0.02));
}

TEST_CASE("reversed interval negates") {
    auto f = [](double x) { return std::sin(x); };
    for (auto q : {Quadrature::trapezoid(50), Quadrature::simpson(50), Quadrature::gauss(5, 10)})
        CHECK(integrate(f, 2, 0.5, q) == doctest::Approx(-integrate(f, 0.5, 2, q)).epsilon(1e-14));
}

TEST_CASE("rule names") {
    CHECK(parse_quadrature("simpson").rule == QuadRule::Simpson);
    CHECK(parse_quadrature("trapezoid").rule == QuadRule::Trapezoid);
    auto g = parse_quadrature("gauss(6)");
    CHECK(g.rule == QuadRule::Gauss);
    CHECK(g.gauss_nodes == 6);
    CHECK(parse_quadrature("gauss:3").gauss_nodes == 3);
    CHECK(parse_quadrature(to_string(g)).gauss_nodes == 6);
    CHECK_THROWS_AS(parse_quadrature("romberg"), ParseError);
}
