#include "doctest.h"

#include <cmath>

#include "locons/cocycle.hpp"
#include "locons/errors.hpp"
#include "locons/fields.hpp"

using namespace locons;

namespace {

// Brute-force angle accumulation about q over n uniform samples.
double brute_angle(const std::function<Vec2(double)>& c, double t0, double t1, int n, Vec2 q) {
    double total = 0.0;
    Vec2 prev = c(t0) - q;
    for (int k = 1; k <= n; ++k) {
        Vec2 cur = c(t0 + (t1 - t0) * k / n) - q;
        total += std::atan2(prev.x * cur.y - prev.y * cur.x, prev.x * cur.x + prev.y * cur.y);
        prev = cur;
    }
    return total;
}

}  // namespace

TEST_CASE("vortex built-in") {
    FieldOneForm f = vortex_field();
    REQUIRE(f.singular_points.size() == 1);
    CHECK(f.singular_points[0] == Vec2{0, 0});
    Vec2 v = f({0, 2});
    CHECK(v.x == doctest::Approx(-0.5));
    CHECK(v.y == 0.0);
    CHECK_THROWS_AS(f({1e-10, 0}), SingularityError);
    CHECK(f.clearance({3, 4}) == 5.0);
}

TEST_CASE("closedness") {
    ClosednessReport r = is_closed(vortex_field(), {0.5, 0.5, 2, 2}, 20, 1e-5, 1e-5);
    CHECK(r.closed);
    CHECK(r.max_residual < 1e-5);
    ClosednessReport x = is_closed(builtin_field("xdy"), {0.5, 0.5, 2, 2});
    CHECK_FALSE(x.closed);
    CHECK(x.max_residual == doctest::Approx(1.0).epsilon(1e-6));
    ClosednessReport e = is_closed(builtin_field("exact"), {-2, -2, 2, 2});
    CHECK(e.closed);
    CHECK(e.max_residual < 1e-6);
    CHECK_THROWS_AS(is_closed(vortex_field(), {-1, -1, 1, 1}), SingularityError);
    CHECK_THROWS_AS(is_closed(vortex_field(), {0.5, 0.5, 2, 2}, 1), ValidationError);
}

TEST_CASE("work along circles") {
    FieldOneForm f = vortex_field();
    CHECK(std::abs(work(f, PlanarPath::circle({0, 0}, 1, 1)) - 2 * M_PI) < 1e-8);
    CHECK(std::abs(work(f, PlanarPath::circle({2, 0}, 0.3, 1))) < 1e-8);
    CHECK(std::abs(work(f, PlanarPath::circle({0, 0}, 1, -2)) + 4 * M_PI) < 1e-7);
    for (auto q : {Quadrature::trapezoid(), Quadrature::gauss(8, 200)})
        CHECK(std::abs(work(f, PlanarPath::circle({0, 0}, 1, 1, 2000), q) - 2 * M_PI) < 1e-8);
}

TEST_CASE("work-winding law on assorted loops") {
    FieldOneForm f = vortex_field();
    const char* specs[] = {"circle:0,0,1,1",          "circle:0.5,0.2,2,3",    "circle:3,3,1,-1",
                           "poly:2,-2;2,2;-2,2;-2,-2;2,-2", "poly:2,2;-2,2;-2,-2;2,-2;2,2;-2,2;-2,-2;2,-2;2,2",
                           "param:(2+cos(3*t))*cos(t),(2+cos(3*t))*sin(t),0,4*pi,4000"};
    for (const char* s : specs) {
        PlanarPath c = parse_path_spec(s);
        REQUIRE(c.closed());
        WindingNumber w = winding_number(c, {0, 0});
        CHECK_MESSAGE(std::abs(work(f, c) - 2 * M_PI * w.n) < 1e-7, s);
    }
}

TEST_CASE("winding numbers") {
    WindingNumber a = winding_number(PlanarPath::circle({0, 0}, 1, 1), {0, 0});
    CHECK(a.n == 1);
    CHECK(a.residual < 1e-10);
    WindingNumber b = winding_number(parse_path_spec("poly:2,2;2,-2;-2,-2;-2,2;2,2"), {0, 0});
    CHECK(b.n == -1);
    CHECK(b.residual < 1e-10);
    auto limacon = [](double t) {
        double r = 2 + std::cos(3 * t);
        return Vec2{r * std::cos(t), r * std::sin(t)};
    };
    WindingNumber c = winding_number(PlanarPath::parametric(limacon, 0, 4 * M_PI, 400), {0, 0});
    double oracle = brute_angle(limacon, 0, 4 * M_PI, 100000, {0, 0});
    CHECK(c.n == 2);
    CHECK(c.residual < 1e-9);
    CHECK(std::abs(c.total_angle - oracle) < 1e-9);
    CHECK(winding_number(PlanarPath::circle({0, 0}, 1, 1), {5, 0}).n == 0);
    CHECK_THROWS_AS(winding_number(parse_path_spec("poly:1,0;2,0"), {0, 0}), ValidationError);
    CHECK_THROWS_AS(winding_number(parse_path_spec("poly:-1,0;1,0;0,1;-1,0"), {0, 0}), NumericError);
}

TEST_CASE("work is additive, odd under reversal and parametrization invariant") {
    FieldOneForm f = builtin_field("xdy");
    PlanarPath a = parse_path_spec("poly:1,0;2,1;0,3");
    PlanarPath b = parse_path_spec("param:0,3-t,0,2,500");
    CHECK(std::abs(work(f, a.then(b)) - work(f, a) - work(f, b)) < 1e-10);
    CHECK(std::abs(work(f, a.reversed()) + work(f, a)) < 1e-10);
    CHECK(std::abs(work(f, b.reversed()) + work(f, b)) < 1e-10);

    FieldOneForm v = vortex_field();
    PlanarPath c1 = PlanarPath::circle({0, 0}, 1, 1);
    PlanarPath c2 = PlanarPath::parametric(
        [](double s) { return Vec2{std::cos(2 * M_PI * s * s), std::sin(2 * M_PI * s * s)}; }, 0, 1, 2000);
    CHECK(std::abs(work(v, c1) - work(v, c2)) < 1e-9);
    // x dy around the unit circle encloses area pi
    CHECK(std::abs(work(f, c1) - M_PI) < 1e-9);
}

TEST_CASE("paths") {
    PlanarPath c = parse_path_spec("circle:1,2,3,0.25");
    CHECK(distance(c.start(), {4, 2}) < 1e-15);
    CHECK(distance(c.end(), {1, 5}) < 1e-12);
    CHECK_FALSE(c.closed());
    CHECK(parse_path_spec("param:cos(t),sin(t),0,2*pi,100").closed());
    CHECK_THROWS_AS(parse_path_spec("spiral:1"), ParseError);
    CHECK_THROWS_AS(parse_path_spec("poly:1,0"), ValidationError);
    CHECK_THROWS_AS(PlanarPath::circle({0, 0}, 1, 1).then(parse_path_spec("poly:0,0;1,1")), ValidationError);
    CHECK_THROWS_AS(work(vortex_field(), parse_path_spec("poly:-1,0;1,0")), SingularityError);
    CHECK(split_top_level("atan2(y,x), 2", ',') == std::vector<std::string>{"atan2(y,x)", "2"});
}

TEST_CASE("classification") {
    Atlas atlas = quadrant_atlas();
    auto regions = default_probe_regions();
    CHECK(classify(vortex_field(), atlas, regions).kind == FieldClass::ClosedNotExact);
    CHECK(classify(builtin_field("exact"), atlas, regions).kind == FieldClass::Exact);
    CHECK(classify(builtin_field("xdy"), atlas, regions).kind == FieldClass::NotClosed);
    CHECK(to_string(FieldClass::ClosedNotExact) == "closed-not-exact");
}
