#pragma once

// Exterior calculus on euclidean 3-space with the orientation (x, y, z).
//
// Forms are stored in a fixed ordered basis:
//   degree 0: 1
//   degree 1: dx, dy, dz
//   degree 2: dx^dy, dx^dz, dy^dz
//   degree 3: dx^dy^dz
// Derivatives are central finite differences with step h.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "locons/expr.hpp"
#include "locons/geometry.hpp"

namespace locons::forms {

using ScalarField3 = std::function<double(const Vec3&)>;

inline constexpr double kDefaultStep = 1e-4;

/// Number of basis elements of a degree-k form on E^3, C(3, k).
int basis_size(int degree);

/// Basis element as a bit mask over {dx = 1, dy = 2, dz = 4}.
int basis_mask(int degree, int index);
std::string basis_name(int degree, int index);

ScalarField3 constant(double c);

/// Field over the variables x, y, z.
ScalarField3 scalar_field(const expr::Expr& e);

struct VectorField3 {
    ScalarField3 vx, vy, vz;

    Vec3 operator()(const Vec3& p) const { return {vx(p), vy(p), vz(p)}; }
    static VectorField3 constant(Vec3 v);
};

class FormField {
public:
    FormField(int degree, std::vector<ScalarField3> components);

    static FormField zero(int degree);
    static FormField basis(int degree, int index, double coefficient = 1.0);
    /// Constant coefficients in basis order.
    static FormField constant(int degree, const std::vector<double>& coefficients);

    int degree() const noexcept { return degree_; }
    const std::vector<ScalarField3>& components() const noexcept { return components_; }
    const ScalarField3& component(int index) const { return components_.at(static_cast<std::size_t>(index)); }

    /// Coefficients at p, in basis order.
    std::vector<double> at(const Vec3& p) const;

private:
    int degree_;
    std::vector<ScalarField3> components_;
};

/// One row of the Hodge star table: star(in) = sign * out.
struct StarRow {
    int in_degree;
    int in_index;
    int out_index;
    int sign;
};

/// The eight rows, in the order 1, dx, dy, dz, dx^dy, dx^dz, dy^dz, dx^dy^dz.
const std::array<StarRow, 8>& star_table();

FormField flat(const VectorField3& v);
VectorField3 sharp(const FormField& a);
FormField hodge(const FormField& a);
FormField wedge(const FormField& a, const FormField& b);
FormField ext_d(const FormField& a, double h = kDefaultStep);

VectorField3 grad(const ScalarField3& f, double h = kDefaultStep);
VectorField3 curl(const VectorField3& v, double h = kDefaultStep);
ScalarField3 div(const VectorField3& v, double h = kDefaultStep);

/// Worst residuals of the algebraic and differential identities, over
/// `samples` pseudo-random constant vectors / sample points.
struct IdentityResiduals {
    double star_star = 0.0;       // max |**a - a| over basis forms
    double cross_product = 0.0;   // max |[*(v^w)]# - v x w|
    double scalar_product = 0.0;  // max |v^*(w) - (v.w) dx^dy^dz|
    double curl_grad = 0.0;       // max |curl grad f|
    double div_curl = 0.0;        // max |div curl v|
    double step = kDefaultStep;
};

IdentityResiduals identity_residuals(int samples, unsigned seed, double h = kDefaultStep);

}  // namespace locons::forms
