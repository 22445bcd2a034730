#include "locons/forms3.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "locons/errors.hpp"

namespace locons::forms {

namespace {

constexpr std::array<std::array<int, 3>, 4> kMasks = {{
    {0, -1, -1},
    {1, 2, 4},
    {3, 5, 6},
    {7, -1, -1},
}};

constexpr std::array<StarRow, 8> kStar = {{
    {0, 0, 0, +1},  // *1        = dx^dy^dz
    {1, 0, 2, +1},  // *dx       = dy^dz
    {1, 1, 1, -1},  // *dy       = -dx^dz
    {1, 2, 0, +1},  // *dz       = dx^dy
    {2, 0, 2, +1},  // *(dx^dy)  = dz
    {2, 1, 1, -1},  // *(dx^dz)  = -dy
    {2, 2, 0, +1},  // *(dy^dz)  = dx
    {3, 0, 0, +1},  // *(dx^dy^dz) = 1
}};

void check_degree(int degree) {
    if (degree < 0 || degree > 3) throw ValidationError("form degree must be in 0..3");
}

int index_of_mask(int degree, int mask) {
    for (int i = 0; i < basis_size(degree); ++i)
        if (kMasks[static_cast<std::size_t>(degree)][static_cast<std::size_t>(i)] == mask) return i;
    throw ValidationError("no basis element for mask " + std::to_string(mask));
}

// Sign of the permutation sorting the concatenation (a, b) of two sorted,
// disjoint index sets: one transposition per pair i in a, j in b with i > j.
int wedge_sign(int a, int b) {
    int inversions = 0;
    for (int i = 0; i < 3; ++i) {
        if (!(a & (1 << i))) continue;
        for (int j = 0; j < i; ++j)
            if (b & (1 << j)) ++inversions;
    }
    return inversions % 2 == 0 ? 1 : -1;
}

Vec3 offset(Vec3 p, int axis, double d) {
    p[axis] += d;
    return p;
}

ScalarField3 partial(ScalarField3 f, int axis, double h) {
    return [f = std::move(f), axis, h](const Vec3& p) {
        return (f(offset(p, axis, h)) - f(offset(p, axis, -h))) / (2.0 * h);
    };
}

}  // namespace

int basis_size(int degree) {
    check_degree(degree);
    return degree == 0 || degree == 3 ? 1 : 3;
}

int basis_mask(int degree, int index) {
    if (index < 0 || index >= basis_size(degree)) throw ValidationError("basis index out of range");
    return kMasks[static_cast<std::size_t>(degree)][static_cast<std::size_t>(index)];
}

std::string basis_name(int degree, int index) {
    const int mask = basis_mask(degree, index);
    if (mask == 0) return "1";
    static constexpr const char* kNames[] = {"dx", "dy", "dz"};
    std::string s;
    for (int i = 0; i < 3; ++i) {
        if (!(mask & (1 << i))) continue;
        if (!s.empty()) s += "^";
        s += kNames[i];
    }
    return s;
}

ScalarField3 constant(double c) {
    return [c](const Vec3&) { return c; };
}

ScalarField3 scalar_field(const expr::Expr& e) {
    if (e.variables() != std::vector<std::string>{"x", "y", "z"})
        throw ValidationError("3-D scalar fields must be expressions over x, y, z");
    return [e](const Vec3& p) {
        const double v[3] = {p.x, p.y, p.z};
        return e.eval(v);
    };
}

VectorField3 VectorField3::constant(Vec3 v) {
    return {forms::constant(v.x), forms::constant(v.y), forms::constant(v.z)};
}

FormField::FormField(int degree, std::vector<ScalarField3> components)
    : degree_(degree), components_(std::move(components)) {
    if (static_cast<int>(components_.size()) != basis_size(degree))
        throw ValidationError("degree-" + std::to_string(degree) + " form needs " +
                              std::to_string(basis_size(degree)) + " components");
}

FormField FormField::zero(int degree) {
    return FormField(degree, std::vector<ScalarField3>(static_cast<std::size_t>(basis_size(degree)),
                                                       forms::constant(0.0)));
}

FormField FormField::basis(int degree, int index, double coefficient) {
    FormField f = zero(degree);
    if (index < 0 || index >= basis_size(degree)) throw ValidationError("basis index out of range");
    f.components_[static_cast<std::size_t>(index)] = forms::constant(coefficient);
    return f;
}

FormField FormField::constant(int degree, const std::vector<double>& coefficients) {
    std::vector<ScalarField3> comps;
    for (double c : coefficients) comps.push_back(forms::constant(c));
    return FormField(degree, std::move(comps));
}

std::vector<double> FormField::at(const Vec3& p) const {
    std::vector<double> out;
    out.reserve(components_.size());
    for (const auto& c : components_) out.push_back(c(p));
    return out;
}

const std::array<StarRow, 8>& star_table() { return kStar; }

FormField flat(const VectorField3& v) { return FormField(1, {v.vx, v.vy, v.vz}); }

VectorField3 sharp(const FormField& a) {
    if (a.degree() != 1) throw ValidationError("sharp is defined on 1-forms only");
    return {a.component(0), a.component(1), a.component(2)};
}

FormField hodge(const FormField& a) {
    const int k = a.degree();
    std::vector<ScalarField3> out(static_cast<std::size_t>(basis_size(3 - k)));
    for (const StarRow& row : kStar) {
        if (row.in_degree != k) continue;
        ScalarField3 c = a.component(row.in_index);
        out[static_cast<std::size_t>(row.out_index)] =
            row.sign > 0 ? c : ScalarField3([c](const Vec3& p) { return -c(p); });
    }
    return FormField(3 - k, std::move(out));
}

FormField wedge(const FormField& a, const FormField& b) {
    const int k = a.degree() + b.degree();
    if (k > 3) throw ValidationError("wedge product degree exceeds 3");
    struct Term {
        ScalarField3 fa, fb;
        int sign;
    };
    std::vector<std::vector<Term>> terms(static_cast<std::size_t>(basis_size(k)));
    for (int i = 0; i < basis_size(a.degree()); ++i) {
        for (int j = 0; j < basis_size(b.degree()); ++j) {
            const int ma = basis_mask(a.degree(), i);
            const int mb = basis_mask(b.degree(), j);
            if (ma & mb) continue;
            terms[static_cast<std::size_t>(index_of_mask(k, ma | mb))].push_back(
                {a.component(i), b.component(j), wedge_sign(ma, mb)});
        }
    }
    std::vector<ScalarField3> out;
    for (auto& list : terms) {
        out.push_back([list = std::move(list)](const Vec3& p) {
            double s = 0.0;
            for (const Term& t : list) s += t.sign * (t.fa(p) * t.fb(p));
            return s;
        });
    }
    return FormField(k, std::move(out));
}

FormField ext_d(const FormField& a, double h) {
    if (!(h > 0.0)) throw ValidationError("finite-difference step must be positive");
    const int k = a.degree();
    if (k > 2) throw ValidationError("exterior derivative needs a form of degree at most 2");
    struct Term {
        ScalarField3 df;
        int sign;
    };
    std::vector<std::vector<Term>> terms(static_cast<std::size_t>(basis_size(k + 1)));
    for (int i = 0; i < basis_size(k); ++i) {
        const int mi = basis_mask(k, i);
        for (int axis = 0; axis < 3; ++axis) {
            const int mj = 1 << axis;
            if (mi & mj) continue;
            terms[static_cast<std::size_t>(index_of_mask(k + 1, mi | mj))].push_back(
                {partial(a.component(i), axis, h), wedge_sign(mj, mi)});
        }
    }
    std::vector<ScalarField3> out;
    for (auto& list : terms) {
        out.push_back([list = std::move(list)](const Vec3& p) {
            double s = 0.0;
            for (const Term& t : list) s += t.sign * t.df(p);
            return s;
        });
    }
    return FormField(k + 1, std::move(out));
}

VectorField3 grad(const ScalarField3& f, double h) {
    return sharp(ext_d(FormField(0, {f}), h));
}

VectorField3 curl(const VectorField3& v, double h) {
    return sharp(hodge(ext_d(flat(v), h)));
}

ScalarField3 div(const VectorField3& v, double h) {
    return hodge(ext_d(hodge(flat(v)), h)).component(0);
}

IdentityResiduals identity_residuals(int samples, unsigned seed, double h) {
    IdentityResiduals r;
    r.step = h;
    const Vec3 origin{0.0, 0.0, 0.0};

    for (int k = 0; k <= 3; ++k) {
        for (int i = 0; i < basis_size(k); ++i) {
            const auto back = hodge(hodge(FormField::basis(k, i))).at(origin);
            for (int j = 0; j < basis_size(k); ++j)
                r.star_star = std::max(r.star_star, std::fabs(back[static_cast<std::size_t>(j)] - (i == j ? 1.0 : 0.0)));
        }
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto random_vec = [&] { return Vec3{unit(rng), unit(rng), unit(rng)}; };

    for (int s = 0; s < samples; ++s) {
        const Vec3 v = random_vec();
        const Vec3 w = random_vec();
        const auto vf = VectorField3::constant(v);
        const auto wf = VectorField3::constant(w);

        const Vec3 c = sharp(hodge(wedge(flat(vf), flat(wf))))(origin);
        const Vec3 expected = cross(v, w);
        for (int i = 0; i < 3; ++i)
            r.cross_product = std::max(r.cross_product, std::fabs(c[i] - expected[i]));

        const double vol = wedge(flat(vf), hodge(flat(wf))).component(0)(origin);
        r.scalar_product = std::max(r.scalar_product, std::fabs(vol - dot(v, w)));
    }

    const ScalarField3 f = [](const Vec3& p) { return std::sin(p.x) * p.y + std::exp(0.3 * p.z) * std::cos(p.y); };
    const VectorField3 vfield{
        [](const Vec3& p) { return p.y * p.z * p.z + std::sin(p.y); },
        [](const Vec3& p) { return std::cos(p.x * p.z); },
        [](const Vec3& p) { return p.x * p.y + std::exp(0.2 * p.x); },
    };
    const VectorField3 cg = curl(grad(f, h), h);
    const ScalarField3 dc = div(curl(vfield, h), h);
    for (int s = 0; s < samples; ++s) {
        const Vec3 p = random_vec();
        const Vec3 a = cg(p);
        r.curl_grad = std::max({r.curl_grad, std::fabs(a.x), std::fabs(a.y), std::fabs(a.z)});
        r.div_curl = std::max(r.div_curl, std::fabs(dc(p)));
    }
    return r;
}

}  // namespace locons::forms
