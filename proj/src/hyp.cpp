#include "flatfront/hyp.hpp"

#include <algorithm>
#include <cmath>

namespace flatfront {

const Tolerances& tolerances() {
    static const Tolerances t;
    return t;
}

Mat2 Mat2::inverse() const {
    cplx dt = det();
    if (std::abs(dt) < 1e-300) throw GeometryError("singular matrix");
    return (1.0 / dt) * adjugate();
}

double Mat2::max_abs() const {
    return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
}

Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
}
Mat2 operator+(const Mat2& x, const Mat2& y) { return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d}; }
Mat2 operator-(const Mat2& x, const Mat2& y) { return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d}; }
Mat2 operator*(cplx s, const Mat2& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }

double distance(const Mat2& x, const Mat2& y) { return (x - y).max_abs(); }

void require_sl2(const Mat2& u) {
    double scale = std::max(1.0, u.max_abs() * u.max_abs());
    if (std::abs(u.det() - 1.0) > tolerances().structural * scale)
        throw GeometryError("matrix is not in SL(2,C)");
}

Mat2 normalize_sl2(const Mat2& u) {
    cplx dt = u.det();
    if (std::abs(dt) < 1e-300) throw GeometryError("singular matrix");
    return (1.0 / std::sqrt(dt)) * u;
}

Mat2 herm_basis(int k) {
    switch (k) {
        case 0: return Mat2::identity();
        case 1: return {0.0, 1.0, 1.0, 0.0};
        case 2: return {0.0, cplx(0, 1), cplx(0, -1), 0.0};
        case 3: return Mat2::diag(1.0, -1.0);
    }
    throw std::out_of_range("herm_basis index");
}

Mat2 from_minkowski(const std::array<double, 4>& x) {
    return {x[0] + x[3], cplx(x[1], x[2]), cplx(x[1], -x[2]), x[0] - x[3]};
}

std::array<double, 4> to_minkowski(const Mat2& X) {
    return {0.5 * (X.a.real() + X.d.real()), X.b.real(), X.b.imag(),
            0.5 * (X.a.real() - X.d.real())};
}

double minkowski_inner(const Mat2& X, const Mat2& Y) {
    return -0.5 * (X * Y.adjugate()).trace().real();
}

double chordal_distance(const BoundaryPoint& p, const BoundaryPoint& q) {
    if (p.infinite && q.infinite) return 0.0;
    if (p.infinite) return 2.0 / std::sqrt(1.0 + std::norm(q.value));
    if (q.infinite) return 2.0 / std::sqrt(1.0 + std::norm(p.value));
    return 2.0 * std::abs(p.value - q.value) /
           std::sqrt((1.0 + std::norm(p.value)) * (1.0 + std::norm(q.value)));
}

bool in_h3(const Mat2& X, double tol) {
    double scale = std::max(1.0, X.max_abs());
    bool herm = std::abs(X.b - std::conj(X.c)) <= tol * scale &&
                std::abs(X.a.imag()) <= tol * scale && std::abs(X.d.imag()) <= tol * scale;
    return herm && std::abs(X.det() - 1.0) <= tol * scale * scale && X.trace().real() > 0;
}

UpperHalfSpacePoint project_uhs(const Mat2& X) {
    if (!in_h3(X, 1e-8)) throw GeometryError("point is not in hyperbolic space");
    double x22 = X.d.real();
    return {X.b / x22, 1.0 / x22};
}

UpperHalfSpacePoint project_uhs_lift(const Mat2& u) {
    double D = std::norm(u.c) + std::norm(u.d);
    return {(u.a * std::conj(u.c) + u.b * std::conj(u.d)) / D, 1.0 / D};
}

Mat2 from_uhs(const UpperHalfSpacePoint& p) {
    if (!(p.h > 0)) throw GeometryError("height must be positive");
    cplx x12 = p.zeta / p.h;
    return {p.h + std::norm(p.zeta) / p.h, x12, std::conj(x12), 1.0 / p.h};
}

double hyperbolic_distance(const Mat2& X, const Mat2& Y) {
    return std::acosh(std::max(1.0, -minkowski_inner(X, Y)));
}

double uhs_distance(const UpperHalfSpacePoint& p, const UpperHalfSpacePoint& q) {
    double r = (std::norm(p.zeta - q.zeta) + (p.h - q.h) * (p.h - q.h)) / (2.0 * p.h * q.h);
    return std::acosh(1.0 + r);
}

double lift_distance(const Mat2& u, const Mat2& v) {
    Mat2 w = u.adjugate() * v;
    double n2 = std::norm(w.a) + std::norm(w.b) + std::norm(w.c) + std::norm(w.d);
    n2 /= std::abs(u.det() * v.det());
    return std::acosh(std::max(1.0, 0.5 * n2));
}

Mat2 isometry(const Mat2& u, const Mat2& X) { return u * X * u.star(); }

BoundaryPoint projectivize(cplx x, cplx y) {
    double scale = std::max(std::abs(x), std::abs(y));
    if (scale == 0.0) throw GeometryError("projectivizing the zero vector");
    if (std::abs(y) <= 1e-14 * scale) return BoundaryPoint::infinity();
    return BoundaryPoint::at(x / y);
}

BoundaryPoint moebius_star(const Mat2& u, const BoundaryPoint& g) {
    if (g.infinite) return projectivize(u.a, u.c);
    return projectivize(u.a * g.value + u.b, u.c * g.value + u.d);
}

Series moebius_star(const Mat2& u, const Series& G) {
    Series num = u.a * G + u.b;
    Series den = u.c * G + u.d;
    if (den.is_zero()) throw GeometryError("Moebius image is identically infinite");
    return num / den;
}

Mat2 exterior_product(const Mat2& x, const Mat2& X, const Mat2& Y) {
    Mat2 xi = x.inverse();
    return cplx(0, 0.5) * (X * xi * Y - Y * xi * X);
}

BoundaryPoint boundary_class(const Mat2& x, const Mat2& v) {
    double tol = 1e-7;
    double scale = std::max(1.0, x.max_abs() * v.max_abs());
    if (std::abs(minkowski_inner(v, v) - 1.0) > tol * scale ||
        std::abs(minkowski_inner(x, v)) > tol * scale)
        throw GeometryError("boundary_class needs a unit tangent vector at x");
    Mat2 s = x + v;
    // (x1+v1) + i(x2+v2) over (x0+v0) - (x3+v3)
    double den = s.d.real();
    cplx num = s.b;
    if (std::abs(den) <= 1e-13 * std::max(1.0, s.max_abs())) return BoundaryPoint::infinity();
    return BoundaryPoint::at(num / den);
}

std::array<double, 3> to_poincare_ball(const Mat2& X) {
    auto x = to_minkowski(X);
    return {x[1] / (1.0 + x[0]), x[2] / (1.0 + x[0]), x[3] / (1.0 + x[0])};
}

}  // namespace flatfront
