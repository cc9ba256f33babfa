#pragma once

#include <array>
#include <complex>
#include <stdexcept>

#include "flatfront/series.hpp"

namespace flatfront {

/// Shared numerical tolerances.
struct Tolerances {
    double structural = 1e-10;
    double numeric = 1e-8;
};
const Tolerances& tolerances();

class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Mat2 {
    cplx a{1.0, 0.0}, b{0.0, 0.0}, c{0.0, 0.0}, d{1.0, 0.0};

    static Mat2 identity() { return {}; }
    static Mat2 diag(cplx p, cplx q) { return {p, 0.0, 0.0, q}; }

    cplx det() const { return a * d - b * c; }
    cplx trace() const { return a + d; }
    Mat2 adjugate() const { return {d, -b, -c, a}; }
    Mat2 inverse() const;
    Mat2 star() const { return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)}; }
    double max_abs() const;
};

Mat2 operator*(const Mat2& x, const Mat2& y);
Mat2 operator+(const Mat2& x, const Mat2& y);
Mat2 operator-(const Mat2& x, const Mat2& y);
Mat2 operator*(cplx s, const Mat2& x);
/// Max-norm of the entrywise difference.
double distance(const Mat2& x, const Mat2& y);

/// Checks det u = 1 within the structural tolerance.
void require_sl2(const Mat2& u);
/// Rescales u to determinant one.
Mat2 normalize_sl2(const Mat2& u);

/// The basis e0 = I, e1, e2, e3 of Herm(2).
Mat2 herm_basis(int k);

/// Hermitian matrix of the Minkowski vector (x0, x1, x2, x3).
Mat2 from_minkowski(const std::array<double, 4>& x);
std::array<double, 4> to_minkowski(const Mat2& X);
/// <X, Y> = -tr(X adj Y)/2, so <X, X> = -det X.
double minkowski_inner(const Mat2& X, const Mat2& Y);

struct UpperHalfSpacePoint {
    cplx zeta{0.0, 0.0};
    double h = 1.0;
};

struct BoundaryPoint {
    bool infinite = false;
    cplx value{0.0, 0.0};

    static BoundaryPoint at(cplx v) { return {false, v}; }
    static BoundaryPoint infinity() { return {true, cplx(0)}; }
};

/// Chordal distance on the Riemann sphere (diameter 2).
double chordal_distance(const BoundaryPoint& p, const BoundaryPoint& q);

bool in_h3(const Mat2& X, double tol = 1e-10);
UpperHalfSpacePoint project_uhs(const Mat2& X);
/// pi(u u*) read off the lift u without forming the product.
UpperHalfSpacePoint project_uhs_lift(const Mat2& u);
Mat2 from_uhs(const UpperHalfSpacePoint& p);
double hyperbolic_distance(const Mat2& X, const Mat2& Y);
double uhs_distance(const UpperHalfSpacePoint& p, const UpperHalfSpacePoint& q);
/// Distance between u u* and v v*, from cosh d = |u^-1 v|_F^2 / 2. Stable for large lifts.
double lift_distance(const Mat2& u, const Mat2& v);

/// u X u*.
Mat2 isometry(const Mat2& u, const Mat2& X);
BoundaryPoint moebius_star(const Mat2& u, const BoundaryPoint& g);
/// (u11 G + u12)/(u21 G + u22) as a series.
Series moebius_star(const Mat2& u, const Series& G);
/// Pi(x, y) = x / y.
BoundaryPoint projectivize(cplx x, cplx y);

/// (i/2)(X x^-1 Y - Y x^-1 X).
Mat2 exterior_product(const Mat2& x, const Mat2& X, const Mat2& Y);
/// Ideal endpoint of the geodesic cosh(s) x + sinh(s) v as s -> +inf.
BoundaryPoint boundary_class(const Mat2& x, const Mat2& v);
std::array<double, 3> to_poincare_ball(const Mat2& X);

}  // namespace flatfront
