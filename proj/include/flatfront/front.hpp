#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flatfront/expr.hpp"
#include "flatfront/hyp.hpp"
#include "flatfront/series.hpp"

namespace flatfront {

class FrontError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class DataKind { GOmega, GaussPair };

/// Global input data: G and either omega (the coefficient of dz) or G_*.
struct WeierstrassData {
    DataKind kind = DataKind::GaussPair;
    Expression G;
    Expression second;  // omega or G_*
    std::string G_text, second_text;
    cplx delta{1.0, 0.0};
    std::optional<cplx> basepoint;
    int truncation = kDefaultTruncation;
};

WeierstrassData make_g_omega(const std::string& G, const std::string& omega,
                             const std::map<std::string, cplx>& params = {});
WeierstrassData make_gauss_pair(const std::string& G, const std::string& Gstar,
                                const std::map<std::string, cplx>& params = {},
                                cplx delta = 1.0);

/// Holomorphic Legendrian lift expanded in the local coordinate w of an end.
struct LocalLift {
    ExpansionPoint at;
    Series E11, E12, E21, E22;
    /// residue of dG/(G - G_*) at the end (Gauss pair data only)
    Rational xi_exponent{0};
};

/// Lift from (G, omega) with C = i sqrt(omega/dG).
LocalLift lift_from_g_omega(const Series& G, const Series& omega);
/// Lift from the Gauss maps, xi = delta w^r exp(int of the regular part of dG/(G-G_*)).
LocalLift lift_from_gauss_pair(const Series& G, const Series& Gstar, cplx delta);
/// Expands the data at the end and builds the lift there.
LocalLift build_lift(const WeierstrassData& data, ExpansionPoint at);

LocalLift dual_lift(const LocalLift& L);
/// E diag(e^{t/2}, e^{-t/2}): canonical forms become (e^t omega, e^-t theta).
LocalLift parallel_lift(const LocalLift& L, double t);

struct CanonicalData {
    SeriesOneForm omega, theta, Q;
    Series rho;  // theta/omega; zero for totally umbilic fronts
    Series G, Gstar;
    /// relative size of the diagonal of E^-1 dE
    double diagonal_residual = 0.0;
    /// relative size of det E - 1
    double det_residual = 0.0;
};

/// Reads omega, theta off E^-1 dE. Throws "not Legendrian" past the tolerance.
CanonicalData canonical_data(const LocalLift& L, double tol = 1e-8);

/// Numeric value of the lift and of rho at a point.
struct FrontPoint {
    Mat2 E;
    cplx rho{0.0, 0.0};
    bool via_ode = false;
    double det_drift = 0.0;  // largest |det E - 1| seen before re-projection
};

/// Evaluates the lift at w = r e^{it} of the local chart, with t continuous on
/// the covering. Uses the series below its validity radius and continues
/// radially by ODE integration of dE = E [[0, theta], [omega, 0]] beyond it.
class FrontEvaluator {
public:
    FrontEvaluator(const WeierstrassData& data, LocalLift lift, double parallel_t = 0.0);

    FrontPoint at_polar(double r, double t) const;
    /// Series evaluation only; throws outside the validity radius.
    FrontPoint series_at(double r, double t) const;
    /// Forces the ODE route, starting from the series at r_start (default: the series radius).
    FrontPoint ode_at(double r, double t, double r_start = -1.0) const;

    double series_radius() const { return series_radius_; }
    const LocalLift& lift() const { return lift_; }
    const CanonicalData& canonical() const { return canon_; }
    double parallel_t() const { return t_; }
    FrontEvaluator parallel(double t) const;

    /// Angular sheets after which f closes up (1 for every single-valued front).
    int covering_sheets() const { return sheets_; }

private:
    WeierstrassData data_;
    LocalLift lift_;
    CanonicalData canon_;
    double t_;
    double series_radius_;
    int sheets_ = 1;
};

/// f = E E* and nu = E e3 E*.
Mat2 front_point(const Mat2& E);
Mat2 normal_point(const Mat2& E);
/// f_t with t(z) = log|rho|/2; throws at umbilic points.
Mat2 caustic_point(const FrontPoint& p);

struct SurfaceSample {
    double r, t;
    Mat2 f, nu;
    cplx rho;
    bool singular;
};

struct PolarGrid {
    double r_min = 1e-3, r_max = 0.5;
    int radial = 64, angular = 96;
    int sheets = 1;
};

std::vector<SurfaceSample> sample_surface(const FrontEvaluator& ev, const PolarGrid& grid,
                                          double singular_tol = 1e-3);

/// Sign changes of |rho| - 1 around the circle |w| = r.
int singular_crossings(const FrontEvaluator& ev, double r, int samples = 2048);

}  // namespace flatfront
