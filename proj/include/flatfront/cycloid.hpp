#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "flatfront/rational.hpp"

namespace flatfront {

using cplx = std::complex<double>;

class CycloidError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// (1/m)[(m+n) e^{i(m-n)t} + (m-n) e^{i(m+n)t}]
cplx gamma(int m, int n, double t);
cplx gamma_derivative(int m, int n, double t);

enum class CycloidKind { Epicycloid, Hypocycloid };
std::string to_string(CycloidKind k);

struct CycloidDescriptor {
    int m = 0, n = 0;
    int d = 1;  // gcd(m+n, |m-n|)
    Rational m0{0}, n0{0};
    CycloidKind kind = CycloidKind::Epicycloid;
    int cusps = 0;
    Rational winding{0};  // m0, per traversal of the image
    bool simple = false;
};

CycloidDescriptor descriptor(int m, int n);

/// The 2n parameters in [0, 2pi) where Gamma' vanishes.
std::vector<double> cusp_parameters(int m, int n);

/// Samples Gamma_{m,n} on [0, 2pi) at count points.
std::vector<cplx> sample_gamma(int m, int n, int count);

/// Trace of a point on a circle of signed radius 1-p rolled on the circle of radius 2p.
std::vector<cplx> rolled_curve(double p, double phi_max, int count);

/// Direction reversals between successive chords of a closed sampled curve.
int count_cusps(const std::vector<cplx>& closed);

/// Turning of the unit normal over a closed sampled curve, in turns, continued
/// through cusps. Throws when a step turns by more than max_step radians.
Rational normal_winding(const std::vector<cplx>& closed, double max_step = 0.5);

/// Symmetric Hausdorff distance between two point sets.
double hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b);
/// Same, between the closed polylines through the samples (point-to-segment distances).
double hausdorff_polyline(const std::vector<cplx>& a, const std::vector<cplx>& b);
/// Largest distance between two samples.
double diameter(const std::vector<cplx>& a);

struct GammaFit {
    cplx C{0.0, 0.0};
    double tau = 0.0;       // parameter shift: z(t) ~ C Gamma(t + tau)
    double residual = 0.0;  // max |z - C Gamma(t + tau)| / (|C| max |Gamma|)
    double hausdorff = 0.0; // between the samples and the fitted curve at the same parameters, over |C|
};

/// Least-squares C for each tau; tau by a coarse scan, golden-section, then secant steps on the gradient.
GammaFit fit_gamma(int m, int n, const std::vector<double>& t, const std::vector<cplx>& z);

struct CycloidSample {
    double s, theta, r, u;
    bool s_mode;  // taken while integrating in s across a cusp
};

struct CycloidOdeOptions {
    double s0 = 0.0, s1 = 0.0;  // s1 = 0: one full curve, s in [s0, s0 + 2 pi m]
    double abs_tol = 1e-14, rel_tol = 1e-13;
    double u_switch = 4.0;  // move to the s-form above this |u|
    double u_back = 2.0;    // and back below this
};

/// Solves d log r/d theta = u, (p^2-1) du/d theta = p^2 + (p^2+1)u^2 + u^4 with u(s0) = -p tan(p s0)
/// and r(s0) = 1, switching to the smooth s-form (phi = arctan u, theta = s + phi) near cusps.
std::vector<CycloidSample> ode_solve(int m, int n, const CycloidOdeOptions& opt = {});

struct CycloidOdeCheck {
    double u_residual = 0.0;   // |u - (-p tan ps)| away from the poles of tan
    double ode_residual = 0.0; // (p^2-1)u' - (p^2 + (p^2+1)u^2 + u^4) on theta-form samples, relative
    double r2_residual = 0.0;  // relative residual of r^2 = C2((1+p^2) + (1-p^2) cos 2ps)
    double C2 = 0.0;
    cplx C{0.0, 0.0};          // r e^{i theta} = C Gamma_{m,n}(s/m)
    double gamma_residual = 0.0;  // max |r e^{i theta} - C Gamma| / (|C| max |Gamma|)
};

CycloidOdeCheck check_ode_solution(int m, int n, const std::vector<CycloidSample>& sol);

}  // namespace flatfront
