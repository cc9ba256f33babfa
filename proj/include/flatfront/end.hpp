#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "flatfront/front.hpp"
#include "flatfront/hyp.hpp"
#include "flatfront/series.hpp"

namespace flatfront {

class EndError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class EndType {
    Horospherical,
    Snowman,
    Hourglass,
    CylindricalComplete,
    Epicycloid,
    Hypocycloid,
    GeodesicDegenerate,
};
std::string to_string(EndType t);

enum class Pair { GOmega, GstarTheta };
std::string to_string(Pair p);

/// Drops leading coefficients that are negligible against the rest of the series,
/// weighting c_j by r0^j with r0 taken from the validity radius.
Series significant(const Series& s, double rel = 1e-9);

struct EndOrders {
    Rational mu{0};
    Order mu_star;  // infinite when theta = 0
    Order Q;
};
/// Orders of omega, theta and Q. Throws "irregular end" when ord Q < -2.
EndOrders end_orders(const CanonicalData& c);

/// Gauss maps moved so that the common limit value is 0, arranged with the
/// dominant pair first. omega/theta are unchanged by isometries.
struct DominantFrame {
    Pair dominant = Pair::GOmega;
    BoundaryPoint limit;  // G(0) = G_*(0) in the original frame
    Mat2 u;               // u * limit = 0
    Series G, Gstar;      // normalized, dominant first
    Series omega, theta;  // dominant first
};

struct Multiplicity {
    int m = 0, m1 = 0, m2 = 0;
    /// dG_*/dG at the end in the dominant frame (from coefficients)
    double alpha_numeric = 0.0;
    double q_minus2 = 0.0;
    Pair dominant = Pair::GOmega;
};

DominantFrame dominant_frame(const CanonicalData& c);
/// Coordinate zeta with G = zeta^m; returns the chart coordinate as a series in zeta.
Series gauss_coordinate(const Series& G, int m);
Multiplicity multiplicity_and_ratio(const Series& G, const Series& Gstar);

/// One tested geodesic: gamma(+inf) = G(0), gamma(-inf) = far (normalized frame, far = inf is the axis gamma_0).
struct AxisIndentation {
    BoundaryPoint far;
    BoundaryPoint far_original;
    std::optional<int> l;  // nullopt: A_gamma constant to truncation order
};

struct IndentationReport {
    std::vector<AxisIndentation> tested;
    bool centered = false;
    bool rotational = false;  // l = inf on the principal axis
    /// endpoints (G(0), far) of the principal axis in the original frame
    std::optional<std::array<BoundaryPoint, 2>> principal_axis;
    /// far endpoint of the principal axis in the normalized frame
    std::optional<BoundaryPoint> principal_far;
    std::optional<int> n;  // maximum indentation number, nullopt when infinite
};

/// A_gamma = d(u*G_*)/d(u*G) for u sending far to infinity, in the normalized frame.
Series indentation_ratio(const DominantFrame& f, const BoundaryPoint& far);
std::optional<int> indentation_number(const DominantFrame& f, const BoundaryPoint& far);

IndentationReport indentation(const DominantFrame& f, int m, double alpha, unsigned seed = 20240611u);

struct NormalizedOmega {
    BoundaryPoint far;  // the axis used, normalized frame
    cplx k{1.0, 0.0};   // z = k w in the coordinate where G = z^m
    int l = 0;
    Rational mu{0};
    cplx c0, b0;
    double b = 0.0;       // non-cylindrical
    double lambda = 0.0;  // cylindrical
    Series omega;         // normalized omega in w (phase removed)
    /// argument of the w^l tail coefficient of sqrt(omega / (lead w^mu)); 0 when normalized
    double tail_arg = 0.0;
    /// isometry taking the original G to w^m
    Mat2 u_total;
    /// local chart coordinate of the end as a series in w
    Series chart;
};

NormalizedOmega normalize_omega(const DominantFrame& f, int m, const BoundaryPoint& far);

/// n = 1 + ord(drho/rho), by the series of rho and by the Gauss map expression.
struct RhoRamification {
    std::optional<int> from_rho;
    std::optional<int> from_gauss;
};
RhoRamification rho_ramification(const CanonicalData& c);

struct EndReport {
    ExpansionPoint at;
    Rational mu{0};
    Order mu_star, ord_Q;
    int m = 0, m1 = 0, m2 = 0;
    Rational alpha{0};
    double alpha_numeric = 0.0;
    double q_minus2 = 0.0;
    EndType type = EndType::Horospherical;
    Rational p{0};
    std::optional<int> n;  // rho ramification for cylindrical ends, else the max indentation number
    double lambda = 0.0;   // cylindrical only
    bool complete = true;
    Pair dominant = Pair::GOmega;
    BoundaryPoint limit;
    IndentationReport indentation;
    std::optional<NormalizedOmega> normalized;  // along the principal axis, or gamma_0
    double rho0_abs = 0.0;                      // |rho(0)| for cylindrical ends
};

EndReport classify_end(const CanonicalData& c, ExpansionPoint at = {});
EndReport classify_end(const WeierstrassData& data, ExpansionPoint at);

enum class ProfileKind { NonCylindrical, CylindricalComplete, CylindricalIncomplete };
enum class ProfileBranch { Indentation, IndentationAndS, SOnly };
std::string to_string(ProfileKind k);
std::string to_string(ProfileBranch b);

/// Leading model of the horosphere slice h = e^-s along the chosen axis.
struct AsymptoticProfile {
    ProfileKind kind = ProfileKind::NonCylindrical;
    ProfileBranch branch = ProfileBranch::SOnly;
    double p = 0.0;
    int m = 1;
    std::optional<int> n;  // indentation number of the axis; nullopt for rotational
    double b = 0.0, lambda = 0.0, beta = 0.0;

    double N(double h, double t, int j) const;
    double S(double h) const;
    cplx V(double t, int l, double c) const;
    cplx Gamma(double t) const;
    /// e^{imt} h^p (1 + R), (1/m) e^{imt}[(lambda - m^2/4lambda) + V h^beta] or Gamma h^beta.
    cplx curve(double h, double t) const;
    /// Factor on the leading term when the base point moves by tau along the axis.
    double basepoint_scale(double tau) const;
};

/// Profile along the axis of nz; without nz the axis is treated as rotational.
AsymptoticProfile asymptotic_profile(const EndReport& r, const std::optional<NormalizedOmega>& nz);

}  // namespace flatfront
