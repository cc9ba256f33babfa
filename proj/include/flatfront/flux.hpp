#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "flatfront/front.hpp"
#include "flatfront/hyp.hpp"

namespace flatfront {

class FluxError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class FluxRoute { Symbolic, Numeric };

struct FluxReport {
    Mat2 Phi;
    Mat2 symbolic, numeric;
    double route_gap = 0.0;  // max entry difference of the two routes
    FluxRoute route = FluxRoute::Numeric;
    int nodes = 0;           // trapezoid nodes at convergence
    double radius = 0.0;
    std::array<cplx, 2> eigenvalues{};
    /// projective representatives, largest entry equal to 1
    std::array<std::array<cplx, 2>, 2> eigenvectors{};
    bool nilpotent = false;
    /// Pi(v1), Pi(v2); empty when nilpotent
    std::optional<std::array<BoundaryPoint, 2>> axis;
};

/// Values (G, dG/dw, G_*, dG_*/dw) at a point of the local chart.
using GaussSampler = std::function<std::array<cplx, 4>(cplx w)>;

/// (dE) E^-1 / dw from the Gauss maps.
Mat2 flux_integrand(const std::array<cplx, 4>& g);

/// Residue of (i/2pi)(dE)E^-1 from the series of G and G_* in the local chart.
Mat2 flux_residue(const Series& G, const Series& Gstar);

/// Trapezoid rule on |w| = r starting from N nodes, doubling until two successive
/// values agree within tol. nodes_used receives the final node count.
Mat2 flux_contour(const GaussSampler& g, double r, int N = 4096, double tol = 1e-10,
                  int* nodes_used = nullptr);

/// Eigen-structure and axis of a traceless matrix.
FluxReport flux_report(const Mat2& Phi);

/// Both routes at the end. r <= 0 picks half the validity radius of the integrand series.
FluxReport flux_matrix(const WeierstrassData& data, ExpansionPoint at, double r = -1.0, int N = 4096);

/// Axis endpoints; throws when Phi is nilpotent.
std::array<BoundaryPoint, 2> flux_axis(const FluxReport& rep);

struct BalancingResult {
    std::vector<Mat2> fluxes;
    Mat2 sum;
    double max_norm = 0.0;
};

/// Sum of the end fluxes. radii[i] is the contour radius at ends[i] in its chart.
BalancingResult balancing_check(const WeierstrassData& data, const std::vector<ExpansionPoint>& ends,
                                const std::vector<double>& radii, int N = 4096);

}  // namespace flatfront
