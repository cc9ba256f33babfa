#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flatfront/cycloid.hpp"
#include "flatfront/end.hpp"
#include "flatfront/front.hpp"

namespace flatfront {

class SliceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Puts the axis on the vertical line with G(0) at 0 and the basepoint at (0, 1).
struct SliceFrame {
    Mat2 u;         // applied to E on the left
    Series chart;   // chart coordinate of the end as a series in the slicing coordinate
    BoundaryPoint far;  // far endpoint of the axis, original frame
    bool normalized = false;  // from normalize_omega; otherwise gamma_0 in the Gauss coordinate
    double tau = 0.0;         // signed shift of the basepoint towards the end
};

/// Frame along the axis used by the end report (principal axis, or gamma_0).
SliceFrame slice_frame(const FrontEvaluator& ev, const EndReport& r);
/// Same frame with the basepoint moved by tau along the axis.
SliceFrame shift_basepoint(const SliceFrame& f, double tau);

struct SliceSettings {
    int samples_per_sheet = 512;
    double r_tol = 1e-12;
    int monotone_checks = 24;  // height samples checked inside each bracket
};

struct SliceCurve {
    double h = 0.0;
    int sheets = 1;
    std::vector<double> t;
    std::vector<cplx> zeta_over_h;
    std::vector<double> radius;  // root in the slicing coordinate
    double h_spread = 0.0;       // max relative deviation of the height along the slice
};

/// Horosphere slice at height h: one radial root of the height per angle.
SliceCurve slice(const FrontEvaluator& ev, const SliceFrame& frame, double h, const SliceSettings& s = {});
std::vector<SliceCurve> slice_family(const FrontEvaluator& ev, const SliceFrame& frame,
                                     const std::vector<double>& heights, const SliceSettings& s = {});

struct PitchEstimate {
    double p_hat = 0.0;
    double stderr_ = 0.0;
    std::vector<double> heights, scales;
    double residual = 0.0;  // rms of the log-log fit
    std::optional<std::string> warning;
};

/// Slope of log scale against log h. The scale is mean |zeta/h|, or |C| of the
/// Gamma_{m,n} fit when gamma_mn is given.
PitchEstimate estimate_pitch(const std::vector<SliceCurve>& slices,
                             std::optional<std::pair<int, int>> gamma_mn = std::nullopt,
                             double residual_tol = 1e-2);

struct ProfileResidual {
    double h = 0.0;
    double residual = 0.0;     // max |obs - model| / leading scale, after the rotation fit
    double scale_ratio = 1.0;  // |<obs, model>| / <model, model>
    double rotation = 0.0;     // about the axis
    std::optional<double> hausdorff;  // incomplete ends: normalized slice against the C Gamma fit
};

struct ProfileReport {
    std::vector<ProfileResidual> per_height;  // in the order given
    bool decreasing = false;                  // residual decreases as h decreases
    std::optional<double> basepoint_hint;     // tau that would remove a stubborn scale offset
    std::string note;
};

ProfileReport fit_profile(const std::vector<SliceCurve>& slices, const AsymptoticProfile& profile);

/// Basepoint shift that brings the leading scale of the slices onto the profile.
/// Not defined for complete cylindrical ends, whose leading term does not move.
double fit_basepoint(const std::vector<SliceCurve>& slices, const AsymptoticProfile& profile);

struct CycloidSliceFit {
    double h = 0.0;
    GammaFit fit;
    double hausdorff = 0.0;  // normalized slice against C Gamma, polyline distance
    double diameter = 0.0;   // of C Gamma
    int cusps = 0;
};

/// Fits (zeta/h)/h^{n/m} by C Gamma_{m,n}(t + tau).
CycloidSliceFit fit_cycloid_slice(const SliceCurve& c, int m, int n);

}  // namespace flatfront
