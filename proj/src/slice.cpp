#include "flatfront/slice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "flatfront/parallel.hpp"

namespace flatfront {

namespace {

constexpr double kPi = std::numbers::pi;

struct RayPoint {
    double H;   // 1/h
    cplx ratio; // zeta/h
};

class Ray {
public:
    Ray(const FrontEvaluator& ev, const SliceFrame& f, const Series& q, cplx q0, double t)
        : ev_(ev), t_(t), q_(q), q0_(q0) {
        const double a = std::exp(0.5 * f.tau);
        u_ = Mat2::diag(a, 1.0 / a) * f.u;
    }

    RayPoint at(double rho) const {
        cplx qv = q_.eval_polar(rho, t_);
        double arg = std::arg(q0_) + std::arg(qv / q0_);
        Mat2 E = u_ * ev_.at_polar(rho * std::abs(qv), t_ + arg).E;
        double H = std::norm(E.c) + std::norm(E.d);
        return {H, E.a * std::conj(E.c) + E.b * std::conj(E.d)};
    }

private:
    const FrontEvaluator& ev_;
    double t_;
    const Series& q_;
    cplx q0_;
    Mat2 u_;
};

}  // namespace

SliceFrame slice_frame(const FrontEvaluator& ev, const EndReport& r) {
    SliceFrame f;
    if (r.normalized) {
        f.u = r.normalized->u_total;
        f.chart = r.normalized->chart;
        f.normalized = true;
        Mat2 back = f.u.inverse();
        f.far = moebius_star(back, BoundaryPoint::infinity());
        return f;
    }
    DominantFrame d = dominant_frame(ev.canonical());
    f.u = d.u;
    f.chart = gauss_coordinate(d.G, r.m);
    f.far = moebius_star(d.u.inverse(), BoundaryPoint::infinity());
    return f;
}

SliceFrame shift_basepoint(const SliceFrame& f, double tau) {
    SliceFrame g = f;
    g.tau += tau;
    return g;
}

SliceCurve slice(const FrontEvaluator& ev, const SliceFrame& frame, double h, const SliceSettings& s) {
    if (!(h > 0)) throw SliceError("slice height must be positive");
    if (s.samples_per_sheet < 8) throw SliceError("too few angular samples");
    if (frame.chart.is_zero() || frame.chart.nu() != Rational(1))
        throw SliceError("slicing coordinate must vanish to first order at the end");
    Series q = frame.chart / Series::monomial(1.0, Rational(1), frame.chart.N());
    const cplx q0 = q.coeff(Rational(0));
    double rho_max = 0.9 * ev.series_radius() / std::abs(q0);
    if (double vr = q.validity_radius(); std::isfinite(vr)) rho_max = std::min(rho_max, 0.5 * vr);
    rho_max = std::min(rho_max, 1.0);

    SliceCurve out;
    out.h = h;
    out.sheets = ev.covering_sheets();
    const std::size_t N = static_cast<std::size_t>(s.samples_per_sheet) * static_cast<std::size_t>(out.sheets);
    out.t.resize(N);
    out.zeta_over_h.resize(N);
    out.radius.resize(N);
    std::vector<double> spread(N, 0.0);
    const double target = 1.0 / h;

    parallel_for(N, [&](std::size_t k) {
        const double t = 2 * kPi * out.sheets * static_cast<double>(k) / static_cast<double>(N);
        Ray ray(ev, frame, q, q0, t);
        double hi = rho_max;
        double Hhi = ray.at(hi).H;
        if (Hhi >= target) throw SliceError("outside asymptotic regime; reduce h (slice leaves the series disc)");
        double lo = hi, Hlo = Hhi;
        for (int it = 0;; ++it) {
            if (it > 400) throw SliceError("height does not reach the slice level along a ray");
            lo = 0.5 * hi;
            Hlo = ray.at(lo).H;
            if (!(Hlo > Hhi)) throw SliceError("outside asymptotic regime; reduce h (height not monotone along a ray)");
            if (Hlo > target) break;
            hi = lo;
            Hhi = Hlo;
        }
        // height must be monotone inside the bracket before bisecting
        double prev = Hlo;
        for (int j = 1; j <= s.monotone_checks; ++j) {
            double rho = lo * std::pow(hi / lo, static_cast<double>(j) / s.monotone_checks);
            double Hj = ray.at(rho).H;
            if (!(Hj < prev)) throw SliceError("outside asymptotic regime; reduce h (height not monotone along a ray)");
            prev = Hj;
        }
        while (hi - lo > s.r_tol * std::min(1.0, hi)) {
            double mid = std::sqrt(lo * hi);
            if (mid <= lo || mid >= hi) mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (ray.at(mid).H > target) lo = mid;
            else hi = mid;
        }
        const double rho = 0.5 * (lo + hi);
        RayPoint p = ray.at(rho);
        out.t[k] = t;
        out.radius[k] = rho;
        out.zeta_over_h[k] = p.ratio;
        spread[k] = std::abs(1.0 / p.H - h) / h;
    });
    out.h_spread = *std::max_element(spread.begin(), spread.end());
    return out;
}

std::vector<SliceCurve> slice_family(const FrontEvaluator& ev, const SliceFrame& frame,
                                     const std::vector<double>& heights, const SliceSettings& s) {
    std::vector<SliceCurve> out;
    out.reserve(heights.size());
    for (double h : heights) out.push_back(slice(ev, frame, h, s));
    return out;
}

CycloidSliceFit fit_cycloid_slice(const SliceCurve& c, int m, int n) {
    CycloidSliceFit f;
    f.h = c.h;
    const double beta = static_cast<double>(n) / m;
    const double scale = std::pow(c.h, -beta);
    std::vector<cplx> z(c.zeta_over_h.size());
    for (std::size_t k = 0; k < z.size(); ++k) z[k] = scale * c.zeta_over_h[k];
    f.fit = fit_gamma(m, n, c.t, z);
    const int dense = 4096;
    std::vector<cplx> model(dense);
    for (int k = 0; k < dense; ++k) model[static_cast<std::size_t>(k)] = f.fit.C * gamma(m, n, 2 * kPi * k / dense + f.fit.tau);
    f.hausdorff = hausdorff_polyline(z, model);
    f.diameter = std::abs(f.fit.C) * diameter(sample_gamma(m, n, 2048));
    f.cusps = count_cusps(z);
    return f;
}

PitchEstimate estimate_pitch(const std::vector<SliceCurve>& slices, std::optional<std::pair<int, int>> gamma_mn,
                             double residual_tol) {
    if (slices.size() < 4) throw SliceError("estimate_pitch needs at least 4 heights");
    PitchEstimate e;
    double hmin = std::numeric_limits<double>::infinity(), hmax = 0.0;
    for (const SliceCurve& c : slices) {
        hmin = std::min(hmin, c.h);
        hmax = std::max(hmax, c.h);
        double sc = 0.0;
        if (gamma_mn) {
            CycloidSliceFit f = fit_cycloid_slice(c, gamma_mn->first, gamma_mn->second);
            sc = std::abs(f.fit.C) * std::pow(c.h, static_cast<double>(gamma_mn->second) / gamma_mn->first);
        } else {
            for (cplx z : c.zeta_over_h) sc += std::abs(z);
            sc /= static_cast<double>(c.zeta_over_h.size());
        }
        e.heights.push_back(c.h);
        e.scales.push_back(sc);
    }
    if (std::log10(hmax / hmin) < 2.0 - 1e-9) throw SliceError("estimate_pitch needs heights spanning two decades");
    const std::size_t n = e.heights.size();
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = std::log(e.heights[i]);
        y[i] = std::log(e.scales[i]);
    }
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n, my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    e.p_hat = sxy / sxx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (my + e.p_hat * (x[i] - mx));
        ssr += r * r;
    }
    e.stderr_ = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
    e.residual = std::sqrt(ssr / static_cast<double>(n));
    if (e.residual > residual_tol)
        e.warning = "log-log fit is not linear: rms residual " + std::to_string(e.residual) + "; reduce h";
    return e;
}

namespace {

double leading_scale(const AsymptoticProfile& a, double h) {
    switch (a.kind) {
        case ProfileKind::NonCylindrical: return std::pow(h, a.p);
        case ProfileKind::CylindricalComplete:
            return std::abs(a.lambda - double(a.m) * a.m / (4.0 * a.lambda)) / a.m;
        case ProfileKind::CylindricalIncomplete: return std::pow(h, a.beta);
    }
    return 1.0;
}

}  // namespace

ProfileReport fit_profile(const std::vector<SliceCurve>& slices, const AsymptoticProfile& profile) {
    if (slices.empty()) throw SliceError("fit_profile: no slices");
    ProfileReport rep;
    for (const SliceCurve& c : slices) {
        ProfileResidual r;
        r.h = c.h;
        const std::size_t K = c.t.size();
        std::vector<cplx> model(K);
        cplx dot = 0.0;
        double mm = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            model[k] = profile.curve(c.h, c.t[k]);
            dot += c.zeta_over_h[k] * std::conj(model[k]);
            mm += std::norm(model[k]);
        }
        r.rotation = std::arg(dot);
        r.scale_ratio = std::abs(dot) / mm;
        const cplx rot = std::polar(1.0, r.rotation);
        double err = 0.0;
        for (std::size_t k = 0; k < K; ++k) err = std::max(err, std::abs(c.zeta_over_h[k] - rot * model[k]));
        r.residual = err / leading_scale(profile, c.h);
        if (profile.kind == ProfileKind::CylindricalIncomplete && profile.n)
            r.hausdorff = fit_cycloid_slice(c, profile.m, *profile.n).hausdorff;
        rep.per_height.push_back(r);
    }
    std::vector<ProfileResidual> sorted = rep.per_height;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.h > b.h; });
    rep.decreasing = true;
    // residuals at rounding level count as converged
    constexpr double floor = 1e-10;
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (!(sorted[i].residual < sorted[i - 1].residual) && sorted[i].residual > floor) rep.decreasing = false;

    bool all_high = true, all_low = true;
    for (const auto& r : rep.per_height) {
        all_high = all_high && r.scale_ratio > 1.01;
        all_low = all_low && r.scale_ratio < 0.99;
    }
    if ((all_high || all_low) && profile.kind != ProfileKind::CylindricalComplete) {
        rep.basepoint_hint = fit_basepoint(slices, profile);
        rep.note = "leading scale is off by a constant factor: move the basepoint by tau = " +
                   std::to_string(*rep.basepoint_hint) + " (scale e^{-tau p})";
    }
    return rep;
}

double fit_basepoint(const std::vector<SliceCurve>& slices, const AsymptoticProfile& profile) {
    if (slices.empty()) throw SliceError("fit_basepoint: no slices");
    if (profile.kind == ProfileKind::CylindricalComplete)
        throw SliceError("basepoint of a complete cylindrical end is not visible in the leading term");
    const SliceCurve& c =
        *std::min_element(slices.begin(), slices.end(), [](const auto& a, const auto& b) { return a.h < b.h; });
    double obs = 0.0;
    for (cplx z : c.zeta_over_h) obs += std::abs(z);
    obs /= static_cast<double>(c.zeta_over_h.size());
    double mod = 0.0;
    for (double t : c.t) mod += std::abs(profile.curve(c.h, t));
    mod /= static_cast<double>(c.t.size());
    const double expo = profile.kind == ProfileKind::NonCylindrical ? profile.p : profile.beta;
    if (expo == 0.0) throw SliceError("fit_basepoint: zero exponent");
    // shifting by tau scales the leading term by e^{-tau expo}
    return std::log(obs / mod) / expo;
}

}  // namespace flatfront
