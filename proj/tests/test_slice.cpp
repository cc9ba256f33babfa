#include <doctest.h>

#include <cmath>

#include "flatfront/slice.hpp"

using namespace flatfront;

namespace {

struct Probe {
    WeierstrassData data;
    FrontEvaluator ev;
    EndReport report;
    SliceFrame frame;

    explicit Probe(WeierstrassData d, double parallel_t = 0.0)
        : data(d),
          ev(data, build_lift(data, ExpansionPoint::finite(0.0)), parallel_t),
          report(classify_end(ev.canonical(), ExpansionPoint::finite(0.0))),
          frame(slice_frame(ev, report)) {}
};

double mean_abs(const SliceCurve& c) {
    double s = 0.0;
    for (cplx z : c.zeta_over_h) s += std::abs(z);
    return s / static_cast<double>(c.zeta_over_h.size());
}

std::vector<double> decades(double from, double to, int count) {
    std::vector<double> h;
    for (int i = 0; i < count; ++i) h.push_back(std::pow(10.0, from + (to - from) * i / (count - 1)));
    return h;
}

}  // namespace

TEST_CASE("snowman slices are circles") {
    Probe p(make_gauss_pair("z", "z/2"));
    for (double h : {1e-3, 1e-5}) {
        SliceCurve c = slice(p.ev, p.frame, h);
        CHECK(c.zeta_over_h.size() == 512);
        CHECK(c.h_spread < 1e-9);
        double m = mean_abs(c);
        for (cplx z : c.zeta_over_h) CHECK(std::abs(std::abs(z) - m) < 1e-6 * m);
    }
}

TEST_CASE("pitch estimates") {
    Probe snow(make_gauss_pair("z", "z/2"));
    auto e1 = estimate_pitch(slice_family(snow.ev, snow.frame, decades(-3, -6, 4)));
    CHECK(std::abs(e1.p_hat + 0.75) < 0.02);
    CHECK_FALSE(e1.warning);

    Probe horo(make_gauss_pair("z", "0"));
    auto e2 = estimate_pitch(slice_family(horo.ev, horo.frame, decades(-3, -6, 4)));
    CHECK(std::abs(e2.p_hat + 0.5) < 0.01);

    Probe nodes(make_g_omega("z", "-z^(-5)*exp(2*z^3)"));
    auto e3 = estimate_pitch(slice_family(nodes.ev, nodes.frame, decades(-6, -9, 4)));
    CHECK(std::abs(e3.p_hat + 0.8) < 0.02);
    CHECK(std::isfinite(e3.stderr_));

    CHECK_THROWS_AS(estimate_pitch(slice_family(snow.ev, snow.frame, decades(-3, -4, 4))), SliceError);
    CHECK_THROWS_AS(estimate_pitch(slice_family(snow.ev, snow.frame, decades(-3, -6, 3))), SliceError);
}

TEST_CASE("nodes end follows the indentation profile on the principal axis") {
    Probe p(make_g_omega("z", "-z^(-5)*exp(2*z^3)"));
    REQUIRE(p.frame.normalized);
    AsymptoticProfile a = asymptotic_profile(p.report, p.report.normalized);
    CHECK(a.branch == ProfileBranch::Indentation);
    auto sl = slice_family(p.ev, p.frame, decades(-6, -9, 4));
    ProfileReport rep = fit_profile(sl, a);
    CHECK(rep.decreasing);
    CHECK(rep.per_height.back().residual < 1e-6);
    CHECK_FALSE(rep.basepoint_hint);
    // without the bN term the residual is of order h^beta
    AsymptoticProfile bare = a;
    bare.b = 0.0;
    ProfileReport r0 = fit_profile(sl, bare);
    for (std::size_t i = 0; i < sl.size(); ++i) CHECK(r0.per_height[i].residual > 100 * rep.per_height[i].residual);
}

TEST_CASE("complete cylindrical slices tend to the circle of radius (lambda - m^2/4lambda)/m") {
    Probe p(make_gauss_pair("z", "-z+z^3"));
    REQUIRE(p.report.type == EndType::CylindricalComplete);
    const double want = (p.report.lambda - 1.0 / (4 * p.report.lambda));
    double prev = 1e300;
    for (double h : {1e-2, 1e-3, 1e-4}) {
        SliceCurve c = slice(p.ev, p.frame, h);
        double err = 0.0;
        for (cplx z : c.zeta_over_h) err = std::max(err, std::abs(std::abs(z) - want));
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-4);
    AsymptoticProfile a = asymptotic_profile(p.report, p.report.normalized);
    ProfileReport rep = fit_profile(slice_family(p.ev, p.frame, {1e-2, 1e-3, 1e-4}), a);
    CHECK(rep.decreasing);
    CHECK_THROWS_AS(fit_basepoint(slice_family(p.ev, p.frame, {1e-3}), a), SliceError);
}

TEST_CASE("incomplete (1,2) end converges to the cycloid") {
    Probe p(make_gauss_pair("z", "-z+z^3", {}, std::sqrt(2.0)));
    REQUIRE(p.report.type == EndType::Hypocycloid);
    double prev = 1e300;
    for (double h : decades(-1, -2.5, 4)) {
        SliceCurve c = slice(p.ev, p.frame, h);
        CycloidSliceFit f = fit_cycloid_slice(c, 1, 2);
        CAPTURE(h);
        CHECK(f.cusps == 4);
        CHECK(f.hausdorff < prev);
        prev = f.hausdorff;
        if (h < 0.005) CHECK(f.hausdorff < 0.05 * f.diameter);
    }
    AsymptoticProfile a = asymptotic_profile(p.report, p.report.normalized);
    ProfileReport rep = fit_profile(slice_family(p.ev, p.frame, decades(-1, -2.5, 4)), a);
    CHECK(rep.decreasing);
    for (const auto& r : rep.per_height) CHECK(r.hausdorff.has_value());
}

TEST_CASE("basepoint shift scales the slice by e^{-tau p}") {
    Probe snow(make_gauss_pair("z", "z/2"));
    const double tau = 0.7, p = -0.75;
    for (double h : {1e-4, 1e-5}) {
        double a = mean_abs(slice(snow.ev, snow.frame, h));
        double b = mean_abs(slice(snow.ev, shift_basepoint(snow.frame, tau), h));
        CHECK(std::abs(b / a / std::exp(-tau * p) - 1.0) < 0.01);
    }
    // the profile fit sees the offset and proposes the shift undoing it
    AsymptoticProfile ap = asymptotic_profile(snow.report, snow.report.normalized);
    auto shifted = slice_family(snow.ev, shift_basepoint(snow.frame, tau), decades(-4, -6, 3));
    ProfileReport rep = fit_profile(shifted, ap);
    REQUIRE(rep.basepoint_hint);
    CHECK(std::abs(*rep.basepoint_hint + tau) < 0.01);
    CHECK(std::abs(fit_basepoint(shifted, ap) + tau) < 0.01);

    Probe inc(make_gauss_pair("z", "-z+z^3", {}, std::sqrt(2.0)));
    const double beta = 2.0;
    SliceCurve c0 = slice(inc.ev, inc.frame, 1e-2), c1 = slice(inc.ev, shift_basepoint(inc.frame, 0.3), 1e-2);
    double s0 = std::abs(fit_cycloid_slice(c0, 1, 2).fit.C), s1 = std::abs(fit_cycloid_slice(c1, 1, 2).fit.C);
    CHECK(std::abs(s1 / s0 / std::exp(-0.3 * beta) - 1.0) < 0.01);
}

TEST_CASE("parallel fronts share the pitch") {
    for (double t : {0.3, -0.4}) {
        Probe base(make_gauss_pair("z", "z/2")), par(make_gauss_pair("z", "z/2"), t);
        auto hs = decades(-3, -6, 4);
        double p0 = estimate_pitch(slice_family(base.ev, base.frame, hs)).p_hat;
        double p1 = estimate_pitch(slice_family(par.ev, par.frame, hs)).p_hat;
        CHECK(std::abs(p0 - p1) < 0.01);
    }
    Probe base(make_g_omega("z", "-z^(-5)*exp(2*z^3)")), par(make_g_omega("z", "-z^(-5)*exp(2*z^3)"), 0.2);
    auto hs = decades(-6, -9, 4);
    CHECK(std::abs(estimate_pitch(slice_family(base.ev, base.frame, hs)).p_hat -
                   estimate_pitch(slice_family(par.ev, par.frame, hs)).p_hat) < 0.01);
}

TEST_CASE("slices outside the series disc are refused") {
    Probe p(make_g_omega("z", "-z^(-5)*exp(2*z^3)"));
    CHECK_THROWS_AS(slice(p.ev, p.frame, 1e-2), SliceError);
    CHECK_THROWS_AS(slice(p.ev, p.frame, -1.0), SliceError);
}
