#include "flatfront/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "flatfront/caustic.hpp"
#include "flatfront/config.hpp"
#include "flatfront/cycloid.hpp"
#include "flatfront/end.hpp"
#include "flatfront/flux.hpp"
#include "flatfront/slice.hpp"

#ifndef FLATFRONT_DATA_DIR
#define FLATFRONT_DATA_DIR "data/examples"
#endif

namespace flatfront {

std::string default_data_dir() { return FLATFRONT_DATA_DIR; }

namespace {

constexpr double kPi = std::numbers::pi;

// collects failures; the first few go into the detail line
class Tally {
public:
    void require(bool ok, const std::string& what) {
        if (ok) return;
        ++failures_;
        if (failures_ <= 3) fail_ << (failures_ > 1 ? "; " : "") << what;
    }
    void note(const std::string& s) { note_ << (note_.tellp() > 0 ? ", " : "") << s; }
    bool ok() const { return failures_ == 0; }
    std::string detail() const {
        if (ok()) return note_.str();
        std::string s = std::to_string(failures_) + " failed: " + fail_.str();
        if (note_.tellp() > 0) s += " | " + note_.str();
        return s;
    }

private:
    int failures_ = 0;
    mutable std::ostringstream fail_, note_;
};

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

std::string fix(double x, int digits = 4) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

struct Examples {
    std::string dir;
    FrontSpec load(const std::string& file) const { return load_front_spec(dir + "/" + file); }
};

std::vector<double> log_heights(double from, double to, int count) {
    std::vector<double> h;
    for (int i = 0; i < count; ++i) h.push_back(std::pow(10.0, from + (to - from) * i / (count - 1)));
    return h;
}

struct EndProbe {
    FrontEvaluator ev;
    EndReport report;
    SliceFrame frame;

    EndProbe(const WeierstrassData& d, ExpansionPoint at, double t = 0.0)
        : ev(d, build_lift(d, at), t), report(classify_end(ev.canonical(), at)), frame(slice_frame(ev, report)) {}
};

// |a_e - b_e - c_e| per exponent against the largest operand coefficient
double difference_residual(const Series& a, const Series& b, const Series& c) {
    bool any = false;
    Rational lo(0), hi(0);
    for (const Series* s : {&a, &b, &c}) {
        if (s->is_zero()) continue;
        lo = any ? std::min(lo, s->nu()) : s->nu();
        hi = any ? std::min(hi, s->top()) : s->top();
        any = true;
    }
    if (!any) return 0.0;
    double scale = 0.0, diff = 0.0;
    for (Rational e = lo; e <= hi; e += 1) {
        scale = std::max({scale, std::abs(a.coeff(e)), std::abs(b.coeff(e)), std::abs(c.coeff(e))});
        diff = std::max(diff, std::abs(a.coeff(e) - b.coeff(e) - c.coeff(e)));
    }
    return scale == 0.0 ? 0.0 : diff / scale;
}

double chordal_pair(const std::array<BoundaryPoint, 2>& a, const std::array<BoundaryPoint, 2>& b) {
    double direct = std::max(chordal_distance(a[0], b[0]), chordal_distance(a[1], b[1]));
    double swapped = std::max(chordal_distance(a[0], b[1]), chordal_distance(a[1], b[0]));
    return std::min(direct, swapped);
}

Mat2 random_sl2(std::mt19937& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Mat2 u{cplx(n(rng), n(rng)), cplx(n(rng), n(rng)), cplx(n(rng), n(rng)), cplx(n(rng), n(rng))};
    return normalize_sl2(u);
}

// ---- criteria ----

void exact_pitch_table(const Examples& ex, Tally& t) {
    for (int k : {3, 4, 5}) {
        FrontSpec s = ex.load("knoid" + std::to_string(k) + ".json");
        WeierstrassData d = s.data();
        const Rational want(-(k - 2), 2 * k - 2);
        for (const auto& at : s.ends) {
            EndReport r = classify_end(d, at);
            t.require(r.p == want && r.type == EndType::Hourglass,
                      s.name + " at " + format_point(at) + ": p = " + to_string(r.p));
        }
        t.note(std::to_string(k) + "-noid " + to_string(want));
    }
    for (auto [k, dd] : {std::pair{1, 3}, std::pair{2, 2}}) {
        FrontSpec s = ex.load("n2noid_k" + std::to_string(k) + "_d" + std::to_string(dd) + ".json");
        WeierstrassData d = s.data();
        const Rational snow(-(2 * k + dd), 2 * k + 2 * dd);
        for (const auto& at : s.ends) {
            EndReport r = classify_end(d, at);
            const bool pole = at.at_infinity || std::abs(at.a) == 0.0;
            Rational want = pole ? Rational(-1, 2) : snow;
            t.require(r.p == want, s.name + " at " + format_point(at) + ": p = " + to_string(r.p));
        }
        t.note("(k,d)=(" + std::to_string(k) + "," + std::to_string(dd) + ") -1/2 and " + to_string(snow));
    }
    FrontSpec nodes = ex.load("nodes.json");
    EndReport r = classify_end(nodes.data(), nodes.ends.at(0));
    t.require(r.p == Rational(-4, 5), "nodes: p = " + to_string(r.p));
    t.note("nodes " + to_string(r.p));
}

void caustic_pitch(const Examples& ex, Tally& t) {
    auto check = [&](const WeierstrassData& d, const ExpansionPoint& at, CausticEndKind kind, Rational want,
                     const std::string& label) {
        CausticData c = analyze_caustic(d, at);
        t.require(c.kind == kind, label + ": wrong caustic end kind");
        t.require(c.pitch.p_c == want, label + ": p_c = " + to_string(c.pitch.p_c));
        EndReport rc = classify_caustic(c);
        t.require(rc.p == want, label + ": caustic lift gives p = " + to_string(rc.p));
    };
    for (int k : {3, 4}) {
        FrontSpec s = ex.load("knoid" + std::to_string(k) + ".json");
        WeierstrassData d = s.data();
        for (const auto& at : s.umbilics)
            check(d, at, CausticEndKind::UEnd, Rational(k, k - 2), s.name + " U-end " + format_point(at));
        for (const auto& at : s.ends) check(d, at, CausticEndKind::EEnd, Rational(2), s.name + " E-end " + format_point(at));
        t.note(std::to_string(k) + "-noid U " + to_string(Rational(k, k - 2)) + " E 2");
    }
    for (auto [k, dd] : {std::pair{1, 3}, std::pair{2, 2}}) {
        FrontSpec s = ex.load("n2noid_k" + std::to_string(k) + "_d" + std::to_string(dd) + ".json");
        WeierstrassData d = s.data();
        for (const auto& at : s.ends) {
            const bool pole = at.at_infinity || std::abs(at.a) == 0.0;
            // the d snowman ends have complete caustic ends
            check(d, at, CausticEndKind::EEnd, pole ? Rational(dd, 2 * k + dd) : Rational(0),
                  s.name + " E-end " + format_point(at));
        }
        t.note("(k,d)=(" + std::to_string(k) + "," + std::to_string(dd) + ") " + to_string(Rational(dd, 2 * k + dd)));
    }
    FrontSpec snow = ex.load("snowman.json");
    for (const auto& at : snow.ends) check(snow.data(), at, CausticEndKind::EEnd, Rational(0), "snowman " + format_point(at));
    t.note("snowman 0");
}

cplx eigenvalue(const Mat2& traceless) { return std::sqrt(-traceless.det()); }

void flux_eigenvalues(const Examples& ex, Tally& t) {
    struct Case {
        const char *G, *Gs;
        int m;
        double alpha;
    };
    double worst = 0.0;
    for (const Case& c : {Case{"z", "z/2", 1, 0.5}, Case{"z^2", "-z^2/2", 2, -0.5}, Case{"z", "-z", 1, -1.0}}) {
        FluxReport f = flux_matrix(make_gauss_pair(c.G, c.Gs), ExpansionPoint::finite(0.0));
        const double want = std::abs(2.0 * c.m * c.alpha / ((1 - c.alpha) * (1 - c.alpha)));
        const double err = std::abs(std::abs(eigenvalue(f.numeric)) - want);
        worst = std::max(worst, err);
        t.require(err < 1e-8, std::string("(") + c.G + ", " + c.Gs + "): |lambda| off by " + sci(err));
        t.require(std::abs(f.numeric.trace()) < 1e-10, std::string(c.G) + ": contour flux not traceless");
    }
    t.note("max eigenvalue error " + sci(worst));
    FrontSpec horo = ex.load("horosphere.json");
    FluxReport h = flux_matrix(horo.data(), horo.ends.at(0));
    const double hmax = std::max(std::abs(h.eigenvalues[0]), std::abs(h.eigenvalues[1]));
    const double hnum = std::abs(eigenvalue(h.numeric));
    t.require(hmax < 1e-9 && hnum < 1e-9, "horosphere eigenvalues " + sci(std::max(hmax, hnum)));
    t.note("horosphere " + sci(std::max(hmax, hnum)));
}

void balancing(const Examples& ex, Tally& t) {
    for (int k : {3, 4}) {
        FrontSpec s = ex.load("knoid" + std::to_string(k) + ".json");
        BalancingResult b = balancing_check(s.data(), s.ends, std::vector<double>(s.ends.size(), 0.3));
        double largest = 0.0;
        for (const Mat2& m : b.fluxes) largest = std::max(largest, m.max_abs());
        t.require(b.max_norm < 1e-7, s.name + ": |sum| = " + sci(b.max_norm));
        t.require(largest > 1e-3, s.name + ": end fluxes vanish, balancing is vacuous");
        t.note(s.name + " |sum| " + sci(b.max_norm));
    }
}

void principal_axis(const Examples& ex, Tally& t) {
    FrontSpec s = ex.load("nodes.json");
    WeierstrassData d = s.data();
    FluxReport f = flux_matrix(d, s.ends.at(0));
    EndReport r = classify_end(d, s.ends.at(0));
    t.require(r.indentation.principal_axis.has_value(), "no principal axis");
    t.require(f.axis.has_value(), "flux is nilpotent");
    if (!r.indentation.principal_axis || !f.axis) return;
    double dist = chordal_pair(*f.axis, *r.indentation.principal_axis);
    t.require(dist < 1e-6, "axis distance " + sci(dist));
    t.note("chordal distance " + sci(dist));
}

void schwarzian_identity(const Examples& ex, Tally& t) {
    double worst = 0.0, dual = 0.0;
    int points = 0;
    for (const auto& entry : std::filesystem::directory_iterator(ex.dir)) {
        if (entry.path().extension() != ".json") continue;
        FrontSpec s = load_front_spec(entry.path().string());
        t.require(s.truncation == kDefaultTruncation, s.name + ": truncation is not 24");
        WeierstrassData d = s.data();
        std::vector<ExpansionPoint> pts = s.ends;
        pts.insert(pts.end(), s.umbilics.begin(), s.umbilics.end());
        for (const auto& at : pts) {
            CanonicalData c = canonical_data(build_lift(d, at));
            Series twoQ = 2.0 * c.Q.base;
            Series Sg = schwarzian_from_derivative(c.omega.base).base, SG = schwarzian(c.G).base;
            const std::string label = s.name + " at " + format_point(at);
            double res = difference_residual(Sg, SG, twoQ);
            if (!twoQ.is_zero()) {
                Series lhs = Sg - SG;
                t.require(!lhs.is_zero() && lhs.nu() == twoQ.nu(), label + ": exponent mismatch");
            }
            t.require(res < 1e-10, label + ": residual " + sci(res));
            worst = std::max(worst, res);
            // the dual pair is reported only: roundoff follows the coefficient growth of G_*
            if (!c.theta.base.is_zero() && !differentiate(c.Gstar).is_zero())
                dual = std::max(dual, difference_residual(schwarzian_from_derivative(c.theta.base).base,
                                                          schwarzian(c.Gstar).base, twoQ));
            ++points;
        }
    }
    t.require(points > 0, "no bundled examples found in " + ex.dir);
    t.note(std::to_string(points) + " points, max residual " + sci(worst) + " (dual pair " + sci(dual) + ")");
}

void cycloid_convergence(const Examples& ex, Tally& t) {
    FrontSpec s = ex.load("hypocycloid.json");
    EndProbe p(s.data(), s.ends.at(0));
    t.require(p.report.type == EndType::Hypocycloid && p.report.m == 1 && p.report.n == 2,
              "end is not a (1,2) hypocycloid end");
    const std::vector<double> hs = log_heights(-1.0, -2.5, 4);
    double prev = 1e300;
    std::string seq;
    for (double h : hs) {
        SliceCurve c = slice(p.ev, p.frame, h);
        CycloidSliceFit f = fit_cycloid_slice(c, 1, 2);
        t.require(f.cusps == 4, "h = " + sci(h) + ": " + std::to_string(f.cusps) + " cusps");
        t.require(f.hausdorff < prev, "h = " + sci(h) + ": distance did not decrease");
        prev = f.hausdorff;
        seq += (seq.empty() ? "" : " ") + fix(f.hausdorff / f.diameter, 5);
        if (h == hs.back()) t.require(f.hausdorff < 0.05 * f.diameter, "final distance " + fix(f.hausdorff / f.diameter) + " of diameter");
    }
    t.note("distance/diameter " + seq + ", 4 cusps each");
}

void pitch_estimation(const Examples& ex, Tally& t) {
    for (const char* file : {"snowman.json", "horosphere.json", "nodes.json"}) {
        FrontSpec s = ex.load(file);
        EndProbe p(s.data(), s.ends.at(0));
        PitchEstimate e = estimate_pitch(slice_family(p.ev, p.frame, s.probe.heights));
        const double want = to_double(p.report.p);
        t.require(std::abs(e.p_hat - want) <= 0.02, s.name + ": p_hat " + fix(e.p_hat) + " vs " + to_string(p.report.p));
        t.note(s.name + " " + fix(e.p_hat) + " (" + to_string(p.report.p) + ")");
    }
}

void ode_closed_forms(Tally& t) {
    double g = 0.0, u = 0.0, r2 = 0.0;
    for (auto [m, n] : {std::pair{2, 1}, std::pair{1, 2}, std::pair{2, 3}}) {
        CycloidOdeCheck c = check_ode_solution(m, n, ode_solve(m, n));
        const std::string label = "p = " + std::to_string(n) + "/" + std::to_string(m);
        t.require(c.gamma_residual < 1e-6, label + ": Gamma residual " + sci(c.gamma_residual));
        t.require(c.u_residual < 1e-8, label + ": u residual " + sci(c.u_residual));
        t.require(c.r2_residual < 1e-8, label + ": r^2 residual " + sci(c.r2_residual));
        g = std::max(g, c.gamma_residual);
        u = std::max(u, c.u_residual);
        r2 = std::max(r2, c.r2_residual);
    }
    t.note("Gamma " + sci(g) + ", u " + sci(u) + ", r^2 " + sci(r2));
}

void boundary_classes(const Examples& ex, Tally& t) {
    std::mt19937 rng(20240611u);
    double worst = 0.0;
    for (const char* file : {"snowman.json", "nodes.json"}) {
        FrontSpec s = ex.load(file);
        WeierstrassData d = s.data();
        FrontEvaluator ev(d, build_lift(d, s.ends.at(0)));
        const PolarGrid& g = s.probe.grid;
        std::uniform_real_distribution<double> lr(std::log(g.r_min), std::log(g.r_max)),
            ang(0.0, 2 * kPi * ev.covering_sheets());
        for (int i = 0; i < 100; ++i) {
            FrontPoint p = ev.at_polar(std::exp(lr(rng)), ang(rng));
            BoundaryPoint b = boundary_class(front_point(p.E), normal_point(p.E));
            double dist = chordal_distance(b, projectivize(p.E.a, p.E.c));
            worst = std::max(worst, dist);
        }
    }
    t.require(worst < 1e-8, "boundary class off by " + sci(worst));
    Mat2 e0 = herm_basis(0), e1 = herm_basis(1), e2 = herm_basis(2), e3 = herm_basis(3);
    double cross = distance(exterior_product(e0, e1, e2), e3);
    t.require(cross == 0.0, "e1 x e2 - e3 = " + sci(cross));
    t.note("200 samples, max chordal " + sci(worst) + ", |e1 x e2 - e3| " + sci(cross));
}

void structural(const Examples& ex, Tally& t) {
    // det E along ODE continuation past the series disc
    double drift = 0.0;
    {
        FrontSpec k3 = ex.load("knoid3.json"), nodes = ex.load("nodes.json");
        for (auto [d, at] : {std::pair{k3.data(), ExpansionPoint::infinity()}, std::pair{nodes.data(), nodes.ends.at(0)}}) {
            FrontEvaluator ev(d, build_lift(d, at));
            for (double a : {0.3, 1.7, 2.5, 4.4}) {
                FrontPoint o = ev.ode_at(2.0 * ev.series_radius(), a);
                drift = std::max({drift, o.det_drift, std::abs(o.E.det() - 1.0)});
            }
        }
        t.require(drift < 1e-10, "det drift " + sci(drift));
    }
    // rho_t = e^{-2t} rho
    double rho_res = 0.0;
    for (const char* file : {"snowman.json", "hypocycloid.json", "nodes.json", "knoid4.json"}) {
        FrontSpec s = ex.load(file);
        LocalLift L = build_lift(s.data(), s.ends.at(0));
        CanonicalData c = canonical_data(L);
        for (double tt : {-0.8, 0.3, 1.1})
            rho_res = std::max(rho_res, relative_residual(canonical_data(parallel_lift(L, tt)).rho, std::exp(-2 * tt) * c.rho));
    }
    t.require(rho_res < 1e-12, "rho_t residual " + sci(rho_res));
    // complete ends keep the pitch under parallel shifts; incomplete ones become complete
    for (const char* file : {"snowman.json", "nodes.json", "knoid4.json", "cylinder.json", "hypocycloid.json"}) {
        FrontSpec s = ex.load(file);
        LocalLift L = build_lift(s.data(), s.ends.at(0));
        EndReport r0 = classify_end(canonical_data(L), s.ends.at(0));
        for (double tt : {-0.6, 0.4}) {
            EndReport rt = classify_end(canonical_data(parallel_lift(L, tt)), s.ends.at(0));
            if (r0.complete)
                t.require(rt.complete && rt.p == r0.p, s.name + ": parallel front changes p");
            else
                t.require(rt.complete && rt.type == EndType::CylindricalComplete,
                          s.name + ": parallel front of an incomplete end is not complete");
        }
    }
    double slice_gap = 0.0;
    for (const char* file : {"snowman.json", "nodes.json"}) {
        FrontSpec s = ex.load(file);
        WeierstrassData d = s.data();
        EndProbe base(d, s.ends.at(0)), par(d, s.ends.at(0), 0.3);
        double p0 = estimate_pitch(slice_family(base.ev, base.frame, s.probe.heights)).p_hat;
        double p1 = estimate_pitch(slice_family(par.ev, par.frame, s.probe.heights)).p_hat;
        slice_gap = std::max(slice_gap, std::abs(p0 - p1));
    }
    t.require(slice_gap < 0.01, "parallel pitch estimates differ by " + fix(slice_gap));
    // Pi(u v) = u * Pi(v)
    std::mt19937 rng(7);
    std::normal_distribution<double> nd(0.0, 1.0);
    double moeb = 0.0;
    for (int i = 0; i < 200; ++i) {
        Mat2 u = random_sl2(rng);
        cplx x(nd(rng), nd(rng)), y(nd(rng), nd(rng));
        BoundaryPoint lhs = projectivize(u.a * x + u.b * y, u.c * x + u.d * y);
        moeb = std::max(moeb, chordal_distance(lhs, moebius_star(u, projectivize(x, y))));
    }
    t.require(moeb < 1e-12, "Moebius equivariance " + sci(moeb));
    t.note("det drift " + sci(drift) + ", rho_t " + sci(rho_res) + ", parallel p_hat gap " + fix(slice_gap) +
           ", Pi " + sci(moeb));
}

struct Criterion {
    int id;
    const char* title;
    double budget;  // seconds; 0 = none
    std::function<void(const Examples&, Tally&)> run;
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const std::string& data_dir, const std::vector<int>& only) {
    const Examples ex{data_dir};
    const std::vector<Criterion> all = {
        {1, "exact pitch table", 1.0, exact_pitch_table},
        {2, "caustic pitch", 1.0, caustic_pitch},
        {3, "flux eigenvalues", 0.0, flux_eigenvalues},
        {4, "balancing", 0.0, balancing},
        {5, "principal axis is the flux axis", 0.0, principal_axis},
        {6, "Schwarzian identity", 0.0, schwarzian_identity},
        {7, "cycloid convergence", 30.0, cycloid_convergence},
        {8, "pitch estimation", 0.0, pitch_estimation},
        {9, "cycloid ODE", 0.0, [](const Examples&, Tally& t) { ode_closed_forms(t); }},
        {10, "boundary class of the normal", 0.0, boundary_classes},
        {11, "structural invariants", 60.0, structural},
    };
    std::vector<CriterionResult> out;
    for (const Criterion& c : all) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        CriterionResult r;
        r.id = c.id;
        r.title = c.title;
        Tally t;
        auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(ex, t);
        } catch (const std::exception& e) {
            t.require(false, std::string("error: ") + e.what());
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget > 0.0) t.require(r.seconds < c.budget, "took " + fix(r.seconds, 2) + " s, budget " + fix(c.budget, 0) + " s");
        r.pass = t.ok();
        r.detail = t.detail();
        out.push_back(r);
    }
    return out;
}

std::string format_result(const CriterionResult& r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " (%.2f s)", r.seconds);
    return std::string(r.pass ? "PASS" : "FAIL") + " [" + std::to_string(r.id) + "] " + r.title + ": " + r.detail + buf;
}

}  // namespace flatfront
