#include "flatfront/front.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "flatfront/parallel.hpp"

namespace flatfront {

namespace {

constexpr cplx I1(0.0, 1.0);

Series local_form(const Expression& e, ExpansionPoint at, int N) {
    Series s = expand_at(e, at, N);
    if (!at.at_infinity || s.is_zero()) return s;
    return s * chart_jacobian(at, N);
}


}  // namespace

WeierstrassData make_g_omega(const std::string& G, const std::string& omega,
                             const std::map<std::string, cplx>& params) {
    WeierstrassData d;
    d.kind = DataKind::GOmega;
    d.G = parse_expression(G, params);
    d.second = parse_expression(omega, params);
    d.G_text = G;
    d.second_text = omega;
    return d;
}

WeierstrassData make_gauss_pair(const std::string& G, const std::string& Gstar,
                                const std::map<std::string, cplx>& params, cplx delta) {
    WeierstrassData d;
    d.kind = DataKind::GaussPair;
    d.G = parse_expression(G, params);
    d.second = parse_expression(Gstar, params);
    d.G_text = G;
    d.second_text = Gstar;
    d.delta = delta;
    return d;
}

LocalLift lift_from_g_omega(const Series& G, const Series& omega) {
    Series Gp = differentiate(G);
    if (Gp.is_zero()) throw FrontError("constant Gauss map: use dual pair");
    if (omega.is_zero()) throw FrontError("omega vanishes identically");
    Series C = I1 * pow_real(omega / Gp, Rational(1, 2));
    Series GC = G * C;
    LocalLift L;
    L.E11 = GC;
    L.E21 = C;
    L.E12 = differentiate(GC) / omega;
    L.E22 = differentiate(C) / omega;
    return L;
}

LocalLift lift_from_gauss_pair(const Series& G, const Series& Gstar, cplx delta) {
    if (delta == cplx(0)) throw FrontError("delta must be nonzero");
    Series D = G - Gstar;
    if (D.is_zero()) throw FrontError("degenerate data: G equals G_*");
    Series Gp = differentiate(G);
    int N = D.N();
    Rational r(0);
    Series expo;  // regular part of dG/(G - G_*), integrated
    if (!Gp.is_zero()) {
        Series F = Gp / D;
        N = F.N();
        if (F.nu() < Rational(-1))
            throw FrontError("dG/(G - G_*) has a pole of order above one: irregular end");
        if (!is_integer(F.nu())) throw FrontError("fractional exponents in dG/(G - G_*)");
        Series reg = F;
        if (F.nu() == Rational(-1)) {
            cplx res = F.leading();
            if (std::abs(res.imag()) > 1e-9 * std::max(1.0, std::abs(res)))
                throw FrontError("residue of dG/(G - G_*) is not real");
            auto q = recognize_rational(res.real());
            if (!q) throw FrontError("residue of dG/(G - G_*) is not a recognizable rational");
            r = *q;
            reg = F - Series::monomial(res, Rational(-1), F.N());
        }
        if (!reg.is_zero()) expo = integrate(reg);
    }
    Series xi = delta * Series::monomial(1.0, r, N);
    if (!expo.is_zero()) xi = xi * exp_series(expo);
    LocalLift L;
    L.xi_exponent = r;
    L.E11 = G / xi;
    L.E21 = pow_real(xi, Rational(-1));
    L.E12 = Gstar.is_zero() ? Series() : xi * Gstar / D;
    L.E22 = xi / D;
    return L;
}

LocalLift build_lift(const WeierstrassData& data, ExpansionPoint at) {
    int N = data.truncation;
    Series G = expand_at(data.G, at, N);
    LocalLift L;
    if (data.kind == DataKind::GOmega) {
        L = lift_from_g_omega(G, local_form(data.second, at, N));
    } else {
        Series Gs = expand_at(data.second, at, N);
        cplx delta = data.delta;
        if (data.basepoint) {
            // path integral of dG/(G - G_*) from the basepoint to a point near the end,
            // matched against the local normalization there
            LocalLift probe = lift_from_gauss_pair(G, Gs, 1.0);
            double R = 0.25 * std::min(1.0, probe.E21.validity_radius());
            cplx w1 = std::polar(R, 0.0);
            cplx z0 = *data.basepoint, z1 = at.to_global(w1);
            const int M = 4096;
            cplx acc(0);
            auto F = [&](cplx z) {
                auto [g, gp] = data.G.eval_with_derivative(z);
                return gp / (g - data.second.eval(z));
            };
            for (int k = 0; k < M; ++k) {
                // Simpson on each of M pieces
                cplx a = z0 + (z1 - z0) * (double(k) / M), b = z0 + (z1 - z0) * (double(k + 1) / M);
                acc += (b - a) / 6.0 * (F(a) + 4.0 * F(0.5 * (a + b)) + F(b));
            }
            cplx local = 1.0 / probe.E21.eval_polar(R, 0.0);
            delta = data.delta * std::exp(acc) / local;
        }
        L = lift_from_gauss_pair(G, Gs, delta);
    }
    L.at = at;
    return L;
}

LocalLift dual_lift(const LocalLift& L) {
    LocalLift D = L;
    D.E11 = I1 * L.E12;
    D.E12 = I1 * L.E11;
    D.E21 = I1 * L.E22;
    D.E22 = I1 * L.E21;
    return D;
}

LocalLift parallel_lift(const LocalLift& L, double t) {
    LocalLift P = L;
    cplx a = std::exp(t / 2), b = std::exp(-t / 2);
    P.E11 = a * L.E11;
    P.E21 = a * L.E21;
    P.E12 = b * L.E12;
    P.E22 = b * L.E22;
    return P;
}

CanonicalData canonical_data(const LocalLift& L, double tol) {
    auto d = [](const Series& s) { return differentiate(s); };
    auto prod = [](const Series& a, const Series& b) {
        return (a.is_zero() || b.is_zero()) ? Series() : a * b;
    };
    CanonicalData c;
    Series w1 = prod(L.E11, d(L.E21)), w2 = prod(L.E21, d(L.E11));
    Series t1 = prod(L.E22, d(L.E12)), t2 = prod(L.E12, d(L.E22));
    Series d1 = prod(L.E22, d(L.E11)), d2 = prod(L.E12, d(L.E21));
    c.omega = {w1 - w2, 1};
    c.theta = {t1 - t2, 1};
    c.diagonal_residual = relative_residual(d1, d2);
    Series det = prod(L.E11, L.E22) - prod(L.E12, L.E21);
    c.det_residual = relative_residual(det, Series::constant(1.0, std::max(0, det.N())));
    if (c.diagonal_residual > tol) throw FrontError("not Legendrian: diagonal of E^-1 dE is nonzero");
    if (c.omega.base.is_zero()) throw FrontError("omega vanishes identically");
    c.Q = form_product(c.omega, c.theta);
    c.rho = c.theta.base.is_zero() ? Series() : c.theta.base / c.omega.base;
    c.G = L.E11 / L.E21;
    if (!L.E22.is_zero()) c.Gstar = L.E12.is_zero() ? Series() : L.E12 / L.E22;
    return c;
}

Mat2 front_point(const Mat2& E) { return E * E.star(); }
Mat2 normal_point(const Mat2& E) { return E * Mat2::diag(1.0, -1.0) * E.star(); }

Mat2 caustic_point(const FrontPoint& p) {
    double a = std::abs(p.rho);
    if (!(a > 0.0) || !std::isfinite(a)) throw FrontError("caustic undefined at umbilic");
    double t = 0.5 * std::log(a);
    return p.E * Mat2::diag(std::exp(t), std::exp(-t)) * p.E.star();
}

// ---------------------------------------------------------------------------

namespace {

using State = std::array<cplx, 5>;

Mat2 state_matrix(const State& x) { return {x[0], x[1], x[2], x[3]}; }

struct Rhs {
    const WeierstrassData* data;
    ExpansionPoint at;
    double dir;  // angle of the radial path in the local chart

    // canonical forms omega, theta (coefficients of dz) at z
    std::pair<cplx, cplx> forms(cplx z, const State& x) const {
        if (data->kind == DataKind::GaussPair) {
            auto [g, gp] = data->G.eval_with_derivative(z);
            auto [gs, gsp] = data->second.eval_with_derivative(z);
            cplx e21sq = x[2] * x[2];
            cplx D = g - gs;
            return {-gp * e21sq, gsp / (e21sq * D * D)};
        }
        // omega is carried in the state; theta = (S(g) - S(G))/(2 omega)
        Series Gj = expand_at(data->G, ExpansionPoint::finite(z), 4);
        Series Wj = expand_at(data->second, ExpansionPoint::finite(z), 3);
        cplx g1 = Gj.coeff(Rational(1)), g2 = 2.0 * Gj.coeff(Rational(2)), g3 = 6.0 * Gj.coeff(Rational(3));
        cplx w0 = Wj.coeff(Rational(0)), w1 = Wj.coeff(Rational(1)), w2 = 2.0 * Wj.coeff(Rational(2));
        cplx SG = g3 / g1 - 1.5 * (g2 / g1) * (g2 / g1);
        cplx Lw = w1 / w0, dLw = w2 / w0 - Lw * Lw;
        cplx Sg = dLw - 0.5 * Lw * Lw;
        return {x[4], (Sg - SG) / (2.0 * x[4])};
    }

    void operator()(const State& x, State& dxds, double s) const {
        cplx w = std::polar(s, dir);
        cplx z = at.to_global(w);
        cplx dz = at.jacobian(w) * std::polar(1.0, dir);
        auto [om, th] = forms(z, x);
        dxds[0] = x[1] * om * dz;
        dxds[1] = x[0] * th * dz;
        dxds[2] = x[3] * om * dz;
        dxds[3] = x[2] * th * dz;
        if (data->kind == DataKind::GOmega) {
            auto [v, dv] = data->second.eval_with_derivative(z);
            dxds[4] = x[4] * (dv / v) * dz;
        } else {
            dxds[4] = 0.0;
        }
    }
};

}  // namespace

FrontEvaluator::FrontEvaluator(const WeierstrassData& data, LocalLift lift, double parallel_t)
    : data_(data), lift_(std::move(lift)), t_(parallel_t) {
    canon_ = canonical_data(lift_);
    double R = std::numeric_limits<double>::infinity();
    for (const Series* s : {&lift_.E11, &lift_.E12, &lift_.E21, &lift_.E22})
        if (!s->is_zero()) R = std::min(R, s->validity_radius());
    if (!canon_.rho.is_zero()) R = std::min(R, canon_.rho.validity_radius());
    series_radius_ = std::isfinite(R) ? 0.35 * R : 1e6;

    // angular sheets after which f = E E* closes up
    double r = std::min(0.5 * series_radius_, 0.1);
    Mat2 f0 = front_point(series_at(r, 0.0).E);
    sheets_ = 0;
    for (int k = 1; k <= 12 && !sheets_; ++k) {
        Mat2 fk = front_point(series_at(r, 2.0 * std::numbers::pi * k).E);
        if (distance(f0, fk) <= 1e-8 * std::max(1.0, f0.max_abs())) sheets_ = k;
    }
    if (!sheets_) sheets_ = 1;
}

FrontEvaluator FrontEvaluator::parallel(double t) const {
    FrontEvaluator e = *this;
    e.t_ = t_ + t;
    return e;
}

namespace {

FrontPoint apply_parallel(FrontPoint p, double t) {
    if (t != 0.0) {
        p.E = p.E * Mat2::diag(std::exp(t / 2), std::exp(-t / 2));
        p.rho *= std::exp(-2.0 * t);
    }
    return p;
}

}  // namespace

FrontPoint FrontEvaluator::series_at(double r, double t) const {
    if (r > series_radius_)
        throw FrontError("evaluation outside the series validity radius without ODE fallback");
    FrontPoint p;
    p.E = {lift_.E11.eval_polar(r, t), lift_.E12.eval_polar(r, t), lift_.E21.eval_polar(r, t),
           lift_.E22.eval_polar(r, t)};
    p.rho = canon_.rho.eval_polar(r, t);
    return apply_parallel(p, t_);
}

FrontPoint FrontEvaluator::ode_at(double r, double t, double r_start) const {
    namespace odeint = boost::numeric::odeint;
    double s0 = std::min(r, r_start > 0 ? std::min(r_start, series_radius_) : series_radius_);
    FrontPoint start;
    start.E = {lift_.E11.eval_polar(s0, t), lift_.E12.eval_polar(s0, t), lift_.E21.eval_polar(s0, t),
               lift_.E22.eval_polar(s0, t)};
    State x{start.E.a, start.E.b, start.E.c, start.E.d, cplx(0)};
    cplx w0 = std::polar(s0, t);
    if (data_.kind == DataKind::GOmega)
        x[4] = canon_.omega.base.eval_polar(s0, t) / lift_.at.jacobian(w0);

    Rhs sys{&data_, lift_.at, t};
    auto stepper = odeint::make_controlled(1e-12, 1e-10, odeint::runge_kutta_dopri5<State>());
    double s = s0, ds = std::max(1e-6, 1e-3 * s0);
    double drift = 0.0;
    int guard = 0;
    while (s < r) {
        if (++guard > 1000000) throw FrontError("ODE continuation did not converge");
        ds = std::min(ds, r - s);
        if (stepper.try_step(sys, x, s, ds) == odeint::fail) {
            if (ds < 1e-14) throw FrontError("ODE step size underflow");
            continue;
        }
        Mat2 E = state_matrix(x);
        cplx dt = E.det();
        drift = std::max(drift, std::abs(dt - 1.0));
        cplx k = 1.0 / std::sqrt(dt);
        for (int j = 0; j < 4; ++j) x[static_cast<std::size_t>(j)] *= k;
    }
    FrontPoint p;
    p.E = state_matrix(x);
    p.via_ode = true;
    p.det_drift = drift;
    auto [om, th] = sys.forms(lift_.at.to_global(std::polar(r, t)), x);
    p.rho = th / om;
    return apply_parallel(p, t_);
}

FrontPoint FrontEvaluator::at_polar(double r, double t) const {
    if (r <= series_radius_) return series_at(r, t);
    return ode_at(r, t);
}

std::vector<SurfaceSample> sample_surface(const FrontEvaluator& ev, const PolarGrid& grid,
                                          double singular_tol) {
    if (grid.radial < 1 || grid.angular < 1 || !(grid.r_min > 0) || grid.r_max < grid.r_min)
        throw FrontError("invalid polar grid");
    std::size_t nr = static_cast<std::size_t>(grid.radial), nt = static_cast<std::size_t>(grid.angular);
    std::vector<SurfaceSample> out(nr * nt);
    double span = 2.0 * std::numbers::pi * std::max(1, grid.sheets);
    parallel_for(out.size(), [&](std::size_t k) {
        std::size_t i = k / nt, j = k % nt;
        double u = nr == 1 ? 0.0 : double(i) / double(nr - 1);
        double r = grid.r_min * std::pow(grid.r_max / grid.r_min, u);
        double t = span * double(j) / double(nt);
        FrontPoint p = ev.at_polar(r, t);
        SurfaceSample s;
        s.r = r;
        s.t = t;
        s.f = front_point(p.E);
        s.nu = normal_point(p.E);
        s.rho = p.rho;
        s.singular = std::abs(std::abs(p.rho) - 1.0) < singular_tol;
        out[k] = s;
    });
    return out;
}

int singular_crossings(const FrontEvaluator& ev, double r, int samples) {
    int count = 0;
    double span = 2.0 * std::numbers::pi * ev.covering_sheets();
    double prev = std::abs(ev.at_polar(r, 0.0).rho) - 1.0;
    for (int j = 1; j <= samples; ++j) {
        double cur = std::abs(ev.at_polar(r, span * j / samples).rho) - 1.0;
        if ((prev < 0) != (cur < 0)) ++count;
        prev = cur;
    }
    return count;
}

}  // namespace flatfront
