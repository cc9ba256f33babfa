#include "flatfront/caustic.hpp"

#include <algorithm>
#include <cmath>

namespace flatfront {

namespace {

constexpr cplx I1(0.0, 1.0);

// f(w^2) 2w for the coefficient of a one-form on the cover w^2 = z
Series pull_form(const Series& f, int degree) {
    if (f.is_zero()) return f;
    Series s = substitute_power(f, 2);
    cplx factor = degree == 1 ? cplx(2.0) : cplx(4.0);
    return s * Series::monomial(factor, Rational(degree), s.N());
}

Series pull_function(const Series& f) { return f.is_zero() ? f : substitute_power(f, 2); }

bool meets_at_zero(const Series& G, const Series& Gs) {
    auto value = [](const Series& s) -> std::pair<bool, cplx> {
        if (s.is_zero() || s.nu() > Rational(0)) return {false, 0.0};
        if (s.nu() < Rational(0)) return {true, 0.0};
        return {false, s.leading()};
    };
    auto [ga, gv] = value(G);
    auto [sa, sv] = value(Gs);
    if (ga || sa) return ga == sa;
    return std::abs(gv - sv) <= 1e-7 * std::max(1.0, std::abs(gv));
}

Rational exact_exponent(cplx s) {
    if (std::abs(s.imag()) > 1e-7) throw CausticError("complex Frobenius exponent");
    auto q = recognize_rational(s.real(), 1000, 1e-7);
    if (!q) throw CausticError("Frobenius exponent is not rational");
    return *q;
}

}  // namespace

std::string to_string(CausticEndKind k) { return k == CausticEndKind::EEnd ? "E-end" : "U-end"; }

CausticData caustic_forms(const CanonicalData& c) {
    if (c.Q.base.is_zero() || c.theta.base.is_zero()) throw CausticError("totally umbilic: caustic empty");
    CausticData d;
    d.kind = meets_at_zero(c.G, c.Gstar) ? CausticEndKind::EEnd : CausticEndKind::UEnd;
    d.ord_Q = c.Q.base.nu();
    if (!is_integer(d.ord_Q)) throw CausticError("Q has a fractional order");
    Series Sd = significant(schwarzian(c.Gstar).base - schwarzian(c.G).base, 1e-9);
    d.S_vanishes = Sd.is_zero();
    if (!d.S_vanishes) d.ord_S = Sd.nu();
    d.cover = d.ord_Q.numerator() % 2 == 0 ? 1 : 2;
    d.co_orientable = d.cover == 1;

    Series om = c.omega.base, th = c.theta.base, Q = c.Q.base, G = c.G, Gs = c.Gstar;
    if (d.cover == 2) {
        om = pull_form(om, 1);
        th = pull_form(th, 1);
        Q = pull_form(Q, 2);
        G = pull_function(G);
        Gs = pull_function(Gs);
    }
    Series rho = th / om;
    Series sqrtQ = pow_real(Q, Rational(1, 2));
    Series dlog = differentiate(rho) / rho;
    Series quarter = 0.25 * dlog;
    d.omega_c = {I1 * sqrtQ + quarter, 1};
    d.theta_c = {-I1 * sqrtQ + quarter, 1};
    d.Q_c = form_product(d.omega_c, d.theta_c);
    d.rho_c = d.theta_c.base / d.omega_c.base;
    d.Qc_residual = relative_residual(d.Q_c.base, Q + quarter * quarter);

    Series dlog_c = significant(differentiate(d.rho_c), 1e-9);
    Series Sw = significant(schwarzian(Gs).base - schwarzian(G).base, 1e-9);
    if (dlog_c.is_zero() && Sw.is_zero()) d.dlog_residual = 0.0;
    else if (dlog_c.is_zero() || Sw.is_zero()) d.dlog_residual = 1.0;
    else d.dlog_residual = relative_residual(dlog_c / d.rho_c, (0.5 * I1) * (sqrtQ * Sw) / d.Q_c.base);
    return d;
}

CausticPitch caustic_end_pitch(Rational ord_Q, Rational ord_S, CausticEndKind kind, int m_j,
                               std::optional<EndType> type_j) {
    CausticPitch p;
    if (kind == CausticEndKind::EEnd && type_j == EndType::Snowman) {
        p.complete = true;
        return p;
    }
    if (kind == CausticEndKind::UEnd && ord_Q <= Rational(0))
        throw CausticError("not a caustic end: Q does not vanish here");
    Rational half = ord_Q / 2;
    p.n_c = half + ord_S + 3;
    p.m_c = kind == CausticEndKind::EEnd ? half + m_j + 1 : half;
    if (p.m_c <= Rational(0) || p.n_c <= Rational(0)) throw CausticError("non-positive caustic end integers");
    p.p_c = p.n_c / p.m_c;
    return p;
}

CausticData analyze_caustic(const WeierstrassData& data, ExpansionPoint at) {
    CanonicalData c = canonical_data(build_lift(data, at));
    CausticData d = caustic_forms(c);
    int m_j = 0;
    std::optional<EndType> type;
    if (d.kind == CausticEndKind::EEnd) {
        EndReport r = classify_end(c, at);
        m_j = r.m;
        type = r.type;
    }
    if (d.S_vanishes && type != EndType::Snowman) throw CausticError("S(G_*) = S(G): rho_c is constant, pitch is infinite");
    d.pitch = caustic_end_pitch(d.ord_Q, d.ord_S, d.kind, m_j, type);
    return d;
}

LocalLift caustic_lift(const CausticData& cd) {
    const Series& om = cd.omega_c.base;
    const Series& Q = cd.Q_c.base;
    if (om.is_zero()) throw CausticError("caustic omega vanishes");
    Series z = Series::monomial(1.0, Rational(1));
    Series p = -1.0 * ((differentiate(om) / om) * z);
    Series q = -1.0 * (Q * z * z);
    if (p.nu() < Rational(0) || q.nu() < Rational(0)) throw CausticError("caustic point is an irregular singularity");
    const int N = std::min({om.N(), p.N(), q.N()});
    std::vector<cplx> pk(static_cast<std::size_t>(N) + 1), qk(static_cast<std::size_t>(N) + 1);
    for (int k = 0; k <= N; ++k) {
        pk[static_cast<std::size_t>(k)] = p.coeff(Rational(k));
        qk[static_cast<std::size_t>(k)] = q.coeff(Rational(k));
    }
    auto F = [&](cplx x) { return x * (x - 1.0) + pk[0] * x + qk[0]; };
    cplx disc = std::sqrt((1.0 - pk[0]) * (1.0 - pk[0]) - 4.0 * qk[0]);
    Rational s1 = exact_exponent(0.5 * ((1.0 - pk[0]) + disc));
    Rational s2 = exact_exponent(0.5 * ((1.0 - pk[0]) - disc));
    if (s1 < s2) std::swap(s1, s2);
    if (!is_integer(s1 - s2) || s1 == s2) throw CausticError("caustic Gauss map is not single valued on this cover");

    auto solve = [&](Rational s) {
        const double sd = to_double(s);
        std::vector<cplx> a(static_cast<std::size_t>(N) + 1, cplx(0));
        a[0] = 1.0;
        double scale = 1.0;
        for (int n = 1; n <= N; ++n) {
            cplx rhs = 0.0;
            for (int k = 1; k <= n; ++k)
                rhs -= a[static_cast<std::size_t>(n - k)] *
                       ((sd + n - k) * pk[static_cast<std::size_t>(k)] + qk[static_cast<std::size_t>(k)]);
            cplx Fn = F(sd + n);
            if (std::abs(Fn) < 1e-9) {
                if (std::abs(rhs) > 1e-7 * scale) throw CausticError("logarithmic term in the caustic lift");
                a[static_cast<std::size_t>(n)] = 0.0;
            } else {
                a[static_cast<std::size_t>(n)] = rhs / Fn;
            }
            scale = std::max(scale, std::abs(a[static_cast<std::size_t>(n)]));
        }
        return Series::from_coeffs(s, std::move(a));
    };
    Series y1 = solve(s1), y2 = solve(s2);
    LocalLift L;
    L.E11 = y1;
    L.E21 = y2;
    L.E12 = differentiate(y1) / om;
    L.E22 = differentiate(y2) / om;
    Series det = L.E11 * L.E22 - L.E12 * L.E21;
    if (det.is_zero() || det.nu() != Rational(0)) throw CausticError("caustic lift is degenerate");
    cplx c0 = det.leading();
    L.E11 = (1.0 / c0) * L.E11;
    L.E12 = (1.0 / c0) * L.E12;
    return L;
}

EndReport classify_caustic(const CausticData& cd) { return classify_end(canonical_data(caustic_lift(cd))); }

}  // namespace flatfront
