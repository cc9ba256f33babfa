#include "flatfront/end.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace flatfront {

namespace {

constexpr double kPi = std::numbers::pi;

int integer_order(const Series& s, const char* what) {
    Rational nu = s.nu();
    if (!is_integer(nu)) throw EndError(std::string(what) + " has a fractional order " + to_string(nu));
    return static_cast<int>(nu.numerator());
}

/// Value at w = 0 of a series with integer leading exponent.
BoundaryPoint value_at_zero(const Series& s) {
    if (s.is_zero()) return BoundaryPoint::at(0.0);
    if (s.nu() < Rational(0)) return BoundaryPoint::infinity();
    if (s.nu() > Rational(0)) return BoundaryPoint::at(0.0);
    return BoundaryPoint::at(s.leading());
}

bool same_point(const BoundaryPoint& a, const BoundaryPoint& b) {
    if (a.infinite || b.infinite) return a.infinite == b.infinite;
    return std::abs(a.value - b.value) <= 1e-7 * std::max(1.0, std::abs(a.value));
}

Series normalize_series(const Mat2& u, const Series& s, bool identity) {
    if (identity) return significant(s);
    return significant(moebius_star(u, s));
}

/// Moves far to infinity while keeping 0 fixed.
Mat2 axis_move(const BoundaryPoint& far) {
    if (far.infinite) return Mat2::identity();
    if (std::abs(far.value) == 0.0) throw EndError("axis endpoint coincides with the end");
    return Mat2{1.0, 0.0, -1.0 / far.value, 1.0};
}


std::optional<int> ramification_of(const Series& A) {
    if (A.is_zero()) return std::nullopt;
    if (A.nu() < Rational(0)) throw EndError("indentation ratio has a pole");
    cplx a0 = A.nu() == Rational(0) ? A.leading() : cplx(0);
    Series D = a0 == cplx(0) ? A : A - Series::constant(a0, std::max(0, A.N()));
    D = significant(D);
    if (D.is_zero()) return std::nullopt;
    return integer_order(D, "indentation ratio");
}

}  // namespace

Series gauss_coordinate(const Series& G, int m) {
    Series zeta = pow_real(G, Rational(1, m));
    if (zeta.nu() != Rational(1)) throw EndError("Gauss map is not of the form z^m");
    return revert(zeta);
}

std::string to_string(EndType t) {
    switch (t) {
        case EndType::Horospherical: return "horospherical";
        case EndType::Snowman: return "snowman";
        case EndType::Hourglass: return "hourglass";
        case EndType::CylindricalComplete: return "cylindrical_complete";
        case EndType::Epicycloid: return "epicycloid";
        case EndType::Hypocycloid: return "hypocycloid";
        case EndType::GeodesicDegenerate: return "geodesic_degenerate";
    }
    return "unknown";
}

std::string to_string(Pair p) { return p == Pair::GOmega ? "G_omega" : "Gstar_theta"; }

std::string to_string(ProfileKind k) {
    switch (k) {
        case ProfileKind::NonCylindrical: return "non_cylindrical";
        case ProfileKind::CylindricalComplete: return "cylindrical_complete";
        case ProfileKind::CylindricalIncomplete: return "cylindrical_incomplete";
    }
    return "unknown";
}

std::string to_string(ProfileBranch b) {
    switch (b) {
        case ProfileBranch::Indentation: return "bN";
        case ProfileBranch::IndentationAndS: return "bN+S";
        case ProfileBranch::SOnly: return "S";
    }
    return "unknown";
}

Series significant(const Series& s, double rel) {
    if (s.is_zero()) return s;
    double r0 = s.validity_radius();
    r0 = std::isfinite(r0) ? std::clamp(0.5 * r0, 1e-3, 1.0) : 1.0;
    const auto& c = s.coeffs();
    std::vector<double> w(c.size());
    double scale = 0.0, rj = 1.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        w[j] = std::abs(c[j]) * rj;
        scale = std::max(scale, w[j]);
        rj *= r0;
    }
    std::size_t k = 0;
    while (k < c.size() && w[k] <= rel * scale) ++k;
    if (k == 0) return s;
    if (k == c.size()) return Series();
    std::vector<cplx> tail(c.begin() + static_cast<std::ptrdiff_t>(k), c.end());
    return Series::from_coeffs(s.nu() + static_cast<std::int64_t>(k), std::move(tail));
}

EndOrders end_orders(const CanonicalData& c) {
    if (c.omega.base.is_zero()) throw EndError("omega vanishes identically");
    EndOrders o;
    o.mu = c.omega.base.nu();
    o.mu_star = order(c.theta.base);
    o.Q = order(c.Q.base);
    if (!o.Q.infinite && o.Q.value < Rational(-2))
        throw EndError("irregular end: ord Q = " + to_string(o.Q.value) + " < -2");
    return o;
}

Multiplicity multiplicity_and_ratio(const Series& G, const Series& Gstar) {
    if (G.is_zero() && Gstar.is_zero()) throw EndError("both Gauss maps vanish identically");
    Multiplicity r;
    constexpr int kNone = 1 << 20;
    r.m1 = G.is_zero() ? kNone : integer_order(G, "G");
    r.m2 = Gstar.is_zero() ? kNone : integer_order(Gstar, "G_*");
    if (r.m1 <= 0 || r.m2 <= 0) throw EndError("Gauss maps are not normalized to vanish at the end");
    r.m = std::min(r.m1, r.m2);
    if (r.m1 < r.m2) {
        r.alpha_numeric = 0.0;
        r.dominant = Pair::GOmega;
    } else if (r.m2 < r.m1) {
        r.alpha_numeric = 0.0;
        r.dominant = Pair::GstarTheta;
    } else {
        cplx R = Gstar.leading() / G.leading();
        if (std::abs(R.imag()) > 1e-6 * std::max(1.0, std::abs(R)))
            throw EndError("ratio of the Gauss maps is not real");
        double Rr = R.real();
        if (std::abs(Rr) <= 1.0 + 1e-9) {
            r.dominant = Pair::GOmega;
            r.alpha_numeric = Rr;
        } else {
            r.dominant = Pair::GstarTheta;
            r.alpha_numeric = 1.0 / Rr;
        }
    }
    if (std::abs(r.alpha_numeric - 1.0) < 1e-9) throw EndError("not finite type: alpha = 1");
    double a = r.alpha_numeric;
    r.q_minus2 = -double(r.m) * r.m * a / ((1.0 - a) * (1.0 - a));
    return r;
}

DominantFrame dominant_frame(const CanonicalData& c) {
    DominantFrame f;
    BoundaryPoint g = value_at_zero(c.G);
    BoundaryPoint gs = value_at_zero(c.Gstar);
    if (!c.G.is_zero() && !is_integer(c.G.nu())) throw EndError("G has a fractional order");
    if (!same_point(g, gs)) throw EndError("G(0) != G_*(0): not a regular end");
    f.limit = g;
    bool identity = false;
    if (g.infinite) f.u = Mat2{0.0, 1.0, -1.0, 0.0};
    else if (g.value == cplx(0)) {
        f.u = Mat2::identity();
        identity = true;
    } else f.u = Mat2{1.0, -g.value, 0.0, 1.0};
    Series G = normalize_series(f.u, c.G, identity);
    Series Gs = c.Gstar.is_zero() && identity ? Series() : normalize_series(f.u, c.Gstar, identity);
    Multiplicity mr = multiplicity_and_ratio(G, Gs);
    f.dominant = mr.dominant;
    if (f.dominant == Pair::GOmega) {
        f.G = G;
        f.Gstar = Gs;
        f.omega = c.omega.base;
        f.theta = c.theta.base;
    } else {
        f.G = Gs;
        f.Gstar = G;
        f.omega = c.theta.base;
        f.theta = c.omega.base;
    }
    return f;
}

Series indentation_ratio(const DominantFrame& f, const BoundaryPoint& far) {
    if (f.Gstar.is_zero()) return Series();
    Mat2 u = axis_move(far);
    Series G = far.infinite ? f.G : moebius_star(u, f.G);
    Series Gs = far.infinite ? f.Gstar : moebius_star(u, f.Gstar);
    return differentiate(Gs) / differentiate(G);
}

std::optional<int> indentation_number(const DominantFrame& f, const BoundaryPoint& far) {
    return ramification_of(indentation_ratio(f, far));
}

IndentationReport indentation(const DominantFrame& f, int m, double alpha, unsigned seed) {
    IndentationReport rep;
    Mat2 back = f.u.inverse();
    auto test = [&](const BoundaryPoint& far) {
        AxisIndentation a{far, moebius_star(back, far), indentation_number(f, far)};
        rep.tested.push_back(a);
        return a.l;
    };
    auto set_principal = [&](const BoundaryPoint& far, std::optional<int> l) {
        rep.centered = true;
        rep.principal_far = far;
        rep.principal_axis = std::array<BoundaryPoint, 2>{f.limit, moebius_star(back, far)};
        rep.rotational = !l.has_value();
        rep.n = l;
    };

    std::optional<int> l0 = test(BoundaryPoint::infinity());
    std::optional<BoundaryPoint> candidate;
    if (std::abs(alpha) < 1e-12) {
        rep.n = l0;
    } else if (!l0 || *l0 > m) {
        set_principal(BoundaryPoint::infinity(), l0);
    } else if (*l0 < m) {
        rep.n = l0;
    } else {
        // l_{gamma_0} = m: the principal axis ends at (1 - alpha) alpha / alpha_1
        Series z = gauss_coordinate(f.G, m);
        Series Gs = compose(f.Gstar, z);
        cplx alpha1 = Gs.coeff(Rational(2 * m));
        if (std::abs(alpha1) < 1e-14) throw EndError("indentation: vanishing alpha_1 with l = m");
        candidate = BoundaryPoint::at((1.0 - alpha) * alpha / alpha1);
        std::optional<int> ls = test(*candidate);
        if (!ls || *ls > m) set_principal(*candidate, ls);
        else rep.n = m;
    }

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> radius(0.5, 2.0), angle(-kPi, kPi);
    for (int i = 0; i < 8; ++i) {
        cplx a = std::polar(radius(rng), angle(rng));
        test(BoundaryPoint::at(a));
    }
    return rep;
}

NormalizedOmega normalize_omega(const DominantFrame& f, int m, const BoundaryPoint& far) {
    NormalizedOmega r;
    r.far = far;
    Mat2 ua = axis_move(far);
    Series G = far.infinite ? f.G : significant(moebius_star(ua, f.G));
    Series Gs = f.Gstar.is_zero() ? Series() : (far.infinite ? f.Gstar : moebius_star(ua, f.Gstar));

    Series z = gauss_coordinate(G, m);
    Series zp = differentiate(z);
    Series om = compose(f.omega, z) * zp;
    std::optional<int> l;
    if (!Gs.is_zero()) l = ramification_of(differentiate(compose(Gs, z)) /
                                           Series::monomial(double(m), Rational(m - 1), om.N()));
    if (!l) throw EndError("rotationally symmetric about this axis: use the revolution closed form");
    r.l = *l;
    r.mu = om.nu();
    r.c0 = om.leading();
    Series unit = om / Series::monomial(r.c0, r.mu, om.N());
    Series tail = significant(pow_real(unit, Rational(1, 2)) + cplx(-1.0));
    if (tail.is_zero() || tail.nu() != Rational(r.l))
        throw EndError("omega tail order does not match the indentation number");
    r.b0 = tail.leading();
    const bool cylindrical = r.mu == Rational(-1);
    cplx k;
    if (!cylindrical) {
        double kappa = std::pow(double(m) / std::abs(r.c0), 1.0 / (to_double(r.mu) + 1.0));
        double beta = -std::arg(r.b0) / r.l;
        k = std::polar(kappa, beta);
        r.b = std::pow(kappa, r.l) * std::abs(r.b0);
    } else {
        k = std::pow(r.b0, -1.0 / r.l);
        r.lambda = std::abs(r.c0);
    }
    r.k = k;
    Series w = rescale(om, k) * k;
    cplx target = cylindrical ? cplx(-r.lambda) : cplx(-double(m));
    w = (target / w.leading()) * w;
    r.omega = w;
    Series wt = significant(pow_real(w / Series::monomial(w.leading(), r.mu, w.N()), Rational(1, 2)) + cplx(-1.0));
    r.tail_arg = std::arg(wt.coeff(Rational(r.l)));
    cplx km = std::pow(k, 0.5 * m);
    r.u_total = Mat2::diag(1.0 / km, km) * ua * f.u;
    r.chart = rescale(z, k);
    return r;
}

RhoRamification rho_ramification(const CanonicalData& c) {
    RhoRamification r;
    const Series& rho = c.rho;
    if (rho.is_zero() || rho.nu() != Rational(0))
        throw EndError("rho ramification needs rho(0) finite and nonzero");
    Series drho = significant(differentiate(rho));
    if (!drho.is_zero()) r.from_rho = 1 + integer_order(drho / rho, "drho/rho");

    const Series& G = c.G;
    const Series& Gs = c.Gstar;
    Series Gp = differentiate(G), Gsp = differentiate(Gs);
    Series expr = differentiate(Gsp) / Gsp - differentiate(Gp) / Gp + 2.0 * ((Gp + Gsp) / (G - Gs));
    expr = significant(expr, 1e-8);
    if (!expr.is_zero()) r.from_gauss = 1 + integer_order(expr, "drho/rho");
    return r;
}

EndReport classify_end(const CanonicalData& c, ExpansionPoint at) {
    EndReport r;
    r.at = at;
    EndOrders o = end_orders(c);
    r.mu = o.mu;
    r.mu_star = o.mu_star;
    r.ord_Q = o.Q;
    DominantFrame f = dominant_frame(c);
    Multiplicity mr = multiplicity_and_ratio(f.dominant == Pair::GOmega ? f.G : f.Gstar,
                                             f.dominant == Pair::GOmega ? f.Gstar : f.G);
    r.m = mr.m;
    r.m1 = mr.m1;
    r.m2 = mr.m2;
    r.dominant = f.dominant;
    r.limit = f.limit;
    r.alpha_numeric = mr.alpha_numeric;
    r.q_minus2 = mr.q_minus2;

    Rational mu_d = f.omega.nu();
    Rational den = 1 + mu_d - r.m;
    if (den == Rational(0)) throw EndError("inconsistent data: 1 + mu - m = 0");
    r.alpha = (1 + mu_d + r.m) / den;
    if (std::abs(to_double(r.alpha) - r.alpha_numeric) > 1e-6)
        throw EndError("inconsistent data: alpha from orders " + to_string(r.alpha) +
                       " disagrees with dG_*/dG = " + std::to_string(r.alpha_numeric));
    if (r.alpha >= Rational(1) || r.alpha < Rational(-1)) throw EndError("alpha outside [-1, 1)");
    Order mins = o.mu_star;
    if (o.mu > Rational(-1) && (mins.infinite || mins.value > Rational(-1)))
        throw EndError("not weakly complete: min(mu, mu_*) > -1");

    r.indentation = indentation(f, r.m, to_double(r.alpha));
    const BoundaryPoint axis = r.indentation.principal_far.value_or(BoundaryPoint::infinity());
    try {
        r.normalized = normalize_omega(f, r.m, axis);
    } catch (const EndError&) {
        r.normalized.reset();
    }

    if (r.alpha == Rational(0)) r.type = EndType::Horospherical;
    else if (r.alpha > Rational(0)) r.type = EndType::Snowman;
    else if (r.alpha > Rational(-1)) r.type = EndType::Hourglass;

    if (r.alpha != Rational(-1)) {
        r.complete = true;
        r.p = -(1 + r.alpha) / 2;
        r.n = r.indentation.n;
        return r;
    }

    // cylindrical
    if (mu_d != Rational(-1)) throw EndError("inconsistent data: alpha = -1 but mu != -1");
    r.lambda = std::abs(f.omega.leading());
    cplx rho0 = c.rho.is_zero() ? cplx(0) : c.rho.coeff(Rational(0));
    r.rho0_abs = std::abs(rho0);
    r.complete = std::abs(r.rho0_abs - 1.0) > 1e-8;
    Series drho = c.rho.is_zero() ? Series() : significant(differentiate(c.rho));
    if (!r.complete && drho.is_zero()) {
        r.type = EndType::GeodesicDegenerate;
        r.p = 0;
        return r;
    }
    RhoRamification rr = rho_ramification(c);
    if (rr.from_rho != rr.from_gauss) throw EndError("rho ramification routes disagree");
    r.n = rr.from_rho;
    if (r.complete) {
        r.type = EndType::CylindricalComplete;
        r.p = 0;
        return r;
    }
    if (!r.n) throw EndError("incomplete end with constant rho");
    if (*r.n == r.m) throw EndError("inconsistent data: incomplete end with n = m");
    r.p = Rational(*r.n, r.m);
    r.type = *r.n < r.m ? EndType::Epicycloid : EndType::Hypocycloid;
    return r;
}

EndReport classify_end(const WeierstrassData& data, ExpansionPoint at) {
    return classify_end(canonical_data(build_lift(data, at)), at);
}

double AsymptoticProfile::N(double h, double t, int j) const {
    double be = j * (1.0 + p) / m;
    return 2.0 * (p + 1.0) * std::cos(j * t) * std::pow(h, be);
}

double AsymptoticProfile::S(double h) const { return -std::pow(h, -2.0 * p) / (4.0 * (p + 1.0)); }

cplx AsymptoticProfile::V(double t, int l, double c) const {
    double pre = std::pow((4.0 * c * c + double(m) * m) / (4.0 * c * m), double(l) / m);
    return pre * cplx(2.0 * (c + double(m) * m / (4.0 * c)) * std::cos(l * t),
                      -double(m) * l / c * std::sin(l * t));
}

cplx AsymptoticProfile::Gamma(double t) const {
    int l = n.value_or(0);
    return (double(m + l) * std::exp(cplx(0, (m - l) * t)) + double(m - l) * std::exp(cplx(0, (m + l) * t))) /
           double(m);
}

cplx AsymptoticProfile::curve(double h, double t) const {
    cplx rot = std::exp(cplx(0, m * t));
    switch (kind) {
        case ProfileKind::NonCylindrical: {
            double R = 0.0;
            if (branch != ProfileBranch::SOnly && n) R += b * N(h, t, *n);
            if (branch != ProfileBranch::Indentation) R += S(h);
            return rot * std::pow(h, p) * (1.0 + R);
        }
        case ProfileKind::CylindricalComplete: {
            cplx body = lambda - double(m) * m / (4.0 * lambda);
            if (n) body += V(t, *n, lambda) * std::pow(h, beta);
            return rot * body / double(m);
        }
        case ProfileKind::CylindricalIncomplete:
            return Gamma(t) * std::pow(h, beta);
    }
    return 0.0;
}

double AsymptoticProfile::basepoint_scale(double tau) const {
    return kind == ProfileKind::NonCylindrical ? std::exp(-tau * p) : std::exp(-tau * beta);
}

AsymptoticProfile asymptotic_profile(const EndReport& r, const std::optional<NormalizedOmega>& nz) {
    if (r.type == EndType::GeodesicDegenerate) throw EndError("no asymptotic profile for a degenerate end");
    AsymptoticProfile a;
    a.m = r.m;
    a.p = to_double(r.p);
    if (nz) a.n = nz->l;
    const bool cylindrical = r.alpha == Rational(-1);
    if (!cylindrical) {
        a.kind = ProfileKind::NonCylindrical;
        if (!a.n) {
            a.branch = ProfileBranch::SOnly;
            return a;
        }
        a.b = nz->b;
        Rational lhs = *a.n * (1 + r.p), rhs = -2 * r.p * r.m;
        a.beta = to_double(lhs / r.m);
        a.branch = lhs < rhs ? ProfileBranch::Indentation
                 : lhs == rhs ? ProfileBranch::IndentationAndS
                              : ProfileBranch::SOnly;
        return a;
    }
    if (!a.n) a.n = r.n;
    a.lambda = r.lambda;
    if (a.n) a.beta = double(*a.n) / r.m;
    if (r.complete) {
        a.kind = ProfileKind::CylindricalComplete;
    } else {
        a.kind = ProfileKind::CylindricalIncomplete;
        a.lambda = r.m / 2.0;
        if (!a.n) throw EndError("incomplete profile needs a finite indentation number");
    }
    return a;
}

}  // namespace flatfront
