#include <doctest.h>

#include <cmath>
#include <numbers>

#include "flatfront/end.hpp"

using namespace flatfront;

namespace {

constexpr double kPi = std::numbers::pi;

EndReport classify(const WeierstrassData& d, ExpansionPoint at) { return classify_end(d, at); }

ExpansionPoint root_of_unity(int k, int j) { return ExpansionPoint::finite(std::polar(1.0, 2 * kPi * j / k)); }

// delta making the cylindrical end of (G, G_*) incomplete: lambda scales like |delta|^-2
double incomplete_delta(const std::string& G, const std::string& Gs, int m) {
    EndReport r = classify(make_gauss_pair(G, Gs), ExpansionPoint::finite(0.0));
    return std::sqrt(r.lambda / (m / 2.0));
}

}  // namespace

TEST_CASE("revolution ends") {
    for (int m : {1, 2}) {
        for (Rational alpha : {Rational(1, 2), Rational(-1, 2), Rational(1, 3)}) {
            CAPTURE(m);
            CAPTURE(to_string(alpha));
            std::string Gs = "(" + to_string(alpha) + ")*z^" + std::to_string(m);
            EndReport r = classify(make_gauss_pair("z^" + std::to_string(m), Gs), ExpansionPoint::finite(0.0));
            CHECK(r.m == m);
            CHECK(r.alpha == alpha);
            CHECK(r.p == -(1 + alpha) / 2);
            CHECK(r.mu == -((1 + alpha) / (1 - alpha)) * m - 1);
            CHECK(r.type == (alpha > Rational(0) ? EndType::Snowman : EndType::Hourglass));
            double a = to_double(alpha);
            CHECK(r.q_minus2 == doctest::Approx(-m * m * a / ((1 - a) * (1 - a))).epsilon(1e-12));
            REQUIRE(!r.ord_Q.infinite);
            CHECK(r.ord_Q.value == Rational(-2));
            // rotational about gamma_0, l = m off the axis
            CHECK(r.indentation.centered);
            CHECK(r.indentation.rotational);
            CHECK(!r.indentation.n);
            REQUIRE(r.indentation.tested.size() == 9);
            for (const auto& t : r.indentation.tested) {
                if (t.far.infinite) CHECK(!t.l);
                else CHECK(t.l == m);
            }
            CHECK(!r.normalized);
        }
    }
}

TEST_CASE("horospherical revolution end") {
    EndReport r = classify(make_gauss_pair("z", "0"), ExpansionPoint::finite(0.0));
    CHECK(r.type == EndType::Horospherical);
    CHECK(r.alpha == Rational(0));
    CHECK(r.p == Rational(-1, 2));
    CHECK(r.mu == Rational(-2));
    CHECK(r.q_minus2 == 0.0);
    CHECK(!r.indentation.centered);
}

TEST_CASE("k-noid ends are hourglasses") {
    for (int k : {3, 4, 5}) {
        CAPTURE(k);
        Rational expect(-(k - 2), 2 * k - 2);
        for (int j = 0; j < k; ++j) {
            EndReport r = classify(make_gauss_pair("z", "z^(1-k)", {{"k", double(k)}}), root_of_unity(k, j));
            CHECK(r.type == EndType::Hourglass);
            CHECK(r.p == expect);
            CHECK(r.alpha == Rational(-1, k - 1));
            CHECK(r.dominant == Pair::GstarTheta);
            CHECK(r.m == 1);
        }
        EndReport g = classify(make_g_omega("z", "(z^k-1)^(-2/k)", {{"k", double(k)}}), ExpansionPoint::finite(1.0));
        CHECK(g.p == expect);
        CHECK(g.mu == Rational(-2, k));
        CHECK(g.mu_star.value == Rational(-(2 * k - 2), k));
        CHECK(g.dominant == Pair::GstarTheta);
    }
}

TEST_CASE("n+2-noid ends") {
    for (auto [k, d] : {std::pair{1, 3}, std::pair{2, 2}}) {
        CAPTURE(k);
        CAPTURE(d);
        std::map<std::string, cplx> p{{"k", double(k)}, {"d", double(d)}};
        WeierstrassData data = make_gauss_pair("z^k", "z^(k+d)", p);
        for (ExpansionPoint at : {ExpansionPoint::finite(0.0), ExpansionPoint::infinity()}) {
            EndReport r = classify(data, at);
            CHECK(r.type == EndType::Horospherical);
            CHECK(r.p == Rational(-1, 2));
            CHECK(r.m == k);
        }
        for (int j = 0; j < d; ++j) {
            EndReport r = classify(data, root_of_unity(d, j));
            CHECK(r.type == EndType::Snowman);
            CHECK(r.alpha == Rational(k, k + d));
            CHECK(r.p == Rational(-(2 * k + d), 2 * k + 2 * d));
        }
    }
}

TEST_CASE("nodes datum: centered with n = 3") {
    EndReport r = classify(make_g_omega("z", "-z^(-5)*exp(2*z^3)"), ExpansionPoint::finite(0.0));
    CHECK(r.mu == Rational(-5));
    CHECK(r.m == 1);
    CHECK(r.alpha == Rational(3, 5));
    CHECK(r.p == Rational(-4, 5));
    CHECK(r.type == EndType::Snowman);
    CHECK(r.indentation.centered);
    CHECK(!r.indentation.rotational);
    REQUIRE(r.indentation.n);
    CHECK(*r.indentation.n == 3);
    REQUIRE(r.indentation.principal_far);
    CHECK(r.indentation.principal_far->infinite);
    for (const auto& t : r.indentation.tested)
        if (!t.far.infinite) CHECK(t.l == 1);
    REQUIRE(r.normalized);
    const NormalizedOmega& nz = *r.normalized;
    CHECK(nz.l == 3);
    CHECK(nz.mu == Rational(-5));
    CHECK(nz.b > 0.0);
    CHECK(std::abs(nz.tail_arg) < 1e-9);
    CHECK(std::abs(nz.omega.leading() - cplx(-1.0)) < 1e-10);

    AsymptoticProfile a = asymptotic_profile(r, r.normalized);
    CHECK(a.kind == ProfileKind::NonCylindrical);
    CHECK(a.branch == ProfileBranch::Indentation);
    CHECK(a.beta == doctest::Approx(0.6));
}

TEST_CASE("normalized omega rescale gives a positive tail") {
    // the same datum with a rotated and scaled coordinate
    WeierstrassData d = make_g_omega("z", "-(2*exp(i))*z^(-5)*exp((1+2*i)*z^3)");
    EndReport r = classify(d, ExpansionPoint::finite(0.0));
    REQUIRE(r.normalized);
    CHECK(r.normalized->b > 0.0);
    CHECK(std::abs(r.normalized->tail_arg) < 1e-9);
    cplx lead = r.normalized->omega.leading();
    CHECK(std::abs(lead - cplx(-1.0)) < 1e-10);
    // u_total takes G to w^m: G(k w) after u is w
    Series G = Series::monomial(1.0, Rational(1));
    cplx k = r.normalized->k;
    Series Gw = moebius_star(r.normalized->u_total, rescale(G, k));
    CHECK(std::abs(Gw.coeff(Rational(1)) - cplx(1.0)) < 1e-10);
}

TEST_CASE("cylindrical ends: complete and incomplete") {
    double delta = std::sqrt(2.0);
    EndReport inc = classify(make_gauss_pair("z", "-z+z^3", {}, delta), ExpansionPoint::finite(0.0));
    CHECK(inc.alpha == Rational(-1));
    CHECK(!inc.complete);
    CHECK(inc.lambda == doctest::Approx(0.5).epsilon(1e-10));
    REQUIRE(inc.n);
    CHECK(*inc.n == 2);
    CHECK(inc.p == Rational(2));
    CHECK(inc.type == EndType::Hypocycloid);
    CHECK(inc.rho0_abs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(inc.indentation.centered);
    CHECK(inc.indentation.n == inc.n);

    RhoRamification rr = rho_ramification(canonical_data(
        build_lift(make_gauss_pair("z", "-z+z^3", {}, delta), ExpansionPoint::finite(0.0))));
    CHECK(rr.from_rho == 2);
    CHECK(rr.from_gauss == 2);

    EndReport com = classify(make_gauss_pair("z", "-z+z^3"), ExpansionPoint::finite(0.0));
    CHECK(com.complete);
    CHECK(com.type == EndType::CylindricalComplete);
    CHECK(com.p == Rational(0));
    CHECK(com.lambda == doctest::Approx(1.0).epsilon(1e-10));
    // rho(0) = m^2 / (4 lambda^2)
    CHECK(com.rho0_abs == doctest::Approx(0.25).epsilon(1e-10));

    AsymptoticProfile a = asymptotic_profile(inc, inc.normalized);
    CHECK(a.kind == ProfileKind::CylindricalIncomplete);
    CHECK(a.beta == doctest::Approx(2.0));
    AsymptoticProfile c = asymptotic_profile(com, com.normalized);
    CHECK(c.kind == ProfileKind::CylindricalComplete);
}

TEST_CASE("epicycloid end is centerless") {
    double delta = incomplete_delta("z^2", "-z^2+z^3", 2);
    EndReport r = classify(make_gauss_pair("z^2", "-z^2+z^3", {}, delta), ExpansionPoint::finite(0.0));
    CHECK(!r.complete);
    CHECK(r.m == 2);
    REQUIRE(r.n);
    CHECK(*r.n == 1);
    CHECK(r.p == Rational(1, 2));
    CHECK(r.type == EndType::Epicycloid);
    CHECK(!r.indentation.centered);
    for (const auto& t : r.indentation.tested) CHECK(t.l == 1);
    REQUIRE(r.normalized);
    CHECK(r.normalized->lambda == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("dual data gives the same report with roles swapped") {
    struct Case {
        WeierstrassData d;
        ExpansionPoint at;
    };
    std::vector<Case> cases = {
        {make_gauss_pair("z", "z/2"), ExpansionPoint::finite(0.0)},
        {make_gauss_pair("z", "z^(-2)"), root_of_unity(3, 1)},
        {make_g_omega("z", "-z^(-5)*exp(2*z^3)"), ExpansionPoint::finite(0.0)},
        {make_gauss_pair("z^2", "z^4"), root_of_unity(2, 1)},
    };
    for (const auto& c : cases) {
        LocalLift L = build_lift(c.d, c.at);
        EndReport a = classify_end(canonical_data(L), c.at);
        EndReport b = classify_end(canonical_data(dual_lift(L)), c.at);
        CHECK(a.type == b.type);
        CHECK(a.p == b.p);
        CHECK(a.alpha == b.alpha);
        CHECK(a.m == b.m);
        CHECK(a.mu == b.mu_star.value);
        CHECK(a.dominant != b.dominant);
    }
}

TEST_CASE("parallel fronts keep the pitch") {
    struct Case {
        WeierstrassData d;
        ExpansionPoint at;
    };
    std::vector<Case> cases = {
        {make_gauss_pair("z", "z/2"), ExpansionPoint::finite(0.0)},
        {make_gauss_pair("z", "z^(-3)"), root_of_unity(4, 0)},
        {make_g_omega("z", "-z^(-5)*exp(2*z^3)"), ExpansionPoint::finite(0.0)},
        {make_gauss_pair("z", "-z+z^3"), ExpansionPoint::finite(0.0)},
    };
    for (const auto& c : cases) {
        LocalLift L = build_lift(c.d, c.at);
        Rational p = classify_end(canonical_data(L), c.at).p;
        for (double t : {-1.0, -0.3, 0.4, 1.2}) {
            EndReport r = classify_end(canonical_data(parallel_lift(L, t)), c.at);
            CHECK(r.p == p);
            CHECK(r.complete);
        }
    }
}

TEST_CASE("q_-2 is the top coefficient of Q") {
    for (auto [G, Gs] : {std::pair{"z", "z/2"}, std::pair{"z^2", "-z^2/2"}, std::pair{"z", "-z+z^3"}}) {
        CAPTURE(G);
        CanonicalData c = canonical_data(build_lift(make_gauss_pair(G, Gs), ExpansionPoint::finite(0.0)));
        EndReport r = classify_end(c);
        REQUIRE(c.Q.base.nu() == Rational(-2));
        CHECK(std::abs(c.Q.base.leading() - cplx(r.q_minus2)) < 1e-10 * std::max(1.0, std::abs(r.q_minus2)));
    }
}

TEST_CASE("profile closures") {
    AsymptoticProfile a;
    a.kind = ProfileKind::CylindricalIncomplete;
    a.m = 1;
    a.n = 2;
    a.beta = 2.0;
    for (double t : {0.0, 0.3, 1.7, 4.0}) {
        cplx lhs = std::exp(cplx(0, a.m * t)) * a.V(t, 2, a.m / 2.0) / double(a.m);
        CHECK(std::abs(lhs - a.Gamma(t)) < 1e-12);
    }
    a.kind = ProfileKind::NonCylindrical;
    a.p = -0.5;
    a.m = 2;
    CHECK(a.S(0.25) == doctest::Approx(-0.25 / 2.0));
    CHECK(a.basepoint_scale(0.7) == doctest::Approx(std::exp(0.35)));

    // off the axis of a centered end with -1/3 < p < 0, only S_p survives
    WeierstrassData d = make_gauss_pair("z", "-z/2");
    CanonicalData c = canonical_data(build_lift(d, ExpansionPoint::finite(0.0)));
    EndReport r = classify_end(c);
    CHECK(r.p == Rational(-1, 4));
    NormalizedOmega off = normalize_omega(dominant_frame(c), r.m, BoundaryPoint::at(1.0));
    CHECK(off.l == 1);
    CHECK(off.b > 0.0);
    AsymptoticProfile s = asymptotic_profile(r, off);
    CHECK(s.branch == ProfileBranch::SOnly);
    // and the leading term of the incomplete model at lambda = m/2 vanishes
    AsymptoticProfile cc;
    cc.kind = ProfileKind::CylindricalComplete;
    cc.m = 2;
    cc.lambda = 1.0;
    CHECK(std::abs(cc.curve(0.1, 0.4)) < 1e-14);
}

TEST_CASE("irregular and inconsistent data are rejected") {
    CHECK_THROWS_AS(classify(make_gauss_pair("z", "1+z"), ExpansionPoint::finite(0.0)), EndError);
    CHECK_THROWS_AS(classify(make_g_omega("z", "z^(-5)*exp(1/z)"), ExpansionPoint::finite(0.0)), std::exception);
}
