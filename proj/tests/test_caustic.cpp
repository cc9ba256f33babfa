#include <doctest.h>

#include <cmath>
#include <numbers>

#include "flatfront/caustic.hpp"

using namespace flatfront;

namespace {

constexpr double kPi = std::numbers::pi;

ExpansionPoint root_of_unity(int k, int j) { return ExpansionPoint::finite(std::polar(1.0, 2 * kPi * j / k)); }

WeierstrassData knoid(int k) { return make_gauss_pair("z", "z^(1-k)", {{"k", double(k)}}); }

void check_forms(const CausticData& d) {
    CHECK(d.Qc_residual < 1e-10);
    CHECK(d.dlog_residual < 1e-8);
}

}  // namespace

TEST_CASE("k-noid caustic: U-ends at 0 and infinity") {
    for (int k : {3, 4, 5}) {
        CAPTURE(k);
        for (ExpansionPoint at : {ExpansionPoint::finite(0.0), ExpansionPoint::infinity()}) {
            CausticData d = analyze_caustic(knoid(k), at);
            CHECK(d.kind == CausticEndKind::UEnd);
            CHECK(d.ord_Q == Rational(k - 2));
            CHECK(d.pitch.m_c == Rational(k - 2, 2));
            CHECK(d.pitch.n_c == Rational(k, 2));
            CHECK(d.pitch.p_c == Rational(k, k - 2));
            CHECK(d.cover == (k % 2 == 1 ? 2 : 1));
            CHECK(d.co_orientable == (k % 2 == 0));
            check_forms(d);
            EndReport r = classify_caustic(d);
            CHECK(r.p == d.pitch.p_c);
            CHECK(!r.complete);
            CHECK(r.type == EndType::Hypocycloid);
            CHECK(Rational(r.m, d.cover) == d.pitch.m_c);
        }
    }
}

TEST_CASE("k-noid caustic: E-ends have pitch 2") {
    for (int k : {3, 4}) {
        for (int j = 0; j < k; ++j) {
            CausticData d = analyze_caustic(knoid(k), root_of_unity(k, j));
            CHECK(d.kind == CausticEndKind::EEnd);
            CHECK(d.pitch.m_c == Rational(1));
            CHECK(d.pitch.n_c == Rational(2));
            CHECK(d.pitch.p_c == Rational(2));
            check_forms(d);
            EndReport r = classify_caustic(d);
            CHECK(r.p == Rational(2));
            CHECK(r.m == 1);
            REQUIRE(r.n);
            CHECK(*r.n == 2);
        }
    }
}

TEST_CASE("four-noid central caustic end: m = 1, n = 2") {
    CausticData d = analyze_caustic(knoid(4), ExpansionPoint::finite(0.0));
    EndReport r = classify_caustic(d);
    CHECK(r.m == 1);
    REQUIRE(r.n);
    CHECK(*r.n == 2);
    CHECK(r.p == Rational(2));
}

TEST_CASE("n+2-noid caustic") {
    for (auto [k, d] : {std::pair{1, 3}, std::pair{2, 2}, std::pair{1, 2}}) {
        CAPTURE(k);
        CAPTURE(d);
        WeierstrassData data = make_gauss_pair("z^k", "z^(k+d)", {{"k", double(k)}, {"d", double(d)}});
        for (ExpansionPoint at : {ExpansionPoint::finite(0.0), ExpansionPoint::infinity()}) {
            CausticData c = analyze_caustic(data, at);
            CHECK(c.kind == CausticEndKind::EEnd);
            CHECK(c.pitch.m_c == Rational(2 * k + d, 2));
            CHECK(c.pitch.n_c == Rational(d, 2));
            CHECK(c.pitch.p_c == Rational(d, 2 * k + d));
            check_forms(c);
            EndReport r = classify_caustic(c);
            CHECK(r.p == c.pitch.p_c);
            CHECK(r.type == EndType::Epicycloid);
        }
        for (int j = 0; j < d; ++j) {
            CausticData c = analyze_caustic(data, root_of_unity(d, j));
            CHECK(c.pitch.complete);
            CHECK(c.pitch.p_c == Rational(0));
            EndReport r = classify_caustic(c);
            CHECK(r.type == EndType::CylindricalComplete);
            CHECK(r.p == Rational(0));
        }
    }
}

TEST_CASE("caustics of revolution fronts") {
    CHECK_THROWS_AS(caustic_forms(canonical_data(build_lift(make_gauss_pair("z", "0"), ExpansionPoint::finite(0.0)))),
                    CausticError);
    // snowman: a hyperbolic cylinder
    CausticData s = analyze_caustic(make_gauss_pair("z", "z/2"), ExpansionPoint::finite(0.0));
    CHECK(s.pitch.complete);
    EndReport rs = classify_caustic(s);
    CHECK(rs.type == EndType::CylindricalComplete);
    // hourglass: a geodesic
    CHECK_THROWS_AS(analyze_caustic(make_gauss_pair("z", "-z/2"), ExpansionPoint::finite(0.0)), CausticError);
    CausticData h = caustic_forms(canonical_data(build_lift(make_gauss_pair("z", "-z/2"), ExpansionPoint::finite(0.0))));
    CHECK(std::abs(std::abs(h.rho_c.leading()) - 1.0) < 1e-10);
    CHECK(classify_caustic(h).type == EndType::GeodesicDegenerate);
}

TEST_CASE("caustic pitch formula") {
    CausticPitch u = caustic_end_pitch(Rational(2), Rational(-2), CausticEndKind::UEnd);
    CHECK(u.p_c == Rational(2));
    CausticPitch e = caustic_end_pitch(Rational(-2), Rational(0), CausticEndKind::EEnd, 1, EndType::Hourglass);
    CHECK(e.m_c == Rational(1));
    CHECK(e.n_c == Rational(2));
    CHECK(caustic_end_pitch(Rational(-2), Rational(0), CausticEndKind::EEnd, 1, EndType::Snowman).complete);
    CHECK_THROWS_AS(caustic_end_pitch(Rational(0), Rational(-2), CausticEndKind::UEnd), CausticError);
}
