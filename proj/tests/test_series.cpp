#include <doctest.h>

#include <cmath>
#include <random>

#include "flatfront/series.hpp"

using namespace flatfront;

namespace {

Series poly(std::vector<cplx> c, Rational nu = Rational(0), int N = kDefaultTruncation) {
    c.resize(static_cast<std::size_t>(N) + 1, cplx(0));
    return Series::from_coeffs(nu, std::move(c));
}

Series random_series(std::mt19937& rng, Rational nu, int N = 16) {
    std::normal_distribution<double> g;
    std::vector<cplx> c(static_cast<std::size_t>(N) + 1);
    double decay = 0.3;
    for (auto& x : c) {
        x = decay * cplx(g(rng), g(rng));
        decay *= 0.5;
    }
    c[0] = cplx(1.0 + 0.1 * g(rng), 0.1 * g(rng));
    return Series::from_coeffs(nu, std::move(c));
}

}  // namespace

TEST_CASE("difference of squares") {
    Series a = poly({1, 1}), b = poly({1, -1});
    Series p = a * b;
    CHECK(p.nu() == Rational(0));
    CHECK(std::abs(p.coeff(Rational(0)) - 1.0) < 1e-15);
    CHECK(std::abs(p.coeff(Rational(1))) < 1e-15);
    CHECK(std::abs(p.coeff(Rational(2)) + 1.0) < 1e-15);
    CHECK(std::abs(p.coeff(Rational(3))) < 1e-15);
}

TEST_CASE("half-integer exponents add exactly") {
    Series a = Series::monomial(1.0, Rational(-1, 2));
    Series p = a * a;
    CHECK(p.nu() == Rational(-1));
    CHECK(p.N() == kDefaultTruncation);
}

TEST_CASE("pow_real monomial root and geometric series") {
    Series r = pow_real(Series::monomial(1.0, Rational(2)), Rational(1, 2));
    CHECK(r.nu() == Rational(1));
    CHECK(std::abs(r.leading() - 1.0) < 1e-15);

    Series g = pow_real(poly({1, 2}), Rational(-1));
    for (int j = 0; j <= 10; ++j)
        CHECK(std::abs(g.coeff(Rational(j)) - std::pow(-2.0, j)) < 1e-9 * std::pow(2.0, j));
}

TEST_CASE("pow of zero is an error") {
    CHECK_THROWS_AS(pow_real(Series::zero(), Rational(1, 2)), SeriesError);
}

TEST_CASE("power rule and antiderivative") {
    Series d = differentiate(Series::monomial(1.0, Rational(-2, 3)));
    CHECK(d.nu() == Rational(-5, 3));
    CHECK(std::abs(d.leading() - (-2.0 / 3.0)) < 1e-15);

    Series i = integrate(Series::monomial(3.0, Rational(2)));
    CHECK(i.nu() == Rational(3));
    CHECK(std::abs(i.leading() - 1.0) < 1e-15);
}

TEST_CASE("integrating z^-1 reports the residue") {
    try {
        integrate(Series::monomial(1.0, Rational(-1)));
        FAIL("expected a monodromy error");
    } catch (const MonodromyError& e) {
        CHECK(std::abs(e.residue - 1.0) < 1e-15);
    }
}

TEST_CASE("Schwarzian of z and z^m") {
    SeriesOneForm s1 = schwarzian(Series::monomial(1.0, Rational(1)));
    CHECK(s1.degree == 2);
    CHECK(s1.base.is_zero());
    for (int m = 2; m <= 5; ++m) {
        SeriesOneForm s = schwarzian(Series::monomial(1.0, Rational(m)));
        CHECK(s.base.nu() == Rational(-2));
        // direct: (h''/h')' - (h''/h')^2/2 with h''/h' = (m-1)/z
        double expect = -(m - 1.0) - 0.5 * (m - 1.0) * (m - 1.0);
        CHECK(std::abs(s.base.leading() - expect) < 1e-12);
        CHECK(std::abs(expect - (1.0 - m * m) / 2.0) < 1e-15);
    }
    CHECK_THROWS_AS(schwarzian(Series::constant(3.0)), SeriesError);
}

TEST_CASE("Schwarzian is Moebius invariant") {
    std::mt19937 rng(7);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 5; ++trial) {
        Series G = random_series(rng, Rational(1));
        // keep the pole of the Moebius image away from the disc of convergence
        cplx a(1.0 + 0.3 * g(rng), 0.3 * g(rng)), b(g(rng), g(rng)), c(0.3 * g(rng), 0.3 * g(rng));
        cplx d = (1.0 + b * c) / a;
        if (std::abs(d) < 0.5) continue;
        Series M = (a * G + b) / (c * G + d);
        double res = relative_residual(schwarzian(M).base, schwarzian(G).base);
        CHECK(res < 1e-8);
    }
}

TEST_CASE("rescale") {
    Series r = rescale(Series::monomial(1.0, Rational(2)), 2.0);
    CHECK(std::abs(r.leading() - 4.0) < 1e-15);
    cplx k(0.3, -1.2);
    Series q = rescale(Series::monomial(1.0, Rational(-1)), k);
    CHECK(std::abs(q.leading() - 1.0 / k) < 1e-14);
    CHECK_THROWS_AS(rescale(q, 0.0), SeriesError);
}

TEST_CASE("order") {
    CHECK(order(poly({1, 1}, Rational(-5))).value == Rational(-5));
    CHECK(order(Series::zero()).infinite);
}

TEST_CASE("order is additive under products") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> num(-7, 7), den(1, 4);
    for (int trial = 0; trial < 20; ++trial) {
        Rational na(num(rng), den(rng)), nb(num(rng), den(rng));
        Series a = random_series(rng, na), b = random_series(rng, nb);
        CHECK(order(a * b).value == na + nb);
    }
}

TEST_CASE("pow round trip") {
    std::mt19937 rng(3);
    for (Rational al : {Rational(1, 2), Rational(-2, 3), Rational(3), Rational(-1, 4)}) {
        Series a = random_series(rng, Rational(1, 3));
        Series back = pow_real(pow_real(a, al), Rational(1) / al);
        CHECK(back.nu() == a.nu());
        CHECK(relative_residual(back, a) < 1e-9);
    }
}

TEST_CASE("differentiate after integrate is the identity") {
    std::mt19937 rng(5);
    for (Rational nu : {Rational(0), Rational(2), Rational(-5, 2), Rational(-3)}) {
        Series a = random_series(rng, nu);
        // drop a z^-1 term if present
        if (nu == Rational(-3)) {
            std::vector<cplx> c = a.coeffs();
            c[2] = 0.0;
            a = Series::from_coeffs(nu, c);
        }
        Series back = differentiate(integrate(a));
        CHECK(relative_residual(back, a) < 1e-12);
    }
}

TEST_CASE("compose and revert") {
    std::mt19937 rng(9);
    Series b = random_series(rng, Rational(1), 12);
    Series inv = revert(b);
    Series id = compose(b, inv);
    CHECK(relative_residual(id, Series::monomial(1.0, Rational(1), 12)) < 1e-9);
    Series a = random_series(rng, Rational(-2), 12);
    // a(b(w)) evaluated numerically
    cplx w(0.01, 0.02);
    cplx direct = a.eval(b.eval(w));
    cplx via = compose(a, b).eval(w);
    CHECK(std::abs(direct - via) < 1e-9 * std::abs(direct));
}

TEST_CASE("cancellation strips the leading term") {
    Series a = poly({1.0, 2.0, 3.0});
    Series b = poly({1.0 + 1e-17, 1.0});
    Series d = a - b;
    CHECK(d.nu() == Rational(1));
    CHECK(std::abs(d.leading() - 1.0) < 1e-15);
    CHECK(d.top() == Rational(kDefaultTruncation));
}

TEST_CASE("adding incompatible exponents fails") {
    CHECK_THROWS_AS(Series::monomial(1.0, Rational(1, 2)) + Series::monomial(1.0, Rational(1)),
                    SeriesError);
}

TEST_CASE("exp and log") {
    Series e = exp_series(Series::monomial(2.0, Rational(3), 6));
    CHECK(std::abs(e.coeff(Rational(0)) - 1.0) < 1e-15);
    CHECK(std::abs(e.coeff(Rational(3)) - 2.0) < 1e-15);
    CHECK(std::abs(e.coeff(Rational(6)) - 2.0) < 1e-15);
    CHECK_THROWS_AS(exp_series(Series::monomial(1.0, Rational(-1))), SeriesError);
    Series l = log_series(e);
    CHECK(relative_residual(l, Series::monomial(2.0, Rational(3), 6)) < 1e-14);
}

TEST_CASE("ramification") {
    CHECK(ramification(poly({1.0, 0.0, 0.0, 5.0})).value() == 3);
    CHECK(!ramification(Series::constant(2.0)).has_value());
}
