#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "flatfront/cycloid.hpp"

using namespace flatfront;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<cplx> circle(int count) {
    std::vector<cplx> z;
    for (int k = 0; k < count; ++k) z.push_back(std::polar(1.0, 2 * kPi * k / count));
    return z;
}

}  // namespace

TEST_CASE("gamma starts at 2 and rejects m = n") {
    for (int m = 1; m <= 5; ++m)
        for (int n = 1; n <= 5; ++n) {
            if (m == n) {
                CHECK_THROWS_AS(gamma(m, n, 0.3), CycloidError);
                continue;
            }
            CHECK(std::abs(gamma(m, n, 0.0) - cplx(2.0)) < 1e-15);
            // finite-difference derivative
            double t = 0.37, h = 1e-6;
            cplx fd = (gamma(m, n, t + h) - gamma(m, n, t - h)) / (2 * h);
            CHECK(std::abs(fd - gamma_derivative(m, n, t)) < 1e-7 * (1 + std::abs(fd)));
        }
    CHECK_THROWS_AS(gamma(0, 1, 0.0), CycloidError);
}

TEST_CASE("descriptor table") {
    auto d13 = descriptor(1, 3);
    CHECK(d13.d == 2);
    CHECK(d13.m0 == Rational(1, 2));
    CHECK(d13.n0 == Rational(3, 2));
    CHECK(d13.kind == CycloidKind::Hypocycloid);

    auto d53 = descriptor(5, 3);
    CHECK(d53.d == 2);
    CHECK(d53.m0 == Rational(5, 2));
    CHECK(d53.n0 == Rational(3, 2));
    CHECK(d53.kind == CycloidKind::Epicycloid);

    auto d21 = descriptor(2, 1);
    CHECK(d21.d == 1);
    CHECK(d21.simple);
    CHECK(d21.kind == CycloidKind::Epicycloid);

    auto d12 = descriptor(1, 2);
    CHECK(d12.d == 1);
    CHECK(d12.simple);
    CHECK(d12.kind == CycloidKind::Hypocycloid);

    auto d14 = descriptor(1, 4);
    CHECK(d14.d == 1);
    CHECK(d14.cusps == 8);
    CHECK_FALSE(d14.simple);

    for (int m = 1; m <= 8; ++m)
        for (int n = 1; n <= 8; ++n) {
            if (m == n) continue;
            auto D = descriptor(m, n);
            Rational sum = D.m0 + D.n0, diff = D.m0 - D.n0;
            REQUIRE(is_integer(sum));
            REQUIRE(is_integer(diff));
            CHECK(std::gcd(sum.numerator(), diff.numerator() < 0 ? -diff.numerator() : diff.numerator()) == 1);
            CHECK(D.m0.denominator() <= 2);
            CHECK(D.n0.denominator() <= 2);
        }
}

TEST_CASE("cusps of gamma: derivative zeros and sampled count") {
    for (int m = 1; m <= 5; ++m)
        for (int n = 1; n <= 5; ++n) {
            if (m == n) continue;
            auto tc = cusp_parameters(m, n);
            REQUIRE(tc.size() == static_cast<std::size_t>(2 * n));
            for (double t : tc) CHECK(std::abs(gamma_derivative(m, n, t)) < 1e-12 * m * n);
            CAPTURE(m);
            CAPTURE(n);
            // sample off-cusp so no node lands on a zero of the derivative
            std::vector<cplx> z;
            const int N = 8192;
            for (int k = 0; k < N; ++k) z.push_back(gamma(m, n, 2 * kPi * (k + 0.31) / N));
            CHECK(count_cusps(z) == 2 * n);
        }
    CHECK(count_cusps(circle(512)) == 0);
}

TEST_CASE("normal winding") {
    CHECK(normal_winding(circle(512)) == Rational(1));
    auto sample = [](int m, int n) {
        std::vector<cplx> z;
        const int N = 8192;
        for (int k = 0; k < N; ++k) z.push_back(gamma(m, n, 2 * kPi * (k + 0.31) / N));
        return z;
    };
    CHECK(normal_winding(sample(2, 1)) == Rational(2));
    CHECK(normal_winding(sample(1, 3)) == Rational(1));
    CHECK(normal_winding(sample(1, 2)) == Rational(1));
    CHECK(normal_winding(sample(5, 3)) == Rational(5));
    // one geometric period of a d = 2 cover gives m0
    {
        std::vector<cplx> z;
        const int N = 8192;
        for (int k = 0; k < N; ++k) z.push_back(gamma(1, 3, kPi * (k + 0.31) / N));
        CHECK(normal_winding(z) == Rational(1, 2));
    }
    // eight cusps on a handful of samples cannot be resolved
    std::vector<cplx> coarse;
    for (int k = 0; k < 12; ++k) coarse.push_back(gamma(1, 4, 2 * kPi * (k + 0.31) / 12));
    CHECK_THROWS_AS(normal_winding(coarse), CycloidError);
}

TEST_CASE("rolling circle traces gamma") {
    for (auto [m, n] : {std::pair{1, 2}, {2, 1}, {1, 3}, {3, 2}, {2, 3}, {1, 4}, {5, 3}}) {
        CAPTURE(m);
        CAPTURE(n);
        const double p = static_cast<double>(n) / m;
        const int N = 2048;
        // phi = (1 - p) s with s = m t
        auto rolled = rolled_curve(p, 2 * kPi * (m - n), N);
        std::vector<double> t;
        for (int k = 0; k < N; ++k) t.push_back(2 * kPi * k / N);
        GammaFit F = fit_gamma(m, n, t, rolled);
        CHECK(std::abs(std::abs(F.C) - 1.0) < 1e-10);
        CHECK(F.residual < 1e-10);
        CHECK(F.hausdorff < 1e-8);
    }
}

TEST_CASE("fit_gamma recovers scale and shift") {
    const cplx C(0.3, -1.2);
    const double tau = 0.123;
    std::vector<double> t;
    std::vector<cplx> z;
    for (int k = 0; k < 1000; ++k) {
        t.push_back(2 * kPi * k / 1000);
        z.push_back(C * gamma(1, 2, t.back() + tau));
    }
    GammaFit F = fit_gamma(1, 2, t, z);
    CHECK(F.residual < 1e-12);
    CHECK(std::abs(std::abs(F.C) - std::abs(C)) < 1e-12);
}

TEST_CASE("ODE solution matches the closed forms") {
    for (auto [m, n] : {std::pair{2, 1}, {1, 2}, {2, 3}, {3, 1}, {3, 2}, {1, 3}}) {
        CAPTURE(m);
        CAPTURE(n);
        auto sol = ode_solve(m, n);
        REQUIRE(sol.size() > 100);
        bool crossed = false;
        for (const auto& x : sol) crossed = crossed || x.s_mode;
        CHECK(crossed);
        CHECK(std::abs(sol.back().s - 2 * kPi * m) < 1e-12);
        auto c = check_ode_solution(m, n, sol);
        CHECK(c.u_residual < 1e-8);
        CHECK(c.ode_residual < 1e-8);
        CHECK(c.r2_residual < 1e-8);
        CHECK(std::abs(c.C2 - 0.5) < 1e-8);
        CHECK(c.gamma_residual < 1e-6);
    }
}

TEST_CASE("ODE from a shifted start") {
    CycloidOdeOptions opt;
    opt.s0 = 0.4;
    opt.s1 = 0.4 + 3 * kPi;
    auto sol = ode_solve(1, 2, opt);
    auto c = check_ode_solution(1, 2, sol);
    CHECK(c.u_residual < 1e-8);
    CHECK(c.r2_residual < 1e-8);
    CHECK(c.gamma_residual < 1e-6);
    opt.s0 = kPi / 4;  // p s0 = pi/2: a cusp
    CHECK_THROWS_AS(ode_solve(1, 2, opt), CycloidError);
}
