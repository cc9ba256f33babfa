#include "flatfront/flux.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "flatfront/parallel.hpp"

namespace flatfront {

namespace {

constexpr double kPi = std::numbers::pi;

struct Entries {
    Series e11, e12, e21, e22;
};

Series safe_mul(const Series& a, const Series& b) { return (a.is_zero() || b.is_zero()) ? Series() : a * b; }

Entries integrand_series(const Series& G, const Series& Gs) {
    Series Gp = differentiate(G), Gsp = differentiate(Gs);
    Series D = G - Gs;
    if (D.is_zero()) throw FluxError("G = G_* identically");
    Series D2 = D * D;
    Series a = safe_mul(Gs, Gp) + safe_mul(G, Gsp);
    Series b = safe_mul(safe_mul(Gs, Gs), Gp) + safe_mul(safe_mul(G, G), Gsp);
    Series c = Gp + Gsp;
    auto over = [&](const Series& s) { return s.is_zero() ? s : s / D2; };
    return {-over(a), over(b), -over(c), over(a)};
}

cplx residue(const Series& s) {
    if (s.is_zero() || s.nu() > Rational(-1)) return 0.0;
    if (s.top() < Rational(-1)) throw FluxError("series truncated before the residue");
    return s.coeff(Rational(-1));
}

Mat2 pairwise_sum(std::vector<Mat2>& v) {
    std::size_t n = v.size();
    while (n > 1) {
        std::size_t half = (n + 1) / 2;
        for (std::size_t i = 0; i + half < n; ++i) v[i] = v[i] + v[i + half];
        n = half;
    }
    return v.empty() ? Mat2{0, 0, 0, 0} : v[0];
}

/// -(1/N) sum w_k M(w_k) over nodes k*step+offset of the N-gon.
Mat2 trapezoid(const GaussSampler& g, double r, int N, int stride, int offset) {
    const int count = N / stride;
    std::vector<Mat2> terms(static_cast<std::size_t>(count));
    parallel_for(terms.size(), [&](std::size_t i) {
        int k = static_cast<int>(i) * stride + offset;
        cplx w = std::polar(r, 2 * kPi * k / N);
        terms[i] = w * flux_integrand(g(w));
    });
    return pairwise_sum(terms);
}

Mat2 scaled(const Mat2& m, cplx s) { return s * m; }

}  // namespace

Mat2 flux_integrand(const std::array<cplx, 4>& g) {
    const cplx G = g[0], Gp = g[1], Gs = g[2], Gsp = g[3];
    const cplx D = G - Gs;
    if (std::abs(D) < 1e-300) throw FluxError("contour passes through a pole of 1/(G - G_*)");
    const cplx D2 = D * D;
    const cplx a = Gs * Gp + G * Gsp;
    return Mat2{-a / D2, (Gs * Gs * Gp + G * G * Gsp) / D2, -(Gp + Gsp) / D2, a / D2};
}

Mat2 flux_residue(const Series& G, const Series& Gstar) {
    Entries e = integrand_series(G, Gstar);
    // (i / 2pi) * 2 pi i * res = -res
    return Mat2{-residue(e.e11), -residue(e.e12), -residue(e.e21), -residue(e.e22)};
}

Mat2 flux_contour(const GaussSampler& g, double r, int N, double tol, int* nodes_used) {
    if (r <= 0) throw FluxError("contour radius must be positive");
    if (N < 8) N = 8;
    Mat2 sum = trapezoid(g, r, N, 1, 0);
    Mat2 prev = scaled(sum, -1.0 / N);
    constexpr int kMaxNodes = 1 << 21;
    for (;;) {
        int N2 = 2 * N;
        // new nodes are the odd ones of the doubled polygon
        sum = sum + trapezoid(g, r, N2, 2, 1);
        Mat2 cur = scaled(sum, -1.0 / N2);
        double scale = std::max(1.0, cur.max_abs());
        N = N2;
        if ((cur - prev).max_abs() <= tol * scale) {
            if (nodes_used) *nodes_used = N;
            return cur;
        }
        if (N >= kMaxNodes) throw FluxError("flux quadrature did not converge");
        prev = cur;
    }
}

FluxReport flux_report(const Mat2& Phi) {
    FluxReport rep;
    rep.Phi = Phi;
    const cplx s = 0.5 * (Phi.a - Phi.d);
    cplx lam = std::sqrt(s * s + Phi.b * Phi.c);
    if (lam.real() < 0 || (std::abs(lam.real()) <= 1e-12 * std::abs(lam) && lam.imag() < 0)) lam = -lam;
    rep.eigenvalues = {lam, -lam};
    rep.nilpotent = std::abs(lam) < 1e-9;
    const cplx mean = 0.5 * (Phi.a + Phi.d);
    for (int i = 0; i < 2; ++i) {
        cplx l = mean + rep.eigenvalues[static_cast<std::size_t>(i)];
        std::array<cplx, 2> v1{Phi.b, l - Phi.a}, v2{l - Phi.d, Phi.c};
        auto norm = [](const std::array<cplx, 2>& v) { return std::abs(v[0]) + std::abs(v[1]); };
        std::array<cplx, 2> v = norm(v1) >= norm(v2) ? v1 : v2;
        if (norm(v) == 0.0) v = i == 0 ? std::array<cplx, 2>{1.0, 0.0} : std::array<cplx, 2>{0.0, 1.0};
        cplx big = std::abs(v[0]) >= std::abs(v[1]) ? v[0] : v[1];
        v = {v[0] / big, v[1] / big};
        rep.eigenvectors[static_cast<std::size_t>(i)] = v;
    }
    if (!rep.nilpotent)
        rep.axis = std::array<BoundaryPoint, 2>{projectivize(rep.eigenvectors[0][0], rep.eigenvectors[0][1]),
                                                projectivize(rep.eigenvectors[1][0], rep.eigenvectors[1][1])};
    return rep;
}

FluxReport flux_matrix(const WeierstrassData& data, ExpansionPoint at, double r, int N) {
    Series G, Gs;
    if (data.kind == DataKind::GaussPair) {
        G = expand_at(data.G, at, data.truncation);
        Gs = expand_at(data.second, at, data.truncation);
    } else {
        CanonicalData c = canonical_data(build_lift(data, at));
        G = c.G;
        Gs = c.Gstar;
    }
    Mat2 sym = flux_residue(G, Gs);

    if (r <= 0) {
        Entries e = integrand_series(G, Gs);
        double rad = std::numeric_limits<double>::infinity();
        for (const Series* s : {&e.e11, &e.e12, &e.e21, &e.e22})
            if (!s->is_zero()) rad = std::min(rad, s->validity_radius());
        r = std::isfinite(rad) ? std::min(0.5 * rad, 0.5) : 0.5;
    }

    GaussSampler sampler;
    if (data.kind == DataKind::GaussPair) {
        sampler = [&data, at](cplx w) {
            cplx z = at.to_global(w), j = at.jacobian(w);
            auto [g, gp] = data.G.eval_with_derivative(z);
            auto [s, sp] = data.second.eval_with_derivative(z);
            return std::array<cplx, 4>{g, gp * j, s, sp * j};
        };
    } else {
        Series Gsp = differentiate(Gs);
        sampler = [&data, at, Gs, Gsp](cplx w) {
            cplx z = at.to_global(w), j = at.jacobian(w);
            auto [g, gp] = data.G.eval_with_derivative(z);
            return std::array<cplx, 4>{g, gp * j, Gs.eval(w), Gsp.is_zero() ? cplx(0) : Gsp.eval(w)};
        };
    }
    int used = 0;
    Mat2 num = flux_contour(sampler, r, N, 1e-10, &used);

    FluxReport rep = flux_report(num);
    rep.symbolic = sym;
    rep.numeric = num;
    rep.route = FluxRoute::Numeric;
    rep.nodes = used;
    rep.radius = r;
    rep.route_gap = (sym - num).max_abs();
    if (rep.route_gap > 1e-8 * std::max(1.0, num.max_abs()))
        throw FluxError("flux routes disagree by " + std::to_string(rep.route_gap) +
                        ": the contour may enclose another end");
    return rep;
}

std::array<BoundaryPoint, 2> flux_axis(const FluxReport& rep) {
    if (rep.nilpotent || !rep.axis) throw FluxError("axis undefined (horospherical): flux is nilpotent");
    return *rep.axis;
}

BalancingResult balancing_check(const WeierstrassData& data, const std::vector<ExpansionPoint>& ends,
                                const std::vector<double>& radii, int N) {
    if (ends.size() != radii.size()) throw FluxError("one radius per end is required");
    for (std::size_t i = 0; i < ends.size(); ++i) {
        for (std::size_t j = i + 1; j < ends.size(); ++j) {
            const ExpansionPoint &a = ends[i], &b = ends[j];
            bool overlap = false;
            if (a.at_infinity && b.at_infinity) overlap = true;
            else if (a.at_infinity) overlap = std::abs(b.a) + radii[j] >= 1.0 / radii[i];
            else if (b.at_infinity) overlap = std::abs(a.a) + radii[i] >= 1.0 / radii[j];
            else overlap = std::abs(a.a - b.a) <= radii[i] + radii[j];
            if (overlap) throw FluxError("balancing contours overlap");
        }
    }
    BalancingResult res;
    res.sum = Mat2{0, 0, 0, 0};
    for (std::size_t i = 0; i < ends.size(); ++i) {
        FluxReport f = flux_matrix(data, ends[i], radii[i], N);
        res.fluxes.push_back(f.Phi);
        res.sum = res.sum + f.Phi;
    }
    res.max_norm = res.sum.max_abs();
    return res;
}

}  // namespace flatfront
