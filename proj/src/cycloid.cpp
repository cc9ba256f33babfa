#include "flatfront/cycloid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <boost/numeric/odeint.hpp>

#include "flatfront/parallel.hpp"

namespace flatfront {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx I1(0.0, 1.0);

void require_pair(int m, int n) {
    if (m <= 0 || n <= 0) throw CycloidError("m and n must be positive");
    if (m == n) throw CycloidError("m = n: degenerate cycloid");
}

double wrap(double a) {
    while (a > kPi) a -= 2 * kPi;
    while (a <= -kPi) a += 2 * kPi;
    return a;
}

std::vector<double> turning_steps(const std::vector<cplx>& closed) {
    const std::size_t N = closed.size();
    if (N < 8) throw CycloidError("too few samples");
    std::vector<cplx> chord(N);
    for (std::size_t k = 0; k < N; ++k) {
        chord[k] = closed[(k + 1) % N] - closed[k];
        if (std::abs(chord[k]) == 0.0) throw CycloidError("repeated sample: chord of zero length");
    }
    std::vector<double> d(N);
    for (std::size_t k = 0; k < N; ++k) d[k] = std::arg(chord[k] / chord[(k + N - 1) % N]);
    return d;
}

struct Cluster {
    double sum;
};

// Runs of steps turning by more than max_step, read cyclically.
std::vector<Cluster> large_turns(const std::vector<double>& d, double max_step) {
    const std::size_t N = d.size();
    std::size_t start = 0;
    while (start < N && std::abs(d[start]) > max_step) ++start;
    if (start == N) throw CycloidError("every step turns sharply: curve is unresolved, increase the sample count");
    std::vector<Cluster> out;
    bool open = false;
    double sum = 0.0;
    for (std::size_t j = 1; j <= N; ++j) {
        double v = d[(start + j) % N];
        if (std::abs(v) > max_step) {
            open = true;
            sum += v;
        } else if (open) {
            out.push_back({sum});
            open = false;
            sum = 0.0;
        }
    }
    return out;
}

}  // namespace

cplx gamma(int m, int n, double t) {
    require_pair(m, n);
    return (static_cast<double>(m + n) * std::exp(I1 * static_cast<double>(m - n) * t) +
            static_cast<double>(m - n) * std::exp(I1 * static_cast<double>(m + n) * t)) /
           static_cast<double>(m);
}

cplx gamma_derivative(int m, int n, double t) {
    require_pair(m, n);
    const double k = static_cast<double>(m * m - n * n) / m;
    return I1 * k * (std::exp(I1 * static_cast<double>(m - n) * t) + std::exp(I1 * static_cast<double>(m + n) * t));
}

std::string to_string(CycloidKind k) { return k == CycloidKind::Epicycloid ? "epicycloid" : "hypocycloid"; }

CycloidDescriptor descriptor(int m, int n) {
    require_pair(m, n);
    CycloidDescriptor D;
    D.m = m;
    D.n = n;
    D.d = std::gcd(m + n, std::abs(m - n));
    D.m0 = Rational(m, D.d);
    D.n0 = Rational(n, D.d);
    D.kind = n < m ? CycloidKind::Epicycloid : CycloidKind::Hypocycloid;
    D.cusps = 2 * n;
    D.winding = D.m0;
    Rational gap = D.m0 - D.n0;
    D.simple = D.d == 1 && (gap == Rational(1) || gap == Rational(-1));
    return D;
}

std::vector<double> cusp_parameters(int m, int n) {
    require_pair(m, n);
    std::vector<double> t;
    for (int k = 0; k < 2 * n; ++k) t.push_back((kPi / 2 + k * kPi) / n);
    return t;
}

std::vector<cplx> sample_gamma(int m, int n, int count) {
    require_pair(m, n);
    if (count < 1) throw CycloidError("sample count must be positive");
    std::vector<cplx> z(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) z[static_cast<std::size_t>(k)] = gamma(m, n, 2 * kPi * k / count);
    return z;
}

std::vector<cplx> rolled_curve(double p, double phi_max, int count) {
    if (!(p > 0) || p == 1.0) throw CycloidError("rolling needs p > 0, p != 1");
    if (count < 1) throw CycloidError("sample count must be positive");
    const double R = 2 * p, rho = 1 - p;
    std::vector<cplx> z(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        double phi = phi_max * k / count;
        // centre of the rolling circle, then the tracing point; no-slip gives rotation (R + rho) phi / rho
        z[static_cast<std::size_t>(k)] = (R + rho) * std::exp(I1 * phi) - rho * std::exp(I1 * ((R + rho) / rho * phi));
    }
    return z;
}

int count_cusps(const std::vector<cplx>& closed) {
    auto clusters = large_turns(turning_steps(closed), 0.5);
    int c = 0;
    for (const Cluster& cl : clusters)
        if (std::abs(std::abs(cl.sum) - kPi) < 0.5) ++c;
    return c;
}

Rational normal_winding(const std::vector<cplx>& closed, double max_step) {
    std::vector<double> d = turning_steps(closed);
    double total = 0.0;
    for (double v : d)
        if (std::abs(v) <= max_step) total += v;
    for (const Cluster& cl : large_turns(d, max_step)) {
        // a cusp reverses the tangent; the normal keeps only the remainder
        double rest = wrap(cl.sum - kPi);
        if (std::abs(rest) > max_step) throw CycloidError("unresolved cusp: refine the sampling near sharp turns");
        total += rest;
    }
    double w = total / (2 * kPi);
    double h = std::round(2 * w);
    if (std::abs(2 * w - h) > 1e-3) throw CycloidError("normal winding is not a half-integer: refine the sampling");
    return Rational(static_cast<std::int64_t>(h), 2);
}

double hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.empty() || b.empty()) throw CycloidError("hausdorff: empty point set");
    auto directed = [](const std::vector<cplx>& x, const std::vector<cplx>& y) {
        std::vector<double> best(x.size());
        parallel_for(x.size(), [&](std::size_t i) {
            double m = std::numeric_limits<double>::infinity();
            for (const cplx& q : y) m = std::min(m, std::norm(x[i] - q));
            best[i] = m;
        });
        return std::sqrt(*std::max_element(best.begin(), best.end()));
    };
    return std::max(directed(a, b), directed(b, a));
}

double hausdorff_polyline(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.size() < 2 || b.size() < 2) throw CycloidError("hausdorff: polyline needs two samples");
    auto directed = [](const std::vector<cplx>& x, const std::vector<cplx>& y) {
        std::vector<double> best(x.size());
        const std::size_t M = y.size();
        parallel_for(x.size(), [&](std::size_t i) {
            double m = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < M; ++j) {
                cplx p = y[j], d = y[(j + 1) % M] - p;
                double len2 = std::norm(d);
                double s = len2 > 0 ? std::clamp(std::real((x[i] - p) * std::conj(d)) / len2, 0.0, 1.0) : 0.0;
                m = std::min(m, std::norm(x[i] - (p + s * d)));
            }
            best[i] = m;
        });
        return std::sqrt(*std::max_element(best.begin(), best.end()));
    };
    return std::max(directed(a, b), directed(b, a));
}

double diameter(const std::vector<cplx>& a) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) d = std::max(d, std::abs(a[i] - a[j]));
    return d;
}

GammaFit fit_gamma(int m, int n, const std::vector<double>& t, const std::vector<cplx>& z) {
    require_pair(m, n);
    if (t.size() != z.size() || t.size() < 4) throw CycloidError("fit_gamma: need matching samples");
    const std::size_t K = t.size();
    auto scale_at = [&](double tau) {
        cplx num = 0.0;
        double den = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            cplx g = gamma(m, n, t[k] + tau);
            num += z[k] * std::conj(g);
            den += std::norm(g);
        }
        return num / den;
    };
    auto energy = [&](double tau) {
        cplx C = scale_at(tau);
        double e = 0.0;
        for (std::size_t k = 0; k < K; ++k) e += std::norm(z[k] - C * gamma(m, n, t[k] + tau));
        return e;
    };
    // dE/dtau at the optimal C (the C-derivative vanishes there)
    auto gradient = [&](double tau) {
        cplx C = scale_at(tau);
        double g = 0.0;
        for (std::size_t k = 0; k < K; ++k)
            g -= 2 * std::real(std::conj(z[k] - C * gamma(m, n, t[k] + tau)) * C * gamma_derivative(m, n, t[k] + tau));
        return g;
    };

    // shifting tau by pi/n only rotates Gamma, which C absorbs
    const double period = kPi / n;
    const int scan = 64;
    int best = 0;
    double best_e = std::numeric_limits<double>::infinity();
    for (int j = 0; j < scan; ++j) {
        double e = energy(period * j / scan);
        if (e < best_e) {
            best_e = e;
            best = j;
        }
    }
    double lo = period * (best - 1) / scan, hi = period * (best + 1) / scan;
    const double phi = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = energy(x1), f2 = energy(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-9; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = energy(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = energy(x2);
        }
    }
    double a = 0.5 * (lo + hi), b = a + 1e-7;
    double ga = gradient(a), gb = gradient(b);
    for (int it = 0; it < 20 && gb != ga; ++it) {
        double c = b - gb * (b - a) / (gb - ga);
        if (!std::isfinite(c) || std::abs(c - b) > period) break;
        a = b;
        ga = gb;
        b = c;
        gb = gradient(b);
        if (std::abs(b - a) < 1e-15) break;
    }
    if (energy(b) > energy(0.5 * (lo + hi))) b = 0.5 * (lo + hi);

    GammaFit F;
    F.tau = b;
    F.C = scale_at(b);
    double gmax = 0.0, err = 0.0;
    std::vector<cplx> model(K);
    for (std::size_t k = 0; k < K; ++k) {
        cplx g = gamma(m, n, t[k] + b);
        gmax = std::max(gmax, std::abs(g));
        model[k] = F.C * g;
        err = std::max(err, std::abs(z[k] - model[k]));
    }
    const double c = std::abs(F.C);
    if (c == 0.0) throw CycloidError("fit_gamma: zero scale");
    F.residual = err / (c * gmax);
    F.hausdorff = hausdorff(z, model) / c;
    return F;
}

namespace {

namespace odeint = boost::numeric::odeint;
using State3 = std::array<double, 3>;

}  // namespace

std::vector<CycloidSample> ode_solve(int m, int n, const CycloidOdeOptions& opt) {
    require_pair(m, n);
    const double p = static_cast<double>(n) / m, p2 = p * p;
    const double s0 = opt.s0;
    const double s1 = opt.s1 != 0.0 ? opt.s1 : s0 + 2 * kPi * m;
    if (!(s1 > s0)) throw CycloidError("ode_solve: empty s range");
    if (std::abs(std::cos(p * s0)) < 1e-3) throw CycloidError("ode_solve: starting point sits on a cusp");

    // theta-form: x = (log r, u, s), independent variable theta
    auto theta_rhs = [p2](const State3& x, State3& dx, double) {
        const double u = x[1], u2 = u * u;
        dx[0] = u;
        dx[1] = (p2 + (p2 + 1) * u2 + u2 * u2) / (p2 - 1);
        dx[2] = (1 + u2) / (1 - p2);
    };
    // s-form: y = (log r, phi, theta), independent variable s
    auto s_rhs = [p2](const State3& y, State3& dy, double) {
        const double sp = std::sin(y[1]), cp = std::cos(y[1]);
        dy[0] = (1 - p2) * sp * cp;
        dy[1] = -(sp * sp + p2 * cp * cp);
        dy[2] = 1 - (sp * sp + p2 * cp * cp);
    };

    // theta runs with s when p < 1 and against it when p > 1
    const double dir = p < 1 ? 1.0 : -1.0;
    const double max_ds = 0.02 / std::max(1.0, p);
    auto stepper = odeint::make_controlled(opt.abs_tol, opt.rel_tol, odeint::runge_kutta_dopri5<State3>());

    std::vector<CycloidSample> out;
    double u0 = -p * std::tan(p * s0);
    double phi = std::atan(u0);
    double theta = s0 + phi, logr = 0.0, s = s0;
    out.push_back({s, theta, 1.0, u0, false});

    bool s_mode = std::abs(u0) > opt.u_switch;
    int guard = 0;
    double h = max_ds;
    while (s < s1) {
        if (++guard > 50000000) throw CycloidError("ode_solve: step budget exhausted");
        if (!s_mode) {
            State3 x{logr, std::tan(phi), s};
            double th = theta;
            // keep the implied s step below max_ds
            double dth = dir * std::min(h, max_ds * std::abs(1 - p2) / (1 + x[1] * x[1]));
            State3 trial = x;
            double th_trial = th;
            if (stepper.try_step(theta_rhs, trial, th_trial, dth) == odeint::fail) {
                h = std::abs(dth);
                if (h < 1e-14) throw CycloidError("ode_solve: step size underflow");
                continue;
            }
            h = std::abs(dth);
            if (trial[2] > s1 || std::abs(trial[1]) > opt.u_switch) {
                // finish or cross the next cusp in s
                s_mode = true;
                h = max_ds;
                continue;
            }
            const double u = trial[1];
            double base = std::atan(u);
            phi = base + std::round((phi - base) / kPi) * kPi;
            logr = trial[0];
            s = trial[2];
            theta = th_trial;
            out.push_back({s, theta, std::exp(logr), u, false});
        } else {
            State3 y{logr, phi, theta};
            double ds = std::min({h, max_ds, s1 - s});
            double s_trial = s;
            if (stepper.try_step(s_rhs, y, s_trial, ds) == odeint::fail) {
                h = ds;
                if (h < 1e-14) throw CycloidError("ode_solve: step size underflow");
                continue;
            }
            h = ds;
            s = s_trial;
            logr = y[0];
            phi = y[1];
            theta = y[2];
            const double u = std::tan(phi);
            out.push_back({s, theta, std::exp(logr), u, true});
            if (std::abs(u) < opt.u_back && s < s1) {
                s_mode = false;
                h = max_ds;
            }
        }
    }
    return out;
}

CycloidOdeCheck check_ode_solution(int m, int n, const std::vector<CycloidSample>& sol) {
    require_pair(m, n);
    if (sol.size() < 8) throw CycloidError("check_ode_solution: too few samples");
    const double p = static_cast<double>(n) / m, p2 = p * p;
    CycloidOdeCheck c;

    for (const CycloidSample& x : sol) {
        double ue = -p * std::tan(p * x.s);
        if (std::abs(ue) <= 10.0) c.u_residual = std::max(c.u_residual, std::abs(x.u - ue) / std::max(1.0, std::abs(ue)));
        if (!x.s_mode) {
            // u' along theta from the closed form, against the right-hand side
            double dudth = -p2 / (std::cos(p * x.s) * std::cos(p * x.s)) * (1 + ue * ue) / (1 - p2);
            double lhs = (p2 - 1) * dudth;
            double rhs = p2 + (p2 + 1) * x.u * x.u + std::pow(x.u, 4);
            c.ode_residual = std::max(c.ode_residual, std::abs(lhs - rhs) / rhs);
        }
    }

    auto g = [p, p2](double s) { return (1 + p2) + (1 - p2) * std::cos(2 * p * s); };
    double num = 0.0, den = 0.0;
    for (const CycloidSample& x : sol) {
        num += x.r * x.r * g(x.s);
        den += g(x.s) * g(x.s);
    }
    c.C2 = num / den;
    double gmax = 0.0;
    for (const CycloidSample& x : sol) gmax = std::max(gmax, c.C2 * g(x.s));
    for (const CycloidSample& x : sol) c.r2_residual = std::max(c.r2_residual, std::abs(x.r * x.r - c.C2 * g(x.s)) / gmax);

    cplx zn = 0.0;
    double gd = 0.0;
    std::vector<cplx> z(sol.size()), model(sol.size());
    for (std::size_t k = 0; k < sol.size(); ++k) {
        z[k] = std::polar(sol[k].r, sol[k].theta);
        model[k] = gamma(m, n, sol[k].s / m);
        zn += z[k] * std::conj(model[k]);
        gd += std::norm(model[k]);
    }
    c.C = zn / gd;
    double err = 0.0, mmax = 0.0;
    for (std::size_t k = 0; k < sol.size(); ++k) {
        err = std::max(err, std::abs(z[k] - c.C * model[k]));
        mmax = std::max(mmax, std::abs(model[k]));
    }
    c.gamma_residual = err / (std::abs(c.C) * mmax);
    return c;
}

}  // namespace flatfront
