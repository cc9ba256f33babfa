#include "flatfront/series.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>

namespace flatfront {

namespace {

std::atomic<double> g_vanish{1e-12};

std::int64_t integer_offset(Rational a, Rational b, const char* op) {
    Rational d = a - b;
    if (!is_integer(d))
        throw SeriesError(std::string(op) + ": exponents " + to_string(a) + " and " +
                          to_string(b) + " differ by a non-integer");
    return d.numerator();
}

cplx principal_power(cplx k, Rational nu) {
    if (is_integer(nu)) return std::pow(k, static_cast<double>(nu.numerator()));
    return std::polar(std::pow(std::abs(k), to_double(nu)), to_double(nu) * std::arg(k));
}

}  // namespace

double vanishing_threshold() { return g_vanish.load(); }
void set_vanishing_threshold(double rel) { g_vanish.store(rel); }

Series Series::constant(cplx c, int N) {
    if (c == cplx(0)) return Series();
    std::vector<cplx> v(static_cast<std::size_t>(N) + 1, cplx(0));
    v[0] = c;
    return from_coeffs(Rational(0), std::move(v));
}

Series Series::monomial(cplx c, Rational nu, int N) {
    if (c == cplx(0)) return Series();
    std::vector<cplx> v(static_cast<std::size_t>(N) + 1, cplx(0));
    v[0] = c;
    return from_coeffs(nu, std::move(v));
}

Series Series::from_coeffs(Rational nu, std::vector<cplx> coeffs) {
    Series s;
    std::size_t k = 0;
    while (k < coeffs.size() && coeffs[k] == cplx(0)) ++k;
    if (k == coeffs.size()) return s;
    s.nu_ = nu + static_cast<std::int64_t>(k);
    s.c_.assign(coeffs.begin() + static_cast<std::ptrdiff_t>(k), coeffs.end());
    s.arg0_ = std::arg(s.c_[0]);
    return s;
}

Rational Series::nu() const {
    if (is_zero()) throw SeriesError("order of the zero series is infinite");
    return nu_;
}

cplx Series::leading() const {
    if (is_zero()) return cplx(0);
    return c_[0];
}

cplx Series::coeff(Rational e) const {
    if (is_zero()) return cplx(0);
    std::int64_t j = integer_offset(e, nu_, "coeff");
    if (j < 0) return cplx(0);
    if (j > N()) throw SeriesError("coefficient of z^" + to_string(e) + " is past the truncation");
    return c_[static_cast<std::size_t>(j)];
}

cplx Series::eval(cplx z) const {
    if (is_zero()) return cplx(0);
    cplx acc(0);
    for (std::size_t j = c_.size(); j-- > 0;) acc = acc * z + c_[j];
    return acc * principal_power(z, nu_);
}

cplx Series::eval_polar(double r, double t) const {
    if (is_zero()) return cplx(0);
    cplx z = std::polar(r, t);
    cplx acc(0);
    for (std::size_t j = c_.size(); j-- > 0;) acc = acc * z + c_[j];
    double nu = to_double(nu_);
    return acc * std::polar(std::pow(r, nu), nu * t);
}

Series Series::truncated(int N) const {
    if (is_zero() || N >= this->N()) return *this;
    Series s = *this;
    s.c_.resize(static_cast<std::size_t>(std::max(N, 0)) + 1);
    return s;
}

double Series::validity_radius() const {
    if (is_zero() || N() < 2) return std::numeric_limits<double>::infinity();
    double c0 = std::abs(c_[0]);
    double best = std::numeric_limits<double>::infinity();
    for (int j = std::max(1, N() / 2); j <= N(); ++j) {
        double cj = std::abs(c_[static_cast<std::size_t>(j)]);
        if (cj <= 1e-300) continue;
        best = std::min(best, std::pow(c0 / cj, 1.0 / j));
    }
    return best;
}

void Series::strip_leading(const std::vector<double>& scale) {
    double thr = vanishing_threshold();
    std::size_t k = 0;
    while (k < c_.size() && std::abs(c_[k]) <= thr * scale[k]) ++k;
    if (k == c_.size()) {
        c_.clear();
        return;
    }
    if (k > 0) {
        nu_ += static_cast<std::int64_t>(k);
        c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(k));
    }
}

Series add_scaled(const Series& a, const Series& b, double sign) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return sign > 0 ? b : -b;
    Rational nu = std::min(a.nu_, b.nu_);
    Rational top = std::min(a.top(), b.top());
    if (top < nu) {
        // the later series sits entirely above the other's truncation
        return a.nu_ < b.nu_ ? a : (sign > 0 ? b : -b);
    }
    std::int64_t len = integer_offset(top, nu, "add") + 1;
    std::int64_t oa = integer_offset(a.nu_, nu, "add");
    std::int64_t ob = integer_offset(b.nu_, nu, "add");
    Series s;
    s.nu_ = nu;
    s.c_.assign(static_cast<std::size_t>(len), cplx(0));
    std::vector<double> scale(static_cast<std::size_t>(len), 0.0);
    for (std::int64_t j = 0; j < len; ++j) {
        std::int64_t ja = j - oa, jb = j - ob;
        cplx va(0), vb(0);
        if (ja >= 0 && ja <= a.N()) va = a.c_[static_cast<std::size_t>(ja)];
        if (jb >= 0 && jb <= b.N()) vb = sign * b.c_[static_cast<std::size_t>(jb)];
        s.c_[static_cast<std::size_t>(j)] = va + vb;
        scale[static_cast<std::size_t>(j)] = std::max(std::abs(va), std::abs(vb));
    }
    s.strip_leading(scale);
    if (s.is_zero()) return s;
    if (s.nu_ == a.nu_ && s.c_[0] == a.c_[0]) s.arg0_ = a.arg0_;
    else if (s.nu_ == b.nu_ && s.c_[0] == sign * b.c_[0] && sign > 0) s.arg0_ = b.arg0_;
    else s.arg0_ = std::arg(s.c_[0]);
    return s;
}

Series operator+(const Series& a, const Series& b) { return add_scaled(a, b, 1.0); }
Series operator-(const Series& a, const Series& b) { return add_scaled(a, b, -1.0); }

Series operator+(const Series& a, cplx s) {
    if (a.is_zero()) return Series::constant(s);
    Rational top = a.top();
    int N = top < Rational(0) ? 0
                              : static_cast<int>(top.numerator() / top.denominator());
    return a + Series::constant(s, N);
}

Series operator-(const Series& a) {
    Series s = a;
    for (auto& c : s.c_) c = -c;
    if (!s.is_zero()) s.arg0_ = std::arg(s.c_[0]);
    return s;
}

Series operator*(cplx k, const Series& a) {
    if (a.is_zero() || k == cplx(0)) return Series();
    Series s = a;
    for (auto& c : s.c_) c *= k;
    s.arg0_ = std::arg(s.c_[0]);
    return s;
}

Series operator*(const Series& a, const Series& b) {
    if (a.is_zero() || b.is_zero()) return Series();
    int N = std::min(a.N(), b.N());
    std::vector<cplx> c(static_cast<std::size_t>(N) + 1, cplx(0));
    for (int i = 0; i <= N; ++i)
        for (int j = 0; i + j <= N; ++j)
            c[static_cast<std::size_t>(i + j)] +=
                a.c_[static_cast<std::size_t>(i)] * b.c_[static_cast<std::size_t>(j)];
    return Series::from_coeffs(a.nu_ + b.nu_, std::move(c));
}

Series operator/(const Series& a, const Series& b) {
    if (b.is_zero()) throw SeriesError("division by the zero series");
    return a * pow_real(b, Rational(-1));
}

Order order(const Series& a) {
    if (a.is_zero()) return Order{true, Rational(0)};
    return Order{false, a.nu()};
}

Series pow_real(const Series& a, Rational alpha) {
    if (a.is_zero()) throw SeriesError("pow of zero");
    if (alpha == Rational(0)) return Series::constant(cplx(1), a.N());
    const int N = a.N();
    const double al = to_double(alpha);
    const cplx c0 = a.c_[0];
    // Miller recurrence on the unit-normalized series
    std::vector<cplx> u(static_cast<std::size_t>(N) + 1), b(static_cast<std::size_t>(N) + 1);
    for (int j = 0; j <= N; ++j) u[static_cast<std::size_t>(j)] = a.c_[static_cast<std::size_t>(j)] / c0;
    b[0] = 1.0;
    for (int k = 1; k <= N; ++k) {
        cplx acc(0);
        for (int j = 1; j <= k; ++j)
            acc += (al * j - (k - j)) * u[static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(k - j)];
        b[static_cast<std::size_t>(k)] = acc / static_cast<double>(k);
    }
    double arg = al * a.arg0_;
    cplx lead;
    if (is_integer(alpha) && std::abs(alpha.numerator()) <= 64)
        lead = std::pow(c0, static_cast<int>(alpha.numerator()));
    else
        lead = std::polar(std::pow(std::abs(c0), al), arg);
    Series s;
    s.nu_ = alpha * a.nu_;
    s.c_.resize(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) s.c_[j] = lead * b[j];
    s.arg0_ = arg;
    return s;
}

Series differentiate(const Series& a) {
    if (a.is_zero()) return Series();
    std::vector<cplx> c(a.coeffs().size());
    for (std::size_t j = 0; j < c.size(); ++j)
        c[j] = to_double(a.nu() + static_cast<std::int64_t>(j)) * a.coeffs()[j];
    return Series::from_coeffs(a.nu() - 1, std::move(c));
}

Series integrate(const Series& a) {
    if (a.is_zero()) return Series();
    double scale = 0.0;
    for (const auto& c : a.coeffs()) scale = std::max(scale, std::abs(c));
    std::vector<cplx> c(a.coeffs().size());
    for (std::size_t j = 0; j < c.size(); ++j) {
        Rational e = a.nu() + static_cast<std::int64_t>(j);
        if (e == Rational(-1)) {
            if (std::abs(a.coeffs()[j]) > vanishing_threshold() * scale) {
                std::ostringstream os;
                os << "logarithmic monodromy: residue " << a.coeffs()[j];
                throw MonodromyError(os.str(), a.coeffs()[j]);
            }
            c[j] = 0.0;
            continue;
        }
        c[j] = a.coeffs()[j] / to_double(e + 1);
    }
    return Series::from_coeffs(a.nu() + 1, std::move(c));
}

Series rescale(const Series& a, cplx k) {
    if (k == cplx(0)) throw SeriesError("rescale by zero");
    if (a.is_zero()) return a;
    Series s = a;
    cplx kn = principal_power(k, a.nu_);
    cplx kj(1);
    for (auto& c : s.c_) {
        c *= kn * kj;
        kj *= k;
    }
    s.arg0_ = a.arg0_ + to_double(a.nu_) * std::arg(k);
    return s;
}

Series exp_series(const Series& a) {
    if (a.is_zero()) return Series::constant(cplx(1));
    if (a.nu() < Rational(0))
        throw SeriesError("irregular: exp of a series with a pole is not expandable");
    if (!is_integer(a.nu())) throw SeriesError("exp of a series with fractional exponents");
    std::int64_t shift = a.nu().numerator();
    std::int64_t top = shift + a.N();
    std::vector<cplx> x(static_cast<std::size_t>(top) + 1, cplx(0));
    for (int j = 0; j <= a.N(); ++j)
        x[static_cast<std::size_t>(shift + j)] = a.coeffs()[static_cast<std::size_t>(j)];
    std::vector<cplx> b(x.size(), cplx(0));
    b[0] = std::exp(x[0]);
    for (std::size_t k = 1; k < b.size(); ++k) {
        cplx acc(0);
        for (std::size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * x[j] * b[k - j];
        b[k] = acc / static_cast<double>(k);
    }
    return Series::from_coeffs(Rational(0), std::move(b));
}

Series log_series(const Series& a) {
    if (a.is_zero()) throw SeriesError("log of zero");
    if (a.nu() != Rational(0))
        throw SeriesError("log of a series with nonzero order produces a logarithmic term");
    const auto& x = a.coeffs();
    std::vector<cplx> b(x.size(), cplx(0));
    b[0] = cplx(std::log(std::abs(x[0])), a.branch_arg());
    for (std::size_t k = 1; k < b.size(); ++k) {
        cplx acc = static_cast<double>(k) * x[k];
        for (std::size_t j = 1; j < k; ++j) acc -= static_cast<double>(j) * b[j] * x[k - j];
        b[k] = acc / (static_cast<double>(k) * x[0]);
    }
    return Series::from_coeffs(Rational(0), std::move(b));
}

Series compose(const Series& a, const Series& b) {
    if (b.is_zero() || b.nu() != Rational(1))
        throw SeriesError("compose: inner series must have leading exponent 1");
    if (a.is_zero()) return a;
    const int N = std::min(a.N(), b.N());
    const auto n = static_cast<std::size_t>(N) + 1;
    std::vector<cplx> v(n, cplx(0));
    for (std::size_t j = 1; j < n; ++j) v[j] = b.coeffs()[j - 1];
    std::vector<cplx> acc(n, cplx(0)), next(n);
    for (std::size_t j = n; j-- > 0;) {
        std::fill(next.begin(), next.end(), cplx(0));
        for (std::size_t i = 0; i < n; ++i) {
            if (acc[i] == cplx(0)) continue;
            for (std::size_t k = 1; i + k < n; ++k) next[i + k] += acc[i] * v[k];
        }
        next[0] += a.coeffs()[j];
        acc.swap(next);
    }
    Series poly = Series::from_coeffs(Rational(0), std::move(acc));
    if (a.nu() == Rational(0)) return poly;
    return (pow_real(b.truncated(N), a.nu()) * poly).truncated(N);
}

Series revert(const Series& b) {
    if (b.is_zero() || b.nu() != Rational(1))
        throw SeriesError("revert: series must have leading exponent 1");
    const int N = b.N();
    const cplx b1 = b.leading();
    Series w = Series::monomial(cplx(1), Rational(1), N);
    Series tail = b - Series::monomial(b1, Rational(1), N);
    Series z = (1.0 / b1) * w;
    for (int it = 0; it < N + 1; ++it) {
        if (tail.is_zero()) break;
        Series t = compose(tail, z);
        z = (1.0 / b1) * (w - t);
    }
    return z.truncated(N);
}

Series substitute_power(const Series& a, int k) {
    if (k <= 0) throw SeriesError("substitute_power needs a positive integer");
    if (a.is_zero()) return a;
    std::vector<cplx> c(static_cast<std::size_t>(a.N() * k) + 1, cplx(0));
    for (int j = 0; j <= a.N(); ++j) c[static_cast<std::size_t>(j * k)] = a.coeffs()[static_cast<std::size_t>(j)];
    return Series::from_coeffs(a.nu() * k, std::move(c));
}

SeriesOneForm form_product(const SeriesOneForm& a, const SeriesOneForm& b) {
    if (a.degree + b.degree > 2) throw SeriesError("form product of degree above 2");
    return SeriesOneForm{a.base * b.base, a.degree + b.degree};
}

SeriesOneForm schwarzian_from_derivative(const Series& hp) {
    if (hp.is_zero()) throw SeriesError("Schwarzian of constant");
    Series L = differentiate(hp) / hp;
    Series S = differentiate(L) - 0.5 * (L * L);
    return SeriesOneForm{S, 2};
}

SeriesOneForm schwarzian(const Series& h) { return schwarzian_from_derivative(differentiate(h)); }

double relative_residual(const Series& a, const Series& b) {
    if (a.is_zero() && b.is_zero()) return 0.0;
    Rational lo, hi;
    if (a.is_zero()) { lo = b.nu(); hi = b.top(); }
    else if (b.is_zero()) { lo = a.nu(); hi = a.top(); }
    else { lo = std::min(a.nu(), b.nu()); hi = std::min(a.top(), b.top()); }
    double scale = 0.0, diff = 0.0;
    for (Rational e = lo; e <= hi; e += 1) {
        cplx va = a.coeff(e), vb = b.coeff(e);
        scale = std::max({scale, std::abs(va), std::abs(vb)});
        diff = std::max(diff, std::abs(va - vb));
    }
    return scale == 0.0 ? 0.0 : diff / scale;
}

std::optional<int> ramification(const Series& a) {
    if (a.is_zero()) return std::nullopt;
    if (a.nu() < Rational(0)) throw SeriesError("ramification of a series with a pole");
    Series d = a - Series::constant(a.coeff(Rational(0)), std::max(0, static_cast<int>(to_double(a.top()))));
    if (d.is_zero()) return std::nullopt;
    if (!is_integer(d.nu())) throw SeriesError("ramification of a fractional series");
    return static_cast<int>(d.nu().numerator());
}

std::string describe(const Series& a, int terms) {
    if (a.is_zero()) return "0";
    std::ostringstream os;
    for (int j = 0; j < std::min(terms, a.N() + 1); ++j) {
        if (j) os << " + ";
        os << a.coeffs()[static_cast<std::size_t>(j)] << " z^" << to_string(a.nu() + j);
    }
    os << " + O(z^" << to_string(a.top() + 1) << ")";
    return os.str();
}

}  // namespace flatfront
