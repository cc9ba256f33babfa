#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "flatfront/rational.hpp"

namespace flatfront {

using cplx = std::complex<double>;

inline constexpr int kDefaultTruncation = 24;

class SeriesError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by integrate() when a z^-1 term is present.
class MonodromyError : public SeriesError {
public:
    MonodromyError(const std::string& what, cplx residue)
        : SeriesError(what), residue(residue) {}
    cplx residue;
};

/// Leading coefficients below this fraction of the operand scale count as zero.
double vanishing_threshold();
void set_vanishing_threshold(double rel);

/// c_0 z^nu + c_1 z^(nu+1) + ... + c_N z^(nu+N), nu an exact rational.
/// The zero series has no coefficients and no order.
class Series {
public:
    Series() = default;

    static Series zero() { return Series(); }
    static Series constant(cplx c, int N = kDefaultTruncation);
    static Series monomial(cplx c, Rational nu, int N = kDefaultTruncation);
    /// Strips exactly-zero leading coefficients.
    static Series from_coeffs(Rational nu, std::vector<cplx> coeffs);

    bool is_zero() const { return c_.empty(); }
    Rational nu() const;
    int N() const { return static_cast<int>(c_.size()) - 1; }
    /// Highest exponent known, nu + N.
    Rational top() const { return nu() + N(); }
    const std::vector<cplx>& coeffs() const { return c_; }
    cplx leading() const;
    /// Argument used for c_0 when taking fractional powers.
    double branch_arg() const { return arg0_; }

    /// Coefficient of z^e; zero below the leading exponent. Throws past the truncation.
    cplx coeff(Rational e) const;

    cplx eval(cplx z) const;                // principal branch of z^nu
    cplx eval_polar(double r, double t) const;  // z = r e^{it}, z^nu = r^nu e^{i nu t}

    Series truncated(int N) const;
    /// Radius where the tail coefficients stop decaying; +inf for polynomials.
    double validity_radius() const;

    Series with_branch(double arg) const { Series s = *this; s.arg0_ = arg; return s; }

    friend Series operator+(const Series& a, const Series& b);
    friend Series operator-(const Series& a, const Series& b);
    friend Series operator*(const Series& a, const Series& b);
    friend Series operator/(const Series& a, const Series& b);
    friend Series operator*(cplx s, const Series& a);
    friend Series operator-(const Series& a);

private:
    Rational nu_{0};
    std::vector<cplx> c_;
    double arg0_ = 0.0;

    void strip_leading(const std::vector<double>& scale);
    friend Series add_scaled(const Series&, const Series&, double);
    friend Series pow_real(const Series&, Rational);
    friend Series rescale(const Series&, cplx);
};

inline Series operator*(const Series& a, cplx s) { return s * a; }
/// Adds a constant without shortening the truncation of a.
Series operator+(const Series& a, cplx s);

struct Order {
    bool infinite = false;
    Rational value{0};
};
Order order(const Series& a);

Series pow_real(const Series& a, Rational alpha);
Series differentiate(const Series& a);
Series integrate(const Series& a);
/// Substitutes z = k w (principal branch of k^nu).
Series rescale(const Series& a, cplx k);
Series exp_series(const Series& a);
Series log_series(const Series& a);
/// a(b(w)); b must have leading exponent exactly 1.
Series compose(const Series& a, const Series& b);
/// Compositional inverse of b = b1 z + b2 z^2 + ...
Series revert(const Series& b);
/// Substitutes z = w^k.
Series substitute_power(const Series& a, int k);

/// Coefficient series of a one-form (degree 1) or a quadratic differential (degree 2).
struct SeriesOneForm {
    Series base;
    int degree = 1;
};
SeriesOneForm form_product(const SeriesOneForm& a, const SeriesOneForm& b);

/// S(h) dz^2.
SeriesOneForm schwarzian(const Series& h);
/// S(h) dz^2 given only h'.
SeriesOneForm schwarzian_from_derivative(const Series& hp);

/// max |a_e - b_e| / max(|a_e|, |b_e|) over the common range of exponents.
double relative_residual(const Series& a, const Series& b);

/// Ramification order of a holomorphic series at 0: ord(a - a(0)), nullopt if constant.
std::optional<int> ramification(const Series& a);

std::string describe(const Series& a, int terms = 4);

}  // namespace flatfront
