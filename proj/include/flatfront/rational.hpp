#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <boost/rational.hpp>

namespace flatfront {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& q) {
    return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

inline bool is_integer(const Rational& q) { return q.denominator() == 1; }

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& q);

/// Parses "p", "-p/q" or a finite decimal such as "2.5".
std::optional<Rational> parse_rational(const std::string& text);

/// Best rational approximation with denominator <= max_den, accepted only if
/// it lies within tol of x.
std::optional<Rational> recognize_rational(double x, std::int64_t max_den = 10000,
                                           double tol = 1e-9);

}  // namespace flatfront
