#include "flatfront/rational.hpp"

#include <cctype>
#include <cmath>

namespace flatfront {

std::string to_string(const Rational& q) {
    if (q.denominator() == 1) return std::to_string(q.numerator());
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

std::optional<Rational> parse_rational(const std::string& text) {
    std::size_t i = 0;
    bool neg = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) neg = text[i++] == '-';
    std::int64_t num = 0, den = 1;
    bool any = false;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        num = num * 10 + (text[i++] - '0');
        any = true;
    }
    if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            num = num * 10 + (text[i++] - '0');
            den *= 10;
            any = true;
        }
    } else if (i < text.size() && text[i] == '/') {
        ++i;
        std::int64_t d = 0;
        bool dany = false;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            d = d * 10 + (text[i++] - '0');
            dany = true;
        }
        if (!dany || d == 0) return std::nullopt;
        den = d;
    }
    if (!any || i != text.size()) return std::nullopt;
    return Rational(neg ? -num : num, den);
}

std::optional<Rational> recognize_rational(double x, std::int64_t max_den, double tol) {
    if (!std::isfinite(x)) return std::nullopt;
    // continued fraction convergents
    double r = x;
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int it = 0; it < 64; ++it) {
        double a = std::floor(r);
        if (std::fabs(a) > 1e15) break;
        auto ai = static_cast<std::int64_t>(a);
        std::int64_t p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        if (std::fabs(x - static_cast<double>(p1) / static_cast<double>(q1)) <= tol)
            return Rational(p1, q1);
        double frac = r - a;
        if (frac < 1e-300) break;
        r = 1.0 / frac;
    }
    return std::nullopt;
}

}  // namespace flatfront
