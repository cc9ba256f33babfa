#pragma once

#include <complex>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include "flatfront/rational.hpp"
#include "flatfront/series.hpp"

namespace flatfront {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line, int column);
    int line;
    int column;
};

struct ExprNode;

/// Closed-form expression in the variable z.
///
/// Grammar (conventional precedence, `^` binds right; multiplication is explicit):
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := ('-' | '+') unary | power
///   power  := atom ('^' unary)?
///   atom   := number | 'i' | 'z' | 'pi' | name | func '(' expr ')' | '(' expr ')'
///   func   := exp | log | sqrt
/// Exponents must fold to exact rationals. Names are looked up in the parameter map.
class Expression {
public:
    Expression() = default;
    explicit Expression(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}

    bool empty() const { return !root_; }
    cplx eval(cplx z) const;
    /// Value and z-derivative.
    std::pair<cplx, cplx> eval_with_derivative(cplx z) const;
    bool depends_on_z() const;
    std::string to_string() const;

    const ExprNode& root() const { return *root_; }

private:
    std::shared_ptr<const ExprNode> root_;
};

Expression parse_expression(const std::string& text,
                            const std::map<std::string, cplx>& params = {});

/// Where to expand: a finite point a (local coordinate w = z - a) or infinity (w = 1/z).
struct ExpansionPoint {
    bool at_infinity = false;
    cplx a{0.0, 0.0};

    static ExpansionPoint finite(cplx a) { return {false, a}; }
    static ExpansionPoint infinity() { return {true, cplx(0)}; }
    /// Global z from the local coordinate w.
    cplx to_global(cplx w) const { return at_infinity ? 1.0 / w : a + w; }
    cplx to_local(cplx z) const { return at_infinity ? 1.0 / z : z - a; }
    /// dz/dw at w.
    cplx jacobian(cplx w) const { return at_infinity ? -1.0 / (w * w) : cplx(1); }
};

/// Series of e in the local coordinate at the point. As a function, not a form:
/// one-forms at infinity pick up dz = -w^-2 dw, which the caller applies.
Series expand_at(const Expression& e, ExpansionPoint p, int N = kDefaultTruncation);

/// The Jacobian dz/dw as a series in w (1 or -w^-2).
Series chart_jacobian(ExpansionPoint p, int N = kDefaultTruncation);

}  // namespace flatfront
