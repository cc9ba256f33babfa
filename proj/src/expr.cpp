#include "flatfront/expr.hpp"

#include <cctype>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

namespace flatfront {

enum class Op { Number, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Log };

struct ExprNode {
    Op op;
    cplx value{0.0, 0.0};
    std::optional<Rational> exact;  // Number literals that are exact rationals
    Rational exponent{1};           // Pow
    std::shared_ptr<const ExprNode> a, b;
};

using NodePtr = std::shared_ptr<const ExprNode>;

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " +
                         std::to_string(column)),
      line(line),
      column(column) {}

namespace {

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr number(cplx v, std::optional<Rational> exact = std::nullopt) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Number;
    n->value = v;
    n->exact = exact;
    return n;
}

NodePtr power(NodePtr base, Rational q) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Pow;
    n->a = std::move(base);
    n->exponent = q;
    return n;
}

std::optional<Rational> fold_rational(const ExprNode& n) {
    switch (n.op) {
        case Op::Number:
            if (n.exact) return n.exact;
            return std::nullopt;
        case Op::Neg: {
            auto x = fold_rational(*n.a);
            if (!x) return std::nullopt;
            return -*x;
        }
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div: {
            auto x = fold_rational(*n.a), y = fold_rational(*n.b);
            if (!x || !y) return std::nullopt;
            if (n.op == Op::Add) return *x + *y;
            if (n.op == Op::Sub) return *x - *y;
            if (n.op == Op::Mul) return *x * *y;
            if (*y == Rational(0)) return std::nullopt;
            return *x / *y;
        }
        case Op::Pow: {
            auto x = fold_rational(*n.a);
            if (!x || !is_integer(n.exponent)) return std::nullopt;
            auto k = n.exponent.numerator();
            if (k < 0 && *x == Rational(0)) return std::nullopt;
            Rational r(1);
            for (std::int64_t j = 0; j < std::abs(k); ++j) r *= *x;
            return k < 0 ? Rational(1) / r : r;
        }
        default:
            return std::nullopt;
    }
}

class Parser {
public:
    Parser(const std::string& text, const std::map<std::string, cplx>& params)
        : s_(text), params_(params) {}

    NodePtr run() {
        NodePtr e = expr();
        skip();
        if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    const std::string& s_;
    const std::map<std::string, cplx>& params_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        int line = 1, col = 1;
        for (std::size_t k = 0; k < pos_ && k < s_.size(); ++k) {
            if (s_[k] == '\n') { ++line; col = 1; } else { ++col; }
        }
        throw ParseError(msg, line, col);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (eat('+')) lhs = make(Op::Add, lhs, term());
            else if (eat('-')) lhs = make(Op::Sub, lhs, term());
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (eat('*')) lhs = make(Op::Mul, lhs, unary());
            else if (eat('/')) lhs = make(Op::Div, lhs, unary());
            else return lhs;
        }
    }

    NodePtr unary() {
        if (eat('-')) return make(Op::Neg, unary());
        if (eat('+')) return unary();
        return pow_expr();
    }

    NodePtr pow_expr() {
        NodePtr base = atom();
        skip();
        std::size_t at = pos_;
        if (eat('^')) {
            NodePtr ex = unary();
            auto q = fold_rational(*ex);
            if (!q) {
                pos_ = at;
                fail("exponent must be an exact rational constant");
            }
            return power(base, *q);
        }
        return base;
    }

    NodePtr atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return literal();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            if (name == "z") return make(Op::Var);
            if (name == "i") return number(cplx(0, 1));
            if (name == "pi") return number(cplx(std::numbers::pi, 0));
            if (name == "exp" || name == "log" || name == "sqrt") {
                if (!eat('(')) fail("expected '(' after " + name);
                NodePtr arg = expr();
                if (!eat(')')) fail("expected ')'");
                if (name == "exp") return make(Op::Exp, arg);
                if (name == "log") return make(Op::Log, arg);
                return power(arg, Rational(1, 2));
            }
            auto it = params_.find(name);
            if (it == params_.end()) {
                pos_ = start;
                fail("unknown name '" + name + "'");
            }
            std::optional<Rational> exact;
            if (it->second.imag() == 0.0) exact = recognize_rational(it->second.real(), 1000000, 0.0);
            return number(it->second, exact);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr literal() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        bool has_exp = false;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
                has_exp = true;
            } else {
                pos_ = save;
            }
        }
        std::string text = s_.substr(start, pos_ - start);
        if (text == ".") {
            pos_ = start;
            fail("malformed number");
        }
        double v = 0.0;
        try {
            v = std::stod(text);
        } catch (const std::exception&) {
            pos_ = start;
            fail("malformed number");
        }
        std::optional<Rational> exact;
        if (!has_exp && text.size() <= 15) exact = parse_rational(text);
        return number(cplx(v, 0), exact);
    }
};

cplx rational_pow(cplx b, Rational q) {
    if (is_integer(q) && std::abs(q.numerator()) <= 64) return std::pow(b, static_cast<int>(q.numerator()));
    if (b == cplx(0)) return q > Rational(0) ? cplx(0) : cplx(INFINITY, 0);
    return std::exp(to_double(q) * std::log(b));
}

cplx eval_node(const ExprNode& n, cplx z) {
    switch (n.op) {
        case Op::Number: return n.value;
        case Op::Var: return z;
        case Op::Add: return eval_node(*n.a, z) + eval_node(*n.b, z);
        case Op::Sub: return eval_node(*n.a, z) - eval_node(*n.b, z);
        case Op::Mul: return eval_node(*n.a, z) * eval_node(*n.b, z);
        case Op::Div: return eval_node(*n.a, z) / eval_node(*n.b, z);
        case Op::Neg: return -eval_node(*n.a, z);
        case Op::Pow: return rational_pow(eval_node(*n.a, z), n.exponent);
        case Op::Exp: return std::exp(eval_node(*n.a, z));
        case Op::Log: return std::log(eval_node(*n.a, z));
    }
    return cplx(0);
}

struct Dual {
    cplx v, d;
};

Dual eval_dual(const ExprNode& n, cplx z) {
    switch (n.op) {
        case Op::Number: return {n.value, 0.0};
        case Op::Var: return {z, 1.0};
        case Op::Add: {
            Dual x = eval_dual(*n.a, z), y = eval_dual(*n.b, z);
            return {x.v + y.v, x.d + y.d};
        }
        case Op::Sub: {
            Dual x = eval_dual(*n.a, z), y = eval_dual(*n.b, z);
            return {x.v - y.v, x.d - y.d};
        }
        case Op::Mul: {
            Dual x = eval_dual(*n.a, z), y = eval_dual(*n.b, z);
            return {x.v * y.v, x.d * y.v + x.v * y.d};
        }
        case Op::Div: {
            Dual x = eval_dual(*n.a, z), y = eval_dual(*n.b, z);
            return {x.v / y.v, (x.d * y.v - x.v * y.d) / (y.v * y.v)};
        }
        case Op::Neg: {
            Dual x = eval_dual(*n.a, z);
            return {-x.v, -x.d};
        }
        case Op::Pow: {
            Dual x = eval_dual(*n.a, z);
            cplx v = rational_pow(x.v, n.exponent);
            cplx dv = to_double(n.exponent) * rational_pow(x.v, n.exponent - 1) * x.d;
            return {v, dv};
        }
        case Op::Exp: {
            Dual x = eval_dual(*n.a, z);
            cplx v = std::exp(x.v);
            return {v, v * x.d};
        }
        case Op::Log: {
            Dual x = eval_dual(*n.a, z);
            return {std::log(x.v), x.d / x.v};
        }
    }
    return {0.0, 0.0};
}

bool depends(const ExprNode& n) {
    if (n.op == Op::Var) return true;
    if (n.op == Op::Number) return false;
    return (n.a && depends(*n.a)) || (n.b && depends(*n.b));
}

std::string fmt_number(cplx v) {
    std::ostringstream os;
    os << std::setprecision(17);
    if (v.imag() == 0.0) {
        if (v.real() < 0) os << "(" << v.real() << ")";
        else os << v.real();
    } else if (v.real() == 0.0) {
        os << "(" << v.imag() << "*i)";
    } else {
        os << "(" << v.real() << (v.imag() < 0 ? "-" : "+") << std::fabs(v.imag()) << "*i)";
    }
    return os.str();
}

std::string print(const ExprNode& n) {
    switch (n.op) {
        case Op::Number:
            if (n.exact && n.value.imag() == 0.0) return "(" + flatfront::to_string(*n.exact) + ")";
            return fmt_number(n.value);
        case Op::Var: return "z";
        case Op::Add: return "(" + print(*n.a) + "+" + print(*n.b) + ")";
        case Op::Sub: return "(" + print(*n.a) + "-" + print(*n.b) + ")";
        case Op::Mul: return "(" + print(*n.a) + "*" + print(*n.b) + ")";
        case Op::Div: return "(" + print(*n.a) + "/" + print(*n.b) + ")";
        case Op::Neg: return "(-" + print(*n.a) + ")";
        case Op::Pow: return "(" + print(*n.a) + "^(" + flatfront::to_string(n.exponent) + "))";
        case Op::Exp: return "exp(" + print(*n.a) + ")";
        case Op::Log: return "log(" + print(*n.a) + ")";
    }
    return "";
}

Series expand_node(const ExprNode& n, ExpansionPoint p, int N) {
    switch (n.op) {
        case Op::Number: return Series::constant(n.value, N);
        case Op::Var: {
            if (p.at_infinity) return Series::monomial(1.0, Rational(-1), N);
            std::vector<cplx> c(static_cast<std::size_t>(N) + 1, cplx(0));
            c[0] = p.a;
            if (N >= 1) c[1] = 1.0;
            return Series::from_coeffs(Rational(0), std::move(c));
        }
        case Op::Add: return expand_node(*n.a, p, N) + expand_node(*n.b, p, N);
        case Op::Sub: return expand_node(*n.a, p, N) - expand_node(*n.b, p, N);
        case Op::Mul: return expand_node(*n.a, p, N) * expand_node(*n.b, p, N);
        case Op::Div: {
            Series den = expand_node(*n.b, p, N);
            if (den.is_zero()) throw SeriesError("division by an expression vanishing identically");
            return expand_node(*n.a, p, N) / den;
        }
        case Op::Neg: return -expand_node(*n.a, p, N);
        case Op::Pow: return pow_real(expand_node(*n.a, p, N), n.exponent);
        case Op::Exp: return exp_series(expand_node(*n.a, p, N));
        case Op::Log: return log_series(expand_node(*n.a, p, N));
    }
    return Series();
}

}  // namespace

Expression parse_expression(const std::string& text, const std::map<std::string, cplx>& params) {
    Parser parser(text, params);
    return Expression(parser.run());
}

cplx Expression::eval(cplx z) const {
    if (!root_) throw std::logic_error("empty expression");
    return eval_node(*root_, z);
}

std::pair<cplx, cplx> Expression::eval_with_derivative(cplx z) const {
    if (!root_) throw std::logic_error("empty expression");
    Dual d = eval_dual(*root_, z);
    return {d.v, d.d};
}

bool Expression::depends_on_z() const { return root_ && depends(*root_); }

std::string Expression::to_string() const { return root_ ? print(*root_) : ""; }

Series expand_at(const Expression& e, ExpansionPoint p, int N) {
    if (e.empty()) throw std::logic_error("empty expression");
    const int margin = 8;
    return expand_node(e.root(), p, N + margin).truncated(N);
}

Series chart_jacobian(ExpansionPoint p, int N) {
    if (p.at_infinity) return Series::monomial(-1.0, Rational(-2), N);
    return Series::constant(1.0, N);
}

}  // namespace flatfront
