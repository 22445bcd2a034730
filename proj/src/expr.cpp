#include "locons/expr.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <system_error>

#include "locons/errors.hpp"

namespace locons::expr {

namespace {

struct FuncInfo {
    std::string_view name;
    Func func;
    int arity;
};

constexpr FuncInfo kFuncs[] = {
    {"sin", Func::Sin, 1},   {"cos", Func::Cos, 1},   {"exp", Func::Exp, 1},
    {"log", Func::Log, 1},   {"sqrt", Func::Sqrt, 1}, {"abs", Func::Abs, 1},
    {"atan2", Func::Atan2, 2},
};

const FuncInfo* find_func(std::string_view name) {
    for (const auto& f : kFuncs)
        if (f.name == name) return &f;
    return nullptr;
}

std::string_view func_name(Func f) {
    for (const auto& info : kFuncs)
        if (info.func == f) return info.name;
    return "?";
}

NodePtr make_node(Node n) { return std::make_shared<const Node>(std::move(n)); }

NodePtr make_binary(Kind k, NodePtr a, NodePtr b) {
    Node n;
    n.kind = k;
    n.args = {std::move(a), std::move(b)};
    return make_node(std::move(n));
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

class Parser {
public:
    Parser(std::string_view src, const std::vector<std::string>& vars) : src_(src), vars_(vars) {}

    NodePtr parse_all() {
        NodePtr root = parse_sum();
        skip_ws();
        if (pos_ < src_.size()) fail("operator or end of input");
        return root;
    }

private:
    [[noreturn]] void fail(std::string_view expected) const {
        throw ParseError(pos_, "parse error at byte " + std::to_string(pos_) + ": expected " +
                                   std::string(expected));
    }

    void skip_ws() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' ||
                                      src_[pos_] == '\n' || src_[pos_] == '\r'))
            ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr parse_sum() {
        NodePtr lhs = parse_product();
        for (;;) {
            if (accept('+'))
                lhs = make_binary(Kind::Add, lhs, parse_product());
            else if (accept('-'))
                lhs = make_binary(Kind::Sub, lhs, parse_product());
            else
                return lhs;
        }
    }

    NodePtr parse_product() {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (accept('*'))
                lhs = make_binary(Kind::Mul, lhs, parse_unary());
            else if (accept('/'))
                lhs = make_binary(Kind::Div, lhs, parse_unary());
            else
                return lhs;
        }
    }

    NodePtr parse_unary() {
        if (accept('-')) {
            Node n;
            n.kind = Kind::Neg;
            n.args = {parse_unary()};
            return make_node(std::move(n));
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (!accept('^')) return base;
        Node n;
        n.kind = Kind::Pow;
        n.exponent = parse_exponent();
        n.args = {std::move(base)};
        return make_node(std::move(n));
    }

    // Integer exponent; chains fold right-associatively at parse time.
    int parse_exponent() {
        const bool negative = accept('-');
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
        if (start == pos_) fail("integer literal exponent");
        if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E')) {
            pos_ = start;
            fail("integer literal exponent");
        }
        long long base = 0;
        auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, base);
        if (ec != std::errc{} || base > kMaxExponent) {
            pos_ = start;
            fail("exponent with magnitude at most " + std::to_string(kMaxExponent));
        }
        long long value = base;
        if (accept('^')) {
            const std::size_t rest_at = pos_;
            const int rest = parse_exponent();
            if (rest < 0) {
                pos_ = rest_at;
                fail("non-negative exponent inside an exponent chain");
            }
            value = 1;
            for (int i = 0; i < rest; ++i) {
                value *= base;
                if (value > kMaxExponent) {
                    pos_ = start;
                    fail("exponent with magnitude at most " + std::to_string(kMaxExponent));
                }
            }
        }
        return static_cast<int>(negative ? -value : value);
    }

    NodePtr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
        }
        if (pos_ == start + 1 && src_[start] == '.') {
            pos_ = start;
            fail("number");
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
            if (p < src_.size() && is_digit(src_[p])) {
                while (p < src_.size() && is_digit(src_[p])) ++p;
                pos_ = p;
            }
        }
        Node n;
        n.kind = Kind::Number;
        auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, n.value);
        if (ec != std::errc{} || !std::isfinite(n.value)) {
            pos_ = start;
            fail("finite number");
        }
        return make_node(std::move(n));
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos_ >= src_.size()) fail("number, identifier, '(' or '-'");
        const char c = src_[pos_];
        if (is_digit(c) || c == '.') return parse_number();
        if (c == '(') {
            ++pos_;
            NodePtr inner = parse_sum();
            if (!accept(')')) fail("')'");
            return inner;
        }
        if (!is_ident_start(c)) fail("number, identifier, '(' or '-'");

        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);

        if (const FuncInfo* info = find_func(name)) {
            if (!accept('(')) fail("'(' after function name");
            Node n;
            n.kind = Kind::Call;
            n.func = info->func;
            for (int i = 0; i < info->arity; ++i) {
                if (i > 0 && !accept(',')) fail("','");
                n.args.push_back(parse_sum());
            }
            if (!accept(')')) fail(info->arity == 1 ? "')'" : "',' or ')'");
            return make_node(std::move(n));
        }
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (vars_[i] == name) {
                Node n;
                n.kind = Kind::Variable;
                n.var = static_cast<int>(i);
                return make_node(std::move(n));
            }
        }
        if (name == "pi") {
            Node n;
            n.kind = Kind::Pi;
            return make_node(std::move(n));
        }
        throw ParseError(start, "parse error at byte " + std::to_string(start) +
                                    ": unknown identifier '" + std::string(name) + "'");
    }

    static constexpr long long kMaxExponent = 1 << 20;

    std::string_view src_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
};

[[noreturn]] void domain_fail(const char* what, const Node& node,
                              const std::vector<std::string>& vars) {
    std::string sub = to_string(node, vars);
    std::string msg = std::string("domain error: ") + what + " in '" + sub + "'";
    throw DomainError(msg, std::move(sub));
}

double eval_node(const Node& n, std::span<const double> values, const std::vector<std::string>& vars) {
    double r = 0.0;
    switch (n.kind) {
    case Kind::Number:
        return n.value;
    case Kind::Variable:
        return values[static_cast<std::size_t>(n.var)];
    case Kind::Pi:
        return std::numbers::pi;
    case Kind::Neg:
        return -eval_node(*n.args[0], values, vars);
    case Kind::Add:
        r = eval_node(*n.args[0], values, vars) + eval_node(*n.args[1], values, vars);
        break;
    case Kind::Sub:
        r = eval_node(*n.args[0], values, vars) - eval_node(*n.args[1], values, vars);
        break;
    case Kind::Mul:
        r = eval_node(*n.args[0], values, vars) * eval_node(*n.args[1], values, vars);
        break;
    case Kind::Div: {
        const double num = eval_node(*n.args[0], values, vars);
        const double den = eval_node(*n.args[1], values, vars);
        if (den == 0.0) domain_fail("division by zero", n, vars);
        r = num / den;
        break;
    }
    case Kind::Pow: {
        const double base = eval_node(*n.args[0], values, vars);
        if (base == 0.0 && n.exponent < 0) domain_fail("division by zero", n, vars);
        r = std::pow(base, static_cast<double>(n.exponent));
        break;
    }
    case Kind::Call: {
        const double a = eval_node(*n.args[0], values, vars);
        switch (n.func) {
        case Func::Sin: r = std::sin(a); break;
        case Func::Cos: r = std::cos(a); break;
        case Func::Exp: r = std::exp(a); break;
        case Func::Log:
            if (!(a > 0.0)) domain_fail("log of non-positive value", n, vars);
            r = std::log(a);
            break;
        case Func::Sqrt:
            if (a < 0.0) domain_fail("sqrt of negative value", n, vars);
            r = std::sqrt(a);
            break;
        case Func::Abs: r = std::fabs(a); break;
        case Func::Atan2: r = std::atan2(a, eval_node(*n.args[1], values, vars)); break;
        }
        break;
    }
    }
    if (!std::isfinite(r)) domain_fail("non-finite result", n, vars);
    return r;
}

const char* binary_symbol(Kind k) {
    switch (k) {
    case Kind::Add: return " + ";
    case Kind::Sub: return " - ";
    case Kind::Mul: return " * ";
    case Kind::Div: return " / ";
    default: return " ? ";
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string to_string(const Node& n, const std::vector<std::string>& vars) {
    switch (n.kind) {
    case Kind::Number:
        if (std::signbit(n.value)) return "(-" + format_double(-n.value) + ")";
        return format_double(n.value);
    case Kind::Variable:
        return vars.at(static_cast<std::size_t>(n.var));
    case Kind::Pi:
        return "pi";
    case Kind::Neg:
        return "(-" + to_string(*n.args[0], vars) + ")";
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div:
        return "(" + to_string(*n.args[0], vars) + binary_symbol(n.kind) +
               to_string(*n.args[1], vars) + ")";
    case Kind::Pow:
        return "(" + to_string(*n.args[0], vars) + "^" + std::to_string(n.exponent) + ")";
    case Kind::Call: {
        std::string s(func_name(n.func));
        s += "(";
        for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i > 0) s += ", ";
            s += to_string(*n.args[i], vars);
        }
        return s + ")";
    }
    }
    return "?";
}

double Expr::eval(std::span<const double> values) const {
    if (!root_) throw ValidationError("evaluating an empty expression");
    if (values.size() < variables_.size())
        throw ValidationError("expression needs " + std::to_string(variables_.size()) +
                              " variable values, got " + std::to_string(values.size()));
    return eval_node(*root_, values, variables_);
}

std::string Expr::to_string() const {
    return root_ ? expr::to_string(*root_, variables_) : std::string();
}

Expr parse(std::string_view src, std::vector<std::string> variables) {
    Parser p(src, variables);
    NodePtr root = p.parse_all();
    return Expr(std::move(root), std::move(variables));
}

double parse_constant(std::string_view src) {
    return parse(src, {}).eval({});
}

}  // namespace locons::expr
