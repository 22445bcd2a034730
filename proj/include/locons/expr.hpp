#pragma once

// Scalar expression language used for field components and parametric paths.
//
//   expr    := term   { ('+' | '-') term }
//   term    := unary  { ('*' | '/') unary }
//   unary   := '-' unary | power
//   power   := primary [ '^' exponent ]
//   exponent:= ['-'] INTEGER [ '^' exponent ]        (folded to one integer)
//   primary := NUMBER | IDENT | 'pi' | FUNC '(' args ')' | '(' expr ')'
//
// FUNC is one of sin cos exp log sqrt abs (one argument) or atan2 (two).

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace locons::expr {

enum class Kind { Number, Variable, Pi, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class Func { Sin, Cos, Exp, Log, Sqrt, Abs, Atan2 };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// Immutable AST node. Children are shared, so subtrees may be reused
/// across expressions and evaluated concurrently.
struct Node {
    Kind kind = Kind::Number;
    double value = 0.0;    // Number
    int var = 0;           // Variable: index into the variable list
    int exponent = 0;      // Pow
    Func func = Func::Sin; // Call
    std::vector<NodePtr> args;
};

class Expr {
public:
    Expr() = default;
    Expr(NodePtr root, std::vector<std::string> variables)
        : root_(std::move(root)), variables_(std::move(variables)) {}

    /// Evaluates with one value per declared variable. Throws DomainError
    /// on division by zero, log/sqrt outside their domain, or any non-finite
    /// intermediate.
    double eval(std::span<const double> values) const;

    /// Shorthand for the usual two-variable (x, y) expressions.
    double operator()(double x, double y) const {
        const double v[2] = {x, y};
        return eval(v);
    }

    /// Fully parenthesized source text; parsing it back yields an AST that
    /// evaluates bit-identically.
    std::string to_string() const;

    const NodePtr& root() const noexcept { return root_; }
    const std::vector<std::string>& variables() const noexcept { return variables_; }
    bool empty() const noexcept { return root_ == nullptr; }

private:
    NodePtr root_;
    std::vector<std::string> variables_;
};

/// Parses src over the given variable names. Throws ParseError carrying the
/// byte offset, formatted as "parse error at byte N: expected ...".
Expr parse(std::string_view src, std::vector<std::string> variables = {"x", "y"});

/// Parses an expression without variables and evaluates it.
double parse_constant(std::string_view src);

std::string to_string(const Node& node, const std::vector<std::string>& variables);

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

}  // namespace locons::expr
