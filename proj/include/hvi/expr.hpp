#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace hvi::coeff {

/// Immutable arithmetic expression in the variables x and y.
///
/// Grammar (whitespace is ignored):
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?
///   primary := number | 'x' | 'y' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
///   func    := 'sin' | 'cos' | 'exp' | 'sqrt' | 'abs'
///
/// So '^' binds tighter than unary minus and associates to the right; the
/// other binary operators associate to the left. Copies share the tree.
class Expr {
public:
    enum class Op { number, var_x, var_y, pi, e, negate, add, sub, mul, div, pow, sin, cos, exp, sqrt, abs };

    struct Node {
        Op op;
        double value = 0.0;
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
    };

    Expr() = default;
    explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

    /// Throws NumericDomainError naming the first subexpression that is not finite.
    [[nodiscard]] double eval(double x, double y) const;

    /// Canonical text with the minimum parentheses; parses back to the same tree.
    [[nodiscard]] std::string to_string() const;

    [[nodiscard]] bool empty() const noexcept { return root_ == nullptr; }
    [[nodiscard]] const Node* root() const noexcept { return root_.get(); }

    static Expr constant(double value);

private:
    std::shared_ptr<const Node> root_;
};

/// Throws ParseError (with a 1-based column) or UnknownIdentifier.
Expr parse_expr(std::string_view text);

inline double eval_expr(const Expr& expr, double x, double y) { return expr.eval(x, y); }

} // namespace hvi::coeff
