#pragma once

// Right-hand-side expressions f(x, xd) where `x` is the current state and
// `xd` the delayed state x(t - tau). Grammar (docs/expression_grammar.md):
//
//   expr    = term { ("+" | "-") term } ;
//   term    = unary { ("*" | "/") unary } ;
//   unary   = "-" unary | power ;
//   power   = primary [ "^" integer ] ;
//   primary = number | "x" | "xd" | "(" expr ")" ;
//
// Exponents are positive integer literals, evaluated by repeated
// multiplication from the left.

#include <memory>
#include <string>
#include <string_view>
#include <variant>

namespace fdde::expr {

enum class Variable { Current, Delayed };
enum class BinaryOp { Add, Sub, Mul, Div };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Number {
    double value;
};
struct Var {
    Variable which;
};
struct Negate {
    NodePtr operand;
};
struct Binary {
    BinaryOp op;
    NodePtr lhs;
    NodePtr rhs;
};
struct Power {
    NodePtr base;
    unsigned exponent;
};

struct Node {
    std::variant<Number, Var, Negate, Binary, Power> kind;
};

/// Structural equality; numbers compare by value.
bool operator==(const Node& lhs, const Node& rhs);

/// Immutable parsed expression. Cheap to copy; safe to share across threads.
class Expression {
public:
    /// Throws SyntaxError or UnknownIdentifier.
    static Expression parse(std::string_view text);

    explicit Expression(NodePtr root);

    double evaluate(double x, double xd) const;

    /// Minimal-parenthesis rendering that parses back to the same tree.
    std::string to_string() const;

    const Node& root() const noexcept { return *root_; }

    friend bool operator==(const Expression& lhs, const Expression& rhs) { return *lhs.root_ == *rhs.root_; }

private:
    NodePtr root_;
};

} // namespace fdde::expr
