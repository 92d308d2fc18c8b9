#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace advecta {

/// Immutable scalar expression of the time variable t.
///
/// Grammar: literals, t, pi, e, binary + - * / ^, unary -, sin cos tan exp
/// log sqrt abs (unary) and min max (binary). Precedence ^ > unary - > * / >
/// + -, with ^ right-associative and the other binaries left-associative.
class Expression {
public:
    /// Parse from text. Throws SyntaxError carrying the byte offset of the
    /// first offending token.
    static Expression parse(std::string_view text);

    /// Constant expression holding the exact double v.
    static Expression number(double v);

    /// Evaluate at time t. Throws EvalError on any domain violation
    /// (log of a nonpositive value, sqrt of a negative, division by zero)
    /// or whenever a subterm fails to be finite; never returns NaN.
    double eval(double t) const;

    /// Canonical fully-parenthesized form; parse(str()) evaluates identically.
    std::string str() const;

    struct Node;

private:
    explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
    std::shared_ptr<const Node> root_;
};

}  // namespace advecta
