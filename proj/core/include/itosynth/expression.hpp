#pragma once

#include <memory>
#include <string>
#include <vector>

namespace itosynth {

/// Compiled real function of one variable `x`.
///
/// Grammar (version 1):
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?          right associative
///   primary := number | 'x' | 'e' | 'pi' | func '(' expr ')' | '(' expr ')'
///   func    := 'log' | 'exp' | 'sqrt'
/// Numbers use the usual decimal/exponent notation.
class Expression {
public:
    static Expression parse(const std::string& text);

    double operator()(double x) const;
    const std::string& text() const noexcept { return text_; }

    struct Node {
        enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Log, Exp, Sqrt } op;
        double value = 0.0;
        int lhs = -1;
        int rhs = -1;
    };

private:
    Expression(std::string text, std::vector<Node> nodes, int root)
        : text_(std::move(text)), nodes_(std::move(nodes)), root_(root) {}
    double eval(int id, double x) const;

    std::string text_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

}  // namespace itosynth
