#include "itosynth/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "itosynth/errors.hpp"

namespace itosynth {

namespace {

using Op = Expression::Node::Op;

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    int parse_all(std::vector<Expression::Node>& nodes) {
        nodes_ = &nodes;
        const int root = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ModelError("expression '" + s_ + "': " + what + " at offset " + std::to_string(pos_));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    int add(Op op, int lhs = -1, int rhs = -1, double value = 0.0) {
        nodes_->push_back({op, value, lhs, rhs});
        return static_cast<int>(nodes_->size()) - 1;
    }

    int expr() {
        int lhs = term();
        for (;;) {
            if (accept('+')) lhs = add(Op::Add, lhs, term());
            else if (accept('-')) lhs = add(Op::Sub, lhs, term());
            else return lhs;
        }
    }

    int term() {
        int lhs = unary();
        for (;;) {
            if (accept('*')) lhs = add(Op::Mul, lhs, unary());
            else if (accept('/')) lhs = add(Op::Div, lhs, unary());
            else return lhs;
        }
    }

    int unary() {
        if (accept('-')) return add(Op::Neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    int power() {
        const int base = primary();
        if (accept('^')) return add(Op::Pow, base, unary());
        return base;
    }

    int primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (accept('(')) {
            const int inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += static_cast<std::size_t>(end - begin);
            return add(Op::Const, -1, -1, v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t end = pos_;
            while (end < s_.size() && std::isalpha(static_cast<unsigned char>(s_[end]))) ++end;
            const std::string name = s_.substr(pos_, end - pos_);
            pos_ = end;
            if (name == "x") return add(Op::Var);
            if (name == "e") return add(Op::Const, -1, -1, std::numbers::e);
            if (name == "pi") return add(Op::Const, -1, -1, std::numbers::pi);
            Op op;
            if (name == "log") op = Op::Log;
            else if (name == "exp") op = Op::Exp;
            else if (name == "sqrt") op = Op::Sqrt;
            else fail("unknown identifier '" + name + "'");
            if (!accept('(')) fail("expected '(' after " + name);
            const int arg = expr();
            if (!accept(')')) fail("expected ')'");
            return add(op, arg);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    std::vector<Expression::Node>* nodes_ = nullptr;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
    std::vector<Node> nodes;
    Parser p(text);
    const int root = p.parse_all(nodes);
    return Expression(text, std::move(nodes), root);
}

double Expression::operator()(double x) const { return eval(root_, x); }

double Expression::eval(int id, double x) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var: return x;
    case Op::Add: return eval(n.lhs, x) + eval(n.rhs, x);
    case Op::Sub: return eval(n.lhs, x) - eval(n.rhs, x);
    case Op::Mul: return eval(n.lhs, x) * eval(n.rhs, x);
    case Op::Div: return eval(n.lhs, x) / eval(n.rhs, x);
    case Op::Pow: return std::pow(eval(n.lhs, x), eval(n.rhs, x));
    case Op::Neg: return -eval(n.lhs, x);
    case Op::Log: return std::log(eval(n.lhs, x));
    case Op::Exp: return std::exp(eval(n.lhs, x));
    case Op::Sqrt: return std::sqrt(eval(n.lhs, x));
    }
    return 0.0;
}

}  // namespace itosynth
