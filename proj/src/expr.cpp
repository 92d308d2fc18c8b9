#include "advecta/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <utility>

#include "advecta/errors.hpp"
#include "advecta/numfmt.hpp"

namespace advecta {

namespace {

enum class Fn1 { Sin, Cos, Tan, Exp, Log, Sqrt, Abs };
enum class Fn2 { Min, Max };

const char* fn1_name(Fn1 f) {
    switch (f) {
        case Fn1::Sin: return "sin";
        case Fn1::Cos: return "cos";
        case Fn1::Tan: return "tan";
        case Fn1::Exp: return "exp";
        case Fn1::Log: return "log";
        case Fn1::Sqrt: return "sqrt";
        case Fn1::Abs: return "abs";
    }
    return "?";
}

}  // namespace

struct Expression::Node {
    enum class Kind { Number, Time, Binary, Negate, Call1, Call2 };

    Kind kind;
    double value = 0.0;  // Number
    char op = 0;         // Binary: + - * / ^
    Fn1 fn1 = Fn1::Sin;
    Fn2 fn2 = Fn2::Min;
    std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Number;
    n->value = v;
    return n;
}

NodePtr make_time() {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Time;
    return n;
}

NodePtr make_binary(char op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Binary;
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr make_negate(NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Negate;
    n->a = std::move(a);
    return n;
}

NodePtr make_call1(Fn1 f, NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Call1;
    n->fn1 = f;
    n->a = std::move(a);
    return n;
}

NodePtr make_call2(Fn2 f, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Call2;
    n->fn2 = f;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

[[noreturn]] void syntax_error(std::size_t offset, const std::string& what) {
    fail(ErrorKind::SyntaxError, what + " at offset " + std::to_string(offset));
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr run() {
        NodePtr root = parse_sum();
        skip_space();
        if (pos_ != text_.size()) syntax_error(pos_, "unexpected trailing input");
        return root;
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek_char(char c) {
        skip_space();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept_char(char c) {
        if (peek_char(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect_char(char c, const char* context) {
        if (!accept_char(c)) {
            syntax_error(pos_, std::string("expected '") + c + "' " + context);
        }
    }

    NodePtr parse_sum() {
        NodePtr lhs = parse_product();
        for (;;) {
            if (accept_char('+')) {
                lhs = make_binary('+', lhs, parse_product());
            } else if (accept_char('-')) {
                lhs = make_binary('-', lhs, parse_product());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_product() {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (accept_char('*')) {
                lhs = make_binary('*', lhs, parse_unary());
            } else if (accept_char('/')) {
                lhs = make_binary('/', lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    // Unary minus binds looser than ^, so -t^2 is -(t^2).
    NodePtr parse_unary() {
        if (accept_char('-')) return make_negate(parse_unary());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (accept_char('^')) return make_binary('^', base, parse_unary());
        return base;
    }

    NodePtr parse_primary() {
        skip_space();
        if (pos_ >= text_.size()) syntax_error(pos_, "unexpected end of input");
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        if (c == '(') {
            ++pos_;
            NodePtr inner = parse_sum();
            expect_char(')', "to close parenthesis");
            return inner;
        }
        syntax_error(pos_, std::string("unexpected character '") + c + "'");
    }

    NodePtr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_ + 1;
            if (mark < text_.size() && (text_[mark] == '+' || text_[mark] == '-')) ++mark;
            if (mark < text_.size() && std::isdigit(static_cast<unsigned char>(text_[mark]))) {
                pos_ = mark;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            }
        }
        const std::string token(text_.substr(start, pos_ - start));
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (ec != std::errc{} || ptr != token.data() + token.size()) {
            syntax_error(start, "malformed number '" + token + "'");
        }
        return make_number(value);
    }

    NodePtr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = text_.substr(start, pos_ - start);

        if (name == "t") return make_time();
        if (name == "pi") return make_number(std::numbers::pi);
        if (name == "e") return make_number(std::numbers::e);

        struct { std::string_view name; Fn1 fn; } const unary_fns[] = {
            {"sin", Fn1::Sin}, {"cos", Fn1::Cos}, {"tan", Fn1::Tan},  {"exp", Fn1::Exp},
            {"log", Fn1::Log}, {"sqrt", Fn1::Sqrt}, {"abs", Fn1::Abs},
        };
        for (const auto& f : unary_fns) {
            if (name == f.name) {
                expect_char('(', "after function name");
                NodePtr arg = parse_sum();
                if (peek_char(',')) syntax_error(pos_, std::string(name) + " takes one argument");
                expect_char(')', "to close call");
                return make_call1(f.fn, arg);
            }
        }
        if (name == "min" || name == "max") {
            const Fn2 fn = (name == "min") ? Fn2::Min : Fn2::Max;
            expect_char('(', "after function name");
            NodePtr a = parse_sum();
            if (!accept_char(',')) {
                syntax_error(pos_, std::string(name) + " takes two arguments");
            }
            NodePtr b = parse_sum();
            expect_char(')', "to close call");
            return make_call2(fn, a, b);
        }
        syntax_error(start, "unknown identifier '" + std::string(name) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

double check_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        fail(ErrorKind::EvalError, std::string(what) + " produced a non-finite value");
    }
    return v;
}

double eval_node(const Node& node, double t) {
    switch (node.kind) {
        case Node::Kind::Number:
            return node.value;
        case Node::Kind::Time:
            return t;
        case Node::Kind::Negate:
            return -eval_node(*node.a, t);
        case Node::Kind::Binary: {
            const double a = eval_node(*node.a, t);
            const double b = eval_node(*node.b, t);
            switch (node.op) {
                case '+': return check_finite(a + b, "addition");
                case '-': return check_finite(a - b, "subtraction");
                case '*': return check_finite(a * b, "multiplication");
                case '/':
                    if (b == 0.0) fail(ErrorKind::EvalError, "division by zero");
                    return check_finite(a / b, "division");
                case '^': return check_finite(std::pow(a, b), "power");
            }
            fail(ErrorKind::EvalError, "unknown operator");
        }
        case Node::Kind::Call1: {
            const double a = eval_node(*node.a, t);
            switch (node.fn1) {
                case Fn1::Sin: return std::sin(a);
                case Fn1::Cos: return std::cos(a);
                case Fn1::Tan: return check_finite(std::tan(a), "tan");
                case Fn1::Exp: return check_finite(std::exp(a), "exp");
                case Fn1::Log:
                    if (a <= 0.0) fail(ErrorKind::EvalError, "log of nonpositive value");
                    return std::log(a);
                case Fn1::Sqrt:
                    if (a < 0.0) fail(ErrorKind::EvalError, "sqrt of negative value");
                    return std::sqrt(a);
                case Fn1::Abs: return std::abs(a);
            }
            fail(ErrorKind::EvalError, "unknown function");
        }
        case Node::Kind::Call2: {
            const double a = eval_node(*node.a, t);
            const double b = eval_node(*node.b, t);
            return node.fn2 == Fn2::Min ? std::min(a, b) : std::max(a, b);
        }
    }
    fail(ErrorKind::EvalError, "corrupt expression node");
}

void print_node(const Node& node, std::string& out) {
    switch (node.kind) {
        case Node::Kind::Number: {
            // A leading '-' must be grouped or it would rebind under '^'.
            const std::string s = format_double(node.value);
            if (!s.empty() && s[0] == '-') {
                out += '(';
                out += s;
                out += ')';
            } else {
                out += s;
            }
            return;
        }
        case Node::Kind::Time:
            out += 't';
            return;
        case Node::Kind::Negate:
            out += "(-";
            print_node(*node.a, out);
            out += ')';
            return;
        case Node::Kind::Binary:
            out += '(';
            print_node(*node.a, out);
            out += node.op;
            print_node(*node.b, out);
            out += ')';
            return;
        case Node::Kind::Call1:
            out += fn1_name(node.fn1);
            out += '(';
            print_node(*node.a, out);
            out += ')';
            return;
        case Node::Kind::Call2:
            out += node.fn2 == Fn2::Min ? "min(" : "max(";
            print_node(*node.a, out);
            out += ',';
            print_node(*node.b, out);
            out += ')';
            return;
    }
}

}  // namespace

Expression Expression::parse(std::string_view text) {
    return Expression(Parser(text).run());
}

Expression Expression::number(double v) {
    return Expression(make_number(v));
}

double Expression::eval(double t) const {
    const double v = eval_node(*root_, t);
    if (std::isnan(v)) fail(ErrorKind::EvalError, "expression evaluated to NaN");
    return v;
}

std::string Expression::str() const {
    std::string out;
    print_node(*root_, out);
    return out;
}

}  // namespace advecta
