#include "hvi/expr.hpp"

#include "hvi/errors.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

namespace hvi::coeff {

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make(Expr::Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    return std::make_shared<const Expr::Node>(Expr::Node{op, 0.0, std::move(lhs), std::move(rhs)});
}

struct FunctionName {
    std::string_view name;
    Expr::Op op;
};

constexpr std::array<FunctionName, 5> functions{{
    {"sin", Expr::Op::sin},
    {"cos", Expr::Op::cos},
    {"exp", Expr::Op::exp},
    {"sqrt", Expr::Op::sqrt},
    {"abs", Expr::Op::abs},
}};

std::string_view function_name(Expr::Op op) {
    for (const auto& f : functions) {
        if (f.op == op) return f.name;
    }
    return "?";
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse() {
        skip_space();
        if (pos_ == text_.size()) throw ParseError("empty expression", 1);
        NodePtr root = expr();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_ + 1); }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ == text_.size()) fail(std::string("expected '") + c + "' but reached end of input");
            fail(std::string("expected '") + c + "'");
        }
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = make(Expr::Op::add, lhs, term());
            } else if (accept('-')) {
                lhs = make(Expr::Op::sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = make(Expr::Op::mul, lhs, unary());
            } else if (accept('/')) {
                lhs = make(Expr::Op::div, lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Expr::Op::negate, unary());
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Expr::Op::pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip_space();
        if (pos_ == text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        if (accept('(')) {
            NodePtr inner = expr();
            expect(')');
            return inner;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        };
        digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            digits();
        }
        // An exponent is only taken when digits follow, so "2*e" keeps the constant e.
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
            if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
                pos_ = look;
                digits();
            }
        }
        double value = 0.0;
        const auto [end, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (ec != std::errc{} || end != text_.data() + pos_) {
            pos_ = start;
            fail("malformed number");
        }
        auto node = std::make_shared<Expr::Node>(Expr::Node{Expr::Op::number, value, nullptr, nullptr});
        return node;
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name == "x") return make(Expr::Op::var_x);
        if (name == "y") return make(Expr::Op::var_y);
        if (name == "pi") return make(Expr::Op::pi);
        if (name == "e") return make(Expr::Op::e);
        for (const auto& f : functions) {
            if (f.name == name) {
                expect('(');
                NodePtr arg = expr();
                expect(')');
                return make(f.op, arg);
            }
        }
        throw UnknownIdentifier(std::string(name), start + 1);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

// Binding strength used by the printer: atoms and calls bind tightest. A
// negative literal prints with a leading '-' and so binds like a negation.
int precedence(const Expr::Node& n) {
    if (n.op == Expr::Op::number && std::signbit(n.value)) return 3;
    switch (n.op) {
    case Expr::Op::add:
    case Expr::Op::sub: return 1;
    case Expr::Op::mul:
    case Expr::Op::div: return 2;
    case Expr::Op::negate: return 3;
    case Expr::Op::pow: return 4;
    default: return 5;
    }
}

void print(const Expr::Node& n, std::string& out);

void print_wrapped(const Expr::Node& n, bool parens, std::string& out) {
    if (parens) out += '(';
    print(n, out);
    if (parens) out += ')';
}

void print(const Expr::Node& n, std::string& out) {
    switch (n.op) {
    case Expr::Op::number: {
        char buf[32];
        const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, n.value);
        out.append(buf, end);
        return;
    }
    case Expr::Op::var_x: out += 'x'; return;
    case Expr::Op::var_y: out += 'y'; return;
    case Expr::Op::pi: out += "pi"; return;
    case Expr::Op::e: out += 'e'; return;
    case Expr::Op::negate:
        out += '-';
        print_wrapped(*n.lhs, precedence(*n.lhs) < 3, out);
        return;
    case Expr::Op::pow:
        print_wrapped(*n.lhs, precedence(*n.lhs) <= 4, out);
        out += '^';
        print_wrapped(*n.rhs, precedence(*n.rhs) < 3, out);
        return;
    case Expr::Op::add:
    case Expr::Op::sub:
    case Expr::Op::mul:
    case Expr::Op::div: {
        const int p = precedence(n);
        static constexpr char symbols[] = {'+', '-', '*', '/'};
        const char sym = symbols[static_cast<int>(n.op) - static_cast<int>(Expr::Op::add)];
        print_wrapped(*n.lhs, precedence(*n.lhs) < p, out);
        out += sym;
        print_wrapped(*n.rhs, precedence(*n.rhs) <= p, out);
        return;
    }
    default:
        out += function_name(n.op);
        out += '(';
        print(*n.lhs, out);
        out += ')';
        return;
    }
}

std::string render(const Expr::Node& n) {
    std::string s;
    print(n, s);
    return s;
}

double eval_node(const Expr::Node& n, double x, double y) {
    double v = 0.0;
    switch (n.op) {
    case Expr::Op::number: return n.value;
    case Expr::Op::var_x: v = x; break;
    case Expr::Op::var_y: v = y; break;
    case Expr::Op::pi: return std::numbers::pi;
    case Expr::Op::e: return std::numbers::e;
    case Expr::Op::negate: return -eval_node(*n.lhs, x, y);
    case Expr::Op::add: v = eval_node(*n.lhs, x, y) + eval_node(*n.rhs, x, y); break;
    case Expr::Op::sub: v = eval_node(*n.lhs, x, y) - eval_node(*n.rhs, x, y); break;
    case Expr::Op::mul: v = eval_node(*n.lhs, x, y) * eval_node(*n.rhs, x, y); break;
    case Expr::Op::div: v = eval_node(*n.lhs, x, y) / eval_node(*n.rhs, x, y); break;
    case Expr::Op::pow: v = std::pow(eval_node(*n.lhs, x, y), eval_node(*n.rhs, x, y)); break;
    case Expr::Op::sin: v = std::sin(eval_node(*n.lhs, x, y)); break;
    case Expr::Op::cos: v = std::cos(eval_node(*n.lhs, x, y)); break;
    case Expr::Op::exp: v = std::exp(eval_node(*n.lhs, x, y)); break;
    case Expr::Op::sqrt: v = std::sqrt(eval_node(*n.lhs, x, y)); break;
    case Expr::Op::abs: v = std::abs(eval_node(*n.lhs, x, y)); break;
    }
    if (!std::isfinite(v)) throw NumericDomainError(render(n));
    return v;
}

} // namespace

double Expr::eval(double x, double y) const {
    if (!root_) throw InvalidArgument("evaluating an empty expression");
    return eval_node(*root_, x, y);
}

std::string Expr::to_string() const { return root_ ? render(*root_) : std::string{}; }

Expr Expr::constant(double value) {
    return Expr(std::make_shared<const Node>(Node{Op::number, value, nullptr, nullptr}));
}

Expr parse_expr(std::string_view text) { return Expr(Parser(text).parse()); }

} // namespace hvi::coeff
