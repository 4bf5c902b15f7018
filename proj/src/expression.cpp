#include "cdl/expression.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <variant>

namespace cdl {

struct Expression::Node {
    Kind kind;
    double number = 0.0;
    std::string name;
    Function fn = Function::Exp;
    std::optional<Expression> lhs;
    std::optional<Expression> rhs;
};

Expression Expression::number(double value) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Number;
    n->number = value;
    return Expression(std::move(n));
}

Expression Expression::variable(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Variable;
    n->name = std::move(name);
    return Expression(std::move(n));
}

Expression Expression::binary(Kind op, Expression lhs, Expression rhs) {
    if (op != Kind::Add && op != Kind::Sub && op != Kind::Mul && op != Kind::Div &&
        op != Kind::Pow) {
        throw std::invalid_argument("Expression::binary needs an arithmetic operator");
    }
    auto n = std::make_shared<Node>();
    n->kind = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return Expression(std::move(n));
}

Expression Expression::negate(Expression operand) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Neg;
    n->lhs = std::move(operand);
    return Expression(std::move(n));
}

Expression Expression::call(Function fn, Expression argument) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Call;
    n->fn = fn;
    n->lhs = std::move(argument);
    return Expression(std::move(n));
}

Expression::Kind Expression::kind() const { return node_->kind; }
double Expression::value() const { return node_->number; }
const std::string& Expression::name() const { return node_->name; }
Expression::Function Expression::function() const { return node_->fn; }
const Expression& Expression::lhs() const { return *node_->lhs; }
const Expression& Expression::rhs() const { return *node_->rhs; }

bool operator==(const Expression& a, const Expression& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case Expression::Kind::Number: return a.value() == b.value();
        case Expression::Kind::Variable: return a.name() == b.name();
        case Expression::Kind::Neg: return a.lhs() == b.lhs();
        case Expression::Kind::Call: return a.function() == b.function() && a.lhs() == b.lhs();
        default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    }
}

std::set<std::string> Expression::free_variables() const {
    std::set<std::string> out;
    std::vector<const Expression*> stack{this};
    while (!stack.empty()) {
        const Expression* e = stack.back();
        stack.pop_back();
        switch (e->kind()) {
            case Kind::Number: break;
            case Kind::Variable: out.insert(e->name()); break;
            case Kind::Neg:
            case Kind::Call: stack.push_back(&e->lhs()); break;
            default:
                stack.push_back(&e->lhs());
                stack.push_back(&e->rhs());
        }
    }
    return out;
}

std::string_view function_name(Expression::Function fn) {
    switch (fn) {
        case Expression::Function::Exp: return "exp";
        case Expression::Function::Log: return "log";
        case Expression::Function::Sin: return "sin";
    }
    return "?";
}

namespace {

// ---------------------------------------------------------------- lexer

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Pow, LParen, RParen, End };

struct Token {
    Tok type;
    std::size_t offset;
    std::string_view text;
    double number = 0.0;
};

std::string_view describe(const Token& t) {
    return t.type == Tok::End ? std::string_view("end of input") : t.text;
}

std::vector<Token> lex(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto is_ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
    auto is_ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
    while (i < s.size()) {
        const char c = s[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (is_digit(c) || (c == '.' && i + 1 < s.size() && is_digit(s[i + 1]))) {
            while (i < s.size() && is_digit(s[i])) ++i;
            if (i < s.size() && s[i] == '.') {
                ++i;
                while (i < s.size() && is_digit(s[i])) ++i;
            }
            if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
                if (j < s.size() && is_digit(s[j])) {
                    i = j;
                    while (i < s.size() && is_digit(s[i])) ++i;
                }
            }
            const auto text = s.substr(start, i - start);
            double v = 0.0;
            const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
            if (res.ec != std::errc{} || !std::isfinite(v)) {
                throw ParseError(start, "numeric literal '" + std::string(text) + "' is out of range");
            }
            out.push_back({Tok::Number, start, text, v});
            continue;
        }
        if (is_ident_start(c)) {
            while (i < s.size() && is_ident_char(s[i])) ++i;
            out.push_back({Tok::Ident, start, s.substr(start, i - start)});
            continue;
        }
        switch (c) {
            case '+': out.push_back({Tok::Plus, start, s.substr(start, 1)}); ++i; continue;
            case '-': out.push_back({Tok::Minus, start, s.substr(start, 1)}); ++i; continue;
            case '/': out.push_back({Tok::Slash, start, s.substr(start, 1)}); ++i; continue;
            case '^': out.push_back({Tok::Pow, start, s.substr(start, 1)}); ++i; continue;
            case '(': out.push_back({Tok::LParen, start, s.substr(start, 1)}); ++i; continue;
            case ')': out.push_back({Tok::RParen, start, s.substr(start, 1)}); ++i; continue;
            case '*':
                if (i + 1 < s.size() && s[i + 1] == '*') {
                    out.push_back({Tok::Pow, start, s.substr(start, 2)});
                    i += 2;
                } else {
                    out.push_back({Tok::Star, start, s.substr(start, 1)});
                    ++i;
                }
                continue;
            default:
                throw ParseError(start, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({Tok::End, s.size(), {}});
    return out;
}

// --------------------------------------------------------------- parser

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(lex(text)) {}

    Expression parse() {
        Expression e = parse_sum();
        if (peek().type != Tok::End) {
            throw ParseError(peek().offset, "unexpected '" + std::string(describe(peek())) + "'");
        }
        return e;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_++]; }

    Expression parse_sum() {
        Expression lhs = parse_product();
        while (peek().type == Tok::Plus || peek().type == Tok::Minus) {
            const auto op = next().type == Tok::Plus ? Expression::Kind::Add : Expression::Kind::Sub;
            lhs = Expression::binary(op, std::move(lhs), parse_product());
        }
        return lhs;
    }

    Expression parse_product() {
        Expression lhs = parse_unary();
        while (peek().type == Tok::Star || peek().type == Tok::Slash) {
            const bool div = next().type == Tok::Slash;
            const std::size_t rhs_offset = peek().offset;
            Expression rhs = parse_unary();
            if (div && rhs.kind() == Expression::Kind::Number && rhs.value() == 0.0) {
                throw ParseError(rhs_offset, "division by literal zero");
            }
            lhs = Expression::binary(div ? Expression::Kind::Div : Expression::Kind::Mul,
                                     std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    Expression parse_unary() {
        if (peek().type == Tok::Minus) {
            next();
            return Expression::negate(parse_unary());
        }
        return parse_power();
    }

    Expression parse_power() {
        Expression base = parse_atom();
        if (peek().type == Tok::Pow) {
            next();
            return Expression::binary(Expression::Kind::Pow, std::move(base), parse_unary());
        }
        return base;
    }

    Expression parse_atom() {
        const Token& t = next();
        switch (t.type) {
            case Tok::Number: return Expression::number(t.number);
            case Tok::Ident: {
                if (peek().type != Tok::LParen) return Expression::variable(std::string(t.text));
                Expression::Function fn;
                if (t.text == "exp") fn = Expression::Function::Exp;
                else if (t.text == "log") fn = Expression::Function::Log;
                else if (t.text == "sin") fn = Expression::Function::Sin;
                else throw ParseError(t.offset, "unknown function '" + std::string(t.text) + "'");
                next();
                Expression arg = parse_sum();
                expect_close();
                return Expression::call(fn, std::move(arg));
            }
            case Tok::LParen: {
                Expression inner = parse_sum();
                expect_close();
                return inner;
            }
            default:
                throw ParseError(t.offset, "expected a number, identifier or '(' but found '" +
                                               std::string(describe(t)) + "'");
        }
    }

    void expect_close() {
        if (peek().type != Tok::RParen) {
            throw ParseError(peek().offset,
                             "expected ')' but found '" + std::string(describe(peek())) + "'");
        }
        next();
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

// -------------------------------------------------------------- printer

int precedence(const Expression& e) {
    switch (e.kind()) {
        case Expression::Kind::Add:
        case Expression::Kind::Sub: return 1;
        case Expression::Kind::Mul:
        case Expression::Kind::Div: return 2;
        case Expression::Kind::Neg: return 3;
        case Expression::Kind::Pow: return 4;
        case Expression::Kind::Number: return e.value() < 0 ? 3 : 5;
        default: return 5;
    }
}

std::string format_number(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void print(const Expression& e, std::string& out);

void print_wrapped(const Expression& e, bool wrap, std::string& out) {
    if (wrap) out.push_back('(');
    print(e, out);
    if (wrap) out.push_back(')');
}

void print(const Expression& e, std::string& out) {
    using K = Expression::Kind;
    switch (e.kind()) {
        case K::Number: out += format_number(e.value()); return;
        case K::Variable: out += e.name(); return;
        case K::Call:
            out += function_name(e.function());
            out.push_back('(');
            print(e.lhs(), out);
            out.push_back(')');
            return;
        case K::Neg:
            out.push_back('-');
            print_wrapped(e.lhs(), precedence(e.lhs()) <= 3, out);
            return;
        case K::Pow:
            print_wrapped(e.lhs(), precedence(e.lhs()) <= 4, out);
            out.push_back('^');
            print_wrapped(e.rhs(), precedence(e.rhs()) < 3, out);
            return;
        default: {
            const int p = precedence(e);
            const char* op = e.kind() == K::Add ? " + " : e.kind() == K::Sub ? " - "
                           : e.kind() == K::Mul ? " * " : " / ";
            print_wrapped(e.lhs(), precedence(e.lhs()) < p, out);
            out += op;
            print_wrapped(e.rhs(), precedence(e.rhs()) <= p, out);
        }
    }
}

double apply_function(Expression::Function fn, double x) {
    switch (fn) {
        case Expression::Function::Exp: return std::exp(x);
        case Expression::Function::Log:
            if (!(x > 0.0)) {
                throw EvaluationError(EvaluationError::Reason::Domain,
                                      "log of non-positive argument " + format_number(x));
            }
            return std::log(x);
        case Expression::Function::Sin: return std::sin(x);
    }
    return 0.0;
}

double apply_binary(Expression::Kind k, double a, double b) {
    switch (k) {
        case Expression::Kind::Add: return a + b;
        case Expression::Kind::Sub: return a - b;
        case Expression::Kind::Mul: return a * b;
        case Expression::Kind::Div:
            if (b == 0.0) throw EvaluationError(EvaluationError::Reason::Domain, "division by zero");
            return a / b;
        case Expression::Kind::Pow: {
            const double r = std::pow(a, b);
            if (std::isnan(r) && !std::isnan(a) && !std::isnan(b)) {
                throw EvaluationError(EvaluationError::Reason::Domain,
                                      "power " + format_number(a) + "^" + format_number(b) +
                                          " is not real");
            }
            return r;
        }
        default: return 0.0;
    }
}

}  // namespace

Expression parse_expression(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const Expression& e) {
    std::string out;
    print(e, out);
    return out;
}

double evaluate(const Expression& e, const Environment& env) {
    using K = Expression::Kind;
    switch (e.kind()) {
        case K::Number: return e.value();
        case K::Variable: {
            auto it = env.find(e.name());
            if (it == env.end()) {
                throw EvaluationError(EvaluationError::Reason::UnboundIdentifier,
                                      "unbound identifier '" + e.name() + "'");
            }
            return it->second;
        }
        case K::Neg: return -evaluate(e.lhs(), env);
        case K::Call: return apply_function(e.function(), evaluate(e.lhs(), env));
        default: {
            const double a = evaluate(e.lhs(), env);
            const double b = evaluate(e.rhs(), env);
            return apply_binary(e.kind(), a, b);
        }
    }
}

CompiledExpression::CompiledExpression(const Expression& e,
                                       const std::map<std::string, std::size_t>& slots) {
    using K = Expression::Kind;
    std::size_t depth = 0;
    auto emit = [&](auto&& self, const Expression& node) -> void {
        switch (node.kind()) {
            case K::Number:
                program_.push_back({K::Number, {}, node.value(), 0});
                ++depth;
                break;
            case K::Variable: {
                auto it = slots.find(node.name());
                if (it == slots.end()) {
                    throw EvaluationError(EvaluationError::Reason::UnboundIdentifier,
                                          "unbound identifier '" + node.name() + "'");
                }
                program_.push_back({K::Variable, {}, 0.0, it->second});
                ++depth;
                break;
            }
            case K::Neg:
            case K::Call:
                self(self, node.lhs());
                program_.push_back({node.kind(), node.function(), 0.0, 0});
                break;
            default:
                self(self, node.lhs());
                self(self, node.rhs());
                program_.push_back({node.kind(), {}, 0.0, 0});
                --depth;
        }
        max_depth_ = std::max(max_depth_, depth);
    };
    emit(emit, e);
}

double CompiledExpression::evaluate(std::span<const double> values) const {
    using K = Expression::Kind;
    // Small expressions dominate; avoid a heap allocation for them.
    std::array<double, 32> small{};
    std::vector<double> large;
    double* stack = small.data();
    if (max_depth_ > small.size()) {
        large.resize(max_depth_);
        stack = large.data();
    }
    std::size_t top = 0;
    for (const auto& op : program_) {
        switch (op.kind) {
            case K::Number: stack[top++] = op.number; break;
            case K::Variable: stack[top++] = values[op.slot]; break;
            case K::Neg: stack[top - 1] = -stack[top - 1]; break;
            case K::Call: stack[top - 1] = apply_function(op.fn, stack[top - 1]); break;
            default:
                stack[top - 2] = apply_binary(op.kind, stack[top - 2], stack[top - 1]);
                --top;
        }
    }
    return stack[0];
}

}  // namespace cdl
