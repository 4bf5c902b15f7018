#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cdl {

/// Syntax error in expression text; offset is the byte position of the
/// offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, const std::string& message)
        : std::runtime_error("at byte " + std::to_string(offset) + ": " + message),
          offset_(offset) {}
    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class EvaluationError : public std::runtime_error {
public:
    enum class Reason { UnboundIdentifier, Domain };
    EvaluationError(Reason reason, const std::string& message)
        : std::runtime_error(message), reason_(reason) {}
    [[nodiscard]] Reason reason() const noexcept { return reason_; }

private:
    Reason reason_;
};

/// Immutable closed-form expression tree. Copies share nodes.
class Expression {
public:
    enum class Kind { Number, Variable, Add, Sub, Mul, Div, Pow, Neg, Call };
    enum class Function { Exp, Log, Sin };

    static Expression number(double value);
    static Expression variable(std::string name);
    static Expression binary(Kind op, Expression lhs, Expression rhs);
    static Expression negate(Expression operand);
    static Expression call(Function fn, Expression argument);

    [[nodiscard]] Kind kind() const;
    [[nodiscard]] double value() const;              // Number
    [[nodiscard]] const std::string& name() const;   // Variable
    [[nodiscard]] Function function() const;         // Call
    [[nodiscard]] const Expression& lhs() const;     // binary; also the operand of Neg/Call
    [[nodiscard]] const Expression& rhs() const;     // binary

    /// Identifiers referenced anywhere in the tree.
    [[nodiscard]] std::set<std::string> free_variables() const;

    friend bool operator==(const Expression& a, const Expression& b);

private:
    struct Node;
    explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

[[nodiscard]] std::string_view function_name(Expression::Function fn);

/// Grammar (lowest to highest precedence): `+ -`, `* /`, unary `-`, power
/// (`^` or `**`, right-associative), atoms: decimal literal, identifier
/// `[A-Za-z_][A-Za-z0-9_]*`, `exp(...)`, `log(...)`, `sin(...)`, parentheses.
[[nodiscard]] Expression parse_expression(std::string_view text);

/// Canonical text: minimal parentheses, single spaces around + - * /, no
/// spaces around ^, shortest round-trip literals.
[[nodiscard]] std::string to_string(const Expression& e);

using Environment = std::map<std::string, double, std::less<>>;

/// Throws EvaluationError for unbound identifiers, log of a non-positive
/// argument, division by zero, or a non-real power.
[[nodiscard]] double evaluate(const Expression& e, const Environment& env);

/// Expression flattened to a postfix program with identifiers resolved to
/// slots, for evaluating the same expression over many rows.
class CompiledExpression {
public:
    /// `slots` maps each free identifier to an index into the value span passed
    /// to evaluate(). Throws EvaluationError if an identifier has no slot.
    CompiledExpression(const Expression& e, const std::map<std::string, std::size_t>& slots);

    [[nodiscard]] double evaluate(std::span<const double> values) const;

private:
    struct Op {
        Expression::Kind kind;
        Expression::Function fn;
        double number;
        std::size_t slot;
    };
    std::vector<Op> program_;
    std::size_t max_depth_ = 0;
};

}  // namespace cdl
