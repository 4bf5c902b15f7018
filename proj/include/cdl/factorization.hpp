#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdl/expression.hpp"
#include "cdl/graph.hpp"

namespace cdl {

class FactorError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A non-negative function over an ordered scope. Either a table over finite
/// domains (variable k takes values 0..cardinality[k]-1, row-major with the
/// last scope variable varying fastest) or an expression over real values.
class Factor {
public:
    static Factor table(std::vector<Variable> scope, std::vector<int> cardinality,
                        std::vector<double> values);
    static Factor expression(std::vector<Variable> scope, Expression form);

    [[nodiscard]] const std::vector<Variable>& scope() const noexcept { return scope_; }
    [[nodiscard]] bool is_table() const noexcept { return !form_.has_value(); }
    [[nodiscard]] const std::vector<int>& cardinality() const noexcept { return cardinality_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

    /// f(assignment restricted to scope). Throws FactorError on a missing
    /// variable, an out-of-domain table index, or a negative value.
    [[nodiscard]] double operator()(const std::map<Variable, double>& assignment) const;

private:
    Factor() = default;
    std::vector<Variable> scope_;
    std::vector<int> cardinality_;
    std::vector<double> values_;
    std::optional<Expression> form_;
};

/// p(X) = (1/z) * prod_i f_i(X^(i)).
struct Factorization {
    std::vector<Factor> factors;
    double z = 1.0;
};

/// Throws FactorError for z <= 0 and everything Factor::operator() throws.
[[nodiscard]] double evaluate_factorization(const Factorization& f,
                                            const std::map<Variable, double>& assignment);

/// Sum over the joint finite domain of prod_i f_i, computed exactly in
/// rational arithmetic. Every factor must be a table and the same variable
/// must have one cardinality everywhere.
[[nodiscard]] std::string exact_partition_sum(const Factorization& f);

/// True iff the exact partition sum equals z exactly.
[[nodiscard]] bool is_normalized(const Factorization& f);

/// True iff each scope is {X} ∪ Pa(X) for some node X and every node is
/// covered exactly once. Throws GraphError when a scope names an unknown node.
[[nodiscard]] bool scopes_consistent_with_dag(const Factorization& f, const Dag& g);

}  // namespace cdl
