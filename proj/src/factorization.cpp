#include "cdl/factorization.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

namespace cdl {

namespace mp = boost::multiprecision;

Factor Factor::table(std::vector<Variable> scope, std::vector<int> cardinality,
                     std::vector<double> values) {
    if (scope.empty()) throw FactorError("factor scope must be nonempty");
    if (scope.size() != cardinality.size()) {
        throw FactorError("factor needs one cardinality per scope variable");
    }
    std::size_t cells = 1;
    for (int c : cardinality) {
        if (c < 1) throw FactorError("cardinalities must be positive");
        cells *= static_cast<std::size_t>(c);
    }
    if (values.size() != cells) {
        throw FactorError("factor table has " + std::to_string(values.size()) +
                          " entries, expected " + std::to_string(cells));
    }
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw FactorError("factor entries must be non-negative");
    }
    Factor f;
    f.scope_ = std::move(scope);
    f.cardinality_ = std::move(cardinality);
    f.values_ = std::move(values);
    return f;
}

Factor Factor::expression(std::vector<Variable> scope, Expression form) {
    if (scope.empty()) throw FactorError("factor scope must be nonempty");
    const VariableSet allowed(scope.begin(), scope.end());
    for (const auto& v : form.free_variables()) {
        if (!allowed.count(v)) throw FactorError("factor expression uses '" + v + "' outside its scope");
    }
    Factor f;
    f.scope_ = std::move(scope);
    f.form_ = std::move(form);
    return f;
}

double Factor::operator()(const std::map<Variable, double>& assignment) const {
    auto value_of = [&](const Variable& v) {
        auto it = assignment.find(v);
        if (it == assignment.end()) throw FactorError("assignment is missing variable '" + v + "'");
        return it->second;
    };
    double result = 0.0;
    if (form_) {
        Environment env;
        for (const auto& v : scope_) env.emplace(v, value_of(v));
        result = evaluate(*form_, env);
    } else {
        std::size_t offset = 0;
        for (std::size_t k = 0; k < scope_.size(); ++k) {
            const double raw = value_of(scope_[k]);
            const double idx = std::floor(raw);
            if (idx != raw || idx < 0 || idx >= cardinality_[k]) {
                throw FactorError("value " + std::to_string(raw) + " of '" + scope_[k] +
                                  "' is outside its finite domain");
            }
            offset = offset * static_cast<std::size_t>(cardinality_[k]) + static_cast<std::size_t>(idx);
        }
        result = values_[offset];
    }
    if (result < 0.0) throw FactorError("negative factor value encountered");
    return result;
}

double evaluate_factorization(const Factorization& f, const std::map<Variable, double>& assignment) {
    if (!(f.z > 0.0)) throw FactorError("normalising constant must be positive");
    double product = 1.0;
    for (const auto& factor : f.factors) product *= factor(assignment);
    return product / f.z;
}

namespace {

mp::cpp_rational exact_sum(const Factorization& f) {
    std::map<Variable, int> card;
    for (const auto& factor : f.factors) {
        if (!factor.is_table()) throw FactorError("exact normalisation needs table factors");
        for (std::size_t k = 0; k < factor.scope().size(); ++k) {
            auto [it, inserted] = card.emplace(factor.scope()[k], factor.cardinality()[k]);
            if (!inserted && it->second != factor.cardinality()[k]) {
                throw FactorError("variable '" + it->first + "' has inconsistent cardinalities");
            }
        }
    }
    const std::vector<std::pair<Variable, int>> vars(card.begin(), card.end());
    std::vector<int> digits(vars.size(), 0);
    std::map<Variable, double> assignment;
    for (const auto& [v, c] : vars) assignment[v] = 0.0;

    mp::cpp_rational total = 0;
    while (true) {
        mp::cpp_rational term = 1;
        for (const auto& factor : f.factors) term *= mp::cpp_rational(factor(assignment));
        total += term;
        std::size_t k = 0;
        for (; k < vars.size(); ++k) {
            if (++digits[k] < vars[k].second) {
                assignment[vars[k].first] = digits[k];
                break;
            }
            digits[k] = 0;
            assignment[vars[k].first] = 0.0;
        }
        if (k == vars.size()) break;
    }
    return total;
}

}  // namespace

std::string exact_partition_sum(const Factorization& f) { return exact_sum(f).str(); }

bool is_normalized(const Factorization& f) {
    if (!(f.z > 0.0)) return false;
    return exact_sum(f) == mp::cpp_rational(f.z);
}

bool scopes_consistent_with_dag(const Factorization& f, const Dag& g) {
    std::map<VariableSet, Variable> family_of;
    for (const auto& v : g.nodes()) {
        VariableSet family = g.parents(v);
        family.insert(v);
        family_of.emplace(std::move(family), v);
    }
    VariableSet covered;
    for (const auto& factor : f.factors) {
        const VariableSet scope(factor.scope().begin(), factor.scope().end());
        for (const auto& v : scope) {
            if (!g.contains(v)) throw GraphError("factor scope names unknown variable '" + v + "'");
        }
        auto it = family_of.find(scope);
        if (it == family_of.end()) return false;
        if (!covered.insert(it->second).second) return false;
    }
    return covered.size() == g.nodes().size();
}

}  // namespace cdl
