#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cdl/dataset.hpp"
#include "cdl/expression.hpp"
#include "cdl/format_error.hpp"
#include "cdl/graph.hpp"
#include "cdl/levels.hpp"

namespace cdl {

class ScmError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Normal(a = mean, b = sd) or Uniform(a = low, b = high).
struct NoiseSpec {
    enum class Family { Normal, Uniform };
    Family family = Family::Normal;
    double a = 0.0;
    double b = 1.0;

    static NoiseSpec normal(double mean, double sd);
    static NoiseSpec uniform(double low, double high);

    friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

[[nodiscard]] std::string to_string(const NoiseSpec& spec);

/// Name of the noise symbol attached to a variable: "U_" + target.
[[nodiscard]] std::string noise_symbol(const Variable& target);

/// One structural equation. At NoiseModel the value is form(parents) + U_target
/// and the form must not mention U_target. At FullyKnown the value is form
/// evaluated with U_target bound to a fresh noise draw (if the form uses it).
/// NonParametric and Parametric equations are descriptive and may omit the form.
struct StructuralEquation {
    Variable target;
    VariableSet parents;
    ParametricTag level = ParametricTag::NoiseModel;
    std::optional<Expression> form;

    friend bool operator==(const StructuralEquation&, const StructuralEquation&) = default;
};

/// Structural causal model over a DAG. Each node is either endogenous (one
/// equation) or exogenous (no equation, value drawn from its noise spec).
/// Identifiers in forms resolve to parents, named parameters or U_target.
class Scm {
public:
    Scm() = default;
    /// Throws ScmError when an invariant is violated.
    Scm(Dag graph, std::map<Variable, StructuralEquation> equations,
        std::map<Variable, NoiseSpec> noise, std::map<std::string, double> parameters = {});

    [[nodiscard]] const Dag& graph() const noexcept { return graph_; }
    [[nodiscard]] const std::map<Variable, StructuralEquation>& equations() const noexcept {
        return equations_;
    }
    [[nodiscard]] const std::map<Variable, NoiseSpec>& noise() const noexcept { return noise_; }
    [[nodiscard]] const std::map<std::string, double>& parameters() const noexcept {
        return parameters_;
    }

    /// True iff every endogenous equation has a generative form
    /// (NoiseModel or FullyKnown).
    [[nodiscard]] bool is_complete() const;
    /// True iff the variable's value involves a noise draw.
    [[nodiscard]] bool is_noisy(const Variable& v) const;

    friend bool operator==(const Scm&, const Scm&) = default;

private:
    Dag graph_;
    std::map<Variable, StructuralEquation> equations_;
    std::map<Variable, NoiseSpec> noise_;
    std::map<std::string, double> parameters_;
};

/// n rows of ancestral samples, columns in sorted variable order. Noise for each
/// variable comes from its own substream of `seed`, so output does not depend
/// on thread count. Throws ScmError for n == 0 or a NonParametric/Parametric
/// equation.
[[nodiscard]] Dataset sample_scm(const Scm& m, std::size_t n, std::uint64_t seed);
/// Serial reference producing identical output to sample_scm.
[[nodiscard]] Dataset sample_scm_serial(const Scm& m, std::size_t n, std::uint64_t seed);

struct IhdpOutcomes {
    double mu0;
    double mu1;
};

/// mu0 = exp((x + m)·beta), mu1 = x·beta + omega. Throws std::invalid_argument
/// on a length mismatch.
[[nodiscard]] IhdpOutcomes ihdp_surfaces(std::span<const double> x, std::span<const double> m,
                                         std::span<const double> beta, double omega);

/// E[Y1 - Y0 | x] with the variables in x held at their given values and every
/// other variable drawn. Both outcomes share the replicate's standard noise
/// draw. Exact (n_mc unused) when nothing the outcomes depend on is noisy.
[[nodiscard]] double oracle_cate(const Scm& m, const std::map<Variable, double>& x,
                                 std::size_t n_mc, std::uint64_t seed,
                                 const Variable& y0 = "Y0", const Variable& y1 = "Y1");

// SCM text file:
//   graph:       edge list lines (`X -> Y`, bare names for isolated nodes)
//   equations:   `Y = <expr> + U` (NoiseModel) or `Y := <expr>` (FullyKnown)
//   noise:       `U_Y ~ Normal(0, 1)` or `U_Y ~ Uniform(-1, 1)`
//   parameters:  `beta = 1.5`
[[nodiscard]] Scm parse_scm(std::string_view text);
[[nodiscard]] Scm read_scm(const std::filesystem::path& path);
[[nodiscard]] std::string format_scm(const Scm& m);

}  // namespace cdl
