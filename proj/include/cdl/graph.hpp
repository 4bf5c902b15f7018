#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cdl {

using Variable = std::string;
using VariableSet = std::set<Variable>;
/// (parent, child) for directed edges; (a, b) with a < b for undirected ones.
using Edge = std::pair<Variable, Variable>;
using EdgeSet = std::set<Edge>;

class GraphError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// True iff the directed edges over `nodes` admit a topological order.
/// Throws GraphError when an edge references a node not in `nodes`.
[[nodiscard]] bool is_acyclic(const VariableSet& nodes, const EdgeSet& edges);

/// Directed acyclic graph over named variables. Immutable after construction.
class Dag {
public:
    Dag() = default;
    /// Throws GraphError on empty names, self-loops, dangling endpoints or cycles.
    Dag(VariableSet nodes, EdgeSet edges);

    [[nodiscard]] const VariableSet& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const EdgeSet& edges() const noexcept { return edges_; }
    [[nodiscard]] bool contains(const Variable& v) const { return nodes_.count(v) != 0; }
    [[nodiscard]] bool has_edge(const Variable& parent, const Variable& child) const {
        return edges_.count({parent, child}) != 0;
    }

    /// Pa(v).
    [[nodiscard]] VariableSet parents(const Variable& v) const;
    [[nodiscard]] VariableSet children(const Variable& v) const;
    [[nodiscard]] VariableSet ancestors(const Variable& v) const;
    [[nodiscard]] VariableSet descendants(const Variable& v) const;

    /// Kahn order, ties broken by name.
    [[nodiscard]] std::vector<Variable> topological_order() const;

    /// Edges in lexicographic order (the canonical listing used for sorting).
    [[nodiscard]] std::vector<Edge> edge_list() const { return {edges_.begin(), edges_.end()}; }

    friend bool operator==(const Dag&, const Dag&) = default;

private:
    VariableSet nodes_;
    EdgeSet edges_;
};

/// Orders DAGs by node names, then by lexicographic edge list.
[[nodiscard]] bool dag_less(const Dag& a, const Dag& b);

/// Partially directed graph. Undirected edges are stored with the smaller name first.
class Pdag {
public:
    Pdag() = default;
    Pdag(VariableSet nodes, EdgeSet directed, EdgeSet undirected);

    [[nodiscard]] const VariableSet& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const EdgeSet& directed() const noexcept { return directed_; }
    [[nodiscard]] const EdgeSet& undirected() const noexcept { return undirected_; }

    friend bool operator==(const Pdag&, const Pdag&) = default;

private:
    VariableSet nodes_;
    EdgeSet directed_;
    EdgeSet undirected_;
};

/// x ⊥ y | given (holds) or x ⊥̸ y | given (!holds). Stored with x < y.
struct IndependenceStatement {
    Variable x;
    Variable y;
    VariableSet given;
    bool holds = true;

    /// Canonicalises the pair order; throws GraphError if x == y or x/y ∈ given.
    static IndependenceStatement make(Variable x, Variable y, VariableSet given, bool holds);

    friend bool operator==(const IndependenceStatement&, const IndependenceStatement&) = default;
};

/// A set of (in)dependence statements keyed by (x, y, given). A statement and
/// its negation may not both be present.
class IndependenceSet {
public:
    struct Key {
        Variable x;
        Variable y;
        VariableSet given;
        friend auto operator<=>(const Key&, const Key&) = default;
    };

    IndependenceSet() = default;

    /// Inserts a statement. Duplicates are ignored; a contradiction throws GraphError.
    void add(const IndependenceStatement& statement);
    void add(Variable x, Variable y, VariableSet given, bool holds) {
        add(IndependenceStatement::make(std::move(x), std::move(y), std::move(given), holds));
    }

    /// The recorded verdict for (x, y | given), in either pair order.
    [[nodiscard]] std::optional<bool> lookup(const Variable& x, const Variable& y,
                                             const VariableSet& given) const;

    [[nodiscard]] std::size_t size() const noexcept { return statements_.size(); }
    [[nodiscard]] bool empty() const noexcept { return statements_.empty(); }
    [[nodiscard]] std::vector<IndependenceStatement> statements() const;
    [[nodiscard]] VariableSet variables() const;

    friend bool operator==(const IndependenceSet&, const IndependenceSet&) = default;

private:
    std::map<Key, bool> statements_;
};

/// d-separation of x and y given z in g (path blocking via reachability).
/// Throws GraphError when x == y, x or y ∈ z, or a variable is missing from g.
[[nodiscard]] bool d_separated(const Dag& g, const Variable& x, const Variable& y,
                               const VariableSet& z);

inline constexpr std::size_t kDefaultImpliedCap = 8;
inline constexpr std::size_t kDefaultMecCap = 6;

/// Every statement (x, y | z) over unordered pairs and all subsets z of the
/// remaining nodes, with holds = d_separated.
[[nodiscard]] IndependenceSet implied_independencies(const Dag& g,
                                                     std::size_t node_cap = kDefaultImpliedCap);

/// True iff g's d-separation verdict matches every statement in constraints.
[[nodiscard]] bool consistent_with(const Dag& g, const IndependenceSet& constraints,
                                   std::size_t node_cap = kDefaultMecCap);

/// All labeled DAGs over vars consistent with constraints, sorted with dag_less.
/// Brute force over every orientation assignment; parallel when OpenMP is enabled.
[[nodiscard]] std::vector<Dag> enumerate_mec(const VariableSet& vars,
                                             const IndependenceSet& constraints,
                                             std::size_t node_cap = kDefaultMecCap);

/// Serial reference: recursive generation of candidate edge sets checked through
/// the public Dag/consistent_with path. Same result as enumerate_mec.
[[nodiscard]] std::vector<Dag> enumerate_mec_serial(const VariableSet& vars,
                                                    const IndependenceSet& constraints,
                                                    std::size_t node_cap = kDefaultMecCap);

/// Edge between two roles in a temporal template. lag 0 is within a step,
/// lag 1 points from step t to step t+1. Other lags are rejected at unroll.
struct TemplateEdge {
    Variable from;
    Variable to;
    int lag = 0;
    friend bool operator==(const TemplateEdge&, const TemplateEdge&) = default;
};

/// Per-step roles plus the edge pattern of a two-slice template.
/// `initial_within`, when set, replaces the lag-0 edges at the first step only.
struct TemporalTemplate {
    std::vector<Variable> roles;
    std::vector<TemplateEdge> edges;
    std::optional<std::vector<TemplateEdge>> initial_within;
};

/// Name of a role instance at a step, e.g. ("X", 2) -> "X_2".
[[nodiscard]] Variable step_variable(const Variable& role, int step);

/// Instantiates roles per step (role_1 .. role_steps), within-step edges at each
/// step and lag-1 edges between consecutive steps.
/// Throws GraphError for steps < 1, backward or unsupported lags, unknown roles,
/// or a within-step pattern that is itself cyclic.
[[nodiscard]] Dag unroll_temporal_template(const TemporalTemplate& t, int steps);

}  // namespace cdl
