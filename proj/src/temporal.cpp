#include <algorithm>

#include "cdl/graph.hpp"

namespace cdl {

Variable step_variable(const Variable& role, int step) {
    return role + "_" + std::to_string(step);
}

namespace {

void check_edge(const TemporalTemplate& t, const TemplateEdge& e) {
    auto known = [&](const Variable& r) {
        return std::find(t.roles.begin(), t.roles.end(), r) != t.roles.end();
    };
    if (!known(e.from) || !known(e.to)) {
        throw GraphError("template edge " + e.from + " -> " + e.to + " uses an undeclared role");
    }
    if (e.lag < 0) {
        throw GraphError("template edge " + e.from + " -> " + e.to +
                         " points backward in time (lag " + std::to_string(e.lag) + ")");
    }
    if (e.lag > 1) {
        throw GraphError("template edge " + e.from + " -> " + e.to +
                         " has lag " + std::to_string(e.lag) + "; only lag 0 and 1 are supported");
    }
    if (e.lag == 0 && e.from == e.to) throw GraphError("within-step self-loop on " + e.from);
}

void check_within_acyclic(const TemporalTemplate& t, const std::vector<TemplateEdge>& edges) {
    VariableSet roles(t.roles.begin(), t.roles.end());
    EdgeSet within;
    for (const auto& e : edges) {
        if (e.lag == 0) within.emplace(e.from, e.to);
    }
    if (!is_acyclic(roles, within)) throw GraphError("within-step template edges form a cycle");
}

}  // namespace

Dag unroll_temporal_template(const TemporalTemplate& t, int steps) {
    if (steps < 1) throw GraphError("steps must be at least 1");
    for (const auto& e : t.edges) check_edge(t, e);
    check_within_acyclic(t, t.edges);
    if (t.initial_within) {
        for (const auto& e : *t.initial_within) {
            check_edge(t, e);
            if (e.lag != 0) throw GraphError("initial-step edges must have lag 0");
        }
        check_within_acyclic(t, *t.initial_within);
    }

    VariableSet nodes;
    EdgeSet edges;
    for (int s = 1; s <= steps; ++s) {
        for (const auto& r : t.roles) nodes.insert(step_variable(r, s));
        const auto& within = (s == 1 && t.initial_within) ? *t.initial_within : t.edges;
        for (const auto& e : within) {
            if (e.lag == 0) edges.emplace(step_variable(e.from, s), step_variable(e.to, s));
        }
        if (s > 1) {
            for (const auto& e : t.edges) {
                if (e.lag == 1) edges.emplace(step_variable(e.from, s - 1), step_variable(e.to, s));
            }
        }
    }
    return Dag(std::move(nodes), std::move(edges));
}

}  // namespace cdl
