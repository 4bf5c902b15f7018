#include <algorithm>
#include <cstdint>
#include <functional>

#include "cdl/detail/bitdag.hpp"
#include "cdl/graph.hpp"

namespace cdl {

namespace {

struct CompiledConstraint {
    int x;
    int y;
    detail::Mask given;
    bool holds;
};

void check_mec_inputs(const VariableSet& vars, const IndependenceSet& constraints,
                      std::size_t node_cap) {
    if (vars.size() > node_cap) {
        throw GraphError("enumerate_mec: " + std::to_string(vars.size()) +
                         " variables exceeds the cap of " + std::to_string(node_cap));
    }
    if (vars.size() > static_cast<std::size_t>(detail::kMaxBitNodes)) {
        throw GraphError("enumerate_mec supports at most " +
                         std::to_string(detail::kMaxBitNodes) + " variables");
    }
    for (const auto& v : constraints.variables()) {
        if (!vars.count(v)) throw GraphError("constraint mentions unknown variable '" + v + "'");
    }
}

std::uint64_t ipow3(std::size_t e) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < e; ++i) r *= 3;
    return r;
}

}  // namespace

std::vector<Dag> enumerate_mec(const VariableSet& vars, const IndependenceSet& constraints,
                               std::size_t node_cap) {
    check_mec_inputs(vars, constraints, node_cap);
    const std::vector<Variable> names(vars.begin(), vars.end());
    const int n = static_cast<int>(names.size());
    auto index_of = [&](const Variable& v) {
        return static_cast<int>(std::lower_bound(names.begin(), names.end(), v) - names.begin());
    };

    std::vector<CompiledConstraint> compiled;
    for (const auto& s : constraints.statements()) {
        detail::Mask z = 0;
        for (const auto& g : s.given) z |= detail::Mask{1} << index_of(g);
        compiled.push_back({index_of(s.x), index_of(s.y), z, s.holds});
    }

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }
    const std::uint64_t total = ipow3(pairs.size());

    // Each candidate code assigns every unordered pair one of
    // {absent, i -> j, j -> i} in base 3.
    std::vector<std::uint64_t> accepted;
#pragma omp parallel
    {
        std::vector<std::uint64_t> local;
#pragma omp for schedule(static) nowait
        for (std::int64_t code = 0; code < static_cast<std::int64_t>(total); ++code) {
            detail::BitDag g;
            g.n = n;
            std::uint64_t c = static_cast<std::uint64_t>(code);
            for (const auto& [i, j] : pairs) {
                const auto digit = c % 3;
                c /= 3;
                if (digit == 1) g.add_edge(i, j);
                else if (digit == 2) g.add_edge(j, i);
            }
            if (!detail::bit_is_acyclic(g)) continue;
            bool ok = true;
            for (const auto& k : compiled) {
                if (detail::bit_d_separated(g, k.x, k.y, k.given) != k.holds) {
                    ok = false;
                    break;
                }
            }
            if (ok) local.push_back(static_cast<std::uint64_t>(code));
        }
#pragma omp critical
        accepted.insert(accepted.end(), local.begin(), local.end());
    }

    std::vector<Dag> out;
    out.reserve(accepted.size());
    for (auto code : accepted) {
        EdgeSet edges;
        for (const auto& [i, j] : pairs) {
            const auto digit = code % 3;
            code /= 3;
            if (digit == 1) edges.emplace(names[i], names[j]);
            else if (digit == 2) edges.emplace(names[j], names[i]);
        }
        out.emplace_back(vars, std::move(edges));
    }
    std::sort(out.begin(), out.end(), dag_less);
    return out;
}

std::vector<Dag> enumerate_mec_serial(const VariableSet& vars, const IndependenceSet& constraints,
                                      std::size_t node_cap) {
    check_mec_inputs(vars, constraints, node_cap);
    const std::vector<Variable> names(vars.begin(), vars.end());
    std::vector<Edge> pairs;
    for (std::size_t i = 0; i < names.size(); ++i) {
        for (std::size_t j = i + 1; j < names.size(); ++j) pairs.emplace_back(names[i], names[j]);
    }

    std::vector<Dag> out;
    EdgeSet current;
    std::function<void(std::size_t)> recurse = [&](std::size_t k) {
        if (k == pairs.size()) {
            if (!is_acyclic(vars, current)) return;
            Dag g(vars, current);
            if (consistent_with(g, constraints, node_cap)) out.push_back(std::move(g));
            return;
        }
        const auto& [a, b] = pairs[k];
        recurse(k + 1);
        current.emplace(a, b);
        recurse(k + 1);
        current.erase({a, b});
        current.emplace(b, a);
        recurse(k + 1);
        current.erase({b, a});
    };
    recurse(0);
    std::sort(out.begin(), out.end(), dag_less);
    return out;
}

}  // namespace cdl
