#include "cdl/graph.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <iterator>

namespace cdl {

namespace {

void check_endpoints(const VariableSet& nodes, const Edge& e) {
    if (!nodes.count(e.first) || !nodes.count(e.second)) {
        throw GraphError("edge " + e.first + " -> " + e.second + " references an unknown node");
    }
}

// Index-based adjacency for traversal-heavy routines.
struct Indexed {
    std::vector<Variable> names;
    std::map<Variable, int> index;
    std::vector<std::vector<int>> parents;
    std::vector<std::vector<int>> children;

    explicit Indexed(const Dag& g) : names(g.nodes().begin(), g.nodes().end()) {
        for (int i = 0; i < static_cast<int>(names.size()); ++i) index.emplace(names[i], i);
        parents.resize(names.size());
        children.resize(names.size());
        for (const auto& [p, c] : g.edges()) {
            parents[index.at(c)].push_back(index.at(p));
            children[index.at(p)].push_back(index.at(c));
        }
    }

    int at(const Variable& v) const {
        auto it = index.find(v);
        if (it == index.end()) throw GraphError("variable '" + v + "' is not in the graph");
        return it->second;
    }
};

}  // namespace

bool is_acyclic(const VariableSet& nodes, const EdgeSet& edges) {
    std::map<Variable, int> indegree;
    std::map<Variable, std::vector<Variable>> out;
    for (const auto& v : nodes) indegree[v] = 0;
    for (const auto& e : edges) {
        check_endpoints(nodes, e);
        ++indegree[e.second];
        out[e.first].push_back(e.second);
    }
    std::deque<Variable> ready;
    for (const auto& [v, d] : indegree) {
        if (d == 0) ready.push_back(v);
    }
    std::size_t seen = 0;
    while (!ready.empty()) {
        const Variable v = ready.front();
        ready.pop_front();
        ++seen;
        for (const auto& c : out[v]) {
            if (--indegree[c] == 0) ready.push_back(c);
        }
    }
    return seen == nodes.size();
}

Dag::Dag(VariableSet nodes, EdgeSet edges) : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    for (const auto& v : nodes_) {
        if (v.empty()) throw GraphError("variable names must be nonempty");
    }
    for (const auto& e : edges_) {
        if (e.first == e.second) throw GraphError("self-loop on " + e.first);
        check_endpoints(nodes_, e);
    }
    if (!is_acyclic(nodes_, edges_)) throw GraphError("graph contains a directed cycle");
}

VariableSet Dag::parents(const Variable& v) const {
    VariableSet out;
    for (const auto& [p, c] : edges_) {
        if (c == v) out.insert(p);
    }
    return out;
}

VariableSet Dag::children(const Variable& v) const {
    VariableSet out;
    for (auto it = edges_.lower_bound({v, std::string{}}); it != edges_.end() && it->first == v;
         ++it) {
        out.insert(it->second);
    }
    return out;
}

VariableSet Dag::ancestors(const Variable& v) const {
    VariableSet out;
    std::vector<Variable> stack{v};
    while (!stack.empty()) {
        const Variable cur = stack.back();
        stack.pop_back();
        for (const auto& p : parents(cur)) {
            if (out.insert(p).second) stack.push_back(p);
        }
    }
    return out;
}

VariableSet Dag::descendants(const Variable& v) const {
    VariableSet out;
    std::vector<Variable> stack{v};
    while (!stack.empty()) {
        const Variable cur = stack.back();
        stack.pop_back();
        for (const auto& c : children(cur)) {
            if (out.insert(c).second) stack.push_back(c);
        }
    }
    return out;
}

std::vector<Variable> Dag::topological_order() const {
    std::map<Variable, int> indegree;
    for (const auto& v : nodes_) indegree[v] = 0;
    for (const auto& e : edges_) ++indegree[e.second];
    std::set<Variable> ready;
    for (const auto& [v, d] : indegree) {
        if (d == 0) ready.insert(v);
    }
    std::vector<Variable> order;
    order.reserve(nodes_.size());
    while (!ready.empty()) {
        const Variable v = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(v);
        for (const auto& c : children(v)) {
            if (--indegree[c] == 0) ready.insert(c);
        }
    }
    return order;
}

bool dag_less(const Dag& a, const Dag& b) {
    if (a.nodes() != b.nodes()) return a.nodes() < b.nodes();
    return a.edge_list() < b.edge_list();
}

Pdag::Pdag(VariableSet nodes, EdgeSet directed, EdgeSet undirected) : nodes_(std::move(nodes)) {
    for (const auto& e : directed) {
        if (e.first == e.second) throw GraphError("self-loop on " + e.first);
        check_endpoints(nodes_, e);
        directed_.insert(e);
    }
    for (auto e : undirected) {
        if (e.first == e.second) throw GraphError("self-loop on " + e.first);
        check_endpoints(nodes_, e);
        if (e.second < e.first) std::swap(e.first, e.second);
        undirected_.insert(e);
    }
    for (const auto& [a, b] : undirected_) {
        if (directed_.count({a, b}) || directed_.count({b, a})) {
            throw GraphError("pair " + a + ", " + b + " is both directed and undirected");
        }
    }
}

IndependenceStatement IndependenceStatement::make(Variable x, Variable y, VariableSet given,
                                                  bool holds) {
    if (x == y) throw GraphError("independence statement needs two distinct variables");
    if (given.count(x) || given.count(y)) {
        throw GraphError("conditioning set may not contain " + x + " or " + y);
    }
    if (y < x) std::swap(x, y);
    return IndependenceStatement{std::move(x), std::move(y), std::move(given), holds};
}

void IndependenceSet::add(const IndependenceStatement& s) {
    auto canonical = IndependenceStatement::make(s.x, s.y, s.given, s.holds);
    Key key{canonical.x, canonical.y, canonical.given};
    auto [it, inserted] = statements_.emplace(std::move(key), canonical.holds);
    if (!inserted && it->second != canonical.holds) {
        throw GraphError("contradictory statements for " + canonical.x + " and " + canonical.y +
                         ": both independence and dependence asserted");
    }
}

std::optional<bool> IndependenceSet::lookup(const Variable& x, const Variable& y,
                                            const VariableSet& given) const {
    Key key = x < y ? Key{x, y, given} : Key{y, x, given};
    auto it = statements_.find(key);
    if (it == statements_.end()) return std::nullopt;
    return it->second;
}

std::vector<IndependenceStatement> IndependenceSet::statements() const {
    std::vector<IndependenceStatement> out;
    out.reserve(statements_.size());
    for (const auto& [k, holds] : statements_) out.push_back({k.x, k.y, k.given, holds});
    return out;
}

VariableSet IndependenceSet::variables() const {
    VariableSet out;
    for (const auto& [k, holds] : statements_) {
        out.insert(k.x);
        out.insert(k.y);
        out.insert(k.given.begin(), k.given.end());
    }
    return out;
}

bool d_separated(const Dag& g, const Variable& x, const Variable& y, const VariableSet& z) {
    if (x == y) throw GraphError("d-separation query needs x != y");
    if (z.count(x) || z.count(y)) throw GraphError("x and y may not be in the conditioning set");
    const Indexed idx(g);
    const int xi = idx.at(x);
    const int yi = idx.at(y);
    const auto n = idx.names.size();
    std::vector<char> in_z(n, 0);
    for (const auto& v : z) in_z[idx.at(v)] = 1;

    // Ancestors of z, z included.
    std::vector<char> anc(in_z);
    std::vector<int> stack;
    for (std::size_t i = 0; i < n; ++i) {
        if (in_z[i]) stack.push_back(static_cast<int>(i));
    }
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int p : idx.parents[v]) {
            if (!anc[p]) {
                anc[p] = 1;
                stack.push_back(p);
            }
        }
    }

    enum Dir : int { kUp = 0, kDown = 1 };
    std::vector<std::array<char, 2>> visited(n, {0, 0});
    std::vector<std::pair<int, Dir>> work{{xi, kUp}};
    while (!work.empty()) {
        const auto [v, dir] = work.back();
        work.pop_back();
        if (visited[v][dir]) continue;
        visited[v][dir] = 1;
        if (v == yi) return false;
        if (dir == kUp) {
            if (in_z[v]) continue;
            for (int p : idx.parents[v]) work.emplace_back(p, kUp);
            for (int c : idx.children[v]) work.emplace_back(c, kDown);
        } else {
            if (!in_z[v]) {
                for (int c : idx.children[v]) work.emplace_back(c, kDown);
            }
            if (anc[v]) {
                for (int p : idx.parents[v]) work.emplace_back(p, kUp);
            }
        }
    }
    return true;
}

IndependenceSet implied_independencies(const Dag& g, std::size_t node_cap) {
    if (g.nodes().size() > node_cap) {
        throw GraphError("implied_independencies: " + std::to_string(g.nodes().size()) +
                         " nodes exceeds the cap of " + std::to_string(node_cap));
    }
    const std::vector<Variable> names(g.nodes().begin(), g.nodes().end());
    const std::size_t n = names.size();
    IndependenceSet out;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            std::vector<Variable> rest;
            for (std::size_t k = 0; k < n; ++k) {
                if (k != i && k != j) rest.push_back(names[k]);
            }
            for (std::size_t mask = 0; mask < (std::size_t{1} << rest.size()); ++mask) {
                VariableSet z;
                for (std::size_t b = 0; b < rest.size(); ++b) {
                    if (mask & (std::size_t{1} << b)) z.insert(rest[b]);
                }
                const bool sep = d_separated(g, names[i], names[j], z);
                out.add(names[i], names[j], std::move(z), sep);
            }
        }
    }
    return out;
}

bool consistent_with(const Dag& g, const IndependenceSet& constraints, std::size_t node_cap) {
    if (g.nodes().size() > node_cap) {
        throw GraphError("consistent_with: " + std::to_string(g.nodes().size()) +
                         " nodes exceeds the cap of " + std::to_string(node_cap));
    }
    for (const auto& s : constraints.statements()) {
        if (d_separated(g, s.x, s.y, s.given) != s.holds) return false;
    }
    return true;
}

}  // namespace cdl
