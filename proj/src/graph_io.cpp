#include "cdl/graph_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace cdl {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string_view strip_comment(std::string_view s) {
    const auto hash = s.find('#');
    return hash == std::string_view::npos ? s : s.substr(0, hash);
}

bool valid_name(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c == ' ' || c == '\t' || c == ',' || c == '|' || c == '#') return false;
    }
    return true;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::string line;
    std::istringstream in{std::string(text)};
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_names(std::string_view s, std::size_t lineno) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
    };
    for (char c : s) {
        if (c == ',' || c == ' ' || c == '\t') flush();
        else cur.push_back(c);
    }
    flush();
    for (const auto& n : out) {
        if (!valid_name(n)) throw FormatError(lineno, "invalid variable name '" + n + "'");
    }
    return out;
}

}  // namespace

Pdag parse_edge_list(std::string_view text) {
    VariableSet nodes;
    EdgeSet directed;
    EdgeSet undirected;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        const auto body = trim(strip_comment(lines[i]));
        if (body.empty()) continue;
        const auto arrow = body.find("->");
        const auto dash = body.find("--");
        if (arrow != std::string_view::npos || dash != std::string_view::npos) {
            const bool is_directed = arrow != std::string_view::npos;
            const auto pos = is_directed ? arrow : dash;
            const auto lhs = trim(body.substr(0, pos));
            const auto rhs = trim(body.substr(pos + 2));
            if (!valid_name(lhs) || !valid_name(rhs)) {
                throw FormatError(lineno, "expected `a -> b` or `a -- b`, got '" +
                                              std::string(body) + "'");
            }
            if (lhs == rhs) throw FormatError(lineno, "self-loop on " + std::string(lhs));
            nodes.emplace(lhs);
            nodes.emplace(rhs);
            (is_directed ? directed : undirected).emplace(std::string(lhs), std::string(rhs));
        } else {
            if (!valid_name(body)) {
                throw FormatError(lineno, "expected an edge or a node name, got '" +
                                              std::string(body) + "'");
            }
            nodes.emplace(body);
        }
    }
    try {
        return Pdag(std::move(nodes), std::move(directed), std::move(undirected));
    } catch (const GraphError& e) {
        throw FormatError(0, e.what());
    }
}

Dag parse_dag(std::string_view text) {
    const Pdag p = parse_edge_list(text);
    if (!p.undirected().empty()) {
        throw FormatError(0, "expected a DAG but the edge list has undirected edges");
    }
    return Dag(p.nodes(), p.directed());
}

std::string format_edge_list(const Pdag& g) {
    std::ostringstream out;
    VariableSet touched;
    for (const auto& [a, b] : g.directed()) {
        out << a << " -> " << b << '\n';
        touched.insert(a);
        touched.insert(b);
    }
    for (const auto& [a, b] : g.undirected()) {
        out << a << " -- " << b << '\n';
        touched.insert(a);
        touched.insert(b);
    }
    for (const auto& v : g.nodes()) {
        if (!touched.count(v)) out << v << '\n';
    }
    return out.str();
}

std::string format_edge_list(const Dag& g) { return format_edge_list(Pdag(g.nodes(), g.edges(), {})); }

IndependenceSet parse_constraints(std::string_view text, const VariableSet& vars) {
    struct Raw {
        std::size_t line;
        bool holds;
        std::string x;
        std::string y;
        bool all_subsets;
        VariableSet given;
    };
    std::vector<Raw> raws;
    VariableSet mentioned;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        const auto body = trim(strip_comment(lines[i]));
        if (body.empty()) continue;
        const auto bar = body.find('|');
        const auto head = split_names(body.substr(0, bar), lineno);
        if (head.size() != 3 || (head[0] != "indep" && head[0] != "dep")) {
            throw FormatError(lineno, "expected `indep X Y [| Z...]` or `dep X Y [| Z...]`");
        }
        Raw raw{lineno, head[0] == "indep", head[1], head[2], false, {}};
        if (bar != std::string_view::npos) {
            const auto tail = trim(body.substr(bar + 1));
            if (tail == "*") {
                raw.all_subsets = true;
            } else if (!tail.empty() && tail != "{}") {
                for (auto& g : split_names(tail, lineno)) raw.given.insert(std::move(g));
            }
        }
        mentioned.insert(raw.x);
        mentioned.insert(raw.y);
        mentioned.insert(raw.given.begin(), raw.given.end());
        raws.push_back(std::move(raw));
    }

    const VariableSet& universe = vars.empty() ? mentioned : vars;
    IndependenceSet out;
    for (const auto& r : raws) {
        for (const auto& v : {r.x, r.y}) {
            if (!universe.count(v)) throw FormatError(r.line, "unknown variable '" + v + "'");
        }
        try {
            if (!r.all_subsets) {
                out.add(r.x, r.y, r.given, r.holds);
                continue;
            }
            std::vector<Variable> rest;
            for (const auto& v : universe) {
                if (v != r.x && v != r.y) rest.push_back(v);
            }
            for (std::size_t mask = 0; mask < (std::size_t{1} << rest.size()); ++mask) {
                VariableSet z;
                for (std::size_t b = 0; b < rest.size(); ++b) {
                    if (mask & (std::size_t{1} << b)) z.insert(rest[b]);
                }
                out.add(r.x, r.y, std::move(z), r.holds);
            }
        } catch (const GraphError& e) {
            throw FormatError(r.line, e.what());
        }
    }
    return out;
}

std::string format_constraints(const IndependenceSet& set) {
    std::ostringstream out;
    for (const auto& s : set.statements()) {
        out << (s.holds ? "indep " : "dep ") << s.x << ' ' << s.y;
        if (!s.given.empty()) {
            out << " |";
            bool first = true;
            for (const auto& g : s.given) {
                out << (first ? " " : ", ") << g;
                first = false;
            }
        }
        out << '\n';
    }
    return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace cdl
