#include <charconv>
#include <cmath>
#include <sstream>

#include "cdl/graph_io.hpp"
#include "cdl/scm.hpp"

namespace cdl {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(std::string_view s, std::size_t lineno) {
    s = trim(s);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw FormatError(lineno, "expected a number, found '" + std::string(s) + "'");
    }
    return v;
}

Expression parse_at(std::string_view s, std::size_t lineno) {
    try {
        return parse_expression(s);
    } catch (const ParseError& e) {
        throw FormatError(lineno, std::string("in expression '") + std::string(s) + "': " + e.what());
    }
}

struct RawEquation {
    std::size_t line;
    Variable target;
    bool fully_known;
    Expression form;
};

struct RawNoise {
    std::size_t line;
    std::string name;
    NoiseSpec spec;
};

NoiseSpec parse_noise_spec(std::string_view s, std::size_t lineno) {
    s = trim(s);
    const auto open = s.find('(');
    if (open == std::string_view::npos || s.back() != ')') {
        throw FormatError(lineno, "noise spec must look like Normal(mean, sd) or Uniform(low, high)");
    }
    const auto family = trim(s.substr(0, open));
    const auto args = s.substr(open + 1, s.size() - open - 2);
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) throw FormatError(lineno, "noise spec needs two arguments");
    const double a = parse_number(args.substr(0, comma), lineno);
    const double b = parse_number(args.substr(comma + 1), lineno);
    try {
        if (family == "Normal") return NoiseSpec::normal(a, b);
        if (family == "Uniform") return NoiseSpec::uniform(a, b);
    } catch (const ScmError& e) {
        throw FormatError(lineno, e.what());
    }
    throw FormatError(lineno, "unknown noise family '" + std::string(family) + "'");
}

}  // namespace

Scm parse_scm(std::string_view text) {
    enum class Section { None, Graph, Equations, Noise, Parameters };
    Section section = Section::None;
    std::string graph_text;
    std::vector<RawEquation> raw_equations;
    std::vector<RawNoise> raw_noise;
    std::map<std::string, double> parameters;

    std::istringstream in{std::string(text)};
    std::string line_buf;
    std::size_t lineno = 0;
    while (std::getline(in, line_buf)) {
        ++lineno;
        std::string_view line = line_buf;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        // graph_text keeps one line per input line so edge-list errors report the right line.
        if (section != Section::Graph || line.empty() || line.back() == ':') graph_text += '\n';
        if (line.empty()) continue;
        if (line == "graph:") { section = Section::Graph; continue; }
        if (line == "equations:") { section = Section::Equations; continue; }
        if (line == "noise:") { section = Section::Noise; continue; }
        if (line == "parameters:") { section = Section::Parameters; continue; }

        switch (section) {
            case Section::None:
                throw FormatError(lineno, "content before any section header");
            case Section::Graph:
                graph_text += std::string(line) + '\n';
                break;
            case Section::Equations: {
                const auto walrus = line.find(":=");
                const auto eq = walrus != std::string_view::npos ? walrus : line.find('=');
                if (eq == std::string_view::npos) throw FormatError(lineno, "equation needs '=' or ':='");
                const std::string target(trim(line.substr(0, eq)));
                const auto rhs = line.substr(eq + (walrus != std::string_view::npos ? 2 : 1));
                if (target.empty()) throw FormatError(lineno, "equation has no target");
                Expression form = parse_at(rhs, lineno);
                if (walrus == std::string_view::npos) {
                    auto is_noise = [&](const Expression& e) {
                        return e.kind() == Expression::Kind::Variable &&
                               (e.name() == "U" || e.name() == noise_symbol(target));
                    };
                    if (is_noise(form)) {
                        form = Expression::number(0.0);
                    } else if (form.kind() == Expression::Kind::Add && is_noise(form.rhs())) {
                        form = form.lhs();
                    } else {
                        throw FormatError(lineno, "noise-model equation must end in '+ U'");
                    }
                }
                raw_equations.push_back({lineno, target, walrus != std::string_view::npos, form});
                break;
            }
            case Section::Noise: {
                const auto tilde = line.find('~');
                if (tilde == std::string_view::npos) throw FormatError(lineno, "noise line needs '~'");
                raw_noise.push_back({lineno, std::string(trim(line.substr(0, tilde))),
                                     parse_noise_spec(line.substr(tilde + 1), lineno)});
                break;
            }
            case Section::Parameters: {
                const auto eq = line.find('=');
                if (eq == std::string_view::npos) throw FormatError(lineno, "parameter line needs '='");
                const std::string name(trim(line.substr(0, eq)));
                if (name.empty()) throw FormatError(lineno, "parameter has no name");
                if (!parameters.emplace(name, parse_number(line.substr(eq + 1), lineno)).second) {
                    throw FormatError(lineno, "parameter '" + name + "' defined twice");
                }
                break;
            }
        }
    }

    Dag graph = parse_dag(graph_text);
    std::map<Variable, StructuralEquation> equations;
    for (auto& raw : raw_equations) {
        if (!graph.contains(raw.target)) {
            throw FormatError(raw.line, "equation target '" + raw.target + "' is not in the graph");
        }
        StructuralEquation eq{raw.target, graph.parents(raw.target),
                              raw.fully_known ? ParametricTag::FullyKnown : ParametricTag::NoiseModel,
                              raw.form};
        if (!equations.emplace(raw.target, std::move(eq)).second) {
            throw FormatError(raw.line, "second equation for '" + raw.target + "'");
        }
    }
    std::map<Variable, NoiseSpec> noise;
    for (const auto& raw : raw_noise) {
        Variable target;
        if (raw.name.rfind("U_", 0) == 0 && graph.contains(raw.name.substr(2))) {
            target = raw.name.substr(2);
        } else if (graph.contains(raw.name)) {
            target = raw.name;
        } else {
            throw FormatError(raw.line, "noise '" + raw.name + "' does not name a graph variable");
        }
        if (!noise.emplace(target, raw.spec).second) {
            throw FormatError(raw.line, "second noise spec for '" + target + "'");
        }
    }
    return Scm(std::move(graph), std::move(equations), std::move(noise), std::move(parameters));
}

Scm read_scm(const std::filesystem::path& path) { return parse_scm(read_text_file(path)); }

std::string format_scm(const Scm& m) {
    std::string out = "graph:\n";
    std::istringstream edges(format_edge_list(m.graph()));
    for (std::string line; std::getline(edges, line);) out += "  " + line + '\n';
    if (!m.equations().empty()) {
        out += "equations:\n";
        for (const auto& [v, eq] : m.equations()) {
            if (!eq.form) continue;
            if (eq.level == ParametricTag::NoiseModel) {
                out += "  " + v + " = " + to_string(*eq.form) + " + U\n";
            } else if (eq.level == ParametricTag::FullyKnown) {
                out += "  " + v + " := " + to_string(*eq.form) + '\n';
            }
        }
    }
    if (!m.noise().empty()) {
        out += "noise:\n";
        for (const auto& [v, spec] : m.noise()) out += "  " + noise_symbol(v) + " ~ " + to_string(spec) + '\n';
    }
    if (!m.parameters().empty()) {
        out += "parameters:\n";
        char buf[32];
        for (const auto& [p, value] : m.parameters()) {
            const auto res = std::to_chars(buf, buf + sizeof buf, value);
            out += "  " + p + " = " + std::string(buf, res.ptr) + '\n';
        }
    }
    return out;
}

}  // namespace cdl
