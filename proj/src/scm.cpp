#include "cdl/scm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>

namespace cdl {

NoiseSpec NoiseSpec::normal(double mean, double sd) {
    if (!std::isfinite(mean) || !std::isfinite(sd) || !(sd > 0.0)) {
        throw ScmError("Normal noise needs a finite mean and a positive sd");
    }
    return {Family::Normal, mean, sd};
}

NoiseSpec NoiseSpec::uniform(double low, double high) {
    if (!std::isfinite(low) || !std::isfinite(high) || !(low < high)) {
        throw ScmError("Uniform noise needs finite bounds with low < high");
    }
    return {Family::Uniform, low, high};
}

namespace {

std::string shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// Maps a standard draw (N(0,1) or U(0,1)) onto the spec.
double scale_noise(const NoiseSpec& s, double standard) {
    return s.family == NoiseSpec::Family::Normal ? s.a + s.b * standard
                                                 : s.a + (s.b - s.a) * standard;
}

double standard_draw(const NoiseSpec& s, std::mt19937_64& rng) {
    if (s.family == NoiseSpec::Family::Normal) return std::normal_distribution<double>(0.0, 1.0)(rng);
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// Independent generator per (seed, variable name).
std::mt19937_64 substream(std::uint64_t seed, const std::string& name) {
    std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed),
                                     static_cast<std::uint32_t>(seed >> 32)};
    for (unsigned char c : name) words.push_back(c);
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

std::vector<double> noise_column(const NoiseSpec& s, std::uint64_t seed, const std::string& name,
                                 std::size_t n) {
    auto rng = substream(seed, name);
    std::vector<double> out(n);
    for (auto& v : out) v = scale_noise(s, standard_draw(s, rng));
    return out;
}

void check_sampleable(const Scm& m) {
    for (const auto& [v, eq] : m.equations()) {
        if (eq.level == ParametricTag::NonParametric || eq.level == ParametricTag::Parametric) {
            throw ScmError("equation for '" + v + "' is " + std::string(to_string(eq.level)) +
                           " and has no generative form");
        }
        if (!eq.form) throw ScmError("equation for '" + v + "' has no form to sample from");
    }
}

// Slot layout shared by the compiled evaluators: nodes, then noise symbols,
// then parameters.
struct Program {
    std::vector<Variable> order;
    std::map<std::string, std::size_t> slots;
    std::vector<std::size_t> node_slot;
    std::vector<std::optional<CompiledExpression>> compiled;
    std::vector<int> kind;  // 0 exogenous, 1 additive noise, 2 fully known
    std::vector<std::optional<std::size_t>> noise_slot;
    std::vector<double> base;

    explicit Program(const Scm& m) : order(m.graph().topological_order()) {
        for (const auto& v : m.graph().nodes()) slots.emplace(v, slots.size());
        for (const auto& [v, spec] : m.noise()) slots.emplace(noise_symbol(v), slots.size());
        for (const auto& [p, value] : m.parameters()) slots.emplace(p, slots.size());
        base.assign(slots.size(), 0.0);
        for (const auto& [p, value] : m.parameters()) base[slots.at(p)] = value;
        for (const auto& v : order) {
            node_slot.push_back(slots.at(v));
            auto it = m.equations().find(v);
            if (m.noise().count(v)) {
                noise_slot.emplace_back(slots.at(noise_symbol(v)));
            } else {
                noise_slot.emplace_back();
            }
            if (it == m.equations().end()) {
                kind.push_back(0);
                compiled.emplace_back();
            } else {
                kind.push_back(it->second.level == ParametricTag::NoiseModel ? 1 : 2);
                compiled.emplace_back(CompiledExpression(*it->second.form, slots));
            }
        }
    }

    // Fills node values of one row; noise slots must already be set.
    void run(std::vector<double>& values) const {
        for (std::size_t k = 0; k < order.size(); ++k) {
            double v = 0.0;
            switch (kind[k]) {
                case 0: v = values[*noise_slot[k]]; break;
                case 1: v = compiled[k]->evaluate(values) + values[*noise_slot[k]]; break;
                default: v = compiled[k]->evaluate(values); break;
            }
            values[node_slot[k]] = v;
        }
    }
};

}  // namespace

std::string to_string(const NoiseSpec& spec) {
    const char* name = spec.family == NoiseSpec::Family::Normal ? "Normal" : "Uniform";
    return std::string(name) + "(" + shortest(spec.a) + ", " + shortest(spec.b) + ")";
}

std::string noise_symbol(const Variable& target) { return "U_" + target; }

Scm::Scm(Dag graph, std::map<Variable, StructuralEquation> equations,
         std::map<Variable, NoiseSpec> noise, std::map<std::string, double> parameters)
    : graph_(std::move(graph)),
      equations_(std::move(equations)),
      noise_(std::move(noise)),
      parameters_(std::move(parameters)) {
    std::set<std::string> symbols(graph_.nodes().begin(), graph_.nodes().end());
    for (const auto& v : graph_.nodes()) symbols.insert(noise_symbol(v));
    for (const auto& [p, value] : parameters_) {
        if (symbols.count(p)) throw ScmError("parameter '" + p + "' shadows a variable or noise symbol");
        if (!std::isfinite(value)) throw ScmError("parameter '" + p + "' is not finite");
    }
    for (const auto& [v, spec] : noise_) {
        if (!graph_.contains(v)) throw ScmError("noise spec for unknown variable '" + v + "'");
        if (spec.family == NoiseSpec::Family::Normal ? !(spec.b > 0.0) : !(spec.a < spec.b)) {
            throw ScmError("invalid noise spec for '" + v + "'");
        }
    }
    for (const auto& [v, eq] : equations_) {
        if (eq.target != v) throw ScmError("equation keyed '" + v + "' targets '" + eq.target + "'");
        if (!graph_.contains(v)) throw ScmError("equation for unknown variable '" + v + "'");
        if (eq.parents != graph_.parents(v)) {
            throw ScmError("equation parents of '" + v + "' differ from its graph parents");
        }
        bool uses_noise = false;
        if (eq.form) {
            for (const auto& id : eq.form->free_variables()) {
                if (eq.parents.count(id) || parameters_.count(id)) continue;
                if (id == noise_symbol(v) && eq.level != ParametricTag::NoiseModel) {
                    uses_noise = true;
                    continue;
                }
                throw ScmError("equation for '" + v + "' references '" + id +
                               "', which is not a parent, parameter or its own noise");
            }
        }
        const bool has_spec = noise_.count(v) != 0;
        if (eq.level == ParametricTag::NoiseModel && !has_spec) {
            throw ScmError("noise-model equation for '" + v + "' needs a noise spec");
        }
        if (eq.level == ParametricTag::FullyKnown && uses_noise != has_spec) {
            throw ScmError(uses_noise ? "equation for '" + v + "' uses " + noise_symbol(v) +
                                            " without a noise spec"
                                      : "noise spec for '" + v + "' is not used by its equation");
        }
    }
    for (const auto& v : graph_.nodes()) {
        if (equations_.count(v)) continue;
        if (!graph_.parents(v).empty()) throw ScmError("variable '" + v + "' has parents but no equation");
        if (!noise_.count(v)) throw ScmError("exogenous variable '" + v + "' has no noise spec");
    }
}

bool Scm::is_complete() const {
    return std::all_of(equations_.begin(), equations_.end(), [](const auto& kv) {
        const auto& eq = kv.second;
        return eq.form && (eq.level == ParametricTag::NoiseModel || eq.level == ParametricTag::FullyKnown);
    });
}

bool Scm::is_noisy(const Variable& v) const { return noise_.count(v) != 0; }

Dataset sample_scm(const Scm& m, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw ScmError("sample size must be positive");
    check_sampleable(m);
    const Program prog(m);
    const std::vector<std::pair<Variable, NoiseSpec>> specs(m.noise().begin(), m.noise().end());

    std::vector<std::vector<double>> noise(specs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(specs.size()); ++k) {
        noise[k] = noise_column(specs[k].second, seed, specs[k].first, n);
    }
    std::vector<std::size_t> noise_slots;
    for (const auto& [v, spec] : specs) noise_slots.push_back(prog.slots.at(noise_symbol(v)));

    const std::vector<Variable> names(m.graph().nodes().begin(), m.graph().nodes().end());
    std::vector<std::vector<double>> cols(names.size(), std::vector<double>(n));
#pragma omp parallel
    {
        std::vector<double> values = prog.base;
#pragma omp for schedule(static)
        for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(n); ++r) {
            for (std::size_t k = 0; k < specs.size(); ++k) values[noise_slots[k]] = noise[k][r];
            prog.run(values);
            for (std::size_t c = 0; c < names.size(); ++c) cols[c][r] = values[c];
        }
    }
    Dataset out;
    for (std::size_t c = 0; c < names.size(); ++c) out.add_column(names[c], std::move(cols[c]));
    return out;
}

Dataset sample_scm_serial(const Scm& m, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw ScmError("sample size must be positive");
    check_sampleable(m);
    std::map<Variable, std::vector<double>> noise;
    for (const auto& [v, spec] : m.noise()) noise.emplace(v, noise_column(spec, seed, v, n));

    const auto order = m.graph().topological_order();
    std::map<Variable, std::vector<double>> cols;
    for (const auto& v : order) cols[v].resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        Environment env(m.parameters().begin(), m.parameters().end());
        for (const auto& [v, col] : noise) env[noise_symbol(v)] = col[r];
        for (const auto& v : order) {
            auto it = m.equations().find(v);
            double value = 0.0;
            if (it == m.equations().end()) {
                value = noise.at(v)[r];
            } else if (it->second.level == ParametricTag::NoiseModel) {
                value = evaluate(*it->second.form, env) + noise.at(v)[r];
            } else {
                value = evaluate(*it->second.form, env);
            }
            env[v] = value;
            cols[v][r] = value;
        }
    }
    Dataset out;
    for (auto& [v, col] : cols) out.add_column(v, std::move(col));
    return out;
}

IhdpOutcomes ihdp_surfaces(std::span<const double> x, std::span<const double> m,
                           std::span<const double> beta, double omega) {
    if (x.size() != m.size() || x.size() != beta.size()) {
        throw std::invalid_argument("ihdp_surfaces: x, m and beta must have the same length");
    }
    double xm_beta = 0.0;
    double x_beta = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xm_beta += (x[i] + m[i]) * beta[i];
        x_beta += x[i] * beta[i];
    }
    return {std::exp(xm_beta), x_beta + omega};
}

double oracle_cate(const Scm& m, const std::map<Variable, double>& x, std::size_t n_mc,
                   std::uint64_t seed, const Variable& y0, const Variable& y1) {
    for (const auto& y : {y0, y1}) {
        if (!m.equations().count(y)) throw ScmError("no outcome equation for '" + y + "'");
        if (x.count(y)) throw ScmError("outcome '" + y + "' may not be conditioned on");
    }
    for (const auto& [v, value] : x) {
        if (!m.graph().contains(v)) throw ScmError("covariate '" + v + "' is not in the model");
    }
    check_sampleable(m);

    // Variables the outcomes depend on once x is held fixed.
    VariableSet relevant;
    std::vector<Variable> stack{y0, y1};
    while (!stack.empty()) {
        const Variable v = stack.back();
        stack.pop_back();
        if (x.count(v) || !relevant.insert(v).second) continue;
        for (const auto& p : m.graph().parents(v)) stack.push_back(p);
    }
    const bool exact = std::none_of(relevant.begin(), relevant.end(),
                                    [&](const Variable& v) { return m.is_noisy(v); });
    if (!exact && n_mc == 0) throw ScmError("n_mc must be positive for a noisy model");

    const Program prog(m);
    std::vector<double> values = prog.base;
    for (const auto& [v, value] : x) values[prog.slots.at(v)] = value;
    const std::size_t s0 = prog.slots.at(y0);
    const std::size_t s1 = prog.slots.at(y1);

    // Evaluates only the relevant variables, leaving fixed ones untouched.
    auto run_relevant = [&](std::vector<double>& vals) {
        for (std::size_t k = 0; k < prog.order.size(); ++k) {
            if (!relevant.count(prog.order[k])) continue;
            double v = 0.0;
            switch (prog.kind[k]) {
                case 0: v = vals[*prog.noise_slot[k]]; break;
                case 1: v = prog.compiled[k]->evaluate(vals) + vals[*prog.noise_slot[k]]; break;
                default: v = prog.compiled[k]->evaluate(vals); break;
            }
            vals[prog.node_slot[k]] = v;
        }
    };

    if (exact) {
        run_relevant(values);
        return values[s1] - values[s0];
    }

    std::mt19937_64 rng(seed);
    double sum = 0.0;
    for (std::size_t rep = 0; rep < n_mc; ++rep) {
        const double shared_normal = std::normal_distribution<double>(0.0, 1.0)(rng);
        const double shared_uniform = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        for (const auto& v : relevant) {
            auto it = m.noise().find(v);
            if (it == m.noise().end()) continue;
            double standard = 0.0;
            if (v == y0 || v == y1) {
                standard = it->second.family == NoiseSpec::Family::Normal ? shared_normal : shared_uniform;
            } else {
                standard = standard_draw(it->second, rng);
            }
            values[prog.slots.at(noise_symbol(v))] = scale_noise(it->second, standard);
        }
        run_relevant(values);
        sum += values[s1] - values[s0];
    }
    return sum / static_cast<double>(n_mc);
}

}  // namespace cdl
