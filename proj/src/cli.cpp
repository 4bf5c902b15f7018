#include "cdl/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "cdl/assumption_tests.hpp"
#include "cdl/dataset.hpp"
#include "cdl/factorization.hpp"
#include "cdl/graph_io.hpp"
#include "cdl/lattice.hpp"
#include "cdl/pipeline.hpp"
#include "cdl/registry.hpp"
#include "cdl/scm.hpp"

namespace cdl {

namespace {

using nlohmann::json;

// Failure that maps to exit code 1 with a short machine-readable kind.
struct DomainFailure : std::runtime_error {
    std::string kind;
    DomainFailure(std::string k, const std::string& message) : std::runtime_error(message), kind(std::move(k)) {}
};

std::uint64_t default_seed(std::uint64_t fallback) {
    if (const char* env = std::getenv("CDL_COMPASS_SEED")) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw std::invalid_argument("CDL_COMPASS_SEED is not an unsigned integer");
    }
    return fallback;
}

VariableSet to_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

std::string join(const VariableSet& s) {
    std::string out;
    for (const auto& v : s) out += (out.empty() ? "" : ", ") + v;
    return out;
}

json dag_json(const Dag& g) {
    json edges = json::array();
    for (const auto& [a, b] : g.edge_list()) edges.push_back({a, b});
    return {{"nodes", g.nodes()}, {"edges", edges}};
}

struct Options {
    std::string format = "text";
    std::string catalog_path;

    std::string path;
    std::string x, y;
    std::vector<std::string> given;
    std::vector<std::string> vars;
    std::size_t cap = kDefaultMecCap;

    std::size_t n = 1000;
    std::optional<std::uint64_t> seed;
    std::string out_path;

    std::string test;
    std::string column;
    std::string dist = "normal";
    std::vector<double> params;
    double alpha = 0.05;

    std::string card_id;
    std::string temporal, min_post, max_prior, tag;

    std::string start, goal;
    int max_len = 6;
    bool strict = false;
    bool show_relaxing = false;
};

Catalog active_catalog(const Options& o) {
    return o.catalog_path.empty() ? seed_catalog() : load_catalog(o.catalog_path);
}

std::span<const double> column_of(const Dataset& d, const std::string& name) {
    if (name.empty()) throw CLI::ValidationError("a column name is required for this test");
    if (!d.has(name)) throw FormatError(0, "dataset has no column '" + name + "'");
    return d.column(name);
}

void emit(std::ostream& out, const Options& o, const json& j, const std::string& text) {
    if (o.format == "json") out << j.dump(2) << '\n';
    else out << text;
}

int cmd_dsep(const Options& o, std::ostream& out) {
    const Dag g = parse_dag(read_text_file(o.path));
    const VariableSet z = to_set(o.given);
    const bool sep = d_separated(g, o.x, o.y, z);
    emit(out, o, {{"x", o.x}, {"y", o.y}, {"given", z}, {"d_separated", sep}},
         std::string("d-separated: ") + (sep ? "true" : "false") + '\n');
    return 0;
}

int cmd_mec(const Options& o, std::ostream& out) {
    const VariableSet vars = to_set(o.vars);
    const auto constraints = parse_constraints(read_text_file(o.path), vars);
    const VariableSet universe = vars.empty() ? constraints.variables() : vars;
    const auto dags = enumerate_mec(universe, constraints, o.cap);
    json arr = json::array();
    std::string text = std::to_string(dags.size()) + " DAG(s) consistent with the constraints\n";
    for (std::size_t k = 0; k < dags.size(); ++k) {
        arr.push_back(dag_json(dags[k]));
        text += "-- DAG " + std::to_string(k + 1) + '\n' + format_edge_list(dags[k]);
    }
    emit(out, o, arr, text);
    return 0;
}

int cmd_simulate(const Options& o, std::ostream& out) {
    const Scm m = read_scm(o.path);
    const std::uint64_t seed = o.seed ? *o.seed : default_seed(1);
    const Dataset d = sample_scm(m, o.n, seed);
    if (o.out_path.empty()) {
        out << to_csv(d);
        return 0;
    }
    write_csv(d, o.out_path);
    emit(out, o, {{"rows", d.rows()}, {"columns", d.names()}, {"seed", seed}, {"out", o.out_path}},
         "wrote " + std::to_string(d.rows()) + " rows to " + o.out_path + '\n');
    return 0;
}

int cmd_test(const Options& o, std::ostream& out) {
    const Dataset d = read_csv(o.path);
    TestReport r;
    if (o.test == "ks") {
        Cdf ref;
        if (o.dist == "normal") {
            ref = o.params.empty() ? normal_cdf(0.0, 1.0) : normal_cdf(o.params.at(0), o.params.at(1));
        } else {
            ref = o.params.empty() ? uniform_cdf(0.0, 1.0) : uniform_cdf(o.params.at(0), o.params.at(1));
        }
        r = ks_test(column_of(d, o.column), ref, o.alpha);
    } else if (o.test == "jb") {
        r = jarque_bera(column_of(d, o.column), o.alpha);
    } else if (o.test == "cusum") {
        r = cusum_linearity_test(column_of(d, o.x), column_of(d, o.y), o.alpha);
    } else if (o.test == "resid") {
        const std::uint64_t seed = o.seed ? *o.seed : default_seed(kPermutationSeed);
        r = residual_independence_test(column_of(d, o.x), column_of(d, o.y), o.alpha, seed);
    } else {
        if (o.x.empty() || o.y.empty()) throw CLI::ValidationError("pcorr needs --x and --y");
        r = partial_correlation_ci_test(d, o.x, o.y, to_set(o.given), o.alpha);
    }
    emit(out, o, to_json(r), to_text(r));
    return 0;
}

int cmd_anm(const Options& o, std::ostream& out) {
    const Dataset d = read_csv(o.path);
    const auto res = anm_direction(column_of(d, o.x), column_of(d, o.y), o.alpha);
    json j{{"direction", to_string(res.direction)},
           {"window", res.window},
           {"forward", to_json(res.forward)},
           {"backward", to_json(res.backward)}};
    std::string text = "direction: " + std::string(to_string(res.direction)) + '\n';
    text += "  " + o.x + " -> " + o.y + ": " + to_text(res.forward);
    text += "  " + o.y + " -> " + o.x + ": " + to_text(res.backward);
    emit(out, o, j, text);
    return 0;
}

std::string card_line(const MethodCard& c) {
    return c.id + "  " + to_string(c.a_priori) + " -> " + to_string(c.a_posteriori) + "  " + c.name + '\n';
}

int cmd_catalog_list(const Options& o, std::ostream& out) {
    const Catalog c = active_catalog(o);
    CatalogFilter f;
    if (!o.temporal.empty()) f.temporal = parse_temporal_flag(o.temporal);
    if (!o.min_post.empty()) f.min_a_posteriori = parse_bound(o.min_post);
    if (!o.max_prior.empty()) f.max_a_priori = parse_bound(o.max_prior);
    if (!o.tag.empty()) f.tag = o.tag;
    const auto cards = query_catalog(c, f);
    json arr = json::array();
    std::string text;
    for (const auto& card : cards) {
        arr.push_back(to_json(card));
        text += card_line(card);
    }
    emit(out, o, arr, text);
    return 0;
}

int cmd_catalog_show(const Options& o, std::ostream& out) {
    const Catalog c = active_catalog(o);
    const MethodCard* card = c.find(o.card_id);
    if (!card) throw DomainFailure("unknown_card", "no card with id '" + o.card_id + "'");
    const auto t = classify_transition(card->a_priori, card->a_posteriori);
    json j = to_json(*card);
    j["transition"] = to_string(t.kind);
    j["relaxing"] = t.relaxing;
    j["testability"] = {
        {"structural", to_string(testability_tier(card->a_priori.structural().tag()))},
        {"parametric", to_string(testability_tier(card->a_priori.parametric().tag()))}};
    std::string text = "id:           " + card->id + "\nname:         " + card->name +
                       "\ncitation:     " + card->citation_key + "\na priori:     " + to_string(card->a_priori) +
                       "\na posteriori: " + to_string(card->a_posteriori) +
                       "\ntransition:   " + std::string(to_string(t.kind)) + (t.relaxing ? " (relaxing)" : "") +
                       "\nassumptions:  " + join(VariableSet(card->assumption_tags.begin(), card->assumption_tags.end())) +
                       "\nnotes:        " + card->notes + '\n';
    emit(out, o, j, text);
    return 0;
}

int cmd_validate(const Options& o, std::ostream& out) {
    const Catalog c = active_catalog(o);
    Pipeline p;
    try {
        p = parse_pipeline(read_text_file(o.path));
    } catch (const PipelineError& e) {
        throw FormatError(0, e.what());
    }
    const auto report = validate_pipeline(c, p, parse_state(o.start));
    emit(out, o, to_json(report), to_text(report));
    return report.valid ? 0 : 1;
}

int cmd_plan(const Options& o, std::ostream& out) {
    const Catalog c = active_catalog(o);
    const auto plans = plan_pipeline(c, parse_state(o.start), parse_state(o.goal), o.max_len);
    if (plans.empty() && o.strict) {
        if (o.format == "json") out << json{{"error", "unreachable"}, {"message", "no plan found"}}.dump(2) << '\n';
        else out << "no plan found\n";
        return 1;
    }
    std::string text = to_text(plans);
    json j = to_json(plans);
    if (o.show_relaxing) {
        std::set<std::string> relaxing;
        for (const auto& p : plans) {
            for (const auto& id : p.stages) {
                const MethodCard* card = c.find(id);
                if (classify_transition(card->a_priori, card->a_posteriori).relaxing) relaxing.insert(id);
            }
        }
        if (o.format == "json") j = {{"plans", j}, {"relaxing_stages", relaxing}};
        for (const auto& id : relaxing) text += "relaxing stage: " + id + '\n';
    }
    emit(out, o, j, text);
    return 0;
}

int cmd_audit(const Options& o, std::ostream& out) {
    const auto a = audit_transitions(active_catalog(o));
    emit(out, o, to_json(a), to_text(a));
    return 0;
}

bool is_domain_error(const std::exception& e) {
    return dynamic_cast<const GraphError*>(&e) || dynamic_cast<const ScmError*>(&e) ||
           dynamic_cast<const AssumptionTestError*>(&e) || dynamic_cast<const PipelineError*>(&e) ||
           dynamic_cast<const LatticeError*>(&e) || dynamic_cast<const EvaluationError*>(&e) ||
           dynamic_cast<const FactorError*>(&e) || dynamic_cast<const LevelError*>(&e);
}

void report_error(std::ostream& out, std::ostream& err, const std::string& format, const std::string& kind,
                  const std::string& message) {
    if (format == "json") out << json{{"error", kind}, {"message", message}}.dump(2) << '\n';
    err << "error: " << message << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Causal knowledge lattice, assumption tests and pipeline planning", "cdl-compass"};
    app.require_subcommand(1);
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--catalog", o.catalog_path, "Catalog JSON file (default: built-in seed catalog)");

    auto* dsep = app.add_subcommand("dsep", "d-separation query on an edge-list DAG");
    dsep->add_option("graph", o.path, "Edge-list file")->required();
    dsep->add_option("--x", o.x)->required();
    dsep->add_option("--y", o.y)->required();
    dsep->add_option("--given", o.given, "Conditioning variables")->delimiter(',');

    auto* mec = app.add_subcommand("mec", "All DAGs consistent with (in)dependence constraints");
    mec->add_option("constraints", o.path, "Constraint file")->required();
    mec->add_option("--vars", o.vars, "Variables (default: those mentioned)")->delimiter(',');
    mec->add_option("--cap", o.cap, "Maximum number of variables");

    auto* sim = app.add_subcommand("simulate", "Ancestral sampling from an SCM file");
    sim->add_option("scm", o.path, "SCM file")->required();
    sim->add_option("--n", o.n, "Rows")->check(CLI::PositiveNumber);
    sim->add_option("--seed", o.seed);
    sim->add_option("--out", o.out_path, "CSV output (default: stdout)");

    auto* test = app.add_subcommand("test", "Run one assumption test on CSV data");
    test->add_option("csv", o.path)->required();
    test->add_option("--test", o.test)->required()->check(CLI::IsMember({"ks", "jb", "cusum", "resid", "pcorr"}));
    test->add_option("--column", o.column, "Sample column (ks, jb)");
    test->add_option("--dist", o.dist, "Reference distribution (ks)")->check(CLI::IsMember({"normal", "uniform"}));
    test->add_option("--params", o.params, "Reference parameters: mean,sd or low,high (ks)")
        ->delimiter(',')
        ->expected(2);
    test->add_option("--x", o.x, "Predictor column (cusum, resid, pcorr)");
    test->add_option("--y", o.y, "Response or residual column (cusum, resid, pcorr)");
    test->add_option("--given", o.given, "Conditioning columns (pcorr)")->delimiter(',');
    test->add_option("--alpha", o.alpha)->check(CLI::Range(0.0, 1.0));
    test->add_option("--seed", o.seed, "Permutation seed (resid)");

    auto* anm = app.add_subcommand("anm", "Additive-noise direction check");
    anm->add_option("csv", o.path)->required();
    anm->add_option("--x", o.x)->required();
    anm->add_option("--y", o.y)->required();
    anm->add_option("--alpha", o.alpha)->check(CLI::Range(0.0, 1.0));

    auto* catalog = app.add_subcommand("catalog", "Query the method catalog");
    catalog->require_subcommand(1);
    auto* list = catalog->add_subcommand("list", "List cards");
    list->add_option("--temporal", o.temporal)->check(CLI::IsMember({"static", "temporal"}));
    list->add_option("--min-a-posteriori", o.min_post, "Bound such as causal:*:temporal");
    list->add_option("--max-a-priori", o.max_prior, "Bound such as plausible:*:*");
    list->add_option("--tag", o.tag, "Assumption tag");
    auto* show = catalog->add_subcommand("show", "Show one card");
    show->add_option("id", o.card_id)->required();

    auto* validate = app.add_subcommand("validate", "Validate a pipeline of card ids");
    validate->add_option("pipeline", o.path, "Pipeline JSON file")->required();
    validate->add_option("--start", o.start, "Start state, e.g. unknown:noise_model:static")->required();

    auto* plan = app.add_subcommand("plan", "Shortest pipelines from a start state to a goal");
    plan->add_option("--start", o.start)->required();
    plan->add_option("--goal", o.goal)->required();
    plan->add_option("--max-len", o.max_len)->check(CLI::NonNegativeNumber);
    plan->add_flag("--strict", o.strict, "Exit 1 when no plan exists");
    plan->add_flag("--show-relaxing", o.show_relaxing, "List stages whose transition lowers a level");

    auto* audit = app.add_subcommand("audit", "Classify every catalog card's transition");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (dsep->parsed()) return cmd_dsep(o, out);
        if (mec->parsed()) return cmd_mec(o, out);
        if (sim->parsed()) return cmd_simulate(o, out);
        if (test->parsed()) return cmd_test(o, out);
        if (anm->parsed()) return cmd_anm(o, out);
        if (list->parsed()) return cmd_catalog_list(o, out);
        if (show->parsed()) return cmd_catalog_show(o, out);
        if (validate->parsed()) return cmd_validate(o, out);
        if (plan->parsed()) return cmd_plan(o, out);
        if (audit->parsed()) return cmd_audit(o, out);
    } catch (const DomainFailure& e) {
        report_error(out, err, o.format, e.kind, e.what());
        return 1;
    } catch (const CLI::Error& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        if (is_domain_error(e)) {
            report_error(out, err, o.format, "domain_error", e.what());
            return 1;
        }
        report_error(out, err, o.format, "input_error", e.what());
        return 2;
    }
    err << "usage error: no subcommand\n";
    return 2;
}

}  // namespace cdl
