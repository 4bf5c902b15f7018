#include "cdl/pipeline.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace cdl {

using nlohmann::json;

Pipeline parse_pipeline(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw PipelineError(std::string("pipeline is not valid JSON: ") + e.what());
    }
    if (doc.is_object()) {
        auto it = doc.find("stages");
        if (it == doc.end()) throw PipelineError("pipeline object needs a \"stages\" array");
        doc = *it;
    }
    if (!doc.is_array()) throw PipelineError("pipeline must be an array of card ids");
    Pipeline p;
    for (const auto& s : doc) {
        if (!s.is_string()) throw PipelineError("pipeline stages must be card id strings");
        p.stages.push_back(s.get<std::string>());
    }
    return p;
}

namespace {

std::vector<std::string> violated_axes(const KnowledgeState& have, const KnowledgeState& need) {
    std::vector<std::string> out;
    if (!leq_structural(need.structural(), have.structural())) out.emplace_back("structural");
    if (!leq_parametric(need.parametric(), have.parametric())) out.emplace_back("parametric");
    if (have.temporal() != need.temporal()) out.emplace_back("temporal");
    return out;
}

const MethodCard& lookup(const Catalog& c, const std::string& id) {
    const MethodCard* card = c.find(id);
    if (!card) throw PipelineError("unknown card id '" + id + "'");
    return *card;
}

}  // namespace

ValidationReport validate_pipeline(const Catalog& c, const Pipeline& p, const KnowledgeState& start) {
    for (const auto& id : p.stages) (void)lookup(c, id);
    ValidationReport r;
    r.start = start;
    KnowledgeState current = start;
    for (std::size_t k = 0; k < p.stages.size(); ++k) {
        const MethodCard& card = lookup(c, p.stages[k]);
        StageRecord rec;
        rec.id = card.id;
        rec.state_before = current;
        rec.required = card.a_priori;
        rec.satisfied = satisfies(current, card.a_priori);
        if (!rec.satisfied) {
            rec.violated_axes = violated_axes(current, card.a_priori);
            std::string axes;
            for (const auto& a : rec.violated_axes) axes += (axes.empty() ? "" : ", ") + a;
            r.valid = false;
            r.failed_stage = k;
            r.failure_reason = "stage " + std::to_string(k + 1) + " (" + card.id + ") requires " +
                               to_string(card.a_priori) + " but the pipeline has " + to_string(current) +
                               "; violated axis: " + axes;
            r.stages.push_back(std::move(rec));
            break;
        }
        try {
            current = join_states(current, card.a_posteriori);
        } catch (const LatticeError& e) {
            throw PipelineError("pipeline inconsistency at stage " + std::to_string(k + 1) + " (" +
                                card.id + "): " + e.what());
        }
        rec.state_after = current;
        r.stages.push_back(std::move(rec));
    }
    r.final_state = current;
    return r;
}

std::vector<Pipeline> plan_pipeline(const Catalog& c, const KnowledgeState& start,
                                    const KnowledgeState& goal, int max_len) {
    if (max_len < 0) throw std::invalid_argument("max_len must be non-negative");
    using Key = std::tuple<StructuralTag, ParametricTag, TemporalFlag>;
    auto key = [](const KnowledgeState& s) {
        return Key{s.structural().tag(), s.parametric().tag(), s.temporal()};
    };
    auto state = [](const Key& k) { return KnowledgeState(std::get<0>(k), std::get<1>(k), std::get<2>(k)); };

    const Key origin = key(start);
    if (satisfies(state(origin), goal)) return {Pipeline{}};

    // Predecessors (state, card id) of each state at its BFS depth.
    std::map<Key, std::vector<std::pair<Key, std::string>>> parents;
    std::set<Key> visited{origin};
    std::vector<Key> frontier{origin};
    std::vector<Key> hits;
    for (int depth = 1; depth <= max_len && !frontier.empty() && hits.empty(); ++depth) {
        std::map<Key, std::vector<std::pair<Key, std::string>>> layer;
        for (const auto& from : frontier) {
            const KnowledgeState s = state(from);
            for (const auto& card : c.cards) {
                if (!satisfies(s, card.a_priori)) continue;
                const Key to = key(join_states(s, card.a_posteriori.tags_only()));
                if (visited.count(to)) continue;
                layer[to].emplace_back(from, card.id);
            }
        }
        frontier.clear();
        for (auto& [to, preds] : layer) {
            visited.insert(to);
            frontier.push_back(to);
            if (satisfies(state(to), goal)) hits.push_back(to);
            parents[to] = std::move(preds);
        }
    }

    std::vector<Pipeline> out;
    std::vector<std::string> suffix;
    std::function<void(const Key&)> walk = [&](const Key& k) {
        if (k == origin) {
            out.push_back({{suffix.rbegin(), suffix.rend()}});
            return;
        }
        for (const auto& [prev, id] : parents.at(k)) {
            suffix.push_back(id);
            walk(prev);
            suffix.pop_back();
        }
    };
    for (const auto& h : hits) walk(h);
    std::sort(out.begin(), out.end(), [](const Pipeline& a, const Pipeline& b) { return a.stages < b.stages; });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

AuditReport audit_transitions(const Catalog& c) {
    AuditReport a;
    for (auto kind : {Transition::Kind::None, Transition::Kind::Structural, Transition::Kind::Parametric,
                      Transition::Kind::Both}) {
        a.counts[kind] = 0;
    }
    for (const auto& card : c.cards) {
        auto t = classify_transition(card.a_priori, card.a_posteriori);
        ++a.counts[t.kind];
        if (t.relaxing) ++a.relaxing;
        a.transitions.emplace(card.id, std::move(t));
    }
    return a;
}

json to_json(const KnowledgeState& s) {
    return {{"structural", to_string(s.structural().tag())},
            {"parametric", to_string(s.parametric().tag())},
            {"temporal", to_string(s.temporal())}};
}

json to_json(const ValidationReport& r) {
    json stages = json::array();
    for (const auto& s : r.stages) {
        json j{{"id", s.id},
               {"state_before", to_json(s.state_before)},
               {"required", to_json(s.required)},
               {"satisfied", s.satisfied}};
        j["state_after"] = s.state_after ? to_json(*s.state_after) : json(nullptr);
        if (!s.violated_axes.empty()) j["violated_axes"] = s.violated_axes;
        stages.push_back(std::move(j));
    }
    json j{{"valid", r.valid}, {"start", to_json(r.start)}, {"stages", stages}};
    j["final_state"] = r.valid ? to_json(r.final_state) : json(nullptr);
    j["failure_reason"] = r.failure_reason ? json(*r.failure_reason) : json(nullptr);
    return j;
}

json to_json(const std::vector<Pipeline>& plans) {
    json arr = json::array();
    for (const auto& p : plans) arr.push_back(p.stages);
    return arr;
}

json to_json(const AuditReport& a) {
    json transitions = json::object();
    for (const auto& [id, t] : a.transitions) {
        transitions[id] = {{"from", to_json(t.from)},
                           {"to", to_json(t.to)},
                           {"kind", to_string(t.kind)},
                           {"relaxing", t.relaxing}};
    }
    json counts = json::object();
    for (const auto& [kind, n] : a.counts) counts[std::string(to_string(kind))] = n;
    return {{"transitions", transitions}, {"counts", counts}, {"relaxing", a.relaxing}};
}

std::string render_grid(const KnowledgeState& before, const KnowledgeState* after) {
    static constexpr const char* kRows[] = {"C", "P", "U"};
    std::string out = "     NP  NM  Pa  FK   (" + std::string(to_string(before.temporal())) + ")\n";
    for (int row = 0; row < 3; ++row) {
        const auto s = static_cast<StructuralTag>(2 - row);
        out += "  " + std::string(kRows[row]) + " ";
        for (int col = 0; col < 4; ++col) {
            const auto p = static_cast<ParametricTag>(col);
            const bool b = before.structural().tag() == s && before.parametric().tag() == p;
            const bool a = after && after->structural().tag() == s && after->parametric().tag() == p;
            out += " [";
            out += a && b ? '*' : a ? 'a' : b ? 'b' : ' ';
            out += ']';
        }
        out += '\n';
    }
    return out;
}

std::string to_text(const ValidationReport& r) {
    std::string out = r.valid ? "VALID\n" : "INVALID\n";
    out += "start: " + to_string(r.start) + '\n';
    for (std::size_t k = 0; k < r.stages.size(); ++k) {
        const auto& s = r.stages[k];
        out += "stage " + std::to_string(k + 1) + ": " + s.id + "  requires " + to_string(s.required) +
               "  have " + to_string(s.state_before) + "  " + (s.satisfied ? "ok" : "FAILED") + '\n';
        if (s.state_after) out += "  after: " + to_string(*s.state_after) + '\n';
        out += render_grid(s.state_before, s.state_after ? &*s.state_after : nullptr);
    }
    if (r.valid) out += "final: " + to_string(r.final_state) + '\n';
    if (r.failure_reason) out += "reason: " + *r.failure_reason + '\n';
    return out;
}

std::string to_text(const std::vector<Pipeline>& plans) {
    if (plans.empty()) return "no plan found\n";
    std::string out;
    for (const auto& p : plans) {
        if (p.stages.empty()) {
            out += "(empty pipeline: start already satisfies goal)\n";
            continue;
        }
        std::string line;
        for (const auto& id : p.stages) line += (line.empty() ? "" : " -> ") + id;
        out += line + '\n';
    }
    return out;
}

std::string to_text(const AuditReport& a) {
    std::string out;
    for (const auto& [id, t] : a.transitions) {
        out += id + ": " + std::string(to_string(t.kind)) + (t.relaxing ? " (relaxing)" : "") + "  " +
               to_string(t.from) + " -> " + to_string(t.to) + '\n';
    }
    out += "counts:";
    for (const auto& [kind, n] : a.counts) out += " " + std::string(to_string(kind)) + "=" + std::to_string(n);
    out += " relaxing=" + std::to_string(a.relaxing) + '\n';
    return out;
}

}  // namespace cdl
