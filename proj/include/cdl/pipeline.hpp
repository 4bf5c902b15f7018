#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cdl/lattice.hpp"
#include "cdl/registry.hpp"

namespace cdl {

/// Unknown card id or conflicting payloads while composing stages.
class PipelineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Pipeline {
    std::vector<std::string> stages;
    friend bool operator==(const Pipeline&, const Pipeline&) = default;
};

/// Accepts a JSON array of ids or an object {"stages": [...]}.
/// Throws PipelineError on anything else.
[[nodiscard]] Pipeline parse_pipeline(std::string_view json_text);

struct StageRecord {
    std::string id;
    KnowledgeState state_before;
    KnowledgeState required;
    bool satisfied = false;
    /// Set when satisfied.
    std::optional<KnowledgeState> state_after;
    /// "structural", "parametric" and/or "temporal" when not satisfied.
    std::vector<std::string> violated_axes;
};

struct ValidationReport {
    KnowledgeState start;
    std::vector<StageRecord> stages;
    bool valid = true;
    KnowledgeState final_state;
    std::optional<std::size_t> failed_stage;
    std::optional<std::string> failure_reason;
};

/// Folds the stages from `start`: each stage needs satisfies(current, a_priori)
/// and updates current to join(current, a_posteriori). Stops at the first
/// unsatisfied stage. Throws PipelineError for an unknown id or a payload conflict.
[[nodiscard]] ValidationReport validate_pipeline(const Catalog& c, const Pipeline& p,
                                                 const KnowledgeState& start);

/// All minimum-length tag-level pipelines from start to a state satisfying goal,
/// sorted lexicographically by stage ids. [[]] when start already satisfies goal;
/// empty when no pipeline of at most max_len stages exists.
[[nodiscard]] std::vector<Pipeline> plan_pipeline(const Catalog& c, const KnowledgeState& start,
                                                  const KnowledgeState& goal, int max_len);

struct AuditReport {
    std::map<std::string, Transition> transitions;
    std::map<Transition::Kind, int> counts;
    int relaxing = 0;
};

[[nodiscard]] AuditReport audit_transitions(const Catalog& c);

[[nodiscard]] nlohmann::json to_json(const KnowledgeState& s);
[[nodiscard]] nlohmann::json to_json(const ValidationReport& r);
[[nodiscard]] nlohmann::json to_json(const std::vector<Pipeline>& plans);
[[nodiscard]] nlohmann::json to_json(const AuditReport& a);

/// Structural-by-parametric grid with the state before (b), after (a) or both (*).
[[nodiscard]] std::string render_grid(const KnowledgeState& before, const KnowledgeState* after);
[[nodiscard]] std::string to_text(const ValidationReport& r);
[[nodiscard]] std::string to_text(const std::vector<Pipeline>& plans);
[[nodiscard]] std::string to_text(const AuditReport& a);

}  // namespace cdl
