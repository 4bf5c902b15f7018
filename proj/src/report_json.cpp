#include <cstdio>

#include "cdl/assumption_tests.hpp"

namespace cdl {

std::string_view to_string(Decision d) {
    return d == Decision::RejectNull ? "reject_null" : "fail_to_reject";
}

std::string to_string(const LevelTag& tag) {
    if (const auto* s = std::get_if<StructuralTag>(&tag)) return "structural:" + std::string(to_string(*s));
    return "parametric:" + std::string(to_string(std::get<ParametricTag>(tag)));
}

std::string_view to_string(AnmDirection d) {
    switch (d) {
        case AnmDirection::XtoY: return "x_to_y";
        case AnmDirection::YtoX: return "y_to_x";
        case AnmDirection::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::string_view to_string(Testability t) {
    switch (t) {
        case Testability::NoTestsNeeded: return "no_tests_needed";
        case Testability::Testable: return "testable";
        case Testability::Untestable: return "untestable";
    }
    return "untestable";
}

nlohmann::json to_json(const TestReport& r) {
    nlohmann::json j;
    j["test"] = r.test;
    j["statistic"] = r.statistic;
    j["p_value"] = r.p_value ? nlohmann::json(*r.p_value) : nlohmann::json(nullptr);
    j["alpha"] = r.alpha;
    j["decision"] = to_string(r.decision);
    j["bears_on"] = to_string(r.bears_on);
    if (r.critical_value) j["critical_value"] = *r.critical_value;
    if (!r.details.empty()) j["details"] = r.details;
    if (!r.sub_reports.empty()) {
        j["sub_reports"] = nlohmann::json::array();
        for (const auto& s : r.sub_reports) j["sub_reports"].push_back(to_json(s));
    }
    return j;
}

std::string to_text(const TestReport& r) {
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof buf, "%s: statistic=%.6g", r.test.c_str(), r.statistic);
    out += buf;
    if (r.p_value) {
        std::snprintf(buf, sizeof buf, " p=%.6g", *r.p_value);
        out += buf;
    }
    if (r.critical_value) {
        std::snprintf(buf, sizeof buf, " critical=%.6g", *r.critical_value);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, " alpha=%.6g", r.alpha);
    out += buf;
    out += " decision=" + std::string(to_string(r.decision)) + " bears_on=" + to_string(r.bears_on) + '\n';
    for (const auto& s : r.sub_reports) out += "  " + to_text(s);
    return out;
}

}  // namespace cdl
