#include "cdl/levels.hpp"

#include <string>

namespace cdl {

std::string_view to_string(StructuralTag tag) {
    switch (tag) {
        case StructuralTag::Unknown: return "unknown";
        case StructuralTag::Plausible: return "plausible";
        case StructuralTag::Causal: return "causal";
    }
    return "?";
}

std::string_view to_string(ParametricTag tag) {
    switch (tag) {
        case ParametricTag::NonParametric: return "nonparametric";
        case ParametricTag::NoiseModel: return "noise_model";
        case ParametricTag::Parametric: return "parametric";
        case ParametricTag::FullyKnown: return "fully_known";
    }
    return "?";
}

std::string_view to_string(TemporalFlag flag) {
    return flag == TemporalFlag::Static ? "static" : "temporal";
}

StructuralTag parse_structural_tag(std::string_view text) {
    for (auto tag : kStructuralTags) {
        if (to_string(tag) == text) return tag;
    }
    throw LevelParseError("unknown structural level '" + std::string(text) +
                          "' (expected unknown|plausible|causal)");
}

ParametricTag parse_parametric_tag(std::string_view text) {
    for (auto tag : kParametricTags) {
        if (to_string(tag) == text) return tag;
    }
    throw LevelParseError("unknown parametric level '" + std::string(text) +
                          "' (expected nonparametric|noise_model|parametric|fully_known)");
}

TemporalFlag parse_temporal_flag(std::string_view text) {
    for (auto flag : kTemporalFlags) {
        if (to_string(flag) == text) return flag;
    }
    throw LevelParseError("unknown temporal flag '" + std::string(text) +
                          "' (expected static|temporal)");
}

}  // namespace cdl
