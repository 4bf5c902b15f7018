#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cdl {

/// Structural scale: how much is known about which variables share a factor.
/// Ordered Unknown < Plausible < Causal.
enum class StructuralTag : std::uint8_t { Unknown = 0, Plausible = 1, Causal = 2 };

/// Parametric scale: how much is known about the functional form of factors.
/// Ordered NonParametric < NoiseModel < Parametric < FullyKnown.
enum class ParametricTag : std::uint8_t {
    NonParametric = 0,
    NoiseModel = 1,
    Parametric = 2,
    FullyKnown = 3,
};

enum class TemporalFlag : std::uint8_t { Static = 0, Temporal = 1 };

inline constexpr std::array<StructuralTag, 3> kStructuralTags{
    StructuralTag::Unknown, StructuralTag::Plausible, StructuralTag::Causal};
inline constexpr std::array<ParametricTag, 4> kParametricTags{
    ParametricTag::NonParametric, ParametricTag::NoiseModel, ParametricTag::Parametric,
    ParametricTag::FullyKnown};
inline constexpr std::array<TemporalFlag, 2> kTemporalFlags{TemporalFlag::Static,
                                                            TemporalFlag::Temporal};

// Exact catalog strings: "unknown|plausible|causal",
// "nonparametric|noise_model|parametric|fully_known", "static|temporal".
[[nodiscard]] std::string_view to_string(StructuralTag tag);
[[nodiscard]] std::string_view to_string(ParametricTag tag);
[[nodiscard]] std::string_view to_string(TemporalFlag flag);

/// Thrown when a level string is not one of the catalog spellings.
class LevelParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

[[nodiscard]] StructuralTag parse_structural_tag(std::string_view text);
[[nodiscard]] ParametricTag parse_parametric_tag(std::string_view text);
[[nodiscard]] TemporalFlag parse_temporal_flag(std::string_view text);

}  // namespace cdl
